"""Lipschitz extension constants, free-space norms and hyperbolic tree
embeddings on finite metric spaces."""

from .metric import (
    FiniteMetricSpace,
    PointedSubspace,
    ScalarField,
    direct_p_sum,
    lipschitz_seminorm,
    permute_space,
    scale_metric,
    validate_metric,
)
from .spaces import (
    HyperbolicPoint,
    Lattice,
    RootedTree,
    build_r_lattice,
    grid_l1,
    hyperbolic_rho,
    hyperbolic_rho0,
    tree_distance,
    tree_metric_space,
    truncated_tk,
)
from .freenorm import SignedWeightVector, FlowAssignment, free_norm, free_norm_witness
from .operators import (
    MeasureFamily,
    PartitionOfUnity,
    WeightMatrix,
    averaging_operator,
    counting_measure,
    doubling_constants,
    mcshane_extend,
    metric_projection_extend,
    nearest_point_map,
    operator_norm,
    whitney_extend,
    whitney_operator,
    whitney_partition,
)
from .lambda_lp import LambdaResult, lambda_of_space, optimal_lambda, optimal_lambda_nonneg
from .tree_embed import (
    DistortionReport,
    SquareFrame,
    VertexCoord,
    assign_coordinates,
    distortion_report,
    embed_edge_point,
    embed_tree,
    square_frames,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
