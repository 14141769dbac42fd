"""Exception types shared across the package."""


class LipextError(Exception):
    """Base class for all package errors."""


class MetricValidationError(LipextError):
    """Raised when a distance matrix violates the metric axioms.

    Carries the full list of violations found, not just the first one.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations[:5])
        if len(self.violations) > 5:
            summary += f"; ... ({len(self.violations)} total)"
        super().__init__(f"not a metric: {summary}")


class ProductTooLargeError(LipextError):
    """A generated space would exceed the configured point cap."""


class NonpositiveScaleError(LipextError):
    """Metric scaling factor must be strictly positive."""


class InvalidVertexError(LipextError):
    """Vertex index outside the tree."""


class NotZeroSumError(LipextError):
    """Weight vector does not sum to zero."""


class EmptySourceError(LipextError):
    """Extension requested from an empty source set."""


class EmptyBallMassError(LipextError):
    """An averaging ball carries no measure mass."""

    def __init__(self, point):
        self.point = point
        super().__init__(f"zero measure mass in averaging ball at point {point}")


class CoverFailureError(LipextError):
    """Lattice balls fail to cover the space."""


class LocalOperatorMismatchError(LipextError):
    """A Whitney local operator does not match its ball."""


class UnsupportedBodyError(LipextError):
    """Convex body descriptor not recognized."""


class EmptySampleError(LipextError):
    """Metric projection extension needs a nonempty sample of the body."""


class LPSizeError(LipextError):
    """LP exceeds the configured variable cap."""


class SolverFailureError(LipextError):
    """The LP backend failed to return an optimal solution."""


class EnumerationTooLargeError(LipextError):
    """Subset enumeration exceeds the configured cap."""


class NotATkTreeError(LipextError):
    """Tree is not a truncated uniform (k+1)-ary tree with unit edges."""


class ConfigError(LipextError):
    """Malformed experiment or input configuration."""
