import numpy as np
import pytest

from lipext.errors import EnumerationTooLargeError, LPSizeError
from lipext.lambda_lp import lambda_of_space, optimal_lambda, optimal_lambda_nonneg
from lipext.metric import (
    FiniteMetricSpace,
    lipschitz_seminorm,
    permute_space,
    scale_metric,
    validate_metric,
)
from lipext.operators import operator_norm
from lipext.spaces import grid_l1

from _oracles import lip_ball_vertices, random_metric_space


def line(n, step=1.0):
    xs = step * np.arange(n)
    return FiniteMetricSpace(tuple(range(n)), np.abs(xs[:, None] - xs[None, :]))


class TestBaseCases:
    def test_s_equals_f_is_one(self):
        s = line(4)
        res = optimal_lambda(s, range(4))
        assert res.value == 1.0
        assert np.array_equal(res.optimal_operator.w, np.eye(4))

    def test_collinear_endpoints(self):
        # endpoints of a path: linear interpolation extends isometrically
        for n in (3, 4, 6):
            res = optimal_lambda(line(n), (0, n - 1))
            assert res.value == pytest.approx(1.0, abs=1e-8)

    def test_never_below_one(self, rng):
        for _ in range(10):
            s = random_metric_space(rng, 5)
            res = optimal_lambda(s, (0, 2, 4))
            assert res.value >= 1.0 - 1e-8


class TestCertificates:
    def test_operator_achieves_value(self, rng):
        for _ in range(10):
            s = random_metric_space(rng, 5)
            res = optimal_lambda(s, (1, 2, 4))
            E = res.optimal_operator
            E.check()
            assert operator_norm(E) == pytest.approx(res.value, abs=1e-7)

    def test_no_cheaper_operator_on_ball_vertices(self, rng):
        # LP optimality: every Lip-ball vertex extends with seminorm <= value
        s = random_metric_space(rng, 4)
        S = (0, 3)
        res = optimal_lambda(s, S)
        dS = s.dist[np.ix_(S, S)]
        for f in lip_ball_vertices(dS):
            ef = res.optimal_operator.apply(f)
            assert lipschitz_seminorm(ef, s) <= res.value + 1e-7

    def test_active_pairs_nonempty_when_tight(self, rng):
        s = random_metric_space(rng, 5)
        res = optimal_lambda(s, (0, 2))
        assert len(res.active_pairs) >= 1
        for m, mp in res.active_pairs:
            assert m != mp

    def test_json_shape(self):
        res = optimal_lambda(line(3), (0, 2))
        js = res.to_json()
        assert set(js) >= {"lambda", "S", "operator", "active_pairs"}
        assert js["S"] == [0, 2]


class TestNonneg:
    def test_sandwich(self, rng):
        # restricting to nonnegative weights can only increase the optimum
        for _ in range(8):
            s = random_metric_space(rng, 5)
            free = optimal_lambda(s, (0, 2, 4)).value
            nn = optimal_lambda_nonneg(s, (0, 2, 4)).value
            assert nn >= free - 1e-8
            assert np.all(nn >= 1.0 - 1e-8)

    def test_nonneg_weights(self, rng):
        s = random_metric_space(rng, 5)
        res = optimal_lambda_nonneg(s, (0, 2, 4))
        assert np.all(res.optimal_operator.w >= -1e-10)


class TestInvariance:
    def test_scaling(self, rng):
        s = random_metric_space(rng, 5)
        base = optimal_lambda(s, (0, 1, 3)).value
        for c in (0.5, 2.0, 10.0):
            v = optimal_lambda(scale_metric(s, c), (0, 1, 3)).value
            assert v == pytest.approx(base, abs=1e-8)

    def test_relabeling(self, rng):
        s = random_metric_space(rng, 5)
        base = optimal_lambda(s, (0, 1, 3)).value
        perm = [4, 2, 0, 3, 1]
        sp = permute_space(s, perm)
        mapped = tuple(sorted(perm.index(i) for i in (0, 1, 3)))
        assert optimal_lambda(sp, mapped).value == pytest.approx(base, abs=1e-8)


class TestRegressions:
    def test_unit_square_corners(self):
        g = grid_l1(2, 1)
        corners = tuple(g.labels.index(c)
                        for c in [(-1, -1), (-1, 1), (1, -1), (1, 1)])
        res = optimal_lambda(g, corners)
        assert 1.0 - 1e-8 <= res.value <= 48.0
        # bilinear interpolation extends the corners with norm 1 in l1
        assert res.value == pytest.approx(1.0, abs=1e-7)

    def test_four_cycle_sweep(self):
        # C4 with unit edges: shortest-path metric
        d = np.array([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]],
                     dtype=float)
        s = validate_metric(d)
        value, worst = lambda_of_space(s)
        assert value >= 1.0 - 1e-8
        assert 2 <= len(worst) <= 3

    def test_two_point_space(self):
        s = line(2)
        value, worst = lambda_of_space(s)
        assert value == 1.0
        assert worst == (0, 1)


class TestCaps:
    def test_lp_cap(self):
        with pytest.raises(LPSizeError):
            optimal_lambda(grid_l1(2, 3), (0, 10, 20), cap=100)

    def test_enum_cap(self):
        with pytest.raises(EnumerationTooLargeError):
            lambda_of_space(grid_l1(2, 2), enum_cap=10)
