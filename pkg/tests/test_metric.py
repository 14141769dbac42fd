import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lipext.errors import (
    MetricValidationError,
    NonpositiveScaleError,
    ProductTooLargeError,
)
from lipext.metric import (
    FiniteMetricSpace,
    ScalarField,
    check_metric,
    direct_p_sum,
    lipschitz_seminorm,
    scale_metric,
    validate_metric,
)
from lipext.spaces import grid_l1

from _oracles import random_metric_space


def line(n, step=1.0):
    xs = step * np.arange(n)
    return FiniteMetricSpace(tuple(range(n)), np.abs(xs[:, None] - xs[None, :]))


class TestValidation:
    def test_smallest_space(self):
        s = validate_metric([[0, 1], [1, 0]])
        assert s.n == 2 and s.d(0, 1) == 1

    def test_triangle_violation(self):
        with pytest.raises(MetricValidationError) as exc:
            validate_metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        kinds = {v.kind for v in exc.value.violations}
        assert kinds == {"triangle"}
        assert any(set(v.indices) == {0, 1, 2} for v in exc.value.violations)

    def test_grid_is_valid(self):
        g = grid_l1(2, 1)
        assert not check_metric(g.dist)
        assert g.n == 9
        i = g.labels.index((0, 0))
        j = g.labels.index((1, 1))
        assert g.d(i, j) == 2

    def test_asymmetry_and_diagonal(self):
        report = check_metric([[0.5, 1], [2, 0]])
        kinds = sorted(v.kind for v in report)
        assert kinds == ["asymmetry", "diagonal"]

    def test_duplicates_rejected(self):
        with pytest.raises(MetricValidationError) as exc:
            validate_metric([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        assert any(v.kind == "duplicate" for v in exc.value.violations)

    def test_random_perturbations_detected(self, rng):
        for _ in range(20):
            s = random_metric_space(rng, 5)
            assert not check_metric(s.dist)
            d = s.dist.copy()
            i, j = 1, 3
            d[i, j] = d[j, i] = d[i, j] + s.dist.max() * 3  # break a triangle
            assert any(v.kind == "triangle" for v in check_metric(d))


class TestSeminorm:
    def test_constant_field(self):
        assert lipschitz_seminorm([3.0, 3.0, 3.0], line(3)) == 0.0

    def test_distance_function_has_norm_one(self, rng):
        # g(m) = d(m, m') - d(m*, m') always has seminorm exactly 1
        for _ in range(10):
            s = random_metric_space(rng, 6)
            mp = 3
            g = s.dist[:, mp] - s.dist[0, mp]
            assert lipschitz_seminorm(g, s) == pytest.approx(1.0, abs=1e-12)

    def test_three_point_line(self):
        assert lipschitz_seminorm([0.0, 3.0, 1.0], line(3)) == 3.0

    def test_single_point_convention(self):
        s = FiniteMetricSpace((0,), np.zeros((1, 1)))
        assert lipschitz_seminorm([7.0], s) == 0.0

    @given(c=st.floats(-10, 10), shift=st.floats(-5, 5))
    @settings(max_examples=25, deadline=None)
    def test_homogeneity_and_shift(self, c, shift):
        s = line(4)
        f = np.array([0.0, 1.5, -2.0, 0.5])
        base = lipschitz_seminorm(f, s)
        assert lipschitz_seminorm(f + shift, s) == pytest.approx(base, abs=1e-12)
        assert lipschitz_seminorm(c * f, s) == pytest.approx(abs(c) * base, rel=1e-12)


class TestDirectSum:
    def test_one_sum_of_segments(self):
        two = validate_metric([[0, 1], [1, 0]])
        s = direct_p_sum([two, two], 1)
        assert s.n == 4
        d01 = s.dist[s.labels.index((0, 0)), s.labels.index((1, 1))]
        assert d01 == 2.0

    def test_inf_sum_of_segments(self):
        two = validate_metric([[0, 1], [1, 0]])
        s = direct_p_sum([two, two], math.inf)
        assert s.dist[s.labels.index((0, 0)), s.labels.index((1, 1))] == 1.0

    def test_p2_sum_matches_euclidean_grid(self):
        three = line(3)
        s = direct_p_sum([three, three], 2)
        assert s.n == 9
        for i, la in enumerate(s.labels):
            for j, lb in enumerate(s.labels):
                expect = math.hypot(la[0] - lb[0], la[1] - lb[1])
                assert s.dist[i, j] == pytest.approx(expect, abs=1e-12)

    def test_monotone_in_p(self):
        a, b = line(3), line(4, step=0.7)
        prev = None
        for p in (1, 1.5, 2, 4, math.inf):
            s = direct_p_sum([a, b], p)
            if prev is not None:
                assert np.all(s.dist <= prev + 1e-12)
            prev = s.dist

    def test_cap(self):
        with pytest.raises(ProductTooLargeError):
            direct_p_sum([line(20)] * 4, 1)


class TestScaling:
    def test_identity(self):
        s = line(3)
        assert np.array_equal(scale_metric(s, 1.0).dist, s.dist)

    def test_doubling(self):
        s = validate_metric([[0, 1], [1, 0]])
        assert scale_metric(s, 2.0).d(0, 1) == 2.0

    def test_nonpositive_rejected(self):
        with pytest.raises(NonpositiveScaleError):
            scale_metric(line(3), 0.0)


def test_scalar_field_shape_checked():
    with pytest.raises(ValueError):
        ScalarField(line(3), [1.0, 2.0])
