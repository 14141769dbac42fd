import numpy as np
import pytest

from lipext.errors import NotZeroSumError
from lipext.freenorm import SignedWeightVector, free_norm, free_norm_witness
from lipext.metric import scale_metric, validate_metric

from _oracles import brute_free_norm, random_metric_space


def three_line():
    return validate_metric([[0, 1, 2], [1, 0, 1], [2, 1, 0]])


def wv(space, weights, base=0):
    return SignedWeightVector(space.as_pointed(base), np.asarray(weights, float))


class TestBasics:
    def test_zero_vector(self):
        assert free_norm(wv(three_line(), [0, 0, 0])) == 0.0

    def test_not_zero_sum(self):
        with pytest.raises(NotZeroSumError):
            wv(three_line(), [1.0, 0.0, 0.0])

    def test_evaluation_difference_is_isometric(self, rng):
        # free_norm(delta_x - delta_y) = d(x, y), every pair, every space
        for _ in range(10):
            s = random_metric_space(rng, 6)
            for x in range(s.n):
                for y in range(x + 1, s.n):
                    a = np.zeros(s.n)
                    a[x], a[y] = 1.0, -1.0
                    assert free_norm(wv(s, a)) == pytest.approx(s.d(x, y), abs=1e-9)

    def test_double_sink_line(self):
        # one unit from each endpoint into the middle; oracle value 2
        s = three_line()
        a = wv(s, [1.0, -2.0, 1.0])
        assert free_norm(a) == pytest.approx(2.0, abs=1e-9)
        assert brute_free_norm(s.dist, a.weights) == pytest.approx(2.0, abs=1e-12)

    def test_single_point(self):
        from lipext.metric import FiniteMetricSpace
        s = FiniteMetricSpace((0,), np.zeros((1, 1)))
        assert free_norm(wv(s, [0.0])) == 0.0


class TestWitness:
    def test_pair_witness(self):
        s = three_line()
        a = np.zeros(3)
        a[0], a[2] = 1.0, -1.0
        value, f, flow = free_norm_witness(wv(s, a))
        assert value == pytest.approx(2.0, abs=1e-9)
        assert f.values[0] - f.values[2] == pytest.approx(2.0, abs=1e-9)
        assert float((flow.flow * s.dist).sum()) == pytest.approx(value, abs=1e-9)

    def test_zero_witness(self):
        s = three_line()
        value, f, flow = free_norm_witness(wv(s, [0, 0, 0]))
        assert value == 0.0
        assert np.all(flow.flow == 0.0)

    def test_duality_on_random_vectors(self, rng):
        from lipext.metric import lipschitz_seminorm
        for _ in range(25):
            s = random_metric_space(rng, 4)
            a = rng.normal(size=4)
            a -= a.mean()
            swv = wv(s, a)
            value, f, flow = free_norm_witness(swv)
            assert lipschitz_seminorm(f, s) <= 1.0 + 1e-9
            assert float(a @ f.values) == pytest.approx(value, abs=1e-9 + 1e-9 * abs(value))
            assert float((flow.flow * s.dist).sum()) == pytest.approx(value, abs=1e-9)
            assert np.abs(flow.divergence() - a).max() < 1e-9


class TestNormAxioms:
    def test_triangle_and_homogeneity(self, rng):
        for _ in range(15):
            s = random_metric_space(rng, rng.integers(3, 9))
            a = rng.normal(size=s.n); a -= a.mean()
            b = rng.normal(size=s.n); b -= b.mean()
            na, nb = free_norm(wv(s, a)), free_norm(wv(s, b))
            assert free_norm(wv(s, a + b)) <= na + nb + 1e-9
            c = rng.uniform(-3, 3)
            assert free_norm(wv(s, c * a)) == pytest.approx(abs(c) * na, abs=1e-9)

    def test_definiteness(self, rng):
        for _ in range(10):
            s = random_metric_space(rng, 5)
            a = rng.normal(size=5); a -= a.mean()
            if np.abs(a).max() > 1e-6:
                assert free_norm(wv(s, a)) > 0.0

    def test_scaling_of_the_metric(self, rng):
        s = random_metric_space(rng, 5)
        a = rng.normal(size=5); a -= a.mean()
        base = free_norm(wv(s, a))
        for c in (0.5, 2.0, 10.0):
            assert free_norm(wv(scale_metric(s, c), a)) == pytest.approx(
                c * base, rel=1e-9)


class TestBruteForceEquivalence:
    def test_small_spaces(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 6))
            s = random_metric_space(rng, n)
            a = rng.normal(size=n); a -= a.mean()
            lp = free_norm(wv(s, a))
            brute = brute_free_norm(s.dist, a)
            assert lp == pytest.approx(brute, abs=1e-8)
