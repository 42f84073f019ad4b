import numpy as np
import pytest
from hypothesis import given, strategies as st

from frechet_bounds import distributions as dist
from frechet_bounds.distributions import make_distribution, point_mass

from conftest import bernoulli, lattice_distributions, uniform

U4 = uniform([1, 2, 3, 4])


class TestMakeDistribution:
    def test_merges_equal_values(self):
        D = make_distribution([1, 1, 2], [0.25, 0.25, 0.5])
        assert D.support.tolist() == [1, 2]
        assert D.probs.tolist() == [0.5, 0.5]

    def test_point_mass_normalized(self):
        D = make_distribution([5], [3])
        assert D.support.tolist() == [5]
        assert D.probs.tolist() == [1.0]

    def test_sorts_and_normalizes(self):
        D = make_distribution([2, 1], [1, 1])
        assert D.support.tolist() == [1, 2]
        assert D.probs.tolist() == [0.5, 0.5]

    def test_drops_zero_weights(self):
        D = make_distribution([0, 1, 2], [1, 0, 1])
        assert D.support.tolist() == [0, 2]

    def test_near_duplicates_merge(self):
        D = make_distribution([0, 1e-12, 3], [1, 1, 2])
        assert D.support.tolist() == [0, 3]
        assert D.probs.tolist() == [0.5, 0.5]

    @pytest.mark.parametrize("values, weights", [
        ([], []),
        ([1, 2], [0, 0]),
        ([1, 2], [1, -0.5]),
        ([1, 2], [1]),
        ([float("nan")], [1]),
    ])
    def test_rejects(self, values, weights):
        with pytest.raises(ValueError):
            make_distribution(values, weights)

    def test_frozen_arrays(self):
        with pytest.raises(ValueError):
            U4.support[0] = 7.0


class TestPointwise:
    def test_cdf(self):
        assert dist.cdf(U4, 2.5) == 0.5
        assert dist.cdf(point_mass(5), 4.999) == 0
        assert dist.cdf(U4, 4) == 1

    def test_sf(self):
        assert dist.sf(U4, 4) == 0
        assert dist.sf(bernoulli(0.3), 0) == pytest.approx(0.3, abs=1e-15)
        assert dist.sf(U4, 0.5) == 1

    def test_quantile(self):
        assert dist.quantile(bernoulli(0.5), 0.5) == 0
        assert dist.quantile(U4, 0.8) == 4
        for p in (0.01, 0.5, 1.0):
            assert dist.quantile(point_mass(3.25), p) == 3.25

    @pytest.mark.parametrize("p", [0, -0.1, 1.0000001])
    def test_quantile_rejects_level(self, p):
        with pytest.raises(ValueError):
            dist.quantile(U4, p)

    def test_mean(self):
        assert dist.mean(U4) == 2.5
        assert dist.mean(point_mass(-2)) == -2
        assert dist.mean(make_distribution([0, 1], [0.7, 0.3])) == pytest.approx(0.3, abs=1e-15)

    def test_stop_loss(self):
        assert dist.stop_loss(point_mass(5), 3) == 2
        assert dist.stop_loss(U4, 0) == dist.mean(U4) - 0
        # direct summation: 0.25 * (1 + 2)
        assert dist.stop_loss(U4, 2) == 0.75

    def test_essential_bounds(self):
        assert dist.essential_bounds(U4) == (1, 4)
        assert dist.essential_bounds(point_mass(0)) == (0, 0)
        assert dist.essential_bounds(make_distribution([-2, 7], [0.1, 0.9])) == (-2, 7)

    def test_shift_and_negate(self):
        D = make_distribution([1, 2], [0.3, 0.7])
        S = dist.shift(D, -1)
        assert S.support.tolist() == [0, 1] and S.probs.tolist() == D.probs.tolist()
        assert dist.shift(D, 0) is D
        N = dist.negate(D)
        assert N.support.tolist() == [-2, -1]
        assert N.probs.tolist() == [0.7, 0.3]

    def test_equal_in_distribution(self):
        assert dist.equal_in_distribution(U4, U4, 1e-9)
        assert not dist.equal_in_distribution(bernoulli(0.5), bernoulli(0.6), 1e-9)
        assert dist.equal_in_distribution(make_distribution([0, 1e-12], [0.5, 0.5]), point_mass(0), 1e-9)
        assert not dist.equal_in_distribution(U4, uniform([1, 2, 3]), 1e-9)

    def test_law_distance(self):
        assert dist.law_distance(U4, U4) == 0
        assert dist.law_distance(bernoulli(0.5), bernoulli(0.75)) == pytest.approx(0.25)
        assert dist.law_distance(point_mass(0), point_mass(1)) == 1

    def test_json_roundtrip(self):
        D = make_distribution([3, -1.5, 2], [1, 2, 5])
        assert dist.equal_in_distribution(dist.from_json(dist.to_json(D)), D, 1e-12)
        with pytest.raises(ValueError):
            dist.from_json({"support": [1, 2], "probs": [1]})
        with pytest.raises(ValueError):
            dist.from_json([1, 2])


xs = st.floats(-10, 10, allow_nan=False)


class TestProperties:
    @given(lattice_distributions(), st.floats(1e-6, 1.0), xs)
    def test_galois_connection(self, D, p, x):
        assert (dist.quantile(D, p) <= x) == (p <= dist.cdf(D, x) + 1e-12)

    @given(lattice_distributions(), xs)
    def test_cdf_plus_sf(self, D, x):
        for t in (x, *D.support):
            assert abs(dist.cdf(D, t) + dist.sf(D, t) - 1) <= 1e-12

    @given(lattice_distributions())
    def test_stop_loss_shape(self, D):
        lo, hi = dist.essential_bounds(D)
        grid = np.concatenate([[lo - 2, lo - 1], D.support, [hi + 1]])
        vals = np.array([dist.stop_loss(D, d) for d in grid])
        assert np.all(np.diff(vals) <= 1e-12)
        slopes = np.diff(vals) / np.diff(grid)
        assert np.all(np.diff(slopes) >= -1e-12)
        assert dist.stop_loss(D, lo - 1) == pytest.approx(dist.mean(D) - (lo - 1), abs=1e-12)
        assert dist.stop_loss(D, hi) == 0

    @given(lattice_distributions(), st.sampled_from([-3.0, 0.5, 10.0]), xs)
    def test_stop_loss_translation(self, D, c, d):
        assert abs(dist.stop_loss(dist.shift(D, c), d + c) - dist.stop_loss(D, d)) <= 1e-12

    @given(lattice_distributions())
    def test_mean_from_stop_loss(self, D):
        d0 = D.support[0]
        assert abs(dist.mean(D) - (dist.stop_loss(D, d0) + d0)) <= 1e-12

    @given(lattice_distributions(), st.floats(-5, 5))
    def test_shift_negate_linearity(self, D, c):
        assert dist.mean(dist.shift(D, c)) == pytest.approx(dist.mean(D) + c, abs=1e-12)
        assert dist.mean(dist.negate(D)) == pytest.approx(-dist.mean(D), abs=1e-12)
        assert dist.equal_in_distribution(dist.negate(dist.negate(D)), D, 1e-12)
