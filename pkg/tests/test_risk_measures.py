import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from frechet_bounds import couplings as cp
from frechet_bounds import distributions as dist
from frechet_bounds import risk_measures as rm
from frechet_bounds.distributions import make_distribution, point_mass

from conftest import bernoulli, frechet_classes, lattice_distributions, uniform

U4 = uniform([1, 2, 3, 4])
FAIR_PM1 = make_distribution([-1, 1], [0.5, 0.5])


def choquet_oracle(g, D):
    """Both half-line integrals of the distortion risk measure, by adaptive quadrature."""
    lo, hi = dist.essential_bounds(D)
    pts = list(D.support)
    f_pos = lambda x: g(dist.sf(D, x))
    f_neg = lambda x: g(dist.sf(D, x)) - 1.0
    total = 0.0
    if hi > 0:
        a = max(lo, 0.0)
        total += a * 1.0 if lo > 0 else 0.0  # g(1) = 1 on [0, lo)
        total += integrate.quad(f_pos, a, hi, points=[p for p in pts if a < p < hi] or None,
                                limit=200, epsabs=1e-13)[0]
    if lo < 0:
        b = min(hi, 0.0)
        total += integrate.quad(f_neg, lo, b, points=[p for p in pts if lo < p < b] or None,
                                limit=200, epsabs=1e-13)[0]
        total += -(0.0 - b) if hi < 0 else 0.0  # g(0) - 1 = -1 on (hi, 0)
    return total


def tvar_oracle(D, p):
    levels = [c for c in D.cum if p < c < 1]
    val = integrate.quad(lambda w: dist.quantile(D, w), p, 1, points=levels or None,
                         limit=200, epsabs=1e-13)[0]
    return val / (1 - p)


CATALOG = rm.default_catalog() + [rm.proportional_hazard(2.0), rm.dual_power(0.5),
                                  rm.piecewise_linear([[0, 0], [0.2, 0.5], [1, 1]])]


class TestDistortions:
    def test_eval_examples(self):
        assert rm.distortion_eval(rm.identity(), 0.37) == 0.37
        assert rm.distortion_eval(rm.tvar_level(0.5), 0.25) == 0.5
        assert rm.distortion_eval(rm.proportional_hazard(0.5), 0.25) == 0.5
        assert rm.distortion_eval(rm.var_level(0.6), 0.5) == 1.0
        assert rm.distortion_eval(rm.var_level(0.6), 0.3) == 0.0
        assert rm.distortion_eval(rm.dual_power(2), 0.5) == 0.75

    @pytest.mark.parametrize("u", [-0.01, 1.01])
    def test_eval_domain(self, u):
        with pytest.raises(ValueError):
            rm.distortion_eval(rm.identity(), u)

    @pytest.mark.parametrize("g", CATALOG, ids=str)
    def test_endpoints_and_monotone(self, g):
        u = np.linspace(0, 1, 1001)
        vals = g(u)
        assert vals[0] == 0 and vals[-1] == 1
        assert np.all(np.diff(vals) >= 0)

    @pytest.mark.parametrize("g, concave", [
        (rm.identity(), True), (rm.tvar_level(0.9), True), (rm.var_level(0.9), False),
        (rm.proportional_hazard(0.5), True), (rm.proportional_hazard(1.0), True),
        (rm.proportional_hazard(2.0), False), (rm.dual_power(2.0), True),
        (rm.dual_power(1.0), True), (rm.dual_power(0.5), False),
        (rm.piecewise_linear([[0, 0], [0.2, 0.5], [1, 1]]), True),
        (rm.piecewise_linear([[0, 0], [0.5, 0.2], [1, 1]]), False),
    ], ids=str)
    def test_concavity_flag(self, g, concave):
        assert g.is_concave is concave
        if concave:
            u = np.linspace(0, 1, 1001)
            second = np.diff(g(u), 2)
            assert np.all(second <= 1e-12)

    @pytest.mark.parametrize("points", [
        [[0, 0], [1, 0.9]], [[0.1, 0], [1, 1]], [[0, 0], [0.5, 0.6], [0.5, 0.7], [1, 1]],
        [[0, 0], [0.5, 0.8], [0.7, 0.6], [1, 1]], [[0, 0]],
    ])
    def test_piecewise_validation(self, points):
        with pytest.raises(ValueError):
            rm.piecewise_linear(points)

    @pytest.mark.parametrize("bad", [lambda: rm.var_level(0), lambda: rm.tvar_level(1),
                                     lambda: rm.proportional_hazard(0), lambda: rm.dual_power(-1)])
    def test_parameter_validation(self, bad):
        with pytest.raises(ValueError):
            bad()

    def test_json(self):
        for g in CATALOG:
            assert rm.distortion_from_json(rm.distortion_to_json(g)) == g
        assert rm.distortion_from_json({"kind": "ph", "r": 0.5}) == rm.proportional_hazard(0.5)
        for bad in ({"kind": "tvar"}, {"kind": "wang", "l": 1}, [1], {"kind": "var", "p": "x"}):
            with pytest.raises(ValueError):
                rm.distortion_from_json(bad)


class TestRho:
    def test_identity_is_mean(self):
        assert rm.rho(rm.identity(), U4) == dist.mean(U4)

    def test_ph_on_symmetric_pair(self):
        expected = 2 * math.sqrt(0.5) - 1
        assert choquet_oracle(rm.proportional_hazard(0.5), FAIR_PM1) == pytest.approx(expected, abs=1e-10)
        assert rm.rho(rm.proportional_hazard(0.5), FAIR_PM1) == pytest.approx(expected, abs=1e-12)

    def test_var_level(self):
        assert rm.rho(rm.var_level(0.6), U4) == 3

    @pytest.mark.parametrize("g", CATALOG, ids=str)
    @given(D=lattice_distributions())
    def test_against_choquet_quadrature(self, g, D):
        assert rm.rho(g, D) == pytest.approx(choquet_oracle(g, D), abs=1e-8)


class TestSpectral:
    def test_identity(self):
        D = make_distribution([-2, 0.5, 3], [0.2, 0.5, 0.3])
        assert abs(rm.rho_spectral(rm.identity(), D, 10**5) - dist.mean(D)) <= 1e-4 * 5

    def test_ph(self):
        assert rm.rho_spectral(rm.proportional_hazard(0.5), FAIR_PM1, 10**6) == pytest.approx(
            0.41421, abs=1e-3)

    def test_rejects_non_concave(self):
        with pytest.raises(rm.ConcavityError):
            rm.rho_spectral(rm.var_level(0.6), U4, 10**4)
        with pytest.raises(ValueError):
            rm.rho_spectral(rm.identity(), U4, 10)


class TestVarTvar:
    def test_var(self):
        assert rm.var(U4, 0.6) == 3
        assert rm.var(point_mass(7), 0.5) == 7
        assert rm.var(bernoulli(0.5), 0.5) == 0
        with pytest.raises(ValueError):
            rm.var(U4, 0)

    def test_tvar(self):
        assert rm.tvar(U4, 0) == dist.mean(U4)
        assert rm.tvar(U4, 0.5) == 3.5
        assert rm.tvar(U4, 0.875) == 4
        # the straddling atom contributes only its upper part
        assert rm.tvar(U4, 0.6) == pytest.approx((0.15 * 3 + 0.25 * 4) / 0.4)
        for p in (-0.1, 1.0):
            with pytest.raises(ValueError):
                rm.tvar(U4, p)

    @given(lattice_distributions(), st.floats(0, 0.999))
    def test_tvar_against_quadrature(self, D, p):
        assert rm.tvar(D, p) == pytest.approx(tvar_oracle(D, p), abs=1e-8)


class TestInvariants:
    @given(lattice_distributions(), st.sampled_from([-3.0, 0.5, 10.0]))
    def test_translation(self, D, c):
        for g in CATALOG:
            assert abs(rm.rho(g, dist.shift(D, c)) - rm.rho(g, D) - c) <= 1e-9

    @given(lattice_distributions(), st.sampled_from([0.5, 2.0]))
    def test_positive_homogeneity(self, D, lam):
        for g in CATALOG:
            assert abs(rm.rho(g, dist.scale(D, lam)) - lam * rm.rho(g, D)) <= 1e-9

    @given(lattice_distributions(), st.sampled_from([0.1, 0.3, 0.5, 0.6, 0.9, 0.99]))
    def test_catalog_coherence(self, D, p):
        assert abs(rm.rho(rm.tvar_level(p), D) - rm.tvar(D, p)) <= 1e-9
        assert rm.rho(rm.var_level(p), D) == rm.var(D, p)
        assert abs(rm.rho(rm.identity(), D) - dist.mean(D)) <= 1e-9

    @given(lattice_distributions(lo=-4, hi=4))
    def test_spectral_agreement(self, D):
        width = max(np.ptp(D.support), 1.0)
        for g in CATALOG:
            if g.is_concave:
                assert abs(rm.rho(g, D) - rm.rho_spectral(g, D, 10**5)) <= 1e-2 * width

    @given(frechet_classes())
    def test_comonotonic_additivity(self, C):
        Sc = cp.sum_distribution(cp.comonotonic(C))
        for g in CATALOG:
            assert abs(rm.rho(g, Sc) - sum(rm.rho(g, m) for m in C)) <= 1e-9

    @given(frechet_classes(), st.integers(0, 10_000))
    def test_subadditivity(self, C, seed):
        S = cp.sum_distribution(cp.sample_coupling(C, seed))
        for g in CATALOG:
            if g.is_concave:
                assert rm.rho(g, S) <= sum(rm.rho(g, m) for m in C) + 1e-9
