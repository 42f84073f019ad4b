"""Seeded property suites for the convex-order bounds.

Every suite draws its Frechet classes and couplings from a master seed.
Trial ``t`` gets its own seeds from ``SeedSequence([seed, t])``, so any
subset of trials can be rerun (or run in parallel) and gives the same
results. A trial either passes, fails (a genuine counterexample to the
property), is skipped (the converse suites skip couplings that already are
comonotonic / mutually exclusive) or errors (a membership guard tripped;
that is a harness bug, never a counterexample).

``worst_margin`` is the smallest slack seen over all trials. What "slack"
means is suite specific and documented on each suite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Literal, Sequence

import numpy as np

from . import couplings as cp
from . import distributions as dist
from . import orders
from . import risk_measures as rm
from ._numeric import MERGE_TOL, ORDER_TOL, sig12
from .couplings import FrechetClass, JointDistribution
from .distributions import DiscreteDistribution
from .orders import TestFunction

__all__ = [
    "ClassConfig",
    "VerificationReport",
    "HarnessError",
    "TestFunction",
    "random_class",
    "random_distribution",
    "random_pair",
    "trial_seeds",
    "verify_thm11_forward",
    "verify_thm11_converse",
    "verify_thm12_forward",
    "verify_thm12_converse",
    "verify_lemma22",
    "verify_lemma32",
    "verify_countermonotonic_bound",
    "verify_comonotonic_additivity",
    "verify_route_agreement",
    "verify_spectral_agreement",
    "SUITES",
    "run_suite",
]

Sampler = Callable[[FrechetClass, int], JointDistribution]

EXHAUSTIVE_CELLS = 16


@dataclass(frozen=True)
class ClassConfig:
    """How random Frechet classes are drawn.

    ``n_values`` lists the admissible dimensions (one is drawn per class).
    Support points are distinct integers from [0, 8] (``nonnegative``) or
    [-4, 4] (``signed``); probabilities are multiples of 1/``prob_lattice``.
    ``me_feasible_mode`` keeps sum_i P(X_i > l_i) <= 1 and ``zero_floor``
    pins every essential infimum at 0.
    """

    n_values: tuple[int, ...] = (2, 3, 4)
    support_size_range: tuple[int, int] = (2, 5)
    value_mode: Literal["nonnegative", "signed"] = "signed"
    prob_lattice: int = 64
    me_feasible_mode: bool = False
    zero_floor: bool = False

    def __post_init__(self):
        if not self.n_values or any(not 2 <= n <= 4 for n in self.n_values):
            raise ValueError("n_values must be a nonempty subset of {2, 3, 4}")
        lo, hi = self.support_size_range
        if not 2 <= lo <= hi <= 5:
            raise ValueError("support_size_range must satisfy 2 <= lo <= hi <= 5")
        if self.value_mode not in ("nonnegative", "signed"):
            raise ValueError("value_mode must be 'nonnegative' or 'signed'")
        if self.zero_floor and self.value_mode != "nonnegative":
            raise ValueError("zero_floor requires value_mode='nonnegative'")
        if self.prob_lattice < max(self.n_values) * hi:
            raise ValueError("prob_lattice too coarse for the requested support sizes")

    @property
    def value_grid(self) -> np.ndarray:
        return np.arange(0, 9) if self.value_mode == "nonnegative" else np.arange(-4, 5)


DEFAULT_CONFIG = ClassConfig()
ME_CONFIG = ClassConfig(n_values=(3, 4), me_feasible_mode=True)
LEMMA32_CONFIG = ClassConfig(value_mode="nonnegative", zero_floor=True, me_feasible_mode=True)
BIVARIATE_CONFIG = ClassConfig(n_values=(2,))


class HarnessError(RuntimeError):
    """A trial could not be evaluated (e.g. a coupling left its Frechet class)."""


@dataclass
class VerificationReport:
    suite: str
    seed: int
    attempted: int = 0
    passed: int = 0
    skipped: int = 0
    failed: int = 0
    errors: int = 0
    checks: int = 0
    worst_margin: float | None = None
    counterexample: dict | None = None
    harness_error: dict | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.errors == 0

    def to_json(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "attempted": self.attempted,
            "passed": self.passed,
            "skipped": self.skipped,
            "failed": self.failed,
            "errors": self.errors,
            "checks": self.checks,
            "worst_margin": None if self.worst_margin is None else sig12(self.worst_margin),
            "counterexample": self.counterexample,
            "harness_error": self.harness_error,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass
class _Outcome:
    status: Literal["pass", "fail", "skip"]
    margin: float | None = None
    checks: int = 1
    detail: dict = field(default_factory=dict)


def trial_seeds(seed: int, trial: int) -> tuple[int, int]:
    """(class seed, coupling seed) for one trial."""
    a, b = np.random.SeedSequence([seed, trial]).generate_state(2)
    return int(a), int(b)


def _run(suite: str, seed: int, trials: int,
         body: Callable[[int, int, int], _Outcome]) -> VerificationReport:
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    rep = VerificationReport(suite, seed)
    for t in range(trials):
        rep.attempted += 1
        try:
            out = body(t, *trial_seeds(seed, t))
        except HarnessError as exc:
            rep.errors += 1
            if rep.harness_error is None:
                rep.harness_error = {"trial": t, "message": str(exc)}
            continue
        rep.checks += out.checks
        if out.margin is not None:
            rep.worst_margin = out.margin if rep.worst_margin is None else min(rep.worst_margin, out.margin)
        if out.status == "pass":
            rep.passed += 1
        elif out.status == "skip":
            rep.skipped += 1
        else:
            rep.failed += 1
            if rep.counterexample is None:
                rep.counterexample = {"trial": t, **out.detail}
    return rep


# --- generators -------------------------------------------------------------

def _composition(rng: np.random.Generator, total: int, parts: int) -> np.ndarray:
    """Uniformly random split of ``total`` units into ``parts`` positive integers."""
    if parts == 1:
        return np.array([total])
    cuts = np.sort(rng.choice(np.arange(1, total), size=parts - 1, replace=False))
    return np.diff(np.concatenate([[0], cuts, [total]]))


def _support(cfg: ClassConfig, rng: np.random.Generator, m: int) -> np.ndarray:
    grid = cfg.value_grid
    if cfg.zero_floor:
        rest = rng.choice(grid[1:], size=m - 1, replace=False)
        return np.sort(np.concatenate([[0], rest]))
    return np.sort(rng.choice(grid, size=m, replace=False))


def random_distribution(cfg: ClassConfig, rng: np.random.Generator) -> DiscreteDistribution:
    lo, hi = cfg.support_size_range
    m = int(rng.integers(lo, hi + 1))
    units = _composition(rng, cfg.prob_lattice, m)
    return dist.make_distribution(_support(cfg, rng, m), units / cfg.prob_lattice)


def random_class(cfg: ClassConfig, seed: int) -> FrechetClass:
    """Deterministic random class; all probabilities are multiples of 1/prob_lattice."""
    rng = np.random.default_rng(seed)
    n = int(rng.choice(cfg.n_values))
    if not cfg.me_feasible_mode:
        return FrechetClass(tuple(random_distribution(cfg, rng) for _ in range(n)))

    L = cfg.prob_lattice
    lo, hi = cfg.support_size_range
    sizes = rng.integers(lo, hi + 1, size=n)
    # units of mass away from the essential infimum, summing to at most L
    spare = L - int(np.sum(sizes - 1))
    extra = rng.multinomial(int(rng.integers(0, spare + 1)), np.full(n, 1.0 / n))
    marginals = []
    for m, e in zip(sizes, extra):
        m = int(m)
        away = m - 1 + int(e)
        units = np.concatenate([[L - away], _composition(rng, away, m - 1)])
        marginals.append(dist.make_distribution(_support(cfg, rng, m), units / L))
    return FrechetClass(tuple(marginals))


def random_pair(seed: int) -> tuple[DiscreteDistribution, DiscreteDistribution, str]:
    """A pair for the route-agreement suite, with a label saying how it was built.

    ``ordered``: sums of two couplings of one bivariate class, the smaller one
    cx-below the larger. ``perturbed``: an ordered pair after moving one
    lattice unit of mass in the larger law. ``swapped``: an ordered pair in
    reverse. ``independent``: two unrelated random laws.
    """
    rng = np.random.default_rng(seed)
    kind = ("ordered", "perturbed", "swapped", "independent")[int(rng.integers(0, 4))]
    if kind == "independent":
        return random_distribution(DEFAULT_CONFIG, rng), random_distribution(DEFAULT_CONFIG, rng), kind
    C = random_class(BIVARIATE_CONFIG, int(rng.integers(0, 2**32)))
    lower = cp.countermonotonic(C[0], C[1]) if rng.random() < 0.5 else \
        cp.sample_coupling(C, int(rng.integers(0, 2**32)))
    X = cp.sum_distribution(lower)
    Y = cp.sum_distribution(cp.comonotonic(C))
    if kind == "swapped":
        return Y, X, kind
    if kind == "perturbed":
        k = int(rng.integers(0, len(Y)))
        unit = min(1.0 / 64, float(Y.probs[k]))
        step = float(rng.choice([-1.0, 1.0]))
        Y = dist.make_distribution(np.concatenate([Y.support, [Y.support[k] + step]]),
                                   np.concatenate([Y.probs - unit * (np.arange(len(Y)) == k), [unit]]))
    return X, Y, kind


# --- helpers ----------------------------------------------------------------

def _guard(J: JointDistribution, C: FrechetClass, what: str) -> None:
    if J.dim != C.n or not cp.is_member(J, C, MERGE_TOL):
        raise HarnessError(f"{what} is not a member of the Frechet class")


def _negate_class(C: FrechetClass) -> FrechetClass:
    return FrechetClass(tuple(dist.negate(m) for m in C))


def _small_bivariate(C: FrechetClass) -> bool:
    return C.n == 2 and len(C[0]) * len(C[1]) <= EXHAUSTIVE_CELLS


def _cx_detail(C, J, X, Y, verdict) -> dict:
    return {"class": cp.class_to_json(C), "coupling": cp.joint_to_json(J),
            "lhs_sum": dist.to_json(X), "rhs_sum": dist.to_json(Y),
            "witness": verdict.witness.to_json() if verdict.witness else None}


def _cx_check(C, J, lower, upper) -> tuple[bool, float, dict | None]:
    verdict = orders.cx_order(lower, upper)
    if verdict.holds:
        return True, orders.stop_loss_margin(lower, upper), None
    margin = orders.stop_loss_margin(lower, upper)
    if verdict.witness.kind == "mean":
        margin = min(margin, -abs(verdict.witness.value))
    return False, margin, _cx_detail(C, J, lower, upper, verdict)


# --- comonotonic upper bound ----------------------------------------------

def verify_thm11_forward(cfg: ClassConfig = DEFAULT_CONFIG, seed: int = 1, trials: int = 500,
                         sampler: Sampler = cp.sample_coupling) -> VerificationReport:
    """Sum of any coupling is cx-below the comonotonic sum.

    Margin: smallest stop-loss slack E(S^c - d)_+ - E(S - d)_+ over the kinks.
    """
    def body(t, cs, js):
        C = random_class(cfg, cs)
        J = sampler(C, js)
        _guard(J, C, "sampled coupling")
        Jc = cp.comonotonic(C)
        _guard(Jc, C, "comonotonic coupling")
        ok, margin, detail = _cx_check(C, J, cp.sum_distribution(J), cp.sum_distribution(Jc))
        return _Outcome("pass" if ok else "fail", margin, detail=detail or {})

    return _run("thm11-forward", seed, trials, body)


def verify_thm11_converse(cfg: ClassConfig = DEFAULT_CONFIG, seed: int = 7, trials: int = 500,
                          sampler: Sampler = cp.sample_coupling) -> VerificationReport:
    """A non-comonotonic coupling never reproduces the comonotonic sum law.

    Small bivariate classes are additionally swept over every vertex of their
    transportation polytope. Margin: smallest atom-mass distance between the
    sum law of a non-comonotonic coupling and the comonotonic sum law.
    """
    def body(t, cs, js):
        C = random_class(cfg, cs)
        Sc = cp.sum_distribution(cp.comonotonic(C))
        candidates = [sampler(C, js)]
        if _small_bivariate(C):
            candidates += cp.enumerate_vertex_couplings(C[0], C[1])
        margin, checks = None, 0
        for J in candidates:
            _guard(J, C, "coupling")
            if cp.is_comonotonic(J):
                continue
            checks += 1
            S = cp.sum_distribution(J)
            gap = dist.law_distance(S, Sc)
            margin = gap if margin is None else min(margin, gap)
            if dist.equal_in_distribution(S, Sc, MERGE_TOL):
                return _Outcome("fail", gap, checks, {
                    "class": cp.class_to_json(C), "coupling": cp.joint_to_json(J),
                    "sum": dist.to_json(S), "comonotonic_sum": dist.to_json(Sc)})
        if checks == 0:
            return _Outcome("skip", None, 0)
        return _Outcome("pass", margin, checks)

    return _run("thm11-converse", seed, trials, body)


# --- mutually exclusive lower bound ----------------------------------------

def _sides(side: str) -> tuple[str, ...]:
    if side == "both":
        return ("below", "above")
    if side in ("below", "above"):
        return (side,)
    raise ValueError("side must be 'below', 'above' or 'both'")


def _me_class(cfg: ClassConfig, cs: int, side: str) -> FrechetClass:
    C = random_class(cfg, cs)
    # above-feasible classes are reflections of below-feasible ones
    C = C if side == "below" else _negate_class(C)
    if not cp.me_feasible(C, side):
        raise HarnessError(f"generated class is not feasible from {side}; config needs me_feasible_mode")
    return C


def _check_me_cfg(cfg: ClassConfig) -> None:
    if not cfg.me_feasible_mode or min(cfg.n_values) < 3:
        raise ValueError("mutual exclusivity suites need me_feasible_mode and n >= 3")


def verify_thm12_forward(cfg: ClassConfig = ME_CONFIG, seed: int = 3, trials: int = 500,
                         side: str = "both",
                         sampler: Sampler = cp.sample_coupling) -> VerificationReport:
    """The mutually exclusive sum is cx-below the sum of any coupling.

    With ``side='both'`` each trial checks a below-feasible class and its
    reflection (above-feasible). Margin as in :func:`verify_thm11_forward`.
    """
    _check_me_cfg(cfg)
    sides = _sides(side)

    def body(t, cs, js):
        worst = None
        for s in sides:
            C = _me_class(cfg, cs, s)
            J = sampler(C, js)
            _guard(J, C, "sampled coupling")
            Jm = cp.mutually_exclusive(C, s)
            _guard(Jm, C, "mutually exclusive coupling")
            ok, margin, detail = _cx_check(C, J, cp.sum_distribution(Jm), cp.sum_distribution(J))
            worst = margin if worst is None else min(worst, margin)
            if not ok:
                return _Outcome("fail", worst, len(sides), {"side": s, **detail})
        return _Outcome("pass", worst, len(sides))

    return _run("thm12-forward", seed, trials, body)


def verify_thm12_converse(cfg: ClassConfig = ME_CONFIG, seed: int = 11, trials: int = 500,
                          side: str = "both",
                          sampler: Sampler = cp.sample_coupling) -> VerificationReport:
    """A coupling that is not mutually exclusive never reproduces the ME sum law.

    Margin: smallest atom-mass distance between the two sum laws.
    """
    _check_me_cfg(cfg)
    sides = _sides(side)

    def body(t, cs, js):
        margin, checks = None, 0
        for s in sides:
            C = _me_class(cfg, cs, s)
            J = sampler(C, js)
            _guard(J, C, "sampled coupling")
            if cp.is_mutually_exclusive(J, s):
                continue
            checks += 1
            S = cp.sum_distribution(J)
            Sm = cp.sum_distribution(cp.mutually_exclusive(C, s))
            gap = dist.law_distance(S, Sm)
            margin = gap if margin is None else min(margin, gap)
            if dist.equal_in_distribution(S, Sm, MERGE_TOL):
                return _Outcome("fail", gap, checks, {
                    "side": s, "class": cp.class_to_json(C), "coupling": cp.joint_to_json(J),
                    "sum": dist.to_json(S), "me_sum": dist.to_json(Sm)})
        if checks == 0:
            return _Outcome("skip", None, 0)
        return _Outcome("pass", margin, checks)

    return _run("thm12-converse", seed, trials, body)


# --- n = 2 lower bound ------------------------------------------------------

def verify_countermonotonic_bound(seed: int = 5, trials: int = 500,
                                  cfg: ClassConfig = BIVARIATE_CONFIG,
                                  sampler: Sampler = cp.sample_coupling) -> VerificationReport:
    """The countermonotonic sum is cx-below every coupling sum (sampled, plus all vertices when small).

    Margin: smallest stop-loss slack.
    """
    if cfg.n_values != (2,):
        raise ValueError("countermonotonic bound is bivariate; use n_values=(2,)")

    def body(t, cs, js):
        C = random_class(cfg, cs)
        Jcm = cp.countermonotonic(C[0], C[1])
        _guard(Jcm, C, "countermonotonic coupling")
        lower = cp.sum_distribution(Jcm)
        candidates = [sampler(C, js)]
        if _small_bivariate(C):
            candidates += cp.enumerate_vertex_couplings(C[0], C[1])
        worst = None
        for J in candidates:
            _guard(J, C, "coupling")
            ok, margin, detail = _cx_check(C, J, lower, cp.sum_distribution(J))
            worst = margin if worst is None else min(worst, margin)
            if not ok:
                return _Outcome("fail", worst, len(candidates), detail)
        return _Outcome("pass", worst, len(candidates))

    return _run("countermonotonic", seed, trials, body)


# --- risk measures ----------------------------------------------------------

def _concave_catalog() -> list[rm.DistortionFunction]:
    return [g for g in rm.default_catalog() if g.is_concave]


def verify_lemma22(cfg: ClassConfig = DEFAULT_CONFIG, seed: int = 2, trials: int = 500,
                   gs: Sequence[rm.DistortionFunction] | None = None,
                   sampler: Sampler = cp.sample_coupling) -> VerificationReport:
    """rho_g[S] <= sum_i rho_g[X_i] for concave g, with equality for the comonotonic coupling.

    Margin: smallest sum_i rho_g[X_i] - rho_g[S] over sampled couplings. A
    comonotonic row deviating from equality by more than 1e-9 fails the trial.
    """
    gs = list(_concave_catalog() if gs is None else gs)
    for g in gs:
        if not g.is_concave:
            raise rm.ConcavityError(f"subadditivity needs concave distortions, got {g}")

    def body(t, cs, js):
        C = random_class(cfg, cs)
        J = sampler(C, js)
        _guard(J, C, "sampled coupling")
        Jc = cp.comonotonic(C)
        _guard(Jc, C, "comonotonic coupling")
        S, Sc = cp.sum_distribution(J), cp.sum_distribution(Jc)
        worst = None
        for g in gs:
            total = math.fsum(rm.rho(g, m) for m in C)
            margin = total - rm.rho(g, S)
            worst = margin if worst is None else min(worst, margin)
            co_dev = rm.rho(g, Sc) - total
            if margin < -ORDER_TOL or abs(co_dev) > ORDER_TOL:
                return _Outcome("fail", worst, 2 * len(gs), {
                    "g": str(g), "class": cp.class_to_json(C), "coupling": cp.joint_to_json(J),
                    "rho_sum": sig12(rm.rho(g, S)), "sum_rho": sig12(total),
                    "comonotonic_deviation": sig12(co_dev)})
        return _Outcome("pass", worst, 2 * len(gs))

    return _run("lemma22", seed, trials, body)


def verify_comonotonic_additivity(cfg: ClassConfig = DEFAULT_CONFIG, seed: int = 4, trials: int = 100,
                                  gs: Sequence[rm.DistortionFunction] | None = None) -> VerificationReport:
    """rho_g[S^c] = sum_i rho_g[X_i] for every distortion, concave or not.

    Margin: smallest value of -|rho_g[S^c] - sum_i rho_g[X_i]|.
    """
    gs = list(rm.default_catalog() if gs is None else gs)

    def body(t, cs, js):
        C = random_class(cfg, cs)
        Jc = cp.comonotonic(C)
        _guard(Jc, C, "comonotonic coupling")
        Sc = cp.sum_distribution(Jc)
        worst = 0.0
        for g in gs:
            dev = abs(rm.rho(g, Sc) - math.fsum(rm.rho(g, m) for m in C))
            worst = min(worst, -dev)
            if dev > ORDER_TOL:
                return _Outcome("fail", worst, len(gs), {
                    "g": str(g), "class": cp.class_to_json(C), "deviation": sig12(dev)})
        return _Outcome("pass", worst, len(gs))

    return _run("comonotonic-additivity", seed, trials, body)


def verify_spectral_agreement(seed: int = 9, trials: int = 50, steps: int = 1_000_000,
                              cfg: ClassConfig = DEFAULT_CONFIG) -> VerificationReport:
    """Layer-sum rho against the quantile-integral form, plus the VaR/TVaR catalog identities.

    Margin: smallest value of 1e-3 - |rho - rho_spectral| / (support range).
    """
    concave = _concave_catalog()
    levels = (0.3, 0.6, 0.9)

    def body(t, cs, js):
        D = random_distribution(cfg, np.random.default_rng(cs))
        lo, hi = dist.essential_bounds(D)
        width = hi - lo
        worst = None
        for g in concave:
            err = abs(rm.rho(g, D) - rm.rho_spectral(g, D, steps))
            margin = 1e-3 - err / width
            worst = margin if worst is None else min(worst, margin)
            if margin < 0:
                return _Outcome("fail", worst, detail={"g": str(g), "dist": dist.to_json(D),
                                                       "error": sig12(err)})
        for p in levels:
            d_t = abs(rm.rho(rm.tvar_level(p), D) - rm.tvar(D, p))
            d_v = abs(rm.rho(rm.var_level(p), D) - rm.var(D, p))
            if d_t > ORDER_TOL or d_v > ORDER_TOL:
                return _Outcome("fail", worst, detail={"p": p, "dist": dist.to_json(D),
                                                       "tvar_error": sig12(d_t),
                                                       "var_error": sig12(d_v)})
        return _Outcome("pass", worst, len(concave) + 2 * len(levels))

    return _run("spectral", seed, trials, body)


# --- orders -----------------------------------------------------------------

def verify_route_agreement(seed: int = 13, trials: int = 500) -> VerificationReport:
    """Stop-loss route and TVaR route give the same verdict on every pair.

    Margin: not tracked (null).
    """
    def body(t, cs, js):
        X, Y, kind = random_pair(cs)
        a, b = orders.sl_order(X, Y), orders.sl_order_via_tvar(X, Y)
        if a.holds != b.holds or (kind == "ordered" and not a.holds):
            return _Outcome("fail", None, detail={
                "pair_kind": kind, "x": dist.to_json(X), "y": dist.to_json(Y),
                "stop_loss": a.to_json(), "tvar": b.to_json()})
        return _Outcome("pass", None)

    return _run("route-agreement", seed, trials, body)


# --- additive bound for convex f -------------------------------------------

def verify_lemma32(cfg: ClassConfig = LEMMA32_CONFIG, seed: int = 6, trials: int = 500,
                   fs: Sequence[TestFunction] | None = None,
                   sampler: Sampler = cp.sample_coupling) -> VerificationReport:
    """E f(S) >= sum_i E f(X_i) - (n-1) f(0) for nonnegative X_i with l_i = 0.

    The mutually exclusive coupling attains equality for every f; any other
    coupling leaves a gap above 1e-9 for f = square. Margin: smallest gap
    over sampled couplings and all f.
    """
    if cfg.value_mode != "nonnegative" or not cfg.zero_floor:
        raise ValueError("the convex additive-bound suite needs nonnegative marginals with essential infimum 0")
    fs = list(fs) if fs is not None else [TestFunction("square"), TestFunction("fourth_power"),
                                          TestFunction("hinge", 1.0)]
    square = TestFunction("square")

    def gap(f, C, S) -> float:
        f0 = float(f(0.0))
        return f.expect(S) - (math.fsum(f.expect(m) for m in C) - (C.n - 1) * f0)

    def body(t, cs, js):
        C = random_class(cfg, cs)
        if any(m.support[0] != 0 for m in C):
            raise HarnessError("marginal with essential infimum different from 0")
        J = sampler(C, js)
        _guard(J, C, "sampled coupling")
        S = cp.sum_distribution(J)
        worst = None
        checks = 0
        for f in fs:
            g = gap(f, C, S)
            checks += 1
            worst = g if worst is None else min(worst, g)
            if g < -ORDER_TOL:
                return _Outcome("fail", worst, checks, {
                    "part": "inequality", "f": str(f), "class": cp.class_to_json(C),
                    "coupling": cp.joint_to_json(J), "gap": sig12(g)})
        if cp.me_feasible(C, "below"):
            Jm = cp.mutually_exclusive(C, "below")
            _guard(Jm, C, "mutually exclusive coupling")
            Sm = cp.sum_distribution(Jm)
            for f in fs:
                g = gap(f, C, Sm)
                checks += 1
                if abs(g) > ORDER_TOL:
                    return _Outcome("fail", worst, checks, {
                        "part": "equality", "f": str(f), "class": cp.class_to_json(C), "gap": sig12(g)})
        if not cp.is_mutually_exclusive(J, "below"):
            g = gap(square, C, S)
            checks += 1
            if g <= ORDER_TOL:
                return _Outcome("fail", worst, checks, {
                    "part": "strict", "f": "square", "class": cp.class_to_json(C),
                    "coupling": cp.joint_to_json(J), "gap": sig12(g)})
        return _Outcome("pass", worst, checks)

    return _run("lemma32", seed, trials, body)


SUITES: dict[str, Callable[..., VerificationReport]] = {
    "thm11-forward": verify_thm11_forward,
    "thm11-converse": verify_thm11_converse,
    "thm12-forward": verify_thm12_forward,
    "thm12-converse": verify_thm12_converse,
    "lemma22": verify_lemma22,
    "lemma32": verify_lemma32,
    "countermonotonic": verify_countermonotonic_bound,
    "comonotonic-additivity": verify_comonotonic_additivity,
    "route-agreement": verify_route_agreement,
    "spectral": verify_spectral_agreement,
}


def run_suite(name: str, seed: int, trials: int) -> VerificationReport:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return fn(seed=seed, trials=trials)
