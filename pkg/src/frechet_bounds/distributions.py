"""Exact calculus on finite-support distributions on the real line.

A :class:`DiscreteDistribution` is a strictly increasing support with
strictly positive, normalized probabilities. Every function here is pure;
instances are frozen and their arrays are read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from ._numeric import CMP_TOL, MERGE_TOL, sig12

__all__ = [
    "DiscreteDistribution",
    "make_distribution",
    "point_mass",
    "cdf",
    "sf",
    "quantile",
    "mean",
    "stop_loss",
    "essential_bounds",
    "shift",
    "negate",
    "scale",
    "equal_in_distribution",
    "law_distance",
    "jump_levels",
    "to_json",
    "from_json",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Finite-support probability law.

    Build instances with :func:`make_distribution`, which sorts, merges and
    normalizes. The constructor only validates.
    """

    support: np.ndarray
    probs: np.ndarray
    _cum: np.ndarray = field(init=False, repr=False)
    _tail: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = _readonly(self.support)
        p = _readonly(self.probs)
        if x.ndim != 1 or p.shape != x.shape or x.size == 0:
            raise ValueError("support and probs must be nonempty 1-D arrays of equal length")
        if not np.all(np.isfinite(x)):
            raise ValueError("support values must be finite")
        if np.any(np.diff(x) <= MERGE_TOL):
            raise ValueError("support must be strictly increasing with gaps above the merge tolerance")
        if np.any(p <= 0):
            raise ValueError("probabilities must be positive")
        if abs(math.fsum(p) - 1.0) > MERGE_TOL:
            raise ValueError("probabilities must sum to 1")
        object.__setattr__(self, "support", x)
        object.__setattr__(self, "probs", p)
        cum = np.cumsum(p)
        # tail[k] = P(X > x_k), accumulated from the right so it is not 1 - cum
        tail = np.concatenate([np.cumsum(p[::-1])[::-1][1:], [0.0]])
        object.__setattr__(self, "_cum", _readonly(cum))
        object.__setattr__(self, "_tail", _readonly(tail))

    def __len__(self) -> int:
        return self.support.size

    def __repr__(self) -> str:
        pairs = ", ".join(f"{x:g}: {p:g}" for x, p in zip(self.support, self.probs))
        return f"DiscreteDistribution({{{pairs}}})"

    @property
    def cum(self) -> np.ndarray:
        """CDF evaluated at each support point."""
        return self._cum

    @property
    def tail(self) -> np.ndarray:
        """P(X > x_k) for each support point x_k."""
        return self._tail


def make_distribution(values: Sequence[float], weights: Sequence[float],
                      tol: float = MERGE_TOL) -> DiscreteDistribution:
    """Normalize raw (value, weight) pairs into a distribution.

    Values within ``tol`` of the first value of a run are merged into that
    value, zero weights are dropped and the result is normalized.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    w = np.asarray(weights, dtype=np.float64).ravel()
    if x.size == 0 or x.size != w.size:
        raise ValueError("values and weights must be nonempty and of equal length")
    if not np.all(np.isfinite(x)) or not np.all(np.isfinite(w)):
        raise ValueError("values and weights must be finite")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    keep = w > 0
    if not np.any(keep):
        raise ValueError("at least one weight must be positive")
    x, w = x[keep], w[keep]
    order = np.argsort(x, kind="stable")
    x, w = x[order], w[order]

    merged_x: list[float] = []
    merged_w: list[list[float]] = []
    for xi, wi in zip(x, w):
        if merged_x and xi - merged_x[-1] <= tol:
            merged_w[-1].append(wi)
        else:
            merged_x.append(float(xi))
            merged_w.append([wi])
    sums = np.array([math.fsum(ws) for ws in merged_w])
    total = math.fsum(sums)
    return DiscreteDistribution(np.array(merged_x), sums / total)


def point_mass(c: float) -> DiscreteDistribution:
    return DiscreteDistribution(np.array([float(c)]), np.array([1.0]))


def cdf(D: DiscreteDistribution, x: float) -> float:
    """P(X <= x)."""
    k = int(np.searchsorted(D.support, x, side="right"))
    return 0.0 if k == 0 else float(D.cum[k - 1])


def sf(D: DiscreteDistribution, x: float) -> float:
    """P(X > x), summed over the upper tail."""
    k = int(np.searchsorted(D.support, x, side="right"))
    return 1.0 if k == 0 else float(D.tail[k - 1])


def _check_level(p) -> None:
    if np.any(np.asarray(p) <= 0) or np.any(np.asarray(p) > 1):
        raise ValueError("probability level must lie in (0, 1]")


def quantile(D: DiscreteDistribution, p: float) -> float:
    """Generalized inverse inf{x : F(x) >= p}; p = 1 gives the maximum of the support."""
    _check_level(p)
    k = int(np.searchsorted(D.cum, p - CMP_TOL, side="left"))
    return float(D.support[min(k, len(D) - 1)])


def quantiles(D: DiscreteDistribution, ps: np.ndarray) -> np.ndarray:
    """Vectorized :func:`quantile`."""
    ps = np.asarray(ps, dtype=np.float64)
    _check_level(ps)
    k = np.searchsorted(D.cum, ps - CMP_TOL, side="left")
    return D.support[np.minimum(k, len(D) - 1)]


def mean(D: DiscreteDistribution) -> float:
    return math.fsum(D.support * D.probs)


def stop_loss(D: DiscreteDistribution, d: float) -> float:
    """Stop-loss premium E(X - d)_+."""
    return math.fsum(np.maximum(D.support - d, 0.0) * D.probs)


def essential_bounds(D: DiscreteDistribution) -> tuple[float, float]:
    return float(D.support[0]), float(D.support[-1])


def shift(D: DiscreteDistribution, c: float) -> DiscreteDistribution:
    if c == 0:
        return D
    return make_distribution(D.support + c, D.probs)


def negate(D: DiscreteDistribution) -> DiscreteDistribution:
    return DiscreteDistribution(-D.support[::-1], D.probs[::-1].copy())


def scale(D: DiscreteDistribution, lam: float) -> DiscreteDistribution:
    """Law of lam * X."""
    return make_distribution(D.support * lam, D.probs)


def jump_levels(D: DiscreteDistribution) -> np.ndarray:
    """CDF values at the support points, i.e. the levels where the quantile jumps."""
    return D.cum


def equal_in_distribution(D1: DiscreteDistribution, D2: DiscreteDistribution,
                          tol: float = MERGE_TOL) -> bool:
    a = make_distribution(D1.support, D1.probs, tol=tol)
    b = make_distribution(D2.support, D2.probs, tol=tol)
    if len(a) != len(b):
        return False
    return bool(np.all(np.abs(a.support - b.support) <= tol)
                and np.all(np.abs(a.probs - b.probs) <= tol))


def law_distance(D1: DiscreteDistribution, D2: DiscreteDistribution,
                 tol: float = MERGE_TOL) -> float:
    """Largest atom-mass discrepancy after aligning both supports within ``tol``."""
    x = np.concatenate([D1.support, D2.support])
    w = np.concatenate([D1.probs, -D2.probs])
    order = np.argsort(x, kind="stable")
    x, w = x[order], w[order]
    worst = 0.0
    start, acc = x[0], [w[0]]
    for xi, wi in zip(x[1:], w[1:]):
        if xi - start <= tol:
            acc.append(wi)
        else:
            worst = max(worst, abs(math.fsum(acc)))
            start, acc = xi, [wi]
    return max(worst, abs(math.fsum(acc)))


def to_json(D: DiscreteDistribution) -> dict[str, Any]:
    return {"support": [sig12(v) for v in D.support],
            "probs": [sig12(v) for v in D.probs]}


def from_json(obj: Any) -> DiscreteDistribution:
    if not isinstance(obj, dict) or "support" not in obj or "probs" not in obj:
        raise ValueError('distribution JSON needs "support" and "probs" arrays')
    support, probs = obj["support"], obj["probs"]
    if not isinstance(support, list) or not isinstance(probs, list):
        raise ValueError('"support" and "probs" must be arrays')
    if len(support) != len(probs):
        raise ValueError('"support" and "probs" must have equal length')
    return make_distribution(support, probs)
