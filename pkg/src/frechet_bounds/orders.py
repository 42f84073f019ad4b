"""Stop-loss and convex order between discrete distributions.

Two independent deciders are provided. ``sl_order`` compares stop-loss
transforms, ``sl_order_via_tvar`` compares TVaR curves. Both only look at a
finite grid, which is exact:

* d -> E(X - d)_+ is convex and piecewise linear with kinks at the support
  points only, and has slope -1 left of the minimum. The difference of two
  such functions is linear between consecutive points of the merged support,
  constant (= difference of means) left of both minima and zero right of both
  maxima, so it is nonnegative everywhere iff it is nonnegative on the merged
  support plus one point to the left.
* p -> (1 - p) TVaR_p = integral of VaR_w over (p, 1) is piecewise linear
  with kinks at the CDF jump levels, so checking p = 0 and every jump level
  below 1 suffices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from . import distributions as dist
from ._numeric import CMP_TOL, ORDER_TOL, sig12
from .distributions import DiscreteDistribution
from .risk_measures import tvar

__all__ = [
    "Witness",
    "OrderVerdict",
    "TestFunction",
    "sl_order",
    "cx_order",
    "sl_order_via_tvar",
    "stop_loss_margin",
    "convex_test_expectations",
    "standard_test_functions",
    "hinge_grid",
    "stop_loss_curve",
    "tvar_curve",
    "curve_to_csv",
]


@dataclass(frozen=True)
class Witness:
    """A grid point where the order fails: ``lhs <= rhs`` (or ``lhs == rhs`` for means) is violated."""

    kind: Literal["retention", "level", "mean"]
    value: float
    lhs: float
    rhs: float

    def to_json(self) -> dict:
        return {"kind": self.kind, "value": sig12(self.value),
                "lhs": sig12(self.lhs), "rhs": sig12(self.rhs)}


@dataclass(frozen=True)
class OrderVerdict:
    holds: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return {"holds": self.holds,
                "witness": None if self.witness is None else self.witness.to_json()}


def _retention_grid(X: DiscreteDistribution, Y: DiscreteDistribution) -> np.ndarray:
    grid = np.union1d(X.support, Y.support)
    return np.concatenate([[grid[0] - 1.0], grid])


def sl_order(X: DiscreteDistribution, Y: DiscreteDistribution) -> OrderVerdict:
    """X <=_sl Y, checked at every kink of either stop-loss transform."""
    for d in _retention_grid(X, Y):
        lhs, rhs = dist.stop_loss(X, d), dist.stop_loss(Y, d)
        if lhs > rhs + ORDER_TOL:
            return OrderVerdict(False, Witness("retention", float(d), lhs, rhs))
    return OrderVerdict(True)


def stop_loss_margin(X: DiscreteDistribution, Y: DiscreteDistribution) -> float:
    """min_d E(Y - d)_+ - E(X - d)_+ over the exact grid; negative iff X <=_sl Y fails."""
    return min(dist.stop_loss(Y, d) - dist.stop_loss(X, d) for d in _retention_grid(X, Y))


def cx_order(X: DiscreteDistribution, Y: DiscreteDistribution) -> OrderVerdict:
    """X <=_cx Y  iff  EX = EY and X <=_sl Y."""
    mx, my = dist.mean(X), dist.mean(Y)
    if abs(mx - my) > ORDER_TOL:
        return OrderVerdict(False, Witness("mean", mx - my, mx, my))
    return sl_order(X, Y)


def _level_grid(X: DiscreteDistribution, Y: DiscreteDistribution) -> np.ndarray:
    levels = np.union1d(X.cum, Y.cum)
    levels = levels[levels < 1.0 - CMP_TOL]
    return np.concatenate([[0.0], levels[levels > 0]])


def sl_order_via_tvar(X: DiscreteDistribution, Y: DiscreteDistribution) -> OrderVerdict:
    """X <=_sl Y through TVaR_p[X] <= TVaR_p[Y] at p = 0 and every jump level."""
    for p in _level_grid(X, Y):
        lhs, rhs = tvar(X, p), tvar(Y, p)
        if lhs > rhs + ORDER_TOL:
            return OrderVerdict(False, Witness("level", float(p), lhs, rhs))
    return OrderVerdict(True)


@dataclass(frozen=True)
class TestFunction:
    """Convex test function: square, fourth power, or hinge (x - d)_+."""

    __test__ = False  # keep pytest from collecting this class

    kind: Literal["square", "fourth_power", "hinge"]
    d: float = 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "square":
            return x * x
        if self.kind == "fourth_power":
            return x ** 4
        if self.kind == "hinge":
            return np.maximum(x - self.d, 0.0)
        raise ValueError(f"unknown test function {self.kind!r}")

    @property
    def strictly_convex(self) -> bool:
        return self.kind != "hinge"

    def expect(self, D: DiscreteDistribution) -> float:
        return math.fsum(self(D.support) * D.probs)

    def __str__(self) -> str:
        return f"hinge({self.d:g})" if self.kind == "hinge" else self.kind

    @classmethod
    def parse(cls, text: str) -> "TestFunction":
        text = text.strip()
        if text in ("square", "fourth_power"):
            return cls(text)
        if text.startswith("hinge(") and text.endswith(")"):
            return cls("hinge", float(text[6:-1]))
        raise ValueError(f"unknown test function {text!r}")


def hinge_grid(X: DiscreteDistribution, Y: DiscreteDistribution) -> list[TestFunction]:
    return [TestFunction("hinge", float(d)) for d in _retention_grid(X, Y)]


def standard_test_functions(X: DiscreteDistribution, Y: DiscreteDistribution) -> list[TestFunction]:
    return [TestFunction("square"), TestFunction("fourth_power"), *hinge_grid(X, Y)]


def convex_test_expectations(X: DiscreteDistribution, Y: DiscreteDistribution,
                             fs: Iterable[TestFunction]) -> list[tuple[float, float]]:
    return [(f.expect(X), f.expect(Y)) for f in fs]


def stop_loss_curve(D: DiscreteDistribution) -> list[tuple[float, float]]:
    """Kinks of d -> E(X - d)_+ plus one anchor on each side; linear interpolation is exact."""
    lo, hi = dist.essential_bounds(D)
    ds = [lo - 1.0, *map(float, D.support), hi + 1.0]
    return [(d, dist.stop_loss(D, d)) for d in ds]


def tvar_curve(D: DiscreteDistribution) -> list[tuple[float, float]]:
    """TVaR at p = 0 and at every CDF jump level below 1."""
    return [(float(p), tvar(D, p)) for p in _level_grid(D, D)]


def curve_to_csv(points: Sequence[tuple[float, float]]) -> str:
    rows = ["x,value"] + [f"{x + 0.0:.12g},{v + 0.0:.12g}" for x, v in points]
    return "\n".join(rows) + "\n"
