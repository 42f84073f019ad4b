"""Distortion risk measures on discrete distributions.

``rho`` is evaluated exactly as a layer sum over the support: with tail
levels s_k = P(X > x_k) and s_0 = 1,

    rho_g[X] = sum_k x_k * (g(s_{k-1}) - g(s_k)).

This is both Choquet integrals (positive and negative half-line) summed by
parts for a step tail. ``rho_spectral`` integrates VaR_{1-q} against dg(q)
numerically and only serves as an independent cross-check for concave g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import distributions as dist
from ._numeric import CMP_TOL
from .distributions import DiscreteDistribution

__all__ = [
    "ConcavityError",
    "DistortionFunction",
    "identity",
    "var_level",
    "tvar_level",
    "proportional_hazard",
    "dual_power",
    "piecewise_linear",
    "distortion_eval",
    "rho",
    "rho_spectral",
    "var",
    "tvar",
    "default_catalog",
    "distortion_from_json",
    "distortion_to_json",
]


class ConcavityError(ValueError):
    """A concave distortion was required and the one supplied is not."""


@dataclass(frozen=True)
class DistortionFunction:
    """A distortion g: [0, 1] -> [0, 1] with g(0) = 0 and g(1) = 1.

    Build through the catalog constructors below rather than directly.
    ``param`` is p for the VaR/TVaR kinds, r for proportional hazard and s for
    dual power; ``points`` is only used by ``piecewise_linear``.
    """

    kind: str
    param: float | None = None
    points: tuple[tuple[float, float], ...] = ()

    @property
    def is_concave(self) -> bool:
        if self.kind in ("identity", "tvar_level"):
            return True
        if self.kind == "var_level":
            return False
        if self.kind == "proportional_hazard":
            return 0 < self.param <= 1
        if self.kind == "dual_power":
            return self.param >= 1
        u = np.array([pt[0] for pt in self.points])
        g = np.array([pt[1] for pt in self.points])
        slopes = np.diff(g) / np.diff(u)
        return bool(np.all(np.diff(slopes) <= CMP_TOL))

    def __call__(self, u):
        return distortion_eval(self, u)

    def __str__(self) -> str:
        if self.kind == "identity":
            return "identity"
        if self.kind == "piecewise_linear":
            return f"piecewise_linear({len(self.points)} points)"
        return f"{self.kind}({self.param:g})"


def identity() -> DistortionFunction:
    return DistortionFunction("identity")


def var_level(p: float) -> DistortionFunction:
    if not 0 < p <= 1:
        raise ValueError("VaR level must lie in (0, 1]")
    return DistortionFunction("var_level", float(p))


def tvar_level(p: float) -> DistortionFunction:
    if not 0 <= p < 1:
        raise ValueError("TVaR level must lie in [0, 1)")
    return DistortionFunction("tvar_level", float(p))


def proportional_hazard(r: float) -> DistortionFunction:
    """g(u) = u**r."""
    if not r > 0:
        raise ValueError("proportional hazard exponent must be positive")
    return DistortionFunction("proportional_hazard", float(r))


def dual_power(s: float) -> DistortionFunction:
    """g(u) = 1 - (1 - u)**s."""
    if not s > 0:
        raise ValueError("dual power exponent must be positive")
    return DistortionFunction("dual_power", float(s))


def piecewise_linear(points: Sequence[Sequence[float]]) -> DistortionFunction:
    pts = tuple((float(u), float(g)) for u, g in points)
    if len(pts) < 2:
        raise ValueError("piecewise linear distortion needs at least two knots")
    u = np.array([p[0] for p in pts])
    g = np.array([p[1] for p in pts])
    if u[0] != 0 or u[-1] != 1 or g[0] != 0 or g[-1] != 1:
        raise ValueError("piecewise linear distortion must run from (0, 0) to (1, 1)")
    if np.any(np.diff(u) <= 0):
        raise ValueError("knot abscissae must be strictly increasing")
    if np.any(np.diff(g) < 0):
        raise ValueError("distortion must be nondecreasing")
    return DistortionFunction("piecewise_linear", None, pts)


def default_catalog() -> list[DistortionFunction]:
    """The catalog exercised by the verification suites."""
    return [identity(),
            var_level(0.3), var_level(0.6), var_level(0.9),
            tvar_level(0.3), tvar_level(0.6), tvar_level(0.9),
            proportional_hazard(0.5), dual_power(2.0)]


def _eval(g: DistortionFunction, u: np.ndarray) -> np.ndarray:
    k = g.kind
    if k == "identity":
        return u.copy()
    if k == "var_level":
        # slack matches the quantile lookup so rho(var_level(p)) == VaR_p exactly
        return np.where(u > 1.0 - g.param + CMP_TOL, 1.0, 0.0)
    if k == "tvar_level":
        return np.minimum(u / (1.0 - g.param), 1.0)
    if k == "proportional_hazard":
        return u ** g.param
    if k == "dual_power":
        return 1.0 - (1.0 - u) ** g.param
    if k == "piecewise_linear":
        return np.interp(u, [p[0] for p in g.points], [p[1] for p in g.points])
    raise ValueError(f"unknown distortion kind {k!r}")


def distortion_eval(g: DistortionFunction, u):
    arr = np.asarray(u, dtype=np.float64)
    if np.any(arr < 0) or np.any(arr > 1):
        raise ValueError("distortion argument must lie in [0, 1]")
    out = _eval(g, arr)
    return float(out) if out.ndim == 0 else out


def rho(g: DistortionFunction, D: DiscreteDistribution) -> float:
    s = np.concatenate([[1.0], D.tail])
    gs = _eval(g, s)
    return math.fsum(D.support * (gs[:-1] - gs[1:]))


def rho_spectral(g: DistortionFunction, D: DiscreteDistribution, steps: int = 1_000_000) -> float:
    """Midpoint Riemann-Stieltjes sum of VaR_{1-q}[X] dg(q) on a uniform q-grid."""
    if not g.is_concave:
        raise ConcavityError(f"spectral form requires a concave distortion, got {g}")
    if steps < 1000:
        raise ValueError("steps must be at least 1000")
    q = np.linspace(0.0, 1.0, steps + 1)
    dg = np.diff(_eval(g, q))
    mid = 0.5 * (q[:-1] + q[1:])
    return math.fsum(dist.quantiles(D, 1.0 - mid) * dg)


def var(D: DiscreteDistribution, p: float) -> float:
    return dist.quantile(D, p)


def tvar(D: DiscreteDistribution, p: float) -> float:
    """Average of VaR_w over w in (p, 1); the atom straddling p contributes only its upper part."""
    if not 0 <= p < 1:
        raise ValueError("TVaR level must lie in [0, 1)")
    lower = np.concatenate([[0.0], D.cum[:-1]])
    share = np.clip(D.cum - np.maximum(lower, p), 0.0, None)
    return math.fsum(D.support * share) / (1.0 - p)


_JSON_KINDS = {"tvar": "tvar_level", "var": "var_level", "ph": "proportional_hazard",
               "dual_power": "dual_power", "identity": "identity",
               "piecewise_linear": "piecewise_linear"}


def distortion_from_json(obj: Any) -> DistortionFunction:
    if not isinstance(obj, dict) or obj.get("kind") not in _JSON_KINDS:
        raise ValueError(f'distortion JSON needs "kind" in {sorted(_JSON_KINDS)}')
    kind = obj["kind"]
    try:
        if kind == "identity":
            return identity()
        if kind == "tvar":
            return tvar_level(float(obj["p"]))
        if kind == "var":
            return var_level(float(obj["p"]))
        if kind == "ph":
            return proportional_hazard(float(obj["r"]))
        if kind == "dual_power":
            return dual_power(float(obj["s"]))
        return piecewise_linear(obj["points"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed {kind} distortion: {exc}") from None


def distortion_to_json(g: DistortionFunction) -> dict[str, Any]:
    if g.kind == "identity":
        return {"kind": "identity"}
    if g.kind == "piecewise_linear":
        return {"kind": "piecewise_linear", "points": [list(p) for p in g.points]}
    key = {"tvar_level": ("tvar", "p"), "var_level": ("var", "p"),
           "proportional_hazard": ("ph", "r"), "dual_power": ("dual_power", "s")}[g.kind]
    return {"kind": key[0], key[1]: g.param}
