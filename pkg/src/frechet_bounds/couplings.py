"""Couplings of finite discrete marginals and the extremal dependence structures.

A coupling is a :class:`JointDistribution`, a finite list of weighted atoms in
R^n. The comonotonic and countermonotonic couplings are built by cutting
(0, 1] into segments on which every quantile function involved is constant.
The mutually exclusive coupling puts at most one coordinate away from its
essential infimum (or supremum) on each atom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Literal, Sequence

import numpy as np

from . import distributions as dist
from ._numeric import CMP_TOL, MERGE_TOL, sig12
from .distributions import DiscreteDistribution

Side = Literal["below", "above"]

__all__ = [
    "FrechetClass",
    "JointDistribution",
    "InfeasibleClassError",
    "make_joint",
    "marginals_of",
    "is_member",
    "sum_distribution",
    "comonotonic",
    "countermonotonic",
    "me_feasible",
    "mutually_exclusive",
    "is_comonotonic",
    "is_countermonotonic",
    "is_mutually_exclusive",
    "negate_joint",
    "sample_coupling",
    "enumerate_vertex_couplings",
]

VERTEX_CELL_LIMIT = 64


class InfeasibleClassError(ValueError):
    """The marginals admit no mutually exclusive coupling on the requested side."""


@dataclass(frozen=True)
class FrechetClass:
    """The set of all couplings with the given marginals, in order."""

    marginals: tuple[DiscreteDistribution, ...]

    def __post_init__(self):
        ms = tuple(self.marginals)
        if len(ms) < 2:
            raise ValueError("a Frechet class needs at least two marginals")
        if not all(isinstance(m, DiscreteDistribution) for m in ms):
            raise TypeError("marginals must be DiscreteDistribution instances")
        object.__setattr__(self, "marginals", ms)

    @property
    def n(self) -> int:
        return len(self.marginals)

    def __iter__(self):
        return iter(self.marginals)

    def __getitem__(self, i: int) -> DiscreteDistribution:
        return self.marginals[i]


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Finite joint law: ``points[k]`` carries mass ``probs[k]``.

    Use :func:`make_joint` to merge duplicate points; atoms are kept in
    lexicographic order so equal inputs give identical objects.
    """

    points: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        p = np.ascontiguousarray(self.probs, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] < 2 or pts.shape[0] != p.size or p.size == 0:
            raise ValueError("points must be an (m, n) array with n >= 2 and one probability per atom")
        if not np.all(np.isfinite(pts)):
            raise ValueError("atom coordinates must be finite")
        if np.any(p <= 0):
            raise ValueError("atom probabilities must be positive")
        if abs(math.fsum(p) - 1.0) > MERGE_TOL:
            raise ValueError("atom probabilities must sum to 1")
        pts.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", p)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.probs.size

    def atoms(self) -> list[tuple[tuple[float, ...], float]]:
        return [(tuple(float(v) for v in x), float(p)) for x, p in zip(self.points, self.probs)]


def make_joint(points: Sequence[Sequence[float]], weights: Sequence[float],
               tol: float = MERGE_TOL) -> JointDistribution:
    """Merge atoms that agree componentwise within ``tol``, drop zero weights, normalize."""
    pts = np.asarray(points, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64).ravel()
    if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[0] != w.size:
        raise ValueError("need a nonempty list of points with one weight each")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    keep = w > 0
    if not np.any(keep):
        raise ValueError("at least one weight must be positive")
    pts, w = pts[keep], w[keep]
    order = np.lexsort(pts.T[::-1])
    pts, w = pts[order], w[order]

    reps: list[np.ndarray] = []
    masses: list[list[float]] = []
    for x, wi in zip(pts, w):
        for k, r in enumerate(reps):
            if np.all(np.abs(r - x) <= tol):
                masses[k].append(wi)
                break
        else:
            reps.append(x)
            masses.append([wi])
    sums = np.array([math.fsum(m) for m in masses])
    return JointDistribution(np.array(reps), sums / math.fsum(sums))


def marginals_of(J: JointDistribution) -> FrechetClass:
    return FrechetClass(tuple(dist.make_distribution(J.points[:, i], J.probs)
                              for i in range(J.dim)))


def is_member(J: JointDistribution, C: FrechetClass, tol: float = MERGE_TOL) -> bool:
    if J.dim != C.n:
        raise ValueError(f"coupling has dimension {J.dim}, class has {C.n} marginals")
    return all(dist.equal_in_distribution(m, f, tol)
               for m, f in zip(marginals_of(J), C))


def sum_distribution(J: JointDistribution) -> DiscreteDistribution:
    """Law of X_1 + ... + X_n."""
    sums = np.array([math.fsum(x) for x in J.points])
    return dist.make_distribution(sums, J.probs)


def _merged_levels(levels: np.ndarray) -> np.ndarray:
    """Sorted cut points in (0, 1] with near-equal levels collapsed; always ends at 1."""
    lv = np.sort(levels[(levels > CMP_TOL) & (levels < 1.0 - CMP_TOL)])
    out = [0.0]
    for v in lv:
        if v - out[-1] > CMP_TOL:
            out.append(float(v))
    out.append(1.0)
    return np.array(out)


def comonotonic(C: FrechetClass) -> JointDistribution:
    """The coupling (F_1^{-1}(U), ..., F_n^{-1}(U))."""
    cuts = _merged_levels(np.concatenate([m.cum for m in C]))
    a, b = cuts[:-1], cuts[1:]
    pts = np.column_stack([dist.quantiles(m, b) for m in C])
    return make_joint(pts, b - a)


def countermonotonic(F1: DiscreteDistribution, F2: DiscreteDistribution) -> JointDistribution:
    """The coupling (F_1^{-1}(U), F_2^{-1}(1 - U))."""
    cuts = _merged_levels(np.concatenate([F1.cum, 1.0 - F2.cum]))
    a, b = cuts[:-1], cuts[1:]
    pts = np.column_stack([dist.quantiles(F1, b), dist.quantiles(F2, 1.0 - a)])
    return make_joint(pts, b - a)


def _away_mass(C: FrechetClass, side: Side) -> list[float]:
    """Per marginal, the mass not sitting at the essential infimum (below) or supremum (above)."""
    if side == "below":
        return [float(m.tail[0]) for m in C]
    if side == "above":
        return [1.0 - float(m.probs[-1]) for m in C]
    raise ValueError(f"side must be 'below' or 'above', got {side!r}")


def me_feasible(C: FrechetClass, side: Side = "below") -> bool:
    return math.fsum(_away_mass(C, side)) <= 1.0 + CMP_TOL


def mutually_exclusive(C: FrechetClass, side: Side = "below") -> JointDistribution:
    """Mutually exclusive coupling: every atom has at most one coordinate off its bound."""
    away = _away_mass(C, side)
    total = math.fsum(away)
    if total > 1.0 + CMP_TOL:
        cond = ("sum_i (1 - F_i(l_i)) <= 1" if side == "below"
                else "sum_i F_i(u_i-) <= 1")
        raise InfeasibleClassError(
            f"no mutually exclusive coupling from {side}: feasibility condition "
            f"{cond} fails (sum = {total:.12g})")
    if side == "above":
        flipped = FrechetClass(tuple(dist.negate(m) for m in C))
        return negate_joint(mutually_exclusive(flipped, "below"))

    base = np.array([m.support[0] for m in C])
    pts, w = [], []
    for i, m in enumerate(C):
        for x, p in zip(m.support[1:], m.probs[1:]):
            pt = base.copy()
            pt[i] = x
            pts.append(pt)
            w.append(p)
    rest = 1.0 - total
    if rest > CMP_TOL:
        pts.append(base)
        w.append(rest)
    return make_joint(pts, w)


def negate_joint(J: JointDistribution) -> JointDistribution:
    return make_joint(-J.points, J.probs)


def _is_chain(points: np.ndarray, tol: float) -> bool:
    diff = points[:, None, :] - points[None, :, :]
    le = np.all(diff <= tol, axis=2)
    return bool(np.all(le | le.T))


def is_comonotonic(J: JointDistribution, tol: float = MERGE_TOL) -> bool:
    """Atoms form a chain in the componentwise order.

    For finite supports this is the same as F_X(x) = min_k F_k(x_k).
    """
    return _is_chain(J.points, tol)


def is_countermonotonic(J: JointDistribution, tol: float = MERGE_TOL) -> bool:
    if J.dim != 2:
        raise ValueError("countermonotonicity is defined for bivariate couplings only")
    return _is_chain(J.points * np.array([1.0, -1.0]), tol)


def is_mutually_exclusive(J: JointDistribution, side: Side = "below",
                          tol: float = MERGE_TOL) -> bool:
    if side == "below":
        bound = J.points.min(axis=0)
        off = J.points > bound + tol
    elif side == "above":
        bound = J.points.max(axis=0)
        off = J.points < bound - tol
    else:
        raise ValueError(f"side must be 'below' or 'above', got {side!r}")
    # atoms with two or more coordinates off their bound violate some pair i != j
    bad = off.sum(axis=1) >= 2
    if not np.any(bad):
        return True
    n = J.dim
    for i in range(n):
        for j in range(i + 1, n):
            if math.fsum(J.probs[off[:, i] & off[:, j]]) > tol:
                return False
    return True


def sample_coupling(C: FrechetClass, seed: int) -> JointDistribution:
    """Random member of ``C`` by greedy mass assignment.

    Each step picks one support index per coordinate with probability
    proportional to its residual mass and books the smallest picked residual
    as an atom. That zeroes at least one residual, so the loop ends after at
    most sum(m_i) steps.
    """
    rng = np.random.default_rng(seed)
    resid = [np.array(m.probs, dtype=np.float64) for m in C]
    pts, w = [], []
    while True:
        live = [r.sum() for r in resid]
        if min(live) <= CMP_TOL:
            break
        idx = [int(rng.choice(r.size, p=r / r.sum())) for r in resid]
        picked = [r[k] for r, k in zip(resid, idx)]
        mass = min(picked)
        pts.append([m.support[k] for m, k in zip(C, idx)])
        w.append(mass)
        for r, k in zip(resid, idx):
            r[k] = 0.0 if r[k] - mass <= CMP_TOL else r[k] - mass
    return make_joint(pts, w)


def enumerate_vertex_couplings(F1: DiscreteDistribution,
                               F2: DiscreteDistribution) -> list[JointDistribution]:
    """All vertices of the transportation polytope with margins F1, F2.

    Every vertex has a forest as support, so it has a row or column carrying
    a single positive cell. Peeling such a leaf (cell mass = the smaller of
    its two residual margins) reduces to a smaller polytope; memoizing on the
    residual margins keeps the recursion small.
    """
    m1, m2 = len(F1), len(F2)
    if m1 * m2 > VERTEX_CELL_LIMIT:
        raise ValueError(f"support sizes {m1}x{m2} exceed the {VERTEX_CELL_LIMIT}-cell limit")

    memo: dict[tuple, frozenset] = {}

    def solve(rows: tuple, cols: tuple) -> frozenset:
        # rows/cols: tuples of (index, residual mass) still open
        if not rows or not cols:
            return frozenset([()])
        key = (rows, cols)
        if key in memo:
            return memo[key]
        out = set()
        for ri, (i, a) in enumerate(rows):
            for cj, (j, b) in enumerate(cols):
                if a <= b + CMP_TOL:
                    # row i is a leaf attached to column j
                    rest_b = b - a
                    new_cols = cols[:cj] + (((j, rest_b),) if rest_b > CMP_TOL else ()) + cols[cj + 1:]
                    for tail in solve(rows[:ri] + rows[ri + 1:], new_cols):
                        out.add(tuple(sorted(tail + ((i, j, a),))))
                if b <= a + CMP_TOL:
                    rest_a = a - b
                    new_rows = rows[:ri] + (((i, rest_a),) if rest_a > CMP_TOL else ()) + rows[ri + 1:]
                    for tail in solve(new_rows, cols[:cj] + cols[cj + 1:]):
                        out.add(tuple(sorted(tail + ((i, j, b),))))
        memo[key] = frozenset(out)
        return memo[key]

    rows = tuple((i, float(p)) for i, p in enumerate(F1.probs))
    cols = tuple((j, float(p)) for j, p in enumerate(F2.probs))
    vertices: dict[tuple, JointDistribution] = {}
    for cells in solve(rows, cols):
        J = make_joint([(F1.support[i], F2.support[j]) for i, j, _ in cells],
                       [m for _, _, m in cells])
        key = tuple((tuple(np.round(x, 9)), round(p, 12)) for x, p in J.atoms())
        vertices.setdefault(key, J)
    return [vertices[k] for k in sorted(vertices)]


def joint_to_json(J: JointDistribution) -> dict[str, Any]:
    return {"dim": J.dim,
            "atoms": [{"x": [sig12(v) for v in x], "p": sig12(p)} for x, p in J.atoms()]}


def joint_from_json(obj: Any) -> JointDistribution:
    if not isinstance(obj, dict) or not isinstance(obj.get("atoms"), list) or not obj["atoms"]:
        raise ValueError('joint JSON needs a nonempty "atoms" array')
    pts, w = [], []
    for atom in obj["atoms"]:
        if not isinstance(atom, dict) or "x" not in atom or "p" not in atom:
            raise ValueError('each atom needs "x" and "p"')
        pts.append(atom["x"])
        w.append(atom["p"])
    if len({len(x) if isinstance(x, list) else -1 for x in pts}) != 1:
        raise ValueError("all atoms must have the same dimension")
    J = make_joint(pts, w)
    if "dim" in obj and obj["dim"] != J.dim:
        raise ValueError(f'"dim" is {obj["dim"]} but atoms have length {J.dim}')
    return J


def class_to_json(C: FrechetClass) -> dict[str, Any]:
    return {"marginals": [dist.to_json(m) for m in C]}


def class_from_json(obj: Any) -> FrechetClass:
    if not isinstance(obj, dict) or not isinstance(obj.get("marginals"), list):
        raise ValueError('class JSON needs a "marginals" array')
    return FrechetClass(tuple(dist.from_json(m) for m in obj["marginals"]))
