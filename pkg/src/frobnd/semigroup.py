"""Membership in J, saturated cones and the Frobenius set."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _rational as rq
from ._grid import Region, RegionTooLarge, apex_above, grown_bounds
from .errors import NotInSemigroup, RegionGrowthExceeded
from .vecset import IntVec, VectorSet, as_point, in_lattice

@dataclass(frozen=True)
class SaturationContext:
    """Finite data deciding saturation.

    ``omega_star`` are the lattice points of the half-open zonotope
    ``{sum c_j X_j : 0 <= c_j < 1}``; ``M`` bounds their integer
    representations, ``g0 = M * sum X_j`` is a saturated apex and ``R0`` is
    the diameter of the zonotope (``R0_sq`` its exact square).
    """

    omega_star: tuple[IntVec, ...]
    M: int
    g0: IntVec
    R0: float
    R0_sq: int


@dataclass(frozen=True)
class FrobeniusSet:
    apexes: tuple[IntVec, ...]
    search_level: int = 0
    rounds: int = 1


class _Oracle:
    """Reachability table for J below a growing apex.

    Membership of ``z`` only depends on ``C ∩ (z - C)``, so the table covers
    ``C ∩ (T - C)`` for an apex ``T`` that dominates every query seen so far.
    """

    def __init__(self, X: VectorSet):
        self.X = X
        self.N = X.geometry.normals_array
        self.h = None
        self.region = None
        self.reach = None

    def ensure(self, P: np.ndarray):
        h = grown_bounds(self.N, P, self.h)
        if h is None:
            return
        region = Region(self.X, self.X.distinct, top=apex_above(self.X, h))
        self.region, self.h = region, h
        self.reach = region.fill_reach()

    def contains_many(self, P) -> np.ndarray:
        idx = self.region.indices(P)
        return np.where(idx >= 0, self.reach[idx], False)


@lru_cache(maxsize=32)
def _oracle(X: VectorSet) -> _Oracle:
    return _Oracle(X)


def _dfs_member(X: VectorSet, z: IntVec) -> bool:
    geo = X.geometry
    seen = {z}
    stack = [z]
    steps = X.distinct
    while stack:
        y = stack.pop()
        for v in steps:
            w = tuple(a - b for a, b in zip(y, v))
            if not any(w):
                return True
            if w in seen or X.level(w) <= 0 or not geo.contains(w):
                continue
            seen.add(w)
            stack.append(w)
    return False


def in_semigroup(X: VectorSet, z) -> bool:
    """True iff ``z`` is a nonnegative integer combination of the generators."""
    z = as_point(z)
    if not any(z):
        return True
    if not X.geometry.contains(z) or not in_lattice(X.lattice, z):
        return False
    try:
        return bool(in_semigroup_many(X, [z])[0])
    except RegionTooLarge:
        return _dfs_member(X, z)


def in_semigroup_many(X: VectorSet, pts) -> np.ndarray:
    """Vectorized membership for an ``(n, s)`` integer array."""
    P = np.asarray(pts, dtype=np.int64).reshape(-1, X.dim)
    out = np.zeros(P.shape[0], dtype=bool)
    if P.shape[0] == 0:
        return out
    cone = X.geometry.contains_many(P)
    if not cone.any():
        return out
    orc = _oracle(X)
    orc.ensure(P[cone])
    out[cone] = orc.contains_many(P[cone])
    return out


# --------------------------------------------------------------------------
# fundamental domain


def _in_half_open_zonotope(D, w) -> bool:
    # maximize eps subject to sum c_j D_j = w, c_j + eps <= 1, c, eps >= 0
    k = len(D)
    s = len(w)
    A_eq = [[D[j][d] for j in range(k)] + [0] for d in range(s)]
    A_ub = [[int(i == j) for j in range(k)] + [1] for i in range(k)]
    res = rq.linprog_exact([0] * k + [1], A_ub, [1] * k, A_eq, list(w))
    return res.status == "optimal" and res.value > 0


def density_radius(X: VectorSet) -> tuple[float, int]:
    """Diameter of the closed zonotope spanned by the distinct generators.

    Returns ``(R0, R0_sq)``.  Beyond 16 distinct generators the triangle
    inequality bound ``sum |X_j|`` is used (and ``R0_sq`` is its ceiling).
    """
    D = np.array(X.distinct, dtype=np.int64)
    k = len(D)
    if k <= 16:
        best = 0
        for signs in itertools.product((-1, 1), repeat=k - 1):
            v = D[0] + np.array(signs, dtype=np.int64) @ D[1:]
            best = max(best, int(v @ v))
        return math.sqrt(best), best
    r = float(np.linalg.norm(D, axis=1).sum())
    return r, math.ceil(r * r)


def _min_sup_representation(D, w, upper: int) -> int:
    k = len(D)
    A = np.array(D, dtype=np.int64).T
    target = np.array(w, dtype=np.int64)
    for r in range(upper):
        if (2 * r + 1) ** k > 2_000_000:
            return upper
        rng = np.arange(-r, r + 1)
        grid = np.stack(np.meshgrid(*([rng] * k), indexing="ij"), axis=-1).reshape(-1, k)
        if np.any(np.all(grid @ A.T == target, axis=1)):
            return r
    return upper


def saturation_context(X: VectorSet) -> SaturationContext:
    """Enumerate the lattice points of the fundamental domain and build ``g0``."""
    D = X.distinct
    s = X.dim
    lo = [sum(min(0, v[d]) for v in D) for d in range(s)]
    hi = [sum(max(0, v[d]) for v in D) for d in range(s)]
    L = X.lattice
    geo = X.geometry
    omega = []
    for w in itertools.product(*[range(lo[d], hi[d] + 1) for d in range(s)]):
        if not geo.contains(w) or L.coords(w) is None:
            continue
        if _in_half_open_zonotope(D, w):
            omega.append(tuple(w))
    omega.sort(key=lambda w: (X.level(w), w))
    # x_coords of the Hermite basis give one integer representation for free
    M = 0
    for w in omega:
        if not any(w):
            continue
        bc = L.coords(w)
        a = [0] * X.m
        for c, row in zip(bc, L.x_coords):
            for j in range(X.m):
                a[j] += c * row[j]
        # fold multiset coordinates onto distinct vectors
        ad = [0] * len(D)
        for j, v in enumerate(X.vectors):
            ad[D.index(v)] += a[j]
        upper = max(abs(t) for t in ad)
        M = max(M, _min_sup_representation(D, w, upper) if upper > M else M)
    total = [sum(v[d] for v in D) for d in range(s)]
    g0 = tuple(M * t for t in total)
    R0, R0_sq = density_radius(X)
    return SaturationContext(tuple(omega), M, g0, R0, R0_sq)


def is_saturated(X: VectorSet, ctx: SaturationContext, g) -> bool:
    """True iff every lattice point of ``g + C_X`` lies in J."""
    g = as_point(g)
    if not in_semigroup(X, g):
        raise NotInSemigroup(f"{g} is not in the semigroup")
    pts = np.array([[a + b for a, b in zip(g, w)] for w in ctx.omega_star], dtype=np.int64)
    return bool(np.all(in_semigroup_many(X, pts)))


def _dominated(P: np.ndarray, apex: np.ndarray, normals: np.ndarray) -> np.ndarray:
    return np.all((P - apex) @ normals.T >= 0, axis=1)


def frobenius_set(X: VectorSet, ctx: Optional[SaturationContext] = None, max_rounds: int = 8) -> FrobeniusSet:
    """Apexes of the maximal saturated cones.

    Saturated apexes are searched among semigroup points up to a level bound
    that starts just above ``g0``.  A shell of further levels must consist of
    points dominated by the apexes already found; otherwise the bound doubles.
    """
    if ctx is None:
        ctx = saturation_context(X)
    levels_D = [X.level(v) for v in X.distinct]
    w_sat = max(X.level(w) for w in ctx.omega_star)
    shell = sum(levels_D) + max(levels_D)
    B = X.level(ctx.g0) + shell
    normals = X.geometry.normals_array
    for rnd in range(1, max_rounds + 1):
        top = B + shell
        region = Region(X, X.distinct, cap=top + w_sat)
        reach = region.fill_reach()
        pts = region.points
        lv = region.point_levels
        sel = (lv <= top) & reach[pts]
        cand, cand_lv = pts[sel], lv[sel]
        coords = region.coords(cand)
        sat = np.ones(cand.size, dtype=bool)
        for w in ctx.omega_star:
            sat &= reach[region.indices(coords + np.array(w, dtype=np.int64))]
        cand, cand_lv, coords = cand[sat], cand_lv[sat], coords[sat]
        dominated = np.zeros(cand.size, dtype=bool)
        apexes = []
        for i in range(cand.size):
            if cand_lv[i] > B:
                break
            if dominated[i]:
                continue
            apexes.append(coords[i])
            dominated |= _dominated(coords, coords[i], normals)
        outer = cand_lv > B
        if np.all(dominated[outer]):
            out = sorted(tuple(int(v) for v in a) for a in apexes)
            _check_antichain(X, out)
            return FrobeniusSet(tuple(out), B, rnd)
        B *= 2
    raise RegionGrowthExceeded(f"Frobenius search did not certify within {max_rounds} rounds (level {B})")


def _check_antichain(X: VectorSet, apexes):
    geo = X.geometry
    for g, h in itertools.permutations(apexes, 2):
        d = tuple(a - b for a, b in zip(g, h))
        if geo.contains(d):
            raise AssertionError(f"apexes {g} and {h} are comparable")
