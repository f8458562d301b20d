"""Representations and exact path multiplicities.

``m(z)`` counts the ordered words ``i_1 ... i_n`` with
``X_{i_1} + ... + X_{i_n} = z``.  Tables are filled by the recurrence
``m(z) = sum_j m(z - X_j)`` in increasing level; the factorial sum over the
representation set ``A(z)`` is kept as an independent check.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _rational as rq
from ._grid import Region, apex_above, grown_bounds
from .errors import EmptyRepresentationSet
from .semigroup import density_radius, in_semigroup_many
from .vecset import IntVec, VectorSet, as_point


@lru_cache(maxsize=64)
def _suffix_cones(X: VectorSet):
    """For each ``j``, equalities and facet normals of ``cone(X_j, ..., X_m)``.

    ``K_m = {0}``.  Rows are primitive integer vectors; ``x`` lies in ``K_j``
    iff ``<e, x> = 0`` for every equality row and ``<f, x> >= 0`` for every
    facet row.
    """
    s = X.dim
    out = []
    for j in range(X.m + 1):
        suffix = [list(v) for v in X.vectors[j:]]
        if not suffix:
            out.append((tuple(tuple(int(i == k) for k in range(s)) for i in range(s)), ()))
            continue
        eqs = [rq.primitive(w) for w in rq.nullspace(suffix, s)]
        rho = s - len(eqs)
        dirs = sorted({rq.primitive(v) for v in suffix})
        if rho == 1:
            out.append((tuple(eqs), (dirs[0],)))
            continue
        facets = set()
        for sub in itertools.combinations(dirs, rho - 1):
            ns = rq.nullspace([list(v) for v in sub] + [list(e) for e in eqs], s)
            if len(ns) != 1:
                continue
            n = rq.primitive(ns[0])
            vals = [rq.dot(n, d) for d in dirs]
            if all(v >= 0 for v in vals):
                facets.add(n)
            elif all(v <= 0 for v in vals):
                facets.add(tuple(-x for x in n))
        out.append((tuple(eqs), tuple(sorted(facets))))
    return tuple(out)


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _step_range(X: VectorSet, cones, j: int, r) -> range:
    """Integers ``u >= 0`` with ``r - u X_j`` in the cone of the later generators."""
    v = X.vectors[j]
    eqs, facets = cones[j + 1]
    lo, hi = 0, None
    for e in eqs:
        ev, er = _dot(e, v), _dot(e, r)
        if ev == 0:
            if er != 0:
                return range(0)
            continue
        if er % ev:
            return range(0)
        u = er // ev
        lo, hi = max(lo, u), u if hi is None else min(hi, u)
    for f in facets:
        fv, fr = _dot(f, v), _dot(f, r)
        if fv > 0:
            hi = fr // fv if hi is None else min(hi, fr // fv)
        elif fv < 0:
            lo = max(lo, -(fr // -fv))
        elif fr < 0:
            return range(0)
    if hi is None:
        lvl = X.level(r)
        if lvl < 0:
            return range(0)
        hi = lvl // X.levels[j]
    return range(lo, hi + 1)


def representations(X: VectorSet, z) -> list[IntVec]:
    """All ``u`` in N^m with ``sum u_j X_j = z``, in lexicographic order.

    Each coordinate ranges only over values that keep the remainder inside
    the cone of the generators still to be placed.
    """
    z = as_point(z)
    vecs = X.vectors
    m = X.m
    cones = _suffix_cones(X)
    eqs0, facets0 = cones[0]
    if any(_dot(e, z) for e in eqs0) or any(_dot(f, z) < 0 for f in facets0):
        return []

    @lru_cache(maxsize=None)
    def feasible(j, r):
        if not any(r):
            return True
        if j == m:
            return False
        v = vecs[j]
        return any(feasible(j + 1, tuple(a - u * b for a, b in zip(r, v))) for u in _step_range(X, cones, j, r))

    out = []
    prefix = [0] * m

    def walk(j, r):
        if j == m:
            if not any(r):
                out.append(tuple(prefix))
            return
        v = vecs[j]
        for u in _step_range(X, cones, j, r):
            rest = tuple(a - u * b for a, b in zip(r, v))
            if feasible(j + 1, rest):
                prefix[j] = u
                walk(j + 1, rest)
        prefix[j] = 0

    if feasible(0, z):
        walk(0, z)
    return out


def multinomial(u) -> int:
    out = math.factorial(sum(u))
    for x in u:
        out //= math.factorial(x)
    return out


def multiplicity_from_representations(X: VectorSet, z) -> int:
    """``sum_{u in A(z)} |u|! / u!``."""
    return sum(multinomial(u) for u in representations(X, z))


class MultiplicityTable:
    """Path multiplicities over a lattice region.

    With ``exact=True`` values are Python integers filled on an object array;
    otherwise the table holds ``log m`` in float64 and uses the compiled
    kernel.  The region is either capped by level (``cap``, grown on demand),
    fixed below an apex (``top``), or, when neither is given, placed below an
    apex that moves up as queries arrive.
    """

    def __init__(self, X: VectorSet, cap: Optional[int] = None, top=None, exact: bool = True):
        self.X = X
        self.exact = exact
        self.region = None
        self.values = None
        self._h = None
        if top is not None:
            self.mode = "apex"
            self._build(cap, np.asarray(top, dtype=float))
        elif cap is not None:
            self.mode = "cap"
            self._build(cap, None)
        else:
            self.mode = "adaptive"
            self.ensure_points(np.zeros((1, X.dim), dtype=np.int64))

    def _build(self, cap, top):
        self.region = Region(self.X, self.X.vectors, cap=cap, top=top)
        self.values = self.region.fill_exact() if self.exact else self.region.fill_log()

    @property
    def cap(self):
        return self.region.cap

    def ensure(self, level: int):
        """Grow a level-capped table to cover ``level``."""
        if self.mode == "cap" and level > self.region.cap:
            self._build(max(level, 2 * self.region.cap), None)

    def ensure_points(self, P):
        """Make sure every cone point of ``P`` lies in the region (not possible for a fixed apex)."""
        P = np.asarray(P, dtype=np.int64).reshape(-1, self.X.dim)
        P = P[self.X.geometry.contains_many(P)]
        if P.shape[0] == 0:
            if self.region is None:
                P = np.zeros((1, self.X.dim), dtype=np.int64)
            else:
                return
        if self.mode == "cap":
            self.ensure(int((P @ np.array(self.X.level_vector, dtype=np.int64)).max()))
        elif self.mode == "adaptive":
            h = grown_bounds(self.X.geometry.normals_array, P, self._h)
            if h is not None:
                self._build(None, apex_above(self.X, h))
                self._h = h

    def _lookup(self, z):
        z = as_point(z)
        self.ensure_points([z])
        return self.region.index(z)

    def m(self, z) -> int:
        if not self.exact:
            raise TypeError("log-domain table holds no exact counts")
        i = self._lookup(z)
        return 0 if i is None else int(self.values[i])

    def log_m(self, z) -> float:
        i = self._lookup(z)
        if i is None:
            return -math.inf
        v = self.values[i]
        if self.exact:
            return math.log(v) if v else -math.inf
        return float(v)

    def log_values(self, idx: np.ndarray) -> np.ndarray:
        """``log m`` at flat indices (``-1`` meaning absent)."""
        out = np.full(idx.shape, -np.inf)
        ok = idx >= 0
        if self.exact:
            out[ok] = [math.log(v) if v else -math.inf for v in self.values[idx[ok]]]
        else:
            out[ok] = self.values[idx[ok]]
        return out


@lru_cache(maxsize=16)
def _default_table(X: VectorSet) -> MultiplicityTable:
    return MultiplicityTable(X)


def multiplicity(X: VectorSet, table: Optional[MultiplicityTable], z) -> int:
    """Exact number of paths ending at ``z`` (0 when ``z`` is not in J)."""
    z = as_point(z)
    if not any(z):
        return 1
    if not X.geometry.contains(z):
        return 0
    if table is None:
        table = _default_table(X)
    return table.m(z)


def _exact_coords(x) -> bool:
    return all(isinstance(v, (int, Fraction, np.integer)) for v in x)


def nearest_semigroup_points(X: VectorSet, x, radius: Optional[float] = None):
    """Semigroup points at minimal Euclidean distance from ``x``.

    Returns ``(dist_sq, points)``.  Squared distances are compared exactly
    when ``x`` has integer or Fraction entries, otherwise with a relative
    tolerance of 1e-9.
    """
    if radius is None:
        radius = density_radius(X)[0]
    exact = _exact_coords(x)
    xf = np.asarray([float(v) for v in x])
    r = int(math.ceil(radius)) + 1
    base = np.floor(xf).astype(np.int64)
    rng = np.arange(-r, r + 2)
    offs = np.stack(np.meshgrid(*([rng] * X.dim), indexing="ij"), axis=-1).reshape(-1, X.dim)
    P = base + offs
    d2 = ((P - xf) ** 2).sum(axis=1)
    P = P[d2 <= (radius + 1e-9) ** 2]
    P = P[X.geometry.contains_many(P)]
    P = P[in_semigroup_many(X, P)]
    if P.shape[0] == 0:
        raise ValueError(f"no semigroup point within {radius} of {x}")
    if exact:
        xq = [Fraction(v) for v in x]
        ds = [sum((int(a) - b) ** 2 for a, b in zip(p, xq)) for p in P]
        best = min(ds)
        pts = [tuple(int(v) for v in p) for p, d in zip(P, ds) if d == best]
        return best, sorted(pts)
    d2 = ((P - xf) ** 2).sum(axis=1)
    best = d2.min()
    keep = d2 <= best + 1e-9 * max(1.0, best)
    return float(best), sorted(tuple(int(v) for v in p) for p in P[keep])


def multiplicity_at(X: VectorSet, table: Optional[MultiplicityTable], x) -> int:
    """Multiplicity of the nearest semigroup point to ``x``, minimized over ties."""
    x = (x,) if isinstance(x, (int, float, Fraction, np.number)) else tuple(x)
    if not X.geometry.contains(x, tol=1e-12):
        raise ValueError(f"{x} is not in the cone")
    _, pts = nearest_semigroup_points(X, x)
    return min(multiplicity(X, table, p) for p in pts)


def hausdorff_A(X: VectorSet, z, z2, squared: bool = False):
    """Euclidean Hausdorff distance between the representation sets of ``z`` and ``z2``.

    With ``squared=True`` the exact integer square is returned.
    """
    A = np.array(representations(X, z), dtype=np.int64).reshape(-1, X.m)
    B = np.array(representations(X, z2), dtype=np.int64).reshape(-1, X.m)
    if A.shape[0] == 0 or B.shape[0] == 0:
        raise EmptyRepresentationSet("both points must lie in the semigroup")
    D = ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=2)
    h = int(max(D.min(axis=1).max(), D.min(axis=0).max()))
    return h if squared else math.sqrt(h)
