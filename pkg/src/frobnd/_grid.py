"""Lattice regions closed under taking predecessors.

A :class:`Region` is the set of integer points of ``C_X`` that satisfy an
optional level cap ``<a, z> <= cap`` and an optional upper apex ``top``
(``top - z`` in ``C_X``).  Both constraints are preserved when stepping back
along a generator, so every predecessor of a region point that lies in the
semigroup is again a region point and a single ordered sweep computes exact
path counts.

Only the points of the region are stored, indexed by position in level
order.  Skewed cones give bounding boxes far larger than the region itself,
so the box is used for hashing and never allocated unless it is small.
"""
from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from . import _kernels
from .vecset import VectorSet

MAX_POINTS = 30_000_000
MAX_ROWS = 40_000_000
DENSE_LOOKUP = 16_000_000


class RegionTooLarge(MemoryError):
    pass


def _cap_box(X: VectorSet, cap: int):
    a = X.level_vector
    verts = [np.zeros(X.dim)]
    for r in X.geometry.extreme_rays:
        verts.append(np.array(r, dtype=float) * cap / sum(x * y for x, y in zip(a, r)))
    V = np.array(verts)
    return np.floor(V.min(axis=0) + 1e-9).astype(np.int64), np.ceil(V.max(axis=0) - 1e-9).astype(np.int64)


def _top_box(X: VectorSet, top: np.ndarray):
    N = X.geometry.normals_array.astype(float)
    # C_X and top - C_X as N x >= 0, N x <= N top
    A_ub = np.vstack([-N, N])
    b_ub = np.concatenate([np.zeros(len(N)), N @ top])
    lo, hi = [], []
    for d in range(X.dim):
        c = np.zeros(X.dim)
        c[d] = 1.0
        r1 = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * X.dim, method="highs")
        r2 = linprog(-c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * X.dim, method="highs")
        lo.append(math.floor(r1.fun - 1e-7))
        hi.append(math.ceil(-r2.fun + 1e-7))
    return np.array(lo, dtype=np.int64), np.array(hi, dtype=np.int64)


def apex_above(X: VectorSet, h: np.ndarray) -> np.ndarray:
    """Lowest-level point ``T`` with ``<n, T> >= h_n`` for every facet normal."""
    N = X.geometry.normals_array.astype(float)
    a = np.array(X.level_vector, dtype=float)
    res = linprog(a, A_ub=-N, b_ub=-h.astype(float), bounds=[(None, None)] * X.dim, method="highs")
    if res.status != 0:  # pragma: no cover
        raise RuntimeError(f"apex LP failed: {res.message}")
    T = res.x
    # absorb round-off so that every query stays inside T - C
    slackv = h - N @ T
    if np.any(slackv > 0):
        T = T + (slackv.max() + 1e-9) * _interior_unit(X)
    return T


def grown_bounds(N: np.ndarray, P: np.ndarray, h: Optional[np.ndarray]) -> Optional[np.ndarray]:
    """Facet offsets covering the points ``P``, or None if ``h`` already covers them.

    Offsets grow by at least half their size so that a sequence of nearby
    queries triggers few rebuilds.
    """
    need = (np.asarray(P, dtype=np.int64).reshape(-1, N.shape[1]) @ N.T).max(axis=0)
    if h is not None and np.all(need <= h):
        return None
    if h is not None:
        need = np.maximum(need, h + np.maximum(h, 1) // 2)
    return np.maximum(need, 0)


def _interior_unit(X: VectorSet) -> np.ndarray:
    rays = np.array(X.geometry.extreme_rays, dtype=float)
    w = (rays / np.linalg.norm(rays, axis=1)[:, None]).sum(axis=0)
    N = X.geometry.normals_array.astype(float)
    return w / (N @ w).min()


class Region:
    """Integer points of the cone below a level cap and/or an apex.

    Point ``i`` (in level order, the origin first) is stored through its
    linear key in the bounding box.  Value arrays produced by the fills have
    one slot per point plus a trailing sentinel for absent predecessors.
    """

    def __init__(self, X: VectorSet, steps: Sequence[Sequence[int]], cap: Optional[int] = None,
                 top: Optional[np.ndarray] = None):
        if cap is None and top is None:
            raise ValueError("a region needs a level cap or an apex")
        self.X = X
        self.cap = cap
        self.top = None if top is None else np.asarray(top, dtype=float)
        steps = np.array(steps, dtype=np.int64).reshape(len(steps), X.dim)
        self.steps = steps
        if self.top is not None:
            lo, hi = _top_box(X, self.top)
            if cap is not None:
                clo, chi = _cap_box(X, cap)
                lo, hi = np.maximum(lo, clo), np.minimum(hi, chi)
        else:
            lo, hi = _cap_box(X, cap)
        lo = np.minimum(lo, 0)
        hi = np.maximum(hi, 0)
        self.lo, self.hi = lo, hi
        self.shape = tuple(int(v) for v in hi - lo + 1)
        if math.prod(self.shape) >= 2 ** 62:
            raise RegionTooLarge(f"bounding box {self.shape} cannot be indexed")
        self.n_box = math.prod(self.shape)
        self.strides = np.array([math.prod(self.shape[d + 1:]) for d in range(X.dim)], dtype=np.int64)
        self._build()

    # ------------------------------------------------------------------
    def _constraints(self):
        X = self.X
        N = X.geometry.normals_array.astype(np.int64)
        rows = [-N]
        rhs = [np.zeros(len(N))]
        if self.top is not None:
            ntop = N.astype(float) @ self.top
            rows.append(N)
            rhs.append(ntop + 1e-9 * (1.0 + np.abs(ntop)))
        if self.cap is not None:
            rows.append(np.array([X.level_vector], dtype=np.int64))
            rhs.append(np.array([float(self.cap)]))
        return np.vstack(rows), np.concatenate(rhs)

    def _enumerate(self) -> np.ndarray:
        """All region points: one integer interval per row along the widest axis."""
        s = self.X.dim
        A, b = self._constraints()
        inner = int(np.argmax(self.shape))
        outer = [d for d in range(s) if d != inner]
        n_rows = math.prod(self.shape[d] for d in outer)
        if n_rows > MAX_ROWS:
            raise RegionTooLarge(f"region needs {n_rows} rows, limit {MAX_ROWS}")
        if outer:
            grids = np.meshgrid(*[np.arange(self.lo[d], self.hi[d] + 1, dtype=np.int64) for d in outer],
                                indexing="ij")
            R = np.stack([g.ravel() for g in grids], axis=1)
        else:
            R = np.zeros((1, 0), dtype=np.int64)
        rest = (R @ A[:, outer].T).astype(float) if outer else np.zeros((1, len(A)))
        slackv = b[None, :] - rest
        a = A[:, inner].astype(float)
        lo_i = np.full(R.shape[0], float(self.lo[inner]))
        hi_i = np.full(R.shape[0], float(self.hi[inner]))
        ok = np.ones(R.shape[0], dtype=bool)
        for k in range(len(A)):
            if a[k] > 0:
                hi_i = np.minimum(hi_i, np.floor(slackv[:, k] / a[k] + 1e-9))
            elif a[k] < 0:
                lo_i = np.maximum(lo_i, np.ceil(slackv[:, k] / a[k] - 1e-9))
            else:
                ok &= slackv[:, k] >= -1e-9
        cnt = np.where(ok, hi_i - lo_i + 1, 0).clip(min=0).astype(np.int64)
        total = int(cnt.sum())
        if total > MAX_POINTS:
            raise RegionTooLarge(f"region of {total} points exceeds {MAX_POINTS}")
        keep = cnt > 0
        R, cnt, lo_i = R[keep], cnt[keep], lo_i[keep].astype(np.int64)
        P = np.empty((total, s), dtype=np.int64)
        if outer:
            P[:, outer] = np.repeat(R, cnt, axis=0)
        start = np.repeat(np.cumsum(cnt) - cnt, cnt)
        P[:, inner] = np.repeat(lo_i, cnt) + (np.arange(total, dtype=np.int64) - start)
        return P

    def _build(self):
        X = self.X
        P = self._enumerate()
        keys = (P - self.lo) @ self.strides
        lv = P @ np.array(X.level_vector, dtype=np.int64)
        srt = np.lexsort((keys, lv))
        P, keys, lv = P[srt], keys[srt], lv[srt]
        if keys.size == 0 or lv[0] != 0 or (keys.size > 1 and lv[1] == 0):
            raise AssertionError("origin must be the unique level-0 point of the region")
        n = keys.size
        self.n = n
        self.keys = keys
        self.origin = 0
        self.points = np.arange(n, dtype=np.int64)
        self.point_levels = lv
        if self.n_box <= DENSE_LOOKUP:
            lut = np.full(self.n_box, -1, dtype=np.int64)
            lut[keys] = self.points
            self._lut, self._sorted = lut, None
        else:
            perm = np.argsort(keys)
            self._lut, self._sorted = None, (keys[perm], perm)
        pred = np.empty((n - 1, len(self.steps)), dtype=np.int64)
        for j, v in enumerate(self.steps):
            pos = self._positions(P[1:] - v)
            pred[:, j] = np.where(pos >= 0, pos, n)
        self.order = self.points[1:]
        self.pred = pred
        lv = lv[1:]
        cut = np.flatnonzero(np.diff(lv)) + 1
        self.bounds = np.concatenate([[0], cut, [n - 1]]).astype(np.int64)

    def _positions(self, P: np.ndarray) -> np.ndarray:
        inside = np.all((P >= self.lo) & (P <= self.hi), axis=1)
        key = np.where(inside, (P - self.lo) @ self.strides, 0)
        if self._lut is not None:
            pos = self._lut[key]
        else:
            sk, perm = self._sorted
            j = np.minimum(np.searchsorted(sk, key), sk.size - 1)
            pos = np.where(sk[j] == key, perm[j], -1)
        return np.where(inside, pos, -1)

    # ------------------------------------------------------------------
    def indices(self, pts) -> np.ndarray:
        """Positions of integer points; ``-1`` for points outside the region."""
        return self._positions(np.asarray(pts, dtype=np.int64).reshape(-1, self.X.dim))

    def index(self, z) -> Optional[int]:
        i = int(self.indices([z])[0])
        return None if i < 0 else i

    def coords(self, pos) -> np.ndarray:
        k = self.keys[np.asarray(pos)]
        return np.stack(np.unravel_index(k, self.shape), axis=-1) + self.lo

    def covers_level(self, lvl: int) -> bool:
        return self.top is None and self.cap is not None and lvl <= self.cap

    # ------------------------------------------------------------------
    def fill_reach(self, backend=None) -> np.ndarray:
        out = np.zeros(self.n + 1, dtype=np.bool_)
        out[0] = True
        return _kernels.reach_fill(self.order, self.pred, self.bounds, out, backend)

    def fill_log(self, backend=None) -> np.ndarray:
        out = np.full(self.n + 1, -np.inf)
        out[0] = 0.0
        return _kernels.logcount_fill(self.order, self.pred, self.bounds, out, backend)

    def fill_exact(self) -> np.ndarray:
        out = np.zeros(self.n + 1, dtype=object)
        out[0] = 1
        return _kernels.exact_fill(self.order, self.pred, self.bounds, out)
