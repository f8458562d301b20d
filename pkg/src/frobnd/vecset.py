"""Defining data of the semigroup and its exact geometry.

A :class:`VectorSet` holds the generators ``X_1..X_m`` of
``J = X_1 N + ... + X_m N``.  Everything in this module is computed in exact
rational arithmetic: the half-space certificate, the Hermite basis of the
lattice ``L = X_1 Z + ... + X_m Z``, the facets and extreme rays of the cone
``C_X`` and the coplanarity normal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

import numpy as np

from . import _rational as rq
from .errors import NoHalfSpace, NotFullRank, ValidationError, ZeroVector

IntVec = tuple[int, ...]


@dataclass(frozen=True)
class VectorSet:
    """Generators of the semigroup, kept as an ordered multiset.

    Use :func:`validate` to build one; the constructor does not check
    anything.
    """

    dim: int
    vectors: tuple[IntVec, ...]
    alpha: Optional[tuple[Fraction, ...]] = field(default=None, compare=False)

    @property
    def m(self) -> int:
        return len(self.vectors)

    @cached_property
    def matrix(self) -> np.ndarray:
        """``m x s`` int64 array of the generators."""
        return np.array(self.vectors, dtype=np.int64).reshape(self.m, self.dim)

    @cached_property
    def distinct(self) -> tuple[IntVec, ...]:
        seen = []
        for v in self.vectors:
            if v not in seen:
                seen.append(v)
        return tuple(seen)

    @cached_property
    def level_vector(self) -> IntVec:
        """Primitive integer multiple of ``alpha``; every generator has level >= 1."""
        return rq.primitive(self.alpha)

    @cached_property
    def levels(self) -> tuple[int, ...]:
        a = self.level_vector
        return tuple(rq.dot(a, v) for v in self.vectors)

    def level(self, z) -> int:
        return rq.dot(self.level_vector, z)

    @cached_property
    def delta(self) -> float:
        """``min_j <X_j, alpha> / |alpha|``."""
        a = [float(v) for v in self.alpha]
        na = float(np.linalg.norm(a))
        return min(float(rq.dot(self.alpha, v)) for v in self.vectors) / na

    @cached_property
    def lattice(self) -> "LatticeBasis":
        return lattice_basis(self)

    @cached_property
    def geometry(self) -> "ConeGeometry":
        return cone_geometry(self)

    @cached_property
    def coplanarity(self) -> "CoplanarityCertificate":
        return coplanar_normal(self)

    def as_dict(self) -> dict:
        return {"dim": self.dim, "vectors": [list(v) for v in self.vectors]}


@dataclass(frozen=True)
class LatticeBasis:
    """Lower-triangular Hermite basis of the lattice generated by a VectorSet.

    ``x_coords[i]`` expresses ``basis[i]`` as an integer combination of the
    generators, so both inclusions between the two generating systems are
    explicit.
    """

    basis: tuple[IntVec, ...]
    determinant: int
    x_coords: tuple[IntVec, ...] = field(compare=False, default=())

    def coords(self, z) -> Optional[IntVec]:
        """Integer coordinates of ``z`` in the basis, or None if ``z`` is not in the lattice."""
        s = len(self.basis)
        r = [int(v) for v in z]
        out = [0] * s
        for c in range(s - 1, -1, -1):
            piv = self.basis[c][c]
            if r[c] % piv:
                return None
            q = r[c] // piv
            out[c] = q
            if q:
                row = self.basis[c]
                for k in range(c + 1):
                    r[k] -= q * row[k]
        return tuple(out)


@dataclass(frozen=True)
class ConeGeometry:
    """Faces of the pointed cone generated by a VectorSet.

    ``facet_normals`` are primitive integer inward normals, so that
    ``x in C_X`` iff ``<n, x> >= 0`` for every normal.  ``faces2`` lists each
    two-dimensional face by the indices of the generators lying on it.
    """

    extreme_rays: tuple[IntVec, ...]
    facet_normals: tuple[IntVec, ...]
    faces2: tuple[tuple[int, ...], ...]

    @cached_property
    def normals_array(self) -> np.ndarray:
        return np.array(self.facet_normals, dtype=np.int64).reshape(len(self.facet_normals), -1)

    def contains(self, x, tol: float = 0.0) -> bool:
        if all(isinstance(v, (int, Fraction, np.integer)) for v in x):
            return all(rq.dot(n, x) >= 0 for n in self.facet_normals)
        vals = self.normals_array @ np.asarray(x, dtype=float)
        norms = np.linalg.norm(self.normals_array, axis=1)
        return bool(np.all(vals >= -tol * norms))

    def contains_many(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized membership for an ``(n, s)`` integer array."""
        return np.all(pts @ self.normals_array.T >= 0, axis=1)


@dataclass(frozen=True)
class CoplanarityCertificate:
    eta: Optional[tuple[Fraction, ...]]

    @property
    def is_coplanar(self) -> bool:
        return self.eta is not None


def as_point(z) -> IntVec:
    """Integer tuple from a vector or, in dimension one, a bare integer."""
    if isinstance(z, (int, np.integer)):
        return (int(z),)
    return tuple(int(v) for v in z)


def _as_int_vector(v, dim: int, index: int) -> IntVec:
    vals = list(v) if not isinstance(v, (int, np.integer)) else [v]
    if len(vals) != dim:
        raise ValidationError(f"vector {index} has length {len(vals)}, expected {dim}")
    out = []
    for x in vals:
        if isinstance(x, (bool, np.bool_)):
            raise ValidationError(f"vector {index} has a non-integer entry {x!r}")
        if isinstance(x, (int, np.integer)):
            out.append(int(x))
        elif isinstance(x, (float, Fraction)) and x == int(x):
            out.append(int(x))
        else:
            raise ValidationError(f"vector {index} has a non-integer entry {x!r}")
    return tuple(out)


def half_space_certificate(vectors: Sequence[IntVec], dim: int) -> Optional[tuple[Fraction, ...]]:
    """Smallest-l1 rational ``alpha`` with ``<X_j, alpha> >= 1`` for all j, or None."""
    # alpha = alpha_plus - alpha_minus, both nonnegative
    c = [-1] * (2 * dim)
    A_ub = [[-x for x in v] + [x for x in v] for v in vectors]
    b_ub = [-1] * len(vectors)
    res = rq.linprog_exact(c, A_ub, b_ub)
    if res.status != "optimal":
        return None
    return tuple(res.x[i] - res.x[dim + i] for i in range(dim))


def validate(vectors, dim: int) -> VectorSet:
    """Check the defining data and attach a half-space certificate.

    Raises ``ZeroVector``, ``NoHalfSpace`` or ``NotFullRank``; other malformed
    input raises ``ValidationError``.
    """
    if dim < 1:
        raise ValidationError("dimension must be positive")
    vecs = tuple(_as_int_vector(v, dim, i) for i, v in enumerate(vectors))
    if len(vecs) < 2:
        raise ValidationError("at least two vectors are required")
    for i, v in enumerate(vecs):
        if not any(v):
            raise ZeroVector(f"vector {i} is zero")
    alpha = half_space_certificate(vecs, dim)
    if alpha is None:
        raise NoHalfSpace("the vectors do not lie in an open half-space")
    if rq.rank(vecs) < dim:
        raise NotFullRank("the vectors do not span the ambient space")
    return VectorSet(dim, vecs, alpha)


# --------------------------------------------------------------------------
# lattice


def _hermite(rows: list[list[int]], dim: int, m: int):
    # each working row carries its coefficients over the generators
    work = [(list(r), [int(i == k) for k in range(m)]) for i, r in enumerate(rows)]
    basis: list = [None] * dim
    for c in range(dim - 1, -1, -1):
        while True:
            nz = [w for w in work if w[0][c] != 0]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda w: abs(w[0][c]))
            for w in nz:
                if w is piv:
                    continue
                q = w[0][c] // piv[0][c]
                for k in range(dim):
                    w[0][k] -= q * piv[0][k]
                for k in range(m):
                    w[1][k] -= q * piv[1][k]
        nz = [w for w in work if w[0][c] != 0]
        if not nz:
            raise NotFullRank("lattice is not of full rank")
        piv = nz[0]
        work.remove(piv)
        if piv[0][c] < 0:
            piv = ([-v for v in piv[0]], [-v for v in piv[1]])
        basis[c] = piv
    for i in range(dim):
        row, co = basis[i]
        for k in range(i - 1, -1, -1):
            brow, bco = basis[k]
            q = row[k] // brow[k]
            if q:
                row = [a - q * b for a, b in zip(row, brow)]
                co = [a - q * b for a, b in zip(co, bco)]
        basis[i] = (row, co)
    return basis


def lattice_basis(X: VectorSet) -> LatticeBasis:
    """Lower-triangular Hermite normal form of the lattice spanned by ``X``."""
    basis = _hermite([list(v) for v in X.vectors], X.dim, X.m)
    rows = tuple(tuple(b[0]) for b in basis)
    det = 1
    for i, r in enumerate(rows):
        det *= r[i]
    return LatticeBasis(rows, det, tuple(tuple(b[1]) for b in basis))


def in_lattice(L: LatticeBasis, z) -> bool:
    return L.coords(z) is not None


# --------------------------------------------------------------------------
# cone


def _primitive_int(v) -> IntVec:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v)


def _cross2(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def cone_geometry(X: VectorSet) -> ConeGeometry:
    """Extreme rays, inward facet normals and 2-faces of ``C_X``.

    Dimensions one and two use direct formulas; higher dimensions enumerate
    candidate supporting hyperplanes through ``s - 1`` independent generator
    directions, which is exact and adequate for small ``s``.
    """
    s = X.dim
    dirs = []
    for v in X.vectors:
        p = _primitive_int(v)
        if p not in dirs:
            dirs.append(p)
    if s == 1:
        ray = dirs[0]
        return ConeGeometry((ray,), (ray,), ())
    if s == 2:
        first = next(d for d in dirs if all(_cross2(d, e) >= 0 for e in dirs))
        last = next(d for d in dirs if all(_cross2(d, e) <= 0 for e in dirs))
        normals = [_primitive_int((-first[1], first[0])), _primitive_int((last[1], -last[0]))]
        rays = sorted({first, last})
        return ConeGeometry(tuple(rays), tuple(sorted(set(normals))), (tuple(range(X.m)),))

    normals = set()
    for sub in combinations(dirs, s - 1):
        ns = rq.nullspace([list(v) for v in sub])
        if len(ns) != 1:
            continue
        n = rq.primitive(ns[0])
        vals = [rq.dot(n, d) for d in dirs]
        if all(v >= 0 for v in vals):
            normals.add(n)
        elif all(v <= 0 for v in vals):
            normals.add(tuple(-x for x in n))
    normals = sorted(normals)
    rays = []
    for d in dirs:
        tight = [n for n in normals if rq.dot(n, d) == 0]
        if tight and rq.rank(tight) == s - 1:
            rays.append(d)
    rays = sorted(rays)
    faces = set()
    for r1, r2 in combinations(rays, 2):
        tight = [n for n in normals if rq.dot(n, r1) == 0 and rq.dot(n, r2) == 0]
        if not tight:
            continue
        on = tuple(j for j, v in enumerate(X.vectors) if all(rq.dot(n, v) == 0 for n in tight))
        if rq.rank([X.vectors[j] for j in on]) == 2:
            faces.add(on)
    return ConeGeometry(tuple(rays), tuple(normals), tuple(sorted(faces)))


def coplanar_normal(X: VectorSet) -> CoplanarityCertificate:
    """Exact ``eta`` with ``<eta, X_j> = 1`` for all j, when it exists."""
    eta = rq.solve([list(v) for v in X.vectors], [1] * X.m)
    return CoplanarityCertificate(None if eta is None else tuple(eta))
