"""Iterated generator sets and the rigidity test for coplanar growth functions.

Two coplanar sets ``X`` (on ``<eta, x> = 1``) and ``Y`` (on ``<eta', x> = 1``)
share a growth function exactly when their cones agree, ``eta = (q/p) eta'``
and the iterates ``X^(q)`` and ``Y^(p)`` coincide as multisets.  The decision
is made in exact arithmetic; closed-form growth values serve only as a
cross-check and as refuting witnesses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Optional

import numpy as np
from scipy.stats import qmc

from . import _rational as rq
from .errors import InconclusiveSampling, IterationTooLarge, NotCoplanar, SingularTransform
from .growth import gamma_closed
from .vecset import IntVec, VectorSet, validate

ITERATION_CAP = 10 ** 6
SAMPLING_BUDGET = 256
CROSS_CHECK_DIRECTIONS = 16


@dataclass(frozen=True)
class IteratedSet:
    """All sums ``X_{i_1} + ... + X_{i_p}``, one per word, in word order.

    Word ``k`` is the base-``m`` expansion of ``k`` (first letter most
    significant), matching :func:`itertools.product`.
    """

    base: VectorSet
    p: int
    vectors: np.ndarray = field(repr=False, compare=False)

    def __len__(self):
        return self.vectors.shape[0]

    @cached_property
    def multiset(self) -> tuple[IntVec, ...]:
        return tuple(sorted(tuple(int(x) for x in v) for v in self.vectors))

    def word(self, k: int) -> tuple[int, ...]:
        m = self.base.m
        out = []
        for _ in range(self.p):
            k, r = divmod(k, m)
            out.append(r)
        return tuple(reversed(out))

    def as_vectorset(self) -> VectorSet:
        alpha = tuple(a / self.p for a in self.base.alpha)
        return VectorSet(self.base.dim, tuple(tuple(int(x) for x in v) for v in self.vectors), alpha)


def iterate(X: VectorSet, p: int, cap: int = ITERATION_CAP) -> IteratedSet:
    if p < 1:
        raise ValueError("p must be a positive integer")
    if X.m ** p > cap:
        raise IterationTooLarge(f"{X.m}^{p} words exceed the cap {cap}")
    V = np.zeros((1, X.dim), dtype=np.int64)
    for _ in range(p):
        V = (V[:, None, :] + X.matrix[None, :, :]).reshape(-1, X.dim)
    return IteratedSet(X, p, V)


def permutation_equal(A, B) -> bool:
    """Equality as multisets."""
    a = sorted(tuple(int(x) for x in v) for v in A)
    b = sorted(tuple(int(x) for x in v) for v in B)
    return a == b


def pairing(A: np.ndarray, B: np.ndarray) -> Optional[list[tuple[int, int]]]:
    """Index pairs ``(i, j)`` with ``A[i] == B[j]`` forming a bijection, or None."""
    if A.shape != B.shape:
        return None
    ia = np.lexsort(A.T[::-1])
    ib = np.lexsort(B.T[::-1])
    if not np.array_equal(A[ia], B[ib]):
        return None
    pairs = sorted(zip(ia.tolist(), ib.tolist()))
    return [(int(i), int(j)) for i, j in pairs]


# --------------------------------------------------------------------------
# linear changes of coordinates


def transform_set(X: VectorSet, T) -> VectorSet:
    """The set ``T X`` for an integer matrix ``T`` invertible over Q."""
    T = [[int(v) for v in row] for row in T]
    if len(T) != X.dim or any(len(r) != X.dim for r in T):
        raise ValueError(f"T must be {X.dim} x {X.dim}")
    if rq.det(T) == 0:
        raise SingularTransform("T is singular")
    vecs = [tuple(sum(T[i][k] * v[k] for k in range(X.dim)) for i in range(X.dim)) for v in X.vectors]
    return validate(vecs, X.dim)


def transform_eta(eta, T) -> tuple[Fraction, ...]:
    """``(T^*)^{-1} eta``, the normal of ``T X`` when ``X`` lies on ``<eta, x> = 1``."""
    Tt = [list(col) for col in zip(*T)]
    inv = rq.inverse(Tt)
    if inv is None:
        raise SingularTransform("T is singular")
    return tuple(sum(Fraction(inv[i][k]) * Fraction(eta[k]) for k in range(len(eta))) for i in range(len(eta)))


def shear_matrix(a) -> list[list[int]]:
    """Identity with last column ``(-a_1, ..., -a_{s-1}, 1)``; requires ``a_s = 1``."""
    a = [int(v) for v in a]
    if a[-1] != 1:
        raise ValueError("the last entry of a must be 1")
    s = len(a)
    T = [[int(i == j) for j in range(s)] for i in range(s)]
    for i in range(s - 1):
        T[i][s - 1] = -a[i]
    return T


def normalizing_shear(*etas) -> list[list[int]]:
    """A shear after which every given normal has nonzero last coordinate.

    Searches ``a = (a_1, ..., a_{s-1}, 1)`` with small entries such that
    ``<a, eta> != 0`` for each ``eta``.
    """
    s = len(etas[0])
    r = 0
    while True:
        for head in np.ndindex(*([2 * r + 1] * (s - 1))):
            a = [h - r for h in head] + [1]
            if all(rq.dot(a, e) != 0 for e in etas):
                return shear_matrix(a)
        r += 1


# --------------------------------------------------------------------------
# decision


@dataclass(frozen=True)
class RigidityVerdict:
    equivalent: bool
    c: Optional[Fraction]
    witness: dict[str, Any]
    notes: dict[str, Any]


def interior_samples(X: VectorSet, n: int, skip: int = 1) -> np.ndarray:
    """Quasi-random unit directions in the interior of the cone of ``X``."""
    rays = np.array(X.geometry.extreme_rays, dtype=float)
    rays /= np.linalg.norm(rays, axis=1)[:, None]
    if len(rays) == 1:
        return np.repeat(rays, n, axis=0)
    H = qmc.Halton(d=len(rays), scramble=False).random(n + skip)[skip:]
    W = 0.05 + H
    V = W @ rays
    return V / np.linalg.norm(V, axis=1)[:, None]


def _parallel_ratio(eta, eta2) -> Optional[Fraction]:
    k = next(i for i, v in enumerate(eta2) if v != 0)
    c = Fraction(eta[k]) / Fraction(eta2[k])
    if c <= 0 or any(Fraction(a) != c * Fraction(b) for a, b in zip(eta, eta2)):
        return None
    return c


def _search_gap(X, Y, tolerance, budget):
    for th in interior_samples(X, budget):
        gx, gy = gamma_closed(X, None, th), gamma_closed(Y, None, th)
        if abs(gx - gy) > tolerance:
            return {"kind": "direction", "theta": [float(v) for v in th],
                    "gamma_x": gx, "gamma_y": gy, "gap": abs(gx - gy)}
    return None


def same_growth(X: VectorSet, Y: VectorSet, tolerance: float = 1e-8,
                iteration_cap: int = ITERATION_CAP, budget: int = SAMPLING_BUDGET) -> RigidityVerdict:
    """Decide whether two coplanar sets define the same directional growth function."""
    for name, Z in (("X", X), ("Y", Y)):
        if not Z.coplanarity.is_coplanar:
            raise NotCoplanar(f"{name} is not coplanar")
    notes: dict[str, Any] = {"tolerance": tolerance}
    if X.dim != Y.dim:
        return RigidityVerdict(False, None, {"kind": "dimension-mismatch", "dims": [X.dim, Y.dim]}, notes)

    rays_x, rays_y = X.geometry.extreme_rays, Y.geometry.extreme_rays
    notes["cones_equal"] = rays_x == rays_y
    if rays_x != rays_y:
        w = {"kind": "cone-mismatch", "rays_x": [list(r) for r in rays_x], "rays_y": [list(r) for r in rays_y]}
        return RigidityVerdict(False, None, w, notes)

    eta, eta2 = X.coplanarity.eta, Y.coplanarity.eta
    notes["eta_x"] = [str(v) for v in eta]
    notes["eta_y"] = [str(v) for v in eta2]
    c = _parallel_ratio(eta, eta2)
    notes["eta_parallel"] = c is not None
    if c is None:
        w = _search_gap(X, Y, tolerance, budget)
        if w is None:
            raise InconclusiveSampling(f"no refuting direction among {budget} samples")
        return RigidityVerdict(False, None, w, notes)

    q, p = c.numerator, c.denominator
    IX, IY = iterate(X, q, iteration_cap), iterate(Y, p, iteration_cap)
    pairs = pairing(IX.vectors, IY.vectors)
    if pairs is None:
        w = _search_gap(X, Y, tolerance, budget)
        if w is None:
            w = {"kind": "multiset-mismatch", "q": q, "p": p,
                 "sizes": [len(IX), len(IY)], "difference": _first_difference(IX.multiset, IY.multiset)}
        return RigidityVerdict(False, c, w, notes)

    gaps = [abs(gamma_closed(X, None, th) - gamma_closed(Y, None, th))
            for th in interior_samples(X, CROSS_CHECK_DIRECTIONS)]
    notes["cross_check_max_gap"] = max(gaps)
    notes["cross_check_passed"] = max(gaps) <= tolerance
    w = {"kind": "pairing", "q": q, "p": p, "pairs": pairs}
    return RigidityVerdict(True, c, w, notes)


def _first_difference(A, B):
    i = 0
    while i < len(A) and i < len(B) and A[i] == B[i]:
        i += 1
    return {"index": i, "x": list(A[i]) if i < len(A) else None, "y": list(B[i]) if i < len(B) else None}
