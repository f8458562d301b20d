"""Independent reference computations used by the tests.

Nothing here imports the table machinery of the package; membership, path
counts and Frobenius apexes are recomputed from their definitions.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

from frobnd.errors import ValidationError
from frobnd.vecset import validate


def random_vectorset(rng, s_max=3, m_max=4, entry=4, negative=True):
    lo = -entry if negative else 0
    while True:
        s = int(rng.integers(1, s_max + 1))
        m = int(rng.integers(max(2, s), m_max + 1)) if m_max >= max(2, s) else max(2, s)
        vecs = [tuple(int(x) for x in rng.integers(lo, entry + 1, size=s)) for _ in range(m)]
        try:
            return validate(vecs, s)
        except ValidationError:
            continue


def random_coplanar(rng, s_max=3, m_max=4, entry=4):
    """Nonnegative generators on a hyperplane ``<w, x> = L`` with positive integer ``w``."""
    while True:
        s = int(rng.integers(2, s_max + 1))
        w = rng.integers(1, 4, size=s)
        L = int(rng.integers(2, 6))
        pts = [p for p in itertools.product(range(entry + 1), repeat=s) if int(np.dot(w, p)) == L]
        if len(pts) < s:
            continue
        k = int(rng.integers(s, min(m_max, len(pts)) + 1))
        idx = rng.choice(len(pts), size=k, replace=False)
        try:
            return validate([pts[i] for i in sorted(idx)], s)
        except ValidationError:
            continue


def semigroup_points(vectors, lo, hi, normals=None):
    """All of J inside the box ``[lo, hi]`` by breadth-first closure.

    With ``normals`` (inward facet normals of the cone) the search keeps only
    points below some box point in the cone order, which is exact because a
    path to ``q`` stays in ``q - C``.  Without them a generous box margin is
    used.
    """
    lo, hi = np.asarray(lo), np.asarray(hi)
    start = tuple([0] * len(lo))
    seen = {start}
    frontier = [start]
    if normals is not None:
        N = np.asarray(normals)
        corners = np.array(list(itertools.product(*zip(lo, hi))))
        h = (corners @ N.T).max(axis=0)

        def keep(w):
            return bool(np.all(N @ np.array(w) <= h)) and bool(np.all(N @ np.array(w) >= 0))
    else:
        span = int(np.max(hi - lo)) + 1
        margin = span * max(1, max(max(abs(x) for x in v) for v in vectors))
        mlo, mhi = lo - margin, hi + margin

        def keep(w):
            return all(a <= c <= b for c, a, b in zip(w, mlo, mhi))
    while frontier:
        nxt = []
        for z in frontier:
            for v in vectors:
                w = tuple(a + b for a, b in zip(z, v))
                if w in seen or not keep(w):
                    continue
                seen.add(w)
                nxt.append(w)
        frontier = nxt
    return {z for z in seen if all(a <= c <= b for c, a, b in zip(z, lo, hi))}


def word_count(vectors, z, max_len):
    """Number of words of length <= max_len over ``vectors`` summing to ``z`` (exhaustive)."""
    z = tuple(z)
    total = int(not any(z))
    for n in range(1, max_len + 1):
        for word in itertools.product(range(len(vectors)), repeat=n):
            s = [0] * len(z)
            for j in word:
                for d in range(len(z)):
                    s[d] += vectors[j][d]
            total += tuple(s) == z
    return total


def factorial_sum(reps):
    out = 0
    for u in reps:
        t = math.factorial(sum(u))
        for x in u:
            t //= math.factorial(x)
        out += t
    return out


def representations_bruteforce(vectors, z, bound):
    """All ``u`` in ``[0, bound]^m`` with ``sum u_j X_j = z``."""
    m = len(vectors)
    V = np.array(vectors, dtype=np.int64)
    out = []
    for u in itertools.product(range(bound + 1), repeat=m):
        if tuple(np.array(u) @ V) == tuple(z):
            out.append(u)
    return out


def largest_root_bisection(f, lo, hi, tol=1e-15):
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (flo > 0):
            lo, flo = mid, f(mid)
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def plastic_number():
    return largest_root_bisection(lambda x: x ** 3 - x - 1, 1.0, 2.0)


def frobenius_bruteforce(X, inner, outer):
    """Minimal saturated apexes among points of J in ``[0, inner]^s``.

    Saturation of ``g`` is checked on every lattice point of ``g + C`` inside
    ``[-outer, outer]^s``; ``outer`` must be large enough that J is saturated
    near the box boundary.
    """
    s = X.dim
    lo, hi = [-outer] * s, [outer] * s
    J = semigroup_points(X.vectors, lo, hi, X.geometry.facet_normals)
    L = X.lattice
    N = np.array(X.geometry.facet_normals)
    pts = np.array(list(itertools.product(range(-outer, outer + 1), repeat=s)))
    in_cone = np.all(pts @ N.T >= 0, axis=1)
    cone_pts = [tuple(p) for p in pts[in_cone] if L.coords(tuple(p)) is not None]
    sat = []
    for g in J:
        if any(abs(c) > inner for c in g):
            continue
        ok = True
        for w in cone_pts:
            y = tuple(a + b for a, b in zip(g, w))
            if any(abs(c) > outer for c in y):
                continue
            if y not in J:
                ok = False
                break
        if ok:
            sat.append(g)
    mins = []
    for g in sat:
        if not any(h != g and np.all(N @ (np.array(g) - np.array(h)) >= 0) for h in sat):
            mins.append(g)
    return sorted(mins)


@lru_cache(maxsize=None)
def binom(n, k):
    return math.comb(n, k)
