"""Exact linear algebra over the rationals.

Everything here works on lists of ``Fraction`` (or ``int``) and never
touches floating point.  Matrices are lists of rows.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Matrix = list[list[Fraction]]


def to_fractions(rows) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    A = to_fractions(rows)
    if not A:
        return A, []
    n_rows, n_cols = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(n_rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def solve(A, b) -> Optional[list[Fraction]]:
    """One solution of ``A x = b`` (free variables set to zero), or None."""
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug)
    n = len(A[0])
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = R[i][n]
    return x


def nullspace(rows, n_cols: Optional[int] = None) -> Matrix:
    """Basis of the right kernel of ``rows``."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    R, piv = rref(rows)
    n = len(R[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -R[i][f]
        basis.append(v)
    return basis


def primitive(vec: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    fr = [Fraction(v) for v in vec]
    den = 1
    for v in fr:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in fr]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def inverse(M) -> Optional[Matrix]:
    n = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        return None
    return [row[n:] for row in R]


def det(M) -> Fraction:
    A = to_fractions(M)
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return d


# --------------------------------------------------------------------------
# exact simplex


class LPResult:
    __slots__ = ("status", "x", "value")

    def __init__(self, status, x=None, value=None):
        self.status = status
        self.x = x
        self.value = value

    def __repr__(self):
        return f"LPResult({self.status!r}, value={self.value})"


def _pivot(T, basis, r, c):
    inv = 1 / T[r][c]
    T[r] = [v * inv for v in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]
    basis[r] = c


def _run_simplex(T, basis, n_vars, allowed):
    # T[-1] is the objective row (z - c.x = 0); constraint rows come first.
    # Bland's rule on the allowed columns guarantees termination.
    rows = len(T) - 1
    while True:
        obj = T[-1]
        enter = next((j for j in range(n_vars) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(rows):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], enter)


def linprog_exact(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> LPResult:
    """Maximize ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    Two-phase dense-tableau simplex with Bland's rule in exact arithmetic.
    Returns an ``LPResult`` with status ``optimal``, ``infeasible`` or
    ``unbounded``.
    """
    n = len(c)
    A_ub = to_fractions(A_ub)
    A_eq = to_fractions(A_eq)
    b_ub = [Fraction(v) for v in b_ub]
    b_eq = [Fraction(v) for v in b_eq]
    n_slack = len(A_ub)
    rows = []
    rhs = []
    for k, (row, b) in enumerate(zip(A_ub, b_ub)):
        slack = [Fraction(0)] * n_slack
        slack[k] = Fraction(1)
        rows.append(list(row) + slack)
        rhs.append(b)
    for row, b in zip(A_eq, b_eq):
        rows.append(list(row) + [Fraction(0)] * n_slack)
        rhs.append(b)
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    n_rows = len(rows)
    n_struct = n + n_slack
    n_total = n_struct + n_rows
    T = []
    for i in range(n_rows):
        art = [Fraction(0)] * n_rows
        art[i] = Fraction(1)
        T.append(rows[i] + art + [rhs[i]])
    basis = [n_struct + i for i in range(n_rows)]
    # phase 1: maximize -sum(artificials)
    obj = [Fraction(0)] * n_struct + [Fraction(1)] * n_rows + [Fraction(0)]
    for i in range(n_rows):
        obj = [a - b for a, b in zip(obj, T[i])]
    T.append(obj)
    _run_simplex(T, basis, n_total, [True] * n_total)
    if T[-1][-1] != 0:
        return LPResult("infeasible")
    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(T) - 1:
        if basis[i] >= n_struct:
            c_in = next((j for j in range(n_struct) if T[i][j] != 0), None)
            if c_in is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, c_in)
        i += 1
    T = [row[:n_struct] + [row[-1]] for row in T[:-1]]
    cost = [Fraction(v) for v in c] + [Fraction(0)] * n_slack
    obj = [-v for v in cost] + [Fraction(0)]
    for i, b in enumerate(basis):
        if obj[b] != 0:
            f = obj[b]
            obj = [a - f * r for a, r in zip(obj, T[i])]
    T.append(obj)
    status = _run_simplex(T, basis, n_struct, [True] * n_struct)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n_struct
    for i, b in enumerate(basis):
        x[b] = T[i][-1]
    return LPResult("optimal", x[:n], T[-1][-1])
