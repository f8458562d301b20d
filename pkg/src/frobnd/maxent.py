"""Maximum entropy under the linear constraint ``sum_j p_j X_j = beta``.

The maximizer is the Gibbs distribution ``p_j = exp<t, X_j> / Z(t)`` whose
mean ``A(t) = grad log Z(t)`` equals ``beta``.  The parameter is found by
damped Newton on the convex dual ``phi(t) = log Z(t) - <t, beta>``, whose
gradient is ``A(t) - beta`` and whose Hessian is ``M (diag p - p p^T) M^T``.
Steps are accepted on sufficient decrease of ``phi`` or, once ``phi`` is
flat to round-off, of ``|A(t) - beta|``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linprog
from scipy.special import logsumexp

from .errors import BetaNotInterior, GaugeUnavailable, NoConvergence
from .vecset import VectorSet

INTERIOR_MARGIN = 1e-9
MAX_ITER = 200
GAUGES = ("standard", "last-coordinate-zero")


@dataclass(frozen=True)
class PartitionEvaluation:
    logZ: float
    gradient: np.ndarray
    hessian: np.ndarray
    p: np.ndarray


@dataclass(frozen=True)
class GibbsSolution:
    beta: np.ndarray
    t: np.ndarray
    p_star: np.ndarray
    logZ: float
    entropy: float
    gauge: Optional[str]
    iterations: int
    residual: float

    @property
    def Z(self) -> float:
        return float(np.exp(self.logZ))


def _generators(X) -> np.ndarray:
    if isinstance(X, VectorSet):
        return X.matrix.astype(float)
    return np.atleast_2d(np.asarray(X, dtype=float))


def partition_eval(X, t) -> PartitionEvaluation:
    """``log Z(t)``, ``A(t) = grad Z / Z`` and its Jacobian at ``t``."""
    G = _generators(X)
    e = G @ np.asarray(t, dtype=float)
    logZ = float(logsumexp(e))
    p = np.exp(e - logZ)
    grad = G.T @ p
    Gc = G - grad
    hess = (Gc.T * p) @ Gc
    return PartitionEvaluation(logZ, grad, hess, p)


def _eta_float(X: VectorSet) -> Optional[np.ndarray]:
    eta = X.coplanarity.eta
    return None if eta is None else np.array([float(v) for v in eta])


def interior_margin(X, beta) -> float:
    """Largest ``tau`` such that ``beta = sum p_j X_j`` with all ``p_j >= tau``.

    Returns ``-inf`` when ``beta`` is outside the convex hull.
    """
    G = _generators(X)
    m = G.shape[0]
    # variables (p_1..p_m, tau); maximize tau
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_eq = np.vstack([np.hstack([G.T, np.zeros((G.shape[1], 1))]), np.hstack([np.ones(m), [0.0]])])
    b_eq = np.concatenate([np.asarray(beta, dtype=float), [1.0]])
    A_ub = np.hstack([-np.eye(m), np.ones((m, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * m + [(None, None)], method="highs")
    if res.status != 0:
        return -np.inf
    return float(-res.fun)


def _subspace(G: np.ndarray) -> np.ndarray:
    # orthonormal basis of span{X_j - X_1}
    D = (G[1:] - G[0]).T
    U, S, _ = np.linalg.svd(D, full_matrices=False)
    r = int(np.sum(S > 1e-10 * max(1.0, S.max())))
    return U[:, :r]


def _apply_gauge(t, logZ, eta, gauge):
    if gauge == "standard":
        return t - logZ * eta
    if gauge == "last-coordinate-zero":
        if eta[-1] == 0:
            raise GaugeUnavailable("the last coordinate of eta is zero")
        return t - (t[-1] / eta[-1]) * eta
    raise ValueError(f"unknown gauge {gauge!r}; expected one of {GAUGES}")


def solve_gibbs(X: VectorSet, beta, gauge: str = "standard", t0=None,
                max_iter: int = MAX_ITER, tol: float = 1e-10) -> GibbsSolution:
    """Gibbs parameter ``t`` with ``A(t) = beta`` and the maximum entropy.

    ``beta`` must be interior to the convex hull of the generators.  For
    coplanar ``X`` the solutions form a line ``t + c eta``; ``gauge`` picks
    either the point with ``Z(t) = 1`` (``"standard"``) or the one with
    ``t_s = 0``.  The gauge is ignored when ``X`` is not coplanar.
    """
    G = _generators(X)
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (G.shape[1],):
        raise ValueError(f"beta must have length {G.shape[1]}")
    eta = _eta_float(X)
    if eta is not None and gauge not in GAUGES:
        raise ValueError(f"unknown gauge {gauge!r}; expected one of {GAUGES}")
    if interior_margin(G, beta) < INTERIOR_MARGIN:
        raise BetaNotInterior(f"beta={beta.tolist()} is not interior to the convex hull")

    Q = _subspace(G) if eta is not None else np.eye(G.shape[1])
    y = np.zeros(Q.shape[1]) if t0 is None else Q.T @ np.asarray(t0, dtype=float)
    target = tol * (1.0 + np.linalg.norm(beta))

    def phi(y):
        ev = partition_eval(G, Q @ y)
        return ev.logZ - float(beta @ (Q @ y)), ev

    f, ev = phi(y)
    it = 0
    while True:
        r = ev.gradient - beta
        res = float(np.linalg.norm(r))
        if res <= target:
            break
        if it >= max_iter:
            raise NoConvergence(f"Newton did not converge in {max_iter} iterations", residual=res)
        g = Q.T @ r
        H = Q.T @ ev.hessian @ Q
        try:
            newton = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            newton = -g
        if float(g @ newton) >= 0:
            newton = -g
        # a nearly singular Hessian far from the optimum can yield a useless
        # Newton direction; steepest descent is the fallback
        for step in (newton, -g):
            slope = float(g @ step)
            a = 1.0
            while a >= 1e-12:
                f_new, ev_new = phi(y + a * step)
                if f_new <= f + 1e-4 * a * slope:
                    break
                # near the optimum phi stalls at round-off; fall back to the residual
                flat = -a * slope <= 1e-12 * (1.0 + abs(f))
                if flat and np.linalg.norm(ev_new.gradient - beta) <= (1.0 - 1e-4 * a) * res:
                    break
                a *= 0.5
            if a >= 1e-12:
                break
        else:
            raise NoConvergence("line search found no decrease", residual=res)
        y = y + a * step
        f, ev = f_new, ev_new
        it += 1

    t = Q @ y
    used = None
    if eta is not None:
        used = gauge
        t = _apply_gauge(t, ev.logZ, eta, gauge)
        ev = partition_eval(G, t)
    entropy = ev.logZ - float(t @ beta)
    return GibbsSolution(beta, t, ev.p, ev.logZ, entropy, used, it, float(np.linalg.norm(ev.gradient - beta)))


def entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())


def max_entropy_constrained(X: VectorSet, beta, gauge: str = "standard") -> float:
    """``max h(p)`` subject to ``sum p_j X_j = beta``."""
    return solve_gibbs(X, beta, gauge=gauge).entropy
