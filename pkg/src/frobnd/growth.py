"""Directional growth ``gamma(theta) = lim log m(k theta) / k``.

Empirical estimates read ``log m`` off a float log-domain table at the
semigroup point nearest to ``k theta``.  For coplanar generators the closed
form ``<theta, eta> * h(p*)`` is available through :mod:`frobnd.maxent`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import HorizonTooSmall, NotCoplanar
from .maxent import partition_eval, solve_gibbs
from .multiplicity import MultiplicityTable
from .semigroup import density_radius
from .vecset import VectorSet

MIN_HORIZON = 8
TIE_RTOL = 1e-9


def slack(k_max: int) -> float:
    """Tolerance between empirical and closed-form values at horizon ``k_max``."""
    return 8.0 * math.log(k_max) / k_max + 0.02


@dataclass(frozen=True)
class GrowthEstimate:
    theta: tuple[float, ...]
    gamma_empirical: Optional[float] = None
    gamma_closed: Optional[float] = None
    k_max: int = 0
    samples: tuple[tuple[int, float], ...] = ()
    residual: Optional[float] = None
    points: tuple[tuple[int, ...], ...] = field(default=(), repr=False)


def _unit_direction(X: VectorSet, theta) -> np.ndarray:
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    if th.shape != (X.dim,):
        raise ValueError(f"theta must have length {X.dim}")
    if abs(np.linalg.norm(th) - 1.0) > 1e-9:
        raise ValueError("theta must be a unit vector")
    if not X.geometry.contains(th, tol=1e-12):
        raise ValueError(f"theta={th.tolist()} is not in the cone")
    return th


def _apex_for(X: VectorSet, theta: np.ndarray, k_max: int, radius: float) -> np.ndarray:
    """An apex ``T`` such that ``T - C`` holds every ball ``B(k theta, radius)``, ``k <= k_max``."""
    rays = np.array(X.geometry.extreme_rays, dtype=float)
    w = (rays / np.linalg.norm(rays, axis=1)[:, None]).sum(axis=0)
    w /= np.linalg.norm(w)
    N = X.geometry.normals_array.astype(float)
    N /= np.linalg.norm(N, axis=1)[:, None]
    c = 1.0 / float((N @ w).min())
    return k_max * theta + (radius + 1.0) * c * w


def growth_table(X: VectorSet, thetas, k_max: int) -> MultiplicityTable:
    """Log-domain table covering the nearest-point searches along ``thetas``."""
    R0 = density_radius(X)[0]
    thetas = [np.atleast_1d(np.asarray(t, dtype=float)) for t in thetas]
    if len(thetas) == 1:
        return MultiplicityTable(X, top=_apex_for(X, thetas[0], k_max, R0), exact=False)
    a = np.array(X.level_vector, dtype=float)
    cap = max(float(a @ t) for t in thetas) * k_max + (R0 + 1.0) * float(np.linalg.norm(a))
    return MultiplicityTable(X, cap=int(math.ceil(cap)), exact=False)


def _offsets(dim: int, r: int) -> np.ndarray:
    rng = np.arange(-r, r + 2)
    return np.stack(np.meshgrid(*([rng] * dim), indexing="ij"), axis=-1).reshape(-1, dim)


def nearest_log_multiplicities(X: VectorSet, table: MultiplicityTable, targets: np.ndarray):
    """For each row of ``targets``: the nearest point of J and its ``log m``.

    Among equidistant points (relative tolerance 1e-9 on squared distance) the
    smallest multiplicity wins, then the lexicographically smallest point.
    The search radius grows from 1 up to the zonotope diameter.
    """
    R0 = density_radius(X)[0]
    n, s = targets.shape
    out_pts = np.zeros((n, s), dtype=np.int64)
    out_log = np.full(n, np.nan)
    todo = np.arange(n)
    r = 1
    while todo.size:
        offs = _offsets(s, r)
        base = np.floor(targets[todo]).astype(np.int64)
        P = base[:, None, :] + offs[None, :, :]
        d2 = ((P - targets[todo][:, None, :]) ** 2).sum(axis=2)
        flatP = P.reshape(-1, s)
        near = flatP[d2.ravel() <= r * r]
        table.ensure_points(near)
        idx = table.region.indices(flatP)
        if table.mode == "apex":
            inside_cone = X.geometry.contains_many(flatP)
            if np.any(inside_cone & (idx < 0) & (d2.ravel() <= r * r)):
                raise ValueError("the multiplicity table does not cover the search ball")
        logs = table.log_values(idx).reshape(d2.shape)
        ok = np.isfinite(logs) & (d2 <= r * r)
        found = ok.any(axis=1)
        for row in np.flatnonzero(found):
            cand = np.flatnonzero(ok[row])
            dd = d2[row, cand]
            best = dd.min()
            tie = cand[dd <= best + TIE_RTOL * max(1.0, best)]
            pts = P[row, tie]
            lg = logs[row, tie]
            lo = lg.min()
            keep = np.flatnonzero(lg <= lo + 1e-12 * max(1.0, abs(lo)))
            order = np.lexsort(pts[keep].T[::-1])
            pick = keep[order[0]]
            out_pts[todo[row]] = pts[pick]
            out_log[todo[row]] = lg[pick]
        todo = todo[~found]
        if r > R0 + 1:
            raise AssertionError("no semigroup point within the density radius")
        r = min(2 * r, int(math.ceil(R0)) + 1) if r <= R0 else r + 1
    return out_pts, out_log


def _top_half_slope(ks: np.ndarray, vals: np.ndarray) -> tuple[float, float]:
    lo = len(ks) // 2
    k, v = ks[lo:].astype(float), vals[lo:]
    A = np.vstack([k, np.ones_like(k)]).T
    coef, *_ = np.linalg.lstsq(A, v, rcond=None)
    resid = v - A @ coef
    return float(coef[0]), float(np.sqrt(np.mean(resid ** 2)))


def gamma_empirical(X: VectorSet, table: Optional[MultiplicityTable], theta, k_max: int = 200) -> GrowthEstimate:
    """Least-squares slope of ``log m(z_k)`` over the upper half of ``k = 1..k_max``."""
    if k_max < MIN_HORIZON:
        raise HorizonTooSmall(f"k_max={k_max} is below the minimum horizon {MIN_HORIZON}")
    th = _unit_direction(X, theta)
    if table is None:
        table = growth_table(X, [th], k_max)
    ks = np.arange(1, k_max + 1)
    pts, logs = nearest_log_multiplicities(X, table, ks[:, None] * th[None, :])
    slope, resid = _top_half_slope(ks, logs)
    samples = tuple((int(k), float(v)) for k, v in zip(ks, logs))
    return GrowthEstimate(tuple(th.tolist()), gamma_empirical=slope, k_max=k_max, samples=samples,
                          residual=resid, points=tuple(tuple(int(x) for x in p) for p in pts))


def gamma_closed(X: VectorSet, eta=None, theta=None) -> float:
    """``<theta, eta> * max h(p)`` over ``p`` with mean ``theta / <theta, eta>``."""
    if X.coplanarity.eta is None:
        raise NotCoplanar("the generators do not lie on an affine hyperplane <eta, x> = 1")
    if eta is None:
        eta = X.coplanarity.eta
    eta = np.array([float(v) for v in eta])
    th = _unit_direction(X, theta)
    scale = float(th @ eta)
    sol = solve_gibbs(X, th / scale, gauge="standard")
    g1 = scale * sol.entropy
    ev = partition_eval(X, sol.t)
    g2 = scale * ev.logZ - float(sol.t @ th)
    if abs(g1 - g2) > 1e-9 * max(1.0, abs(g1)):
        raise AssertionError(f"closed forms disagree: {g1} vs {g2}")
    return g1


@dataclass(frozen=True)
class CurvePoint:
    theta: tuple[float, ...]
    angle: Optional[float]
    gamma_closed: Optional[float]
    gamma_empirical: Optional[float]
    residual: Optional[float]


def interior_directions(X: VectorSet, resolution: int) -> list[tuple[float, np.ndarray]]:
    """``resolution`` evenly spaced angles strictly between the two rays of a planar cone."""
    if X.dim != 2:
        raise ValueError("angular sweeps need dimension 2; pass explicit directions instead")
    rays = X.geometry.extreme_rays
    angs = sorted(math.atan2(r[1], r[0]) for r in rays)
    a0, a1 = angs[0], angs[-1]
    out = []
    for i in range(1, resolution + 1):
        a = a0 + (a1 - a0) * i / (resolution + 1)
        out.append((a, np.array([math.cos(a), math.sin(a)])))
    return out


def gamma_curve(X: VectorSet, resolution: int = 90, directions: Optional[Sequence] = None,
                k_max: int = 200, mode: str = "auto") -> list[CurvePoint]:
    """Evaluate ``gamma`` on a sweep of interior directions.

    ``mode`` is ``closed``, ``empirical``, ``both`` or ``auto`` (closed form
    when coplanar, empirical otherwise).
    """
    if mode not in ("auto", "closed", "empirical", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    coplanar = X.coplanarity.is_coplanar
    if mode == "auto":
        mode = "closed" if coplanar else "empirical"
    if mode in ("closed", "both") and not coplanar:
        raise NotCoplanar("closed-form growth needs coplanar generators")
    if directions is None:
        dirs = interior_directions(X, resolution)
    else:
        dirs = []
        for d in directions:
            v = np.atleast_1d(np.asarray(d, dtype=float))
            dirs.append((None, v / np.linalg.norm(v)))
    table = None
    if mode in ("empirical", "both"):
        if k_max < MIN_HORIZON:
            raise HorizonTooSmall(f"k_max={k_max} is below the minimum horizon {MIN_HORIZON}")
        table = growth_table(X, [v for _, v in dirs], k_max)
    out = []
    for a, v in dirs:
        gc = gamma_closed(X, None, v) if mode in ("closed", "both") else None
        ge = res = None
        if table is not None:
            est = gamma_empirical(X, table, v, k_max)
            ge, res = est.gamma_empirical, est.residual
        out.append(CurvePoint(tuple(v.tolist()), a, gc, ge, res))
    return out


def subadditive_constant(b: Sequence[float]) -> float:
    """Smallest ``c >= 0`` with ``b_n + b_m <= b_{n+m} + c log(n+m)`` on the given range.

    ``b[0]`` is ``b_1``.
    """
    b = np.asarray(b, dtype=float)
    N = len(b)
    c = 0.0
    for n in range(1, N // 2 + 1):
        m = np.arange(n, N - n + 1)
        gap = b[n - 1] + b[m - 1] - b[n + m - 1]
        c = max(c, float((gap / np.log(n + m)).max()))
    return c


def subadditive_lower_bounds(b: Sequence[float], c: float) -> np.ndarray:
    """``(b_m - c log 4m) / m`` for ``m = 1..len(b)``."""
    b = np.asarray(b, dtype=float)
    m = np.arange(1, len(b) + 1)
    return (b - c * np.log(4 * m)) / m


def subadditive_limit(b: Sequence[float], c: Optional[float] = None) -> tuple[float, float]:
    """Estimate ``lim b_n / n`` and a lower bound for it.

    The lower bound is ``max_m (b_m - c log 4m) / m``, valid whenever ``b``
    satisfies the weak subadditivity inequality with constant ``c``.  When
    ``c`` is None the smallest constant consistent with the finite data is
    used.  The estimate is the top-half least-squares slope, raised to the
    lower bound if it falls below it.
    """
    b = np.asarray(b, dtype=float)
    if len(b) < 16:
        raise ValueError("need at least 16 terms")
    if c is None:
        c = subadditive_constant(b)
    lower = float(subadditive_lower_bounds(b, c).max())
    slope, _ = _top_half_slope(np.arange(1, len(b) + 1), b)
    return max(slope, lower), lower


def normalized_growth_max(X: VectorSet, resolution: int = 90) -> tuple[float, float, float]:
    """Maximize ``gamma(theta) / <theta, eta>`` over a planar coplanar cone.

    Returns ``(grid_angle, refined_angle, refined_value)``: the best of
    ``resolution`` interior grid angles, then a bounded scalar refinement over
    the two neighbouring grid cells.
    """
    if X.coplanarity.eta is None:
        raise NotCoplanar("closed-form growth needs coplanar generators")
    eta = np.array([float(v) for v in X.coplanarity.eta])
    dirs = interior_directions(X, resolution)

    def ratio(a):
        v = np.array([math.cos(a), math.sin(a)])
        return gamma_closed(X, None, v) / float(v @ eta)

    vals = [ratio(a) for a, _ in dirs]
    i = int(np.argmax(vals))
    step = dirs[1][0] - dirs[0][0] if len(dirs) > 1 else 0.0
    a_grid = dirs[i][0]
    if step == 0.0:
        return a_grid, a_grid, vals[i]
    opt = minimize_scalar(lambda a: -ratio(a), bounds=(dirs[max(i - 1, 0)][0], dirs[min(i + 1, len(dirs) - 1)][0]),
                          method="bounded", options={"xatol": 1e-10})
    return a_grid, float(opt.x), float(-opt.fun)
