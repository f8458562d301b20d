"""Dynamic-programming kernels over a lattice region.

Each kernel fills a value per lattice point from the values of its
predecessors ``z - X_j``, visiting points in increasing level so that every
predecessor is final before it is read.  ``order`` holds flat box indices
sorted by level, ``pred[i, j]`` the flat index of ``order[i] - X_j`` (or the
sentinel slot ``n_box`` when it falls outside the box) and ``bounds`` the
offsets in ``order`` where the level changes.

Two backends exist: numba-compiled scalar loops, and numpy loops over level
groups with vectorized gathers.  Set ``FROBND_DISABLE_NUMBA=1`` to force the
numpy path.  Exact (object dtype) fills are numpy-only.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

DISABLE_NUMBA = os.environ.get("FROBND_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
USE_NUMBA = HAVE_NUMBA and not DISABLE_NUMBA


def _backend(backend):
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


# -- numpy path -------------------------------------------------------------


def _reach_np(order, pred, bounds, out):
    for g in range(len(bounds) - 1):
        a, b = bounds[g], bounds[g + 1]
        out[order[a:b]] = out[pred[a:b]].any(axis=1)


def _logcount_np(order, pred, bounds, out):
    with np.errstate(invalid="ignore"):
        for g in range(len(bounds) - 1):
            a, b = bounds[g], bounds[g + 1]
            out[order[a:b]] = np.logaddexp.reduce(out[pred[a:b]], axis=1)


def _exact_np(order, pred, bounds, out):
    for g in range(len(bounds) - 1):
        a, b = bounds[g], bounds[g + 1]
        out[order[a:b]] = out[pred[a:b]].sum(axis=1)


# -- numba path -------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _reach_jit(order, pred, out):
        n, m = pred.shape
        for i in range(n):
            hit = False
            for j in range(m):
                if out[pred[i, j]]:
                    hit = True
                    break
            out[order[i]] = hit

    @njit(cache=True)
    def _logcount_jit(order, pred, out):
        n, m = pred.shape
        for i in range(n):
            mx = -np.inf
            for j in range(m):
                v = out[pred[i, j]]
                if v > mx:
                    mx = v
            if mx == -np.inf:
                out[order[i]] = -np.inf
                continue
            acc = 0.0
            for j in range(m):
                acc += np.exp(out[pred[i, j]] - mx)
            out[order[i]] = mx + np.log(acc)


def reach_fill(order, pred, bounds, out, backend=None):
    """Boolean reachability: ``out[z] = any(out[z - X_j])``."""
    if _backend(backend) == "numba":
        _reach_jit(order, pred, out)
    else:
        _reach_np(order, pred, bounds, out)
    return out


def logcount_fill(order, pred, bounds, out, backend=None):
    """Log path counts: ``out[z] = log(sum(exp(out[z - X_j])))``."""
    if _backend(backend) == "numba":
        _logcount_jit(order, pred, out)
    else:
        _logcount_np(order, pred, bounds, out)
    return out


def exact_fill(order, pred, bounds, out):
    """Exact path counts on an object array of Python ints."""
    _exact_np(order, pred, bounds, out)
    return out
