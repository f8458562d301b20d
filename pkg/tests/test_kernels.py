import os
import subprocess
import sys

import numpy as np
import pytest

from _oracles import random_vectorset
from frobnd import _kernels
from frobnd._grid import Region, RegionTooLarge
from frobnd.vecset import validate

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("seed", range(10))
def test_backends_agree(seed):
    rng = np.random.default_rng(seed)
    X = random_vectorset(rng)
    R = Region(X, X.vectors, cap=int(rng.integers(10, 40)))
    assert np.array_equal(R.fill_reach(backend="numba"), R.fill_reach(backend="numpy"))
    a, b = R.fill_log(backend="numba"), R.fill_log(backend="numpy")
    fin = np.isfinite(a)
    assert np.array_equal(fin, np.isfinite(b))
    assert np.allclose(a[fin], b[fin], rtol=1e-12, atol=1e-12)


def test_log_fill_matches_exact():
    X = validate([(3, 0), (1, 2), (0, 3), (1, 2)], 2)
    R = Region(X, X.vectors, cap=45)
    ex = R.fill_exact()
    lg = R.fill_log(backend="numpy")
    for i in R.points:
        if ex[i]:
            assert lg[i] == pytest.approx(np.log(float(ex[i])), rel=1e-12, abs=1e-12)
        else:
            assert lg[i] == -np.inf


def test_apex_region_contents():
    X = validate([(2, 1), (1, 2)], 2)
    R = Region(X, X.vectors, top=np.array([9.0, 9.0]))
    pts = {tuple(p) for p in R.coords(R.points)}
    want = {(a, b) for a in range(10) for b in range(10)
            if 2 * b - a >= 0 and 2 * a - b >= 0 and 2 * (9 - b) - (9 - a) >= 0 and 2 * (9 - a) - (9 - b) >= 0}
    assert pts == want
    assert R.index((9, 9)) is not None
    assert R.index((10, 10)) is None


def test_region_needs_bounds_and_size_guard():
    X = validate([(1, 0), (0, 1)], 2)
    with pytest.raises(ValueError):
        Region(X, X.vectors)
    with pytest.raises(RegionTooLarge):
        Region(X, X.vectors, cap=10 ** 6)


def test_backend_argument_validation():
    with pytest.raises(ValueError):
        _kernels._backend("fortran")


def test_env_flag_forces_numpy():
    code = "from frobnd import _kernels as k; print(k.USE_NUMBA, k._backend(None))"
    env = dict(os.environ, FROBND_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "numpy"]
