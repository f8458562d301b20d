"""Numbered acceptance criteria, one test each, with wall-clock limits.

The conftest hook prints a PASS/FAIL line per criterion.  Numba kernels are
compiled by a module fixture before any timed body runs.
"""
import itertools
import math
import time

import numpy as np
import pytest

from _oracles import factorial_sum, largest_root_bisection, random_coplanar, random_vectorset
from frobnd.growth import gamma_closed, gamma_empirical, normalized_growth_max, slack
from frobnd.maxent import entropy, partition_eval, solve_gibbs
from frobnd.multiplicity import MultiplicityTable, hausdorff_A, multiplicity, representations
from frobnd.rigidity import interior_samples, iterate, same_growth, transform_set
from frobnd.semigroup import frobenius_set, in_semigroup_many
from frobnd.vecset import in_lattice, validate

UNIT2 = validate([(1, 0), (0, 1)], 2)
EX13 = validate([(3, 0), (1, 2), (0, 3)], 2)


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    t = MultiplicityTable(UNIT2, cap=6, exact=False)
    t.region.fill_reach()
    in_semigroup_many(EX13, [(1, 2), (2, 1)])
    yield


class Clock:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f} s, limit {self.limit} s"


@pytest.mark.acceptance(1, "Frobenius sets of the planar example and of {3, 5}")
def test_criterion_01_frobenius():
    with Clock(1.0):
        assert set(frobenius_set(EX13).apexes) == {(1, 2), (0, 3)}
        assert set(frobenius_set(validate([3, 5], 1)).apexes) == {(8,)}


@pytest.mark.acceptance(2, "lattice and semigroup membership on [0,20]^2")
def test_criterion_02_membership():
    with Clock(1.0):
        pts = list(itertools.product(range(21), repeat=2))
        inJ = in_semigroup_many(EX13, pts)
        for (a, b), j in zip(pts, inJ):
            lat = (a + b) % 3 == 0
            assert in_lattice(EX13.lattice, (a, b)) == lat
            assert bool(j) == (lat and b != 1)


@pytest.mark.acceptance(3, "binomial multiplicities for the unit vectors")
def test_criterion_03_binomial():
    with Clock(1.0):
        for a in range(31):
            for b in range(31):
                assert multiplicity(UNIT2, None, (a, b)) == math.factorial(a + b) // (math.factorial(a) * math.factorial(b))
        assert multiplicity(UNIT2, None, (30, 30)) == 118264581564861424
        assert len(str(multiplicity(UNIT2, None, (30, 30)))) == 18


@pytest.mark.acceptance(4, "table recurrence equals the factorial sum over representations")
def test_criterion_04_formula_vs_recurrence():
    rng = np.random.default_rng(2024)
    checked = 0
    with Clock(30.0):
        for _ in range(50):
            X = random_vectorset(rng, s_max=3, m_max=4, entry=4)
            pts = np.array(list(itertools.product(range(-10, 11), repeat=X.dim)))
            inJ = in_semigroup_many(X, pts)
            table = MultiplicityTable(X)
            table.ensure_points(pts[inJ])
            for z, j in zip(pts, inJ):
                z = tuple(int(v) for v in z)
                want = factorial_sum(representations(X, z)) if j else 0
                assert multiplicity(X, table, z) == want
                if j:
                    checked += 1
    assert checked > 1000


@pytest.mark.acceptance(5, "closed-form growth on the diagonal and the normalized maximum")
def test_criterion_05_closed_form():
    with Clock(1.0):
        th = np.array([1.0, 1.0]) / math.sqrt(2)
        assert abs(gamma_closed(UNIT2, None, th) - math.sqrt(2) * math.log(2)) <= 1e-10
        a_grid, _, value = normalized_growth_max(EX13, 90)
        step = (math.pi / 2) / 90
        assert abs(value - math.log(3)) <= 1e-8
        assert abs(a_grid - math.atan2(5, 4)) <= step


@pytest.mark.acceptance(6, "empirical growth within slack of the closed form")
def test_criterion_06_empirical_vs_closed():
    rng = np.random.default_rng(606)
    bound = slack(150)
    with Clock(300.0):
        for _ in range(10):
            X = random_coplanar(rng)
            dirs = interior_samples(X, 5)
            assert len(dirs) == 5
            for th in dirs:
                est = gamma_empirical(X, None, th, k_max=150)
                assert abs(est.gamma_empirical - gamma_closed(X, None, th)) <= bound


def _logZ(G, t):
    e = G @ t
    mx = e.max()
    return mx + math.log(np.exp(e - mx).sum())


def _rel_close(a, b, rel):
    return np.all(np.abs(a - b) <= rel * np.maximum(np.abs(b), 1e-3))


@pytest.mark.acceptance(7, "maximum-entropy derivatives, optimality and standard gauge")
def test_criterion_07_maxent():
    X = validate([(3, 0, 0), (1, 2, 0), (0, 3, 0), (1, 1, 1), (0, 0, 3)], 3)
    G = X.matrix.astype(float)
    rng = np.random.default_rng(77)
    with Clock(30.0):
        h = 1e-5
        for _ in range(20):
            t = rng.normal(scale=0.6, size=X.dim)
            ev = partition_eval(X, t)
            fd = np.array([(_logZ(G, t + h * e) - _logZ(G, t - h * e)) / (2 * h) for e in np.eye(X.dim)])
            assert _rel_close(fd, ev.gradient, 1e-5)
            fdH = np.array([(partition_eval(X, t + h * e).gradient - partition_eval(X, t - h * e).gradient) / (2 * h)
                            for e in np.eye(X.dim)]).T
            assert _rel_close(fdH, ev.hessian, 1e-5)

        beta = np.array([1.1, 0.8, 1.1])
        sol = solve_gibbs(X, beta)
        assert abs(sol.Z - 1) <= 1e-10
        assert abs(math.exp(partition_eval(X, sol.t).logZ) - 1) <= 1e-10
        # feasible directions: G^T r = 0 and sum r = 0
        K = np.vstack([G.T, np.ones(X.m)])
        _, S, Vt = np.linalg.svd(K)
        null = Vt[int(np.sum(S > 1e-10)):]
        h0 = entropy(sol.p_star)
        tried = 0
        while tried < 10_000:
            r = rng.normal(size=null.shape[0]) @ null
            q = sol.p_star + rng.uniform(1e-4, 0.05) * r / np.linalg.norm(r)
            if np.any(q <= 0):
                continue
            assert np.allclose(G.T @ q, beta, atol=1e-12)
            assert entropy(q) < h0
            tried += 1


@pytest.mark.acceptance(8, "one-dimensional growth for {2, 3}")
def test_criterion_08_plastic():
    with Clock(5.0):
        root = largest_root_bisection(lambda x: x ** 3 - x - 1, 1.0, 2.0)
        est = gamma_empirical(validate([2, 3], 1), None, [1.0], k_max=200)
        assert abs(est.gamma_empirical - math.log(root)) <= 0.02


def _unimodular(rng, s):
    T = np.eye(s, dtype=np.int64)
    for _ in range(4):
        i, j = rng.choice(s, size=2, replace=False)
        E = np.eye(s, dtype=np.int64)
        E[i, j] = int(rng.integers(-2, 3))
        T = T @ E
    return T


@pytest.mark.acceptance(9, "rigidity verdicts with verified witnesses and the transform law")
def test_criterion_09_rigidity():
    with Clock(30.0):
        Y = iterate(UNIT2, 2).as_vectorset()
        v = same_growth(UNIT2, Y)
        assert v.equivalent and v.witness["kind"] == "pairing"
        q, p = v.witness["q"], v.witness["p"]
        A, B = iterate(UNIT2, q), iterate(Y, p)
        pairs = v.witness["pairs"]
        assert sorted(i for i, _ in pairs) == list(range(len(A)))
        assert sorted(j for _, j in pairs) == list(range(len(B)))
        assert all(np.array_equal(A.vectors[i], B.vectors[j]) for i, j in pairs)

        Yp = validate([(2, 0), (1, 1), (2, 0), (0, 2)], 2)
        v = same_growth(UNIT2, Yp)
        assert not v.equivalent
        w = v.witness
        if w["kind"] == "direction":
            th = np.array(w["theta"])
            assert abs(gamma_closed(UNIT2, None, th) - gamma_closed(Yp, None, th)) > 1e-8
        else:
            assert w["kind"] == "multiset-mismatch"
            A, B = iterate(UNIT2, w["q"]), iterate(Yp, w["p"])
            assert sorted(A.multiset) != sorted(B.multiset)

        rng = np.random.default_rng(9)
        for _ in range(10):
            X = random_coplanar(rng, s_max=3, m_max=4)
            T = _unimodular(rng, X.dim)
            assert round(abs(np.linalg.det(T))) == 1
            TX = transform_set(X, T.tolist())
            Tinv = np.linalg.inv(T.astype(float))
            for u in interior_samples(X, 3):
                th = T @ u
                th /= np.linalg.norm(th)
                wv = Tinv @ th
                rhs = np.linalg.norm(wv) * gamma_closed(X, None, wv / np.linalg.norm(wv))
                assert abs(gamma_closed(TX, None, th) - rhs) <= 1e-8


# Sets and constants for the variation checks, fixed before looking at data.
VARIATION_FAMILY = {
    "example": ([(3, 0), (1, 2), (0, 3)], 2),
    "skew": ([(2, -1), (-1, 2), (1, 1)], 2),
    "cube-diagonal": ([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)], 3),
}
C0 = 3
SMALL, LARGE = (10, 20), (40, 50)


def _shell_pairs(X, pts, nrm, lo, hi, rng, n_points):
    key = {tuple(p): i for i, p in enumerate(pts)}
    offs = [w for w in itertools.product(range(-C0, C0 + 1), repeat=X.dim) if 0 < np.linalg.norm(w) <= C0]
    idx = np.flatnonzero((nrm >= lo) & (nrm <= hi))
    idx = rng.choice(idx, size=min(n_points, idx.size), replace=False)
    pairs = []
    for i in idx:
        for w in offs:
            j = key.get(tuple(pts[i] + w))
            if j is not None:
                pairs.append((i, j))
    return pairs


@pytest.mark.acceptance(10, "super-multiplicativity and polynomial variation of multiplicities")
def test_criterion_10_variation():
    rng = np.random.default_rng(1010)
    report = {}
    with Clock(60.0):
        for name, (vecs, dim) in VARIATION_FAMILY.items():
            X = validate(vecs, dim)
            R = LARGE[1] + C0 + 1
            pts = np.array(list(itertools.product(range(-R, R + 1), repeat=dim)))
            nrm = np.linalg.norm(pts, axis=1)
            keep = nrm <= R
            pts, nrm = pts[keep], nrm[keep]
            inJ = in_semigroup_many(X, pts)
            pts, nrm = pts[inJ], nrm[inJ]
            table = MultiplicityTable(X)
            table.ensure_points(pts)

            # super-multiplicativity, exact integers
            small = pts[nrm <= 25]
            for _ in range(300):
                a, b = small[rng.integers(len(small), size=2)]
                assert table.m(a + b) >= table.m(a) * table.m(b)

            lg = table.log_values(table.region.indices(pts))
            kap, dh = {}, {}
            for label, (lo, hi) in (("small", SMALL), ("large", LARGE)):
                pairs = _shell_pairs(X, pts, nrm, lo, hi, rng, 400)
                assert pairs
                kap[label] = max(abs(lg[i] - lg[j]) / math.log(2 + nrm[i]) for i, j in pairs)
                sub = [pairs[k] for k in rng.choice(len(pairs), size=min(150, len(pairs)), replace=False)]
                dh[label] = max(hausdorff_A(X, tuple(pts[i]), tuple(pts[j])) for i, j in sub)
            report[name] = (kap, dh)

    failures = []
    for name, (kap, dh) in report.items():
        print(f"{name}: kappa small {kap['small']:.4f} large {kap['large']:.4f}; "
              f"d_H small {dh['small']:.4f} large {dh['large']:.4f}")
        if dh["large"] > 2 * dh["small"]:
            failures.append(f"{name}: Hausdorff {dh['large']:.4f} > 2 x {dh['small']:.4f}")
        if kap["large"] > kap["small"]:
            failures.append(f"{name}: kappa fitted {kap['small']:.4f} exceeded on large shell ({kap['large']:.4f})")
    assert not failures, "; ".join(failures)
