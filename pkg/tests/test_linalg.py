import itertools
import random

import numpy as np
import pytest

from phcover.field import FIELD_ORDERS, field_of_order
from phcover import linalg as la


def det_by_permutation_sum(gf, m):
    """Permanent-style expansion; in characteristic 2 all signs are +1,
    so this equals the determinant.  Independent of the elimination code."""
    acc = 0
    for perm in itertools.permutations(range(4)):
        term = 1
        for i, j in enumerate(perm):
            term = gf.mul(term, m[i][j])
        acc ^= term
    return acc


def test_evaluate_dual_basis():
    gf = field_of_order(4)
    assert la.evaluate(gf, la.E4[0], la.E4[0]) == 1
    assert la.evaluate(gf, la.E4[2], la.E4[0]) == 0


def test_evaluate_bilinear_example():
    # (f1 + f4)(e3 + lam e2) = 0 for every lam
    for q in (4, 16):
        gf = field_of_order(q)
        f = la.vec_add(la.E4[0], la.E4[3])
        for lam in gf.elements():
            v = la.vec_add(la.E4[2], la.vec_scale(gf, lam, la.E4[1]))
            assert la.evaluate(gf, f, v) == 0


def test_kernel_examples():
    gf = field_of_order(2)
    basis = la.kernel(gf, [la.E4[0], la.E4[1], la.E4[2]])
    assert basis == [la.E4[3]]
    assert len(la.kernel(gf, [])) == 4


def test_rank_nullity_random_triples():
    rng = random.Random(42)
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        for _ in range(25):
            rows = [tuple(rng.randrange(gf.order) for _ in range(4)) for _ in range(3)]
            r = la.rank(gf, rows)
            assert r + len(la.kernel(gf, rows)) == 4
            for v in la.kernel(gf, rows):
                for f in rows:
                    assert la.evaluate(gf, f, v) == 0


def test_three_independent_covectors_leave_dimension_one():
    rng = random.Random(7)
    gf = field_of_order(8)
    found = 0
    while found < 20:
        rows = [tuple(rng.randrange(8) for _ in range(4)) for _ in range(3)]
        if la.rank(gf, rows) == 3:
            found += 1
            assert len(la.kernel(gf, rows)) == 1


def test_det_examples():
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        assert la.det(gf, la.E4) == 1
        for lam in gf.elements():
            m = ((lam, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
            assert la.det(gf, m) == lam


def test_det_matches_permutation_oracle():
    rng = random.Random(3)
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        for _ in range(20):
            m = tuple(tuple(rng.randrange(gf.order) for _ in range(4)) for _ in range(4))
            assert la.det(gf, m) == det_by_permutation_sum(gf, m)


def test_det_is_multiplicative_on_samples():
    rng = random.Random(5)
    gf = field_of_order(4)
    for _ in range(20):
        a = tuple(tuple(rng.randrange(4) for _ in range(4)) for _ in range(4))
        b = tuple(tuple(rng.randrange(4) for _ in range(4)) for _ in range(4))
        assert la.det(gf, la.mat_mul(gf, a, b)) == gf.mul(la.det(gf, a), la.det(gf, b))


def test_mat_inv_and_covector_transform():
    rng = random.Random(11)
    for q in (2, 4, 16):
        gf = field_of_order(q)
        for _ in range(15):
            m = la.random_gl4(gf, rng)
            assert la.mat_mul(gf, m, la.mat_inv(gf, m)) == la.E4
            f = tuple(rng.randrange(gf.order) for _ in range(4))
            v = tuple(rng.randrange(gf.order) for _ in range(4))
            fg = la.mat_vec(gf, f, la.transpose(la.mat_inv(gf, m)))
            vg = la.mat_vec(gf, v, m)
            assert la.evaluate(gf, fg, vg) == la.evaluate(gf, f, v)


def test_mat_inv_singular_raises():
    gf = field_of_order(2)
    with pytest.raises(ValueError):
        la.mat_inv(gf, ((0, 0, 0, 0),) * 4)


def test_random_sl4_is_unimodular_and_seeded():
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        for seed in range(30):
            m = la.random_sl4(gf, random.Random(seed))
            assert la.det(gf, m) == 1
            assert m == la.random_sl4(gf, random.Random(seed))


def test_random_sl4_spread_over_gf2():
    gf = field_of_order(2)
    rng = random.Random(0)
    seen = {la.random_sl4(gf, rng) for _ in range(100)}
    assert len(seen) >= 50


# ----------------------------------------------------------------------
# F2 affine solving
# ----------------------------------------------------------------------

def test_solve_affine_f2_inconsistent_x_plus_x():
    # x + x = 1 over F2 collapses to 0 = 1
    a = np.zeros((1, 1), dtype=np.uint8)
    b = np.array([1], dtype=np.uint8)
    x0, kern, cert = la.solve_affine_f2(a, b)
    assert x0 is None and kern is None
    assert cert is not None and cert[0] == 1


def test_solve_affine_f2_empty_system():
    a = np.zeros((0, 5), dtype=np.uint8)
    b = np.zeros(0, dtype=np.uint8)
    x0, kern, cert = la.solve_affine_f2(a, b)
    assert cert is None
    assert not x0.any()
    assert len(kern) == 5


def test_solve_affine_f2_solution_substitutes_back():
    rng = np.random.default_rng(123)
    for _ in range(30):
        m, n = int(rng.integers(1, 12)), int(rng.integers(1, 12))
        a = rng.integers(0, 2, size=(m, n)).astype(np.uint8)
        x_true = rng.integers(0, 2, size=n).astype(np.uint8)
        b = (a @ x_true) % 2
        x0, kern, cert = la.solve_affine_f2(a, b)
        assert cert is None
        assert not ((a @ x0) % 2 ^ b).any()
        for v in kern:
            assert not ((a @ v) % 2).any()
            assert not ((a @ ((x0 ^ v) % 2)) % 2 ^ b).any()
        assert len(kern) >= n - m


def test_solve_affine_f2_certificate_property():
    rng = np.random.default_rng(7)
    found = 0
    while found < 20:
        m, n = int(rng.integers(2, 12)), int(rng.integers(1, 8))
        a = rng.integers(0, 2, size=(m, n)).astype(np.uint8)
        b = rng.integers(0, 2, size=m).astype(np.uint8)
        x0, kern, cert = la.solve_affine_f2(a, b)
        if cert is None:
            continue
        found += 1
        assert not ((cert @ a) % 2).any()
        assert int((cert @ b) % 2) == 1


def test_f2_matrix_from_map_roundtrip():
    rng = np.random.default_rng(5)
    target = rng.integers(0, 2, size=(6, 9)).astype(np.uint8)
    built = la.f2_matrix_from_map(lambda v: (target @ v) % 2, 9, 6)
    assert np.array_equal(built, target)
