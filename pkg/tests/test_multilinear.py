import random

import pytest

from phcover.field import FIELD_ORDERS, field_of_order
from phcover.linalg import E4, det, random_gl4, random_sl4, vec_add, vec_scale
from phcover import multilinear as ml


def wedge_by_expansion(gf, u, v):
    """Independent oracle: expand u ^ v over basis decomposables, collecting
    the coefficient of e_a ^ e_b (a < b) as u_a v_b - u_b v_a (signs vanish)."""
    coeffs = [0] * 6
    for a in range(4):
        for b in range(4):
            if u[a] and v[b] and a != b:
                c = gf.mul(u[a], v[b])
                slot = ml.BIV_PAIRS.index((min(a, b), max(a, b)))
                coeffs[slot] ^= c
    return tuple(coeffs)


def unit_bivector(slot):
    return tuple(1 if t == slot else 0 for t in range(6))


def test_wedge_basis_cases():
    gf = field_of_order(2)
    assert ml.wedge(gf, E4[0], E4[1]) == unit_bivector(0)   # w1
    assert ml.wedge(gf, E4[1], E4[3]) == unit_bivector(4)   # w5


def test_wedge_alternating():
    rng = random.Random(0)
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        for _ in range(20):
            v = tuple(rng.randrange(gf.order) for _ in range(4))
            assert ml.wedge(gf, v, v) == ml.ZERO6


def test_wedge_matches_expansion_oracle():
    rng = random.Random(1)
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        for _ in range(30):
            u = tuple(rng.randrange(gf.order) for _ in range(4))
            v = tuple(rng.randrange(gf.order) for _ in range(4))
            assert ml.wedge(gf, u, v) == wedge_by_expansion(gf, u, v)


def test_wedge_explicit_expansion_value():
    # (e3 + lam e2) ^ e1 = e3^e1 + lam e2^e1 = w2 + lam w1 in characteristic 2
    for q in (4, 16):
        gf = field_of_order(q)
        for lam in gf.elements():
            u = vec_add(E4[2], vec_scale(gf, lam, E4[1]))
            expected = [0] * 6
            expected[1] = 1      # w2 = e1^e3
            expected[0] = lam    # w1 = e1^e2
            assert ml.wedge(gf, u, E4[0]) == tuple(expected)
            assert ml.wedge(gf, u, E4[0]) == wedge_by_expansion(gf, u, E4[0])


def test_wedge4_normalisation_and_degeneracy():
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        assert ml.wedge4(gf, *E4) == 1
        assert ml.wedge4(gf, E4[0], E4[0], E4[2], E4[3]) == 0
        # a row swap is sign-free in characteristic 2
        assert ml.wedge4(gf, E4[1], E4[0], E4[2], E4[3]) == 1


def test_phi_table_lines():
    # the six explicit values: f3^f4 -> w1, f2^f4 -> w2, f2^f3 -> w3,
    # f1^f4 -> w4, f1^f3 -> w5, f1^f2 -> w6
    pairs = ((2, 3), (1, 3), (1, 2), (0, 3), (0, 2), (0, 1))
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        for slot, (i, j) in enumerate(pairs):
            dual = ml.wedge_covectors(gf, E4[i], E4[j])
            a, b = ml.BIV_PAIRS[slot]
            assert ml.phi(dual) == ml.wedge(gf, E4[a], E4[b])


def test_phi_linear():
    rng = random.Random(2)
    gf = field_of_order(8)
    for _ in range(30):
        a = tuple(rng.randrange(8) for _ in range(6))
        b = tuple(rng.randrange(8) for _ in range(6))
        assert ml.phi(ml.biv_add(a, b)) == ml.biv_add(ml.phi(a), ml.phi(b))


def test_phi_consistency_all_fields():
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        assert ml.phi_consistency_check(gf, random.Random(3), samples=100)


def test_pairing_symmetry_char2():
    rng = random.Random(4)
    gf = field_of_order(4)
    for _ in range(20):
        x = tuple(rng.randrange(4) for _ in range(6))
        y = tuple(rng.randrange(4) for _ in range(6))
        assert ml.pairing_chi(gf, x, y) == ml.pairing_chi(gf, y, x)


def test_sym_mul_examples():
    gf = field_of_order(2)
    w1, w6 = unit_bivector(0), unit_bivector(5)
    prod = ml.sym_mul(gf, w1, w6)
    assert prod[ml.SYM_SLOT[(0, 5)]] == 1
    assert sum(prod) == 1
    # (w2 + w3) * w2 = w2^2 + w2 w3
    w2, w3 = unit_bivector(1), unit_bivector(2)
    got = ml.sym_mul(gf, ml.biv_add(w2, w3), w2)
    expect = [0] * 21
    expect[ml.SYM_SLOT[(1, 1)]] = 1
    expect[ml.SYM_SLOT[(1, 2)]] = 1
    assert got == tuple(expect)


def test_sym_mul_symmetric():
    rng = random.Random(5)
    for q in (4, 16):
        gf = field_of_order(q)
        for _ in range(20):
            a = tuple(rng.randrange(gf.order) for _ in range(6))
            b = tuple(rng.randrange(gf.order) for _ in range(6))
            assert ml.sym_mul(gf, a, b) == ml.sym_mul(gf, b, a)


def test_big_u_coordinates():
    # (e1^e2)(e3^e4) + (e1^e3)(e4^e2) + (e1^e4)(e2^e3) = w1w6 + w2w5 + w3w4
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        expect = [0] * 21
        expect[ml.SYM_SLOT[(0, 5)]] = 1
        expect[ml.SYM_SLOT[(1, 4)]] = 1
        expect[ml.SYM_SLOT[(2, 3)]] = 1
        assert ml.big_u(gf) == tuple(expect)


def test_big_u_independent_of_basis():
    rng = random.Random(6)
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        count = 0
        while count < 50:
            rows = [tuple(rng.randrange(gf.order) for _ in range(4)) for _ in range(4)]
            d = det(gf, rows)
            if d == 0:
                continue
            rows[0] = vec_scale(gf, gf.inv(d), rows[0])
            count += 1
            assert ml.u_from_basis(gf, *rows) == ml.big_u(gf)


def test_u_from_basis_rejects_non_unimodular():
    gf = field_of_order(4)
    with pytest.raises(ValueError):
        ml.u_from_basis(gf, E4[0], E4[0], E4[2], E4[3])


def test_u_not_in_w2_but_in_w2_plus_u():
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        assert not ml.in_w2(gf, ml.big_u(gf))
        assert ml.in_w2_plus_u(gf, ml.big_u(gf))


def test_in_w2_diagonal():
    gf = field_of_order(4)
    for lam in gf.elements():
        s = ml.sym_add(
            ml.sym_scale(gf, lam, ml.square(gf, unit_bivector(0))),
            ml.square(gf, unit_bivector(4)),
        )
        assert ml.in_w2(gf, s)


def test_square_additive_and_semilinear():
    rng = random.Random(7)
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        for _ in range(20):
            a = tuple(rng.randrange(gf.order) for _ in range(6))
            b = tuple(rng.randrange(gf.order) for _ in range(6))
            lam = rng.randrange(gf.order)
            assert ml.square(gf, ml.biv_add(a, b)) == ml.sym_add(ml.square(gf, a), ml.square(gf, b))
            assert ml.square(gf, ml.biv_scale(gf, lam, a)) == ml.sym_scale(gf, gf.mul(lam, lam), ml.square(gf, a))
            assert ml.in_w2(gf, ml.square(gf, a))


def test_square_of_basis():
    gf = field_of_order(2)
    s = ml.square(gf, unit_bivector(0))
    assert s[ml.SYM_SLOT[(0, 0)]] == 1 and sum(s) == 1


# ----------------------------------------------------------------------
# the quotient N
# ----------------------------------------------------------------------

def test_project_n_identifies_coset():
    for q in (2, 8):
        gf = field_of_order(q)
        rng = random.Random(8)
        for _ in range(50):
            s = tuple(rng.randrange(gf.order) for _ in range(21))
            t = ml.sym_add(s, ml.big_u(gf))
            assert ml.n_project(gf, s) == ml.n_project(gf, t)
            assert ml.n_project(gf, ml.n_project(gf, s)) == ml.n_project(gf, s)
            assert ml.n_project(gf, s) in (s, t)


def test_project_n_zero_and_u():
    gf = field_of_order(4)
    zero = (0,) * 21
    assert ml.n_project(gf, zero) == zero
    assert ml.n_project(gf, ml.big_u(gf)) == zero


def test_project_n_canonical_is_lexicographic_minimum():
    gf = field_of_order(4)
    rng = random.Random(9)
    for _ in range(50):
        s = tuple(rng.randrange(4) for _ in range(21))
        t = ml.sym_add(s, ml.big_u(gf))
        assert ml.n_project(gf, s) == min(s, t)


def test_n_add_homomorphism():
    gf = field_of_order(2)
    rng = random.Random(10)
    for _ in range(50):
        s = tuple(rng.randrange(2) for _ in range(21))
        t = tuple(rng.randrange(2) for _ in range(21))
        lhs = ml.n_add(gf, ml.n_project(gf, s), ml.n_project(gf, t))
        assert lhs == ml.n_project(gf, ml.sym_add(s, t))


def test_n_cardinality_spot_check():
    # two tensors project together exactly when they differ by 0 or U,
    # so the canonical map is 2-to-1 on 2^21 inputs over GF(2)
    gf = field_of_order(2)
    rng = random.Random(11)
    reps = set()
    for _ in range(2000):
        s = tuple(rng.randrange(2) for _ in range(21))
        reps.add(ml.n_project(gf, s))
    assert len(reps) > 1900  # collisions beyond the forced 2:1 are very rare
    for rep in list(reps)[:50]:
        lifts = ml.lift_n(gf, rep)
        assert ml.n_project(gf, lifts[0]) == ml.n_project(gf, lifts[1]) == rep


def test_pack_unpack_roundtrip():
    rng = random.Random(12)
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        for _ in range(30):
            s = tuple(rng.randrange(gf.order) for _ in range(21))
            assert ml.unpack_sym(gf, ml.pack_sym(gf, s)) == s
    gf = field_of_order(4)
    for _ in range(30):
        s = tuple(rng.randrange(4) for _ in range(21))
        t = tuple(rng.randrange(4) for _ in range(21))
        assert (ml.pack_sym(gf, s) < ml.pack_sym(gf, t)) == (s < t)


# ----------------------------------------------------------------------
# induced actions
# ----------------------------------------------------------------------

def test_action_functorial_on_wedges():
    rng = random.Random(13)
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        for _ in range(10):
            act = ml.action(gf, random_gl4(gf, rng))
            u = tuple(rng.randrange(gf.order) for _ in range(4))
            v = tuple(rng.randrange(gf.order) for _ in range(4))
            assert act.on_bivector(ml.wedge(gf, u, v)) == ml.wedge(gf, act.on_vector(u), act.on_vector(v))


def test_action_multiplicative_on_sym():
    rng = random.Random(14)
    gf = field_of_order(4)
    for _ in range(10):
        act = ml.action(gf, random_gl4(gf, rng))
        a = tuple(rng.randrange(4) for _ in range(6))
        b = tuple(rng.randrange(4) for _ in range(6))
        assert act.on_sym(ml.sym_mul(gf, a, b)) == ml.sym_mul(gf, act.on_bivector(a), act.on_bivector(b))


def test_action_composition_right():
    rng = random.Random(15)
    gf = field_of_order(4)
    from phcover.linalg import mat_mul

    for _ in range(10):
        g = random_gl4(gf, rng)
        h = random_gl4(gf, rng)
        gh = ml.action(gf, mat_mul(gf, g, h))
        s = tuple(rng.randrange(4) for _ in range(21))
        assert gh.on_sym(s) == ml.action(gf, h).on_sym(ml.action(gf, g).on_sym(s))


def test_squares_stable_under_action():
    rng = random.Random(16)
    for q in (2, 8):
        gf = field_of_order(q)
        for _ in range(10):
            act = ml.action(gf, random_gl4(gf, rng))
            a = tuple(rng.randrange(gf.order) for _ in range(6))
            assert act.on_sym(ml.square(gf, a)) == ml.square(gf, act.on_bivector(a))


def test_u_fixed_by_sl_and_scaled_by_det():
    rng = random.Random(17)
    for q in FIELD_ORDERS:
        gf = field_of_order(q)
        u = ml.big_u(gf)
        for _ in range(25):
            act = ml.action(gf, random_sl4(gf, rng))
            assert act.on_sym(u) == u
        for _ in range(10):
            act = ml.action(gf, random_gl4(gf, rng))
            assert act.on_sym(u) == ml.sym_scale(gf, act.det, u)
        for lam in gf.nonzero():
            act = ml.action(gf, ((lam, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))
            assert act.on_sym(u) == ml.sym_scale(gf, lam, u)


def test_quotient_action_needs_unimodular():
    gf = field_of_order(4)
    scale = ((0b10, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    act = ml.action(gf, scale)
    with pytest.raises(ValueError):
        act.on_n((0,) * 21)


def test_quotient_action_well_defined():
    rng = random.Random(18)
    gf = field_of_order(2)
    for _ in range(20):
        act = ml.action(gf, random_sl4(gf, rng))
        s = tuple(rng.randrange(2) for _ in range(21))
        t = ml.sym_add(s, ml.big_u(gf))
        assert act.on_n(ml.n_project(gf, s)) == act.on_n(ml.n_project(gf, t))


def test_packed_action_agrees_with_tuple_action():
    rng = random.Random(19)
    for q in (2, 4):
        gf = field_of_order(q)
        for _ in range(10):
            act = ml.action(gf, random_sl4(gf, rng))
            s = tuple(rng.randrange(gf.order) for _ in range(21))
            assert act.on_sym_packed(ml.pack_sym(gf, s)) == ml.pack_sym(gf, act.on_sym(s))


def test_singular_matrix_rejected():
    gf = field_of_order(2)
    with pytest.raises(ValueError):
        ml.MatrixAction(gf, ((0, 0, 0, 0),) * 4)
