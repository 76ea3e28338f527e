"""The exterior square W of V, its dual, the symmetric square S2(W),
and the induced matrix actions.

Coordinate conventions, fixed once so that every export is reproducible:

* Bivectors have 6 coordinates over the ordered basis
  w1 = e1^e2, w2 = e1^e3, w3 = e1^e4, w4 = e2^e3, w5 = e2^e4, w6 = e3^e4.
* Dual bivectors have 6 coordinates over fi^fj in the same index order.
  They are kept as a separate notion from bivectors: the only bridge is
  the explicit duality map :func:`phi`.
* Symmetric tensors have 21 coordinates over the monomials wi*wj,
  i <= j, ordered lexicographically by (i, j).
* N is the quotient of S2(W) by the two-element subgroup {0, U}; an
  element is represented by the lexicographically smaller coordinate
  vector of the two coset members (each coordinate read as its bit
  value), which is what :func:`n_project` computes.

In characteristic 2 all wedge/symmetrisation signs vanish, squaring is
additive (a + b)^2 = a^2 + b^2, and the span of squares W2 consists of
exactly the symmetric tensors with diagonal support.
"""

from __future__ import annotations

from functools import lru_cache

from .field import GF
from .linalg import E4, det, evaluate, mat_inv, mat_vec, transpose

# Index pairs (a, b), a < b, of the bivector basis slots w1..w6.
BIV_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# Monomial pairs (i, j), i <= j, of the 21 symmetric-tensor slots.
SYM_PAIRS = tuple((i, j) for i in range(6) for j in range(i, 6))
SYM_SLOT = {pair: s for s, pair in enumerate(SYM_PAIRS)}
DIAG_SLOTS = tuple(SYM_SLOT[(i, i)] for i in range(6))

ZERO6 = (0,) * 6
ZERO21 = (0,) * 21


def wedge(gf: GF, u, v):
    """Exterior product of two vectors: slot (a, b) carries u_a v_b + u_b v_a."""
    return tuple(gf.mul(u[a], v[b]) ^ gf.mul(u[b], v[a]) for a, b in BIV_PAIRS)


def wedge_covectors(gf: GF, f, g):
    """Exterior product of two covectors, coordinates over fi^fj (a dual bivector)."""
    return tuple(gf.mul(f[a], g[b]) ^ gf.mul(f[b], g[a]) for a, b in BIV_PAIRS)


def wedge4(gf: GF, a, b, c, d) -> int:
    """Scalar a^b^c^d under the normalisation e1^e2^e3^e4 -> 1 (a determinant)."""
    return det(gf, (a, b, c, d))


def biv_add(a, b):
    return tuple(x ^ y for x, y in zip(a, b))


def biv_scale(gf: GF, c: int, a):
    return tuple(gf.mul(c, x) for x in a)


def phi(dual):
    """The duality map on coordinates: fi^fj goes to the complementary basis
    bivector, which in the fixed slot order is coordinate reversal."""
    return tuple(reversed(dual))


@lru_cache(maxsize=None)
def _dual_pairing_table(gf: GF):
    """B(fi^fj, ea^eb) computed from functional evaluation on decomposables."""
    tab = []
    for i, j in BIV_PAIRS:
        row = []
        for a, b in BIV_PAIRS:
            fi, fj, ea, eb = E4[i], E4[j], E4[a], E4[b]
            row.append(
                gf.mul(evaluate(gf, fi, ea), evaluate(gf, fj, eb))
                ^ gf.mul(evaluate(gf, fi, eb), evaluate(gf, fj, ea))
            )
        tab.append(tuple(row))
    return tuple(tab)


@lru_cache(maxsize=None)
def _chi_pairing_table(gf: GF):
    """(w_s ^ w_t)^chi on basis bivectors, via the 4-fold wedge."""
    tab = []
    for i, j in BIV_PAIRS:
        row = []
        for a, b in BIV_PAIRS:
            row.append(wedge4(gf, E4[i], E4[j], E4[a], E4[b]))
        tab.append(tuple(row))
    return tuple(tab)


def pairing_dual(gf: GF, dual, biv) -> int:
    """B(f, v) for a dual bivector and a bivector, extended bilinearly from
    B(f1^f2, v1^v2) = f1(v1) f2(v2) + f1(v2) f2(v1)."""
    tab = _dual_pairing_table(gf)
    acc = 0
    for s, ds in enumerate(dual):
        if ds:
            for t, bt in enumerate(biv):
                if bt and tab[s][t]:
                    acc ^= gf.mul(gf.mul(ds, bt), tab[s][t])
    return acc


def pairing_chi(gf: GF, x, y) -> int:
    """(x ^ y)^chi for two bivectors, extended bilinearly from the 4-wedge."""
    tab = _chi_pairing_table(gf)
    acc = 0
    for s, xs in enumerate(x):
        if xs:
            for t, yt in enumerate(y):
                if yt and tab[s][t]:
                    acc ^= gf.mul(gf.mul(xs, yt), tab[s][t])
    return acc


def phi_consistency_check(gf: GF, rng=None, samples: int = 50) -> bool:
    """Check that the coordinate-permutation phi intertwines the two canonical
    pairings: B(f, v) == (phi(f) ^ v)^chi on all basis pairs, and on random
    pairs when an rng is supplied."""
    for s in range(6):
        f = tuple(1 if t == s else 0 for t in range(6))
        for u in range(6):
            v = tuple(1 if t == u else 0 for t in range(6))
            if pairing_dual(gf, f, v) != pairing_chi(gf, phi(f), v):
                return False
    if rng is not None:
        for _ in range(samples):
            f = tuple(rng.randrange(gf.order) for _ in range(6))
            v = tuple(rng.randrange(gf.order) for _ in range(6))
            if pairing_dual(gf, f, v) != pairing_chi(gf, phi(f), v):
                return False
    return True


# ----------------------------------------------------------------------
# symmetric square
# ----------------------------------------------------------------------

def sym_mul(gf: GF, a, b):
    """Product of two bivectors in S2(W): slot (i, j) carries a_i b_j + a_j b_i
    off the diagonal and a_i b_i on it."""
    out = []
    for i, j in SYM_PAIRS:
        if i == j:
            out.append(gf.mul(a[i], b[i]))
        else:
            out.append(gf.mul(a[i], b[j]) ^ gf.mul(a[j], b[i]))
    return tuple(out)


def square(gf: GF, a):
    """a*a, which in characteristic 2 has diagonal support with entries a_i^2."""
    return sym_mul(gf, a, a)


def sym_add(s, t):
    return tuple(x ^ y for x, y in zip(s, t))


def sym_scale(gf: GF, c: int, s):
    return tuple(gf.mul(c, x) for x in s)


@lru_cache(maxsize=None)
def big_u(gf: GF):
    """The invariant element, evaluated from its defining alternating sum at
    the standard basis (whose 4-wedge is 1)."""
    w, x, y, z = E4
    assert wedge4(gf, w, x, y, z) == 1
    u = sym_mul(gf, wedge(gf, w, x), wedge(gf, y, z))
    u = sym_add(u, sym_mul(gf, wedge(gf, w, y), wedge(gf, z, x)))
    u = sym_add(u, sym_mul(gf, wedge(gf, w, z), wedge(gf, x, y)))
    return u


def u_from_basis(gf: GF, w, x, y, z):
    """The same alternating sum at an arbitrary basis with 4-wedge equal 1."""
    if wedge4(gf, w, x, y, z) != 1:
        raise ValueError("basis is not unimodular")
    u = sym_mul(gf, wedge(gf, w, x), wedge(gf, y, z))
    u = sym_add(u, sym_mul(gf, wedge(gf, w, y), wedge(gf, z, x)))
    u = sym_add(u, sym_mul(gf, wedge(gf, w, z), wedge(gf, x, y)))
    return u


_OFFDIAG_SLOTS = tuple(t for t in range(21) if t not in DIAG_SLOTS)


def in_w2(gf: GF, s) -> bool:
    """Membership in the span of squares: diagonal support only."""
    return all(s[t] == 0 for t in _OFFDIAG_SLOTS)


def in_w2_plus_u(gf: GF, s) -> bool:
    """Membership in the F2-space spanned by the squares and U."""
    return in_w2(gf, s) or in_w2(gf, sym_add(s, big_u(gf)))


# ----------------------------------------------------------------------
# packed representation (one int per symmetric tensor)
# ----------------------------------------------------------------------

def pack_sym(gf: GF, s) -> int:
    """Pack 21 coordinates, earliest slot in the highest bits, so that integer
    comparison is lexicographic comparison of coordinate vectors."""
    k = gf.k
    acc = 0
    for t, c in enumerate(s):
        acc |= c << (k * (20 - t))
    return acc


def unpack_sym(gf: GF, x: int):
    k = gf.k
    mask = gf.order - 1
    return tuple((x >> (k * (20 - t))) & mask for t in range(21))


@lru_cache(maxsize=None)
def u_packed(gf: GF) -> int:
    return pack_sym(gf, big_u(gf))


@lru_cache(maxsize=None)
def offdiag_mask(gf: GF) -> int:
    """Packed mask of all off-diagonal coordinate bits."""
    k = gf.k
    acc = 0
    for t in range(21):
        if t not in DIAG_SLOTS:
            acc |= (gf.order - 1) << (k * (20 - t))
    return acc


def packed_in_w2(gf: GF, x: int) -> bool:
    return x & offdiag_mask(gf) == 0


def packed_in_w2_plus_u(gf: GF, x: int) -> bool:
    off = x & offdiag_mask(gf)
    return off == 0 or off == u_packed(gf)


# ----------------------------------------------------------------------
# the quotient N = S2(W) / {0, U}
# ----------------------------------------------------------------------

def n_project_packed(gf: GF, x: int) -> int:
    """Canonical representative of the coset {x, x + U}: the smaller packing."""
    y = x ^ u_packed(gf)
    return x if x <= y else y


def n_project(gf: GF, s):
    return unpack_sym(gf, n_project_packed(gf, pack_sym(gf, s)))


def lift_n(gf: GF, n):
    """Both symmetric tensors in the coset represented by n."""
    return n, sym_add(n, big_u(gf))


def n_add(gf: GF, a, b):
    """Induced addition on canonical representatives."""
    return n_project(gf, sym_add(a, b))


def is_canonical_n(gf: GF, s) -> bool:
    return n_project(gf, s) == tuple(s)


# ----------------------------------------------------------------------
# induced matrix actions
# ----------------------------------------------------------------------

class MatrixAction:
    """All induced actions of one 4x4 matrix, computed once and cached.

    Vectors act on the right (v -> v*m); covectors by the inverse
    transpose; bivectors functorially through the wedge; symmetric
    tensors multiplicatively; N through canonical representatives,
    which requires the matrix to be unimodular so that U is fixed.
    """

    def __init__(self, gf: GF, m):
        self.gf = gf
        self.m = tuple(tuple(row) for row in m)
        self.det = det(gf, m)
        if self.det == 0:
            raise ValueError("matrix is singular")
        self.minv_t = transpose(mat_inv(gf, m))
        # Row a of m is the image of e_a, so the image of w_(a,b) is
        # the wedge of rows a and b.
        self.w_rows = tuple(wedge(gf, self.m[a], self.m[b]) for a, b in BIV_PAIRS)
        self.s2_rows = tuple(sym_mul(gf, self.w_rows[i], self.w_rows[j]) for i, j in SYM_PAIRS)

    def on_vector(self, v):
        return mat_vec(self.gf, v, self.m)

    def on_covector(self, f):
        return mat_vec(self.gf, f, self.minv_t)

    def on_bivector(self, a):
        gf = self.gf
        out = [0] * 6
        for s, c in enumerate(a):
            if c:
                row = self.w_rows[s]
                for t in range(6):
                    out[t] ^= gf.mul(c, row[t])
        return tuple(out)

    def on_sym(self, s):
        gf = self.gf
        out = [0] * 21
        for idx, c in enumerate(s):
            if c:
                row = self.s2_rows[idx]
                for t in range(21):
                    out[t] ^= gf.mul(c, row[t])
        return tuple(out)

    def on_n(self, n):
        if self.det != 1:
            raise ValueError("the quotient action needs a unimodular matrix")
        return n_project(self.gf, self.on_sym(n))

    # -- packed application, for bulk verification loops ---------------
    @property
    def packed_cols(self):
        cols = getattr(self, "_packed_cols", None)
        if cols is None:
            gf, k = self.gf, self.gf.k
            cols = []
            for t in range(21):
                for bit in range(k):
                    s = [0] * 21
                    s[t] = 1 << bit
                    cols.append(pack_sym(gf, self.on_sym(tuple(s))))
            # index by packed input bit position
            by_pos = [0] * (21 * k)
            for t in range(21):
                for bit in range(k):
                    by_pos[k * (20 - t) + bit] = cols[t * k + bit]
            cols = by_pos
            self._packed_cols = cols
        return cols

    def on_sym_packed(self, x: int) -> int:
        cols = self.packed_cols
        acc = 0
        while x:
            low = x & -x
            acc ^= cols[low.bit_length() - 1]
            x ^= low
        return acc

    def on_n_packed(self, x: int) -> int:
        if self.det != 1:
            raise ValueError("the quotient action needs a unimodular matrix")
        return n_project_packed(self.gf, self.on_sym_packed(x))


@lru_cache(maxsize=2048)
def action(gf: GF, m) -> MatrixAction:
    return MatrixAction(gf, m)
