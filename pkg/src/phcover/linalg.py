"""Exact linear algebra over GF(2^k).

Vectors are length-4 tuples of field elements over the standard basis
e1..e4; covectors are length-4 tuples over the dual basis f1..f4.
Matrices are 4-tuples of row tuples and act on the right, so the image
of a row vector v under m is v*m and row a of m is the image of e_a.
Covectors transform by the inverse transpose, which keeps
evaluate(f^g, v^g) == evaluate(f, v).

Also provides F2 affine system solving with inconsistency certificates
(numpy uint8 matrices), used by the order-2 and lifting computations.
"""

from __future__ import annotations

import numpy as np

from .field import GF

E4 = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
ZERO4 = (0, 0, 0, 0)


def evaluate(gf: GF, f, v) -> int:
    """Apply the covector f to the vector v: sum_i f_i * v_i."""
    acc = 0
    for fi, vi in zip(f, v):
        acc ^= gf.mul(fi, vi)
    return acc


def vec_add(u, v):
    """Coefficientwise sum; characteristic 2, so no field context needed."""
    return tuple(a ^ b for a, b in zip(u, v))


def vec_scale(gf: GF, c: int, v):
    return tuple(gf.mul(c, a) for a in v)


def is_zero(v) -> bool:
    return not any(v)


def mat_vec(gf: GF, v, m):
    """Row vector times matrix: (v*m)_c = sum_r v_r m[r][c]."""
    out = [0, 0, 0, 0]
    for r, vr in enumerate(v):
        if vr:
            row = m[r]
            for c in range(4):
                out[c] ^= gf.mul(vr, row[c])
    return tuple(out)


def mat_mul(gf: GF, a, b):
    return tuple(mat_vec(gf, row, b) for row in a)


def transpose(m):
    return tuple(zip(*m))


def identity4():
    return E4


def rref(gf: GF, rows, ncols: int):
    """Reduced row echelon form; returns (reduced nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv_inv = gf.inv(rows[r][c])
        rows[r] = [gf.mul(piv_inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                coef = rows[i][c]
                rows[i] = [x ^ gf.mul(coef, y) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


def rank(gf: GF, rows, ncols: int = 4) -> int:
    return len(rref(gf, rows, ncols)[1])


def kernel(gf: GF, functionals, dim: int = 4):
    """Basis of the joint null space {v : sum_i f_i v_i = 0 for every f}.

    Works symmetrically for lists of covectors (returning vectors) and
    lists of vectors (returning covectors).
    """
    reduced, pivots = rref(gf, functionals, dim)
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for c in free:
        v = [0] * dim
        v[c] = 1
        for row, p in zip(reduced, pivots):
            v[p] = row[c]  # -row[c], sign-free in characteristic 2
        basis.append(tuple(v))
    return basis


def det(gf: GF, m) -> int:
    """Determinant by Gaussian elimination (row swaps are sign-free in char 2)."""
    a = [list(r) for r in m]
    n = len(a)
    d = 1
    for c in range(n):
        pr = next((i for i in range(c, n) if a[i][c]), None)
        if pr is None:
            return 0
        a[c], a[pr] = a[pr], a[c]
        d = gf.mul(d, a[c][c])
        inv = gf.inv(a[c][c])
        for i in range(c + 1, n):
            if a[i][c]:
                coef = gf.mul(a[i][c], inv)
                a[i] = [x ^ gf.mul(coef, y) for x, y in zip(a[i], a[c])]
    return d


def mat_inv(gf: GF, m):
    """Inverse by Gauss-Jordan; raises ValueError on singular input."""
    n = len(m)
    a = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        pr = next((i for i in range(c, n) if a[i][c]), None)
        if pr is None:
            raise ValueError("matrix is singular")
        a[c], a[pr] = a[pr], a[c]
        inv = gf.inv(a[c][c])
        a[c] = [gf.mul(inv, x) for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                coef = a[i][c]
                a[i] = [x ^ gf.mul(coef, y) for x, y in zip(a[i], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def is_unimodular(gf: GF, m) -> bool:
    return det(gf, m) == 1


def transvection(gf: GF, i: int, j: int, lam: int):
    """Identity plus lam in off-diagonal position (i, j); determinant 1."""
    if i == j:
        raise ValueError("transvection needs i != j")
    rows = [list(r) for r in E4]
    rows[i][j] = lam
    return tuple(tuple(r) for r in rows)


def random_sl4(gf: GF, rng, length: int = 20):
    """Product of `length` random transvections; unimodular by construction."""
    m = E4
    for _ in range(length):
        i = rng.randrange(4)
        j = (i + 1 + rng.randrange(3)) % 4
        m = mat_mul(gf, m, transvection(gf, i, j, rng.randrange(gf.order)))
    return m


def random_gl4(gf: GF, rng):
    """Uniformly random invertible matrix by rejection."""
    while True:
        m = tuple(tuple(rng.randrange(gf.order) for _ in range(4)) for _ in range(4))
        if det(gf, m) != 0:
            return m


# ----------------------------------------------------------------------
# F2 affine systems
# ----------------------------------------------------------------------

def f2_matrix_from_map(fn, nin: int, nout: int) -> np.ndarray:
    """Matrix (nout x nin, uint8) of an F2-linear map given as a bit-vector function.

    fn takes and returns numpy uint8 vectors.
    """
    a = np.zeros((nout, nin), dtype=np.uint8)
    for j in range(nin):
        e = np.zeros(nin, dtype=np.uint8)
        e[j] = 1
        a[:, j] = fn(e)
    return a


def solve_affine_f2(a_matrix, rhs):
    """Solve A x = b over F2.

    Returns (x0, kernel_basis, None) when consistent, where x0 is one
    solution and kernel_basis is a list of uint8 vectors spanning the
    solution space of A x = 0; or (None, None, certificate) when
    inconsistent, where certificate is a uint8 row combination y with
    y A = 0 and y . b = 1.
    """
    a = (np.asarray(a_matrix, dtype=np.uint8) & 1).copy()
    b = (np.asarray(rhs, dtype=np.uint8) & 1).copy()
    m, n = a.shape if a.ndim == 2 else (0, 0)
    if a.ndim != 2:
        raise ValueError("a_matrix must be 2-dimensional")
    if b.shape != (m,):
        raise ValueError("rhs length does not match the number of rows")

    track = np.eye(m, dtype=np.uint8)
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        hit = np.nonzero(a[r:, c])[0]
        if hit.size == 0:
            continue
        p = r + int(hit[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
            b[[r, p]] = b[[p, r]]
            track[[r, p]] = track[[p, r]]
        ones = np.nonzero(a[:, c])[0]
        ones = ones[ones != r]
        if ones.size:
            a[ones] ^= a[r]
            b[ones] ^= b[r]
            track[ones] ^= track[r]
        pivots.append(c)
        r += 1

    bad = np.nonzero((a.sum(axis=1) == 0) & (b == 1))[0]
    if bad.size:
        return None, None, track[int(bad[0])]

    x0 = np.zeros(n, dtype=np.uint8)
    for i, c in enumerate(pivots):
        x0[c] = b[i]
    pivot_set = set(pivots)
    basis = []
    for c in range(n):
        if c in pivot_set:
            continue
        v = np.zeros(n, dtype=np.uint8)
        v[c] = 1
        for i, pc in enumerate(pivots):
            v[pc] = a[i, c]
        basis.append(v)
    return x0, basis, None
