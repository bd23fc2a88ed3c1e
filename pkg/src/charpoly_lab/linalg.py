"""Dense exact linear algebra: matrices over F_q and over Z.

Matrices are lists of row lists.  Over F_q entries are element codes and
every routine works for any prime power via the Field ops; the prime-field
hot paths live in kernels.  Over Z the characteristic polynomial is
computed division-free (Berkowitz) in arbitrary precision, so one exact
polynomial can later be reduced modulo thousands of primes.
"""

from .gf import Field
from . import fqpoly


def mat_from_text(text: str):
    """Parse "a,b;c,d" into a list of row lists of ints."""
    rows = [[int(tok) for tok in row.split(",")] for row in text.strip().split(";")]
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix text")
    return rows


def reduce_rows(field: Field, rows):
    """Reduce integer entries into field codes (prime fields only for k > 1 codes)."""
    if field.k == 1:
        p = field.p
        return [[e % p for e in row] for row in rows]
    q = field.q
    return [[e % q for e in row] for row in rows]


# ---------------------------------------------------------------------------
# Gaussian elimination over F_q (any q; reference implementation)

def _echelon(field: Field, rows):
    """Row echelon form; returns (rows, pivot column list)."""
    a = [list(r) for r in rows]
    k = len(a)
    n = len(a[0]) if k else 0
    pivots = []
    r = 0
    for c in range(n):
        if r == k:
            break
        piv = next((i for i in range(r, k) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.mul(inv, x) for x in a[r]]
        for i in range(k):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(field: Field, rows) -> int:
    if not rows:
        return 0
    return len(_echelon(field, rows)[1])


def kernel_dim(field: Field, rows) -> int:
    """Dimension of the right kernel (n columns minus rank)."""
    if not rows:
        return 0
    return len(rows[0]) - rank(field, rows)


def det(field: Field, rows) -> int:
    """Determinant over F_q by elimination with pivot bookkeeping."""
    a = [list(r) for r in rows]
    n = len(a)
    acc = 1
    sign_flips = 0
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign_flips += 1
        acc = field.mul(acc, a[c][c])
        inv = field.inv(a[c][c])
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = field.mul(a[i][c], inv)
                a[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(a[i], a[c])]
    if sign_flips % 2:
        acc = field.neg(acc)
    return acc


def nullspace(field: Field, rows):
    """Basis of the right kernel, one vector per non-pivot column."""
    if not rows:
        return []
    n = len(rows[0])
    ech, pivots = _echelon(field, rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(ech[r][fc])
        basis.append(tuple(v))
    return basis


def charpoly_fq(field: Field, rows) -> tuple:
    """det(tI - M) over F_q, monic degree n, coeffs low-to-high.

    Hessenberg reduction by similarity transforms, then the last-column
    recurrence on leading principal blocks; O(n^3) field operations.
    """
    n = len(rows)
    h = [list(r) for r in rows]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j] != 0), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for r in range(n):
                h[r][piv], h[r][j + 1] = h[r][j + 1], h[r][piv]
        inv = field.inv(h[j + 1][j])
        for i in range(j + 2, n):
            if h[i][j] != 0:
                f = field.mul(h[i][j], inv)
                for c in range(j, n):
                    h[i][c] = field.sub(h[i][c], field.mul(f, h[j + 1][c]))
                for r in range(n):
                    h[r][j + 1] = field.add(h[r][j + 1], field.mul(f, h[r][i]))
    polys = [(1,)]
    for i in range(1, n + 1):
        prev = polys[i - 1]
        cur = list((0,) + prev)  # t * p_{i-1}
        dii = h[i - 1][i - 1]
        for c in range(len(prev)):
            cur[c] = field.sub(cur[c], field.mul(dii, prev[c]))
        cum = 1
        for r in range(i - 1, 0, -1):
            cum = field.mul(cum, h[r][r - 1])
            if cum == 0:
                break
            term = field.mul(h[r - 1][i - 1], cum)
            if term != 0:
                pr = polys[r - 1]
                for c in range(len(pr)):
                    cur[c] = field.sub(cur[c], field.mul(term, pr[c]))
        polys.append(tuple(cur))
    return polys[n]


# ---------------------------------------------------------------------------
# Integer matrices

def charpoly_z(rows) -> tuple:
    """det(tI - M) for an integer matrix, division-free (Berkowitz).

    Coefficients low-to-high, exact arbitrary-precision integers; reducing
    mod p recovers charpoly_fq of the reduced matrix.
    """
    n = len(rows)
    if n == 0:
        return (1,)
    poly = [1, -rows[0][0]]  # high-to-low while iterating
    for r in range(1, n):
        a = rows[r][r]
        row_left = rows[r][:r]
        col_up = [rows[i][r] for i in range(r)]
        # s_j = row_left . A_sub^j . col_up for j = 0..r-1
        s = []
        v = col_up
        for _ in range(r):
            s.append(sum(x * y for x, y in zip(row_left, v)))
            v = [sum(rows[i][j] * v[j] for j in range(r)) for i in range(r)]
        col = [1, -a] + [-x for x in s]
        new = [0] * (r + 2)
        for i in range(r + 2):
            acc = 0
            lo = max(0, i - len(col) + 1)
            for j in range(lo, min(i, r) + 1):
                acc += col[i - j] * poly[j]
            new[i] = acc
        poly = new
    return tuple(reversed(poly))


def reduce_poly_mod(coeffs, field: Field) -> tuple:
    """Reduce an integer polynomial modulo p into field codes (k = 1)."""
    if field.k != 1:
        raise ValueError("integer polynomials reduce to prime fields only")
    p = field.p
    return fqpoly.trim([c % p for c in coeffs])


def hadamard_disc_bound(n: int, h: int) -> int:
    """Upper bound H^(n(n-1)) * n^(n^2) for |disc(psi)|, any psi dividing the
    characteristic polynomial of an n x n matrix with entries bounded by H."""
    if n < 1 or h < 1:
        raise ValueError("need n >= 1 and H >= 1")
    return h ** (n * (n - 1)) * n ** (n * n)
