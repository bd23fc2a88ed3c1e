"""Hot-loop kernels for matrices over prime fields F_p (int64 entries).

Compiled with numba when available; the pure-numpy fallbacks compute the
same integers, so results are identical either way.  The generic
field-agnostic routines in linalg are the reference implementations these
are tested against.
"""

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(f):
            return f

        return deco


@njit(cache=True)
def _powmod_int(a, e, p):
    r = 1
    a = a % p
    while e > 0:
        if e & 1:
            r = (r * a) % p
        a = (a * a) % p
        e >>= 1
    return r


@njit(cache=True)
def rank_mod_p(a, p):
    """Rank of a k x n int64 matrix over F_p.  Destroys a."""
    k, n = a.shape
    r = 0
    for c in range(n):
        if r == k:
            break
        piv = -1
        for i in range(r, k):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        pv = a[r, c]
        for i in range(r + 1, k):
            f = a[i, c]
            if f != 0:
                for j in range(c, n):
                    a[i, j] = (a[i, j] * pv - f * a[r, j]) % p
        r += 1
    return r


@njit(cache=True)
def charpoly_mod_p(a, p):
    """Characteristic polynomial of det(tI - A) over F_p, coeffs low-to-high.

    Hessenberg reduction by similarity, then the standard last-column
    recurrence on leading principal blocks.  Destroys a.
    """
    n = a.shape[0]
    h = a
    for i in range(n):
        for j in range(n):
            h[i, j] %= p
    for j in range(n - 2):
        piv = -1
        for i in range(j + 1, n):
            if h[i, j] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != j + 1:
            for c in range(n):
                t = h[piv, c]
                h[piv, c] = h[j + 1, c]
                h[j + 1, c] = t
            for r in range(n):
                t = h[r, piv]
                h[r, piv] = h[r, j + 1]
                h[r, j + 1] = t
        inv = _powmod_int(h[j + 1, j], p - 2, p)
        for i in range(j + 2, n):
            f = (h[i, j] * inv) % p
            if f != 0:
                for c in range(j, n):
                    h[i, c] = (h[i, c] - f * h[j + 1, c]) % p
                for r in range(n):
                    h[r, j + 1] = (h[r, j + 1] + f * h[r, i]) % p
    polys = np.zeros((n + 1, n + 1), np.int64)
    polys[0, 0] = 1
    for i in range(1, n + 1):
        # p_i = (t - H_ii) p_{i-1} - sum_r H_ri (prod of subdiagonals) p_{r-1}
        for c in range(i, 0, -1):
            polys[i, c] = polys[i - 1, c - 1]
        dii = h[i - 1, i - 1] % p
        for c in range(i):
            polys[i, c] = (polys[i, c] - dii * polys[i - 1, c]) % p
        cum = 1
        for r in range(i - 1, 0, -1):
            cum = (cum * h[r, r - 1]) % p
            if cum == 0:
                break
            term = (h[r - 1, i - 1] * cum) % p
            if term != 0:
                for c in range(r):
                    polys[i, c] = (polys[i, c] - term * polys[r - 1, c]) % p
    return polys[n]


def rank_mod_p_py(a, p):
    """Numpy reference for rank_mod_p (same contract, same results)."""
    a = np.array(a, dtype=np.int64) % p
    k, n = a.shape
    r = 0
    for c in range(n):
        if r == k:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        pv = int(a[r, c])
        rows = a[r + 1:, c] != 0
        if rows.any():
            a[r + 1:][rows] = (a[r + 1:][rows] * pv
                               - np.outer(a[r + 1:, c][rows], a[r])) % p
        r += 1
    return r


if not HAVE_NUMBA:  # pragma: no cover
    rank_mod_p = lambda a, p: rank_mod_p_py(a, p)  # noqa: E731
