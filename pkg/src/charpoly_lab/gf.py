"""Finite fields F_q, q = p^k: arithmetic, trace, additive characters.

Elements are integer codes in [0, q).  The code of the element with
polynomial-basis coefficients (c_0, ..., c_{k-1}) over F_p is
sum_i c_i p^i, so prime-field elements are ordinary residues.  For k > 1
the field is realized as F_p[t] / (m(t)) where m is the lexicographically
least monic irreducible of degree k over F_p (coefficient tuples compared
low-to-high); the choice is deterministic, so every run builds the same
field and all downstream results are reproducible byte for byte.
"""

import cmath
import itertools
import math

MAX_P = (1 << 63) - 1  # keeps multiply-then-reduce inside native precision
EXT_Q_CAP = 1 << 20    # extension fields are enumerated; keep them desk scale
TABLE_CAP = 512        # below this size, k > 1 fields get full op tables

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Minimal polynomial arithmetic over F_p, used only to select and validate
# the field modulus.  General polynomial machinery lives in fqpoly; the
# duplication here is deliberate (no circular import, and it doubles as an
# independent check of fqpoly's irreducibility routines in the tests).

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmulmod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    # reduce mod m (monic)
    dm = len(m) - 1
    while len(out) - 1 >= dm:
        lead = out[-1]
        if lead:
            shift = len(out) - 1 - dm
            for i in range(dm):
                out[shift + i] = (out[shift + i] - lead * m[i]) % p
        out.pop()
    return _ptrim(out)


def _ppowmod(a, e, m, p):
    result = [1]
    base = list(a)
    while e > 0:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # a mod b, b monicized on the fly
        inv = pow(b[-1], p - 2, p)
        bm = [(c * inv) % p for c in b]
        r = list(a)
        while len(r) >= len(bm) and r:
            lead = r[-1]
            if lead:
                shift = len(r) - len(bm)
                for i in range(len(bm)):
                    r[shift + i] = (r[shift + i] - lead * bm[i]) % p
            r.pop()
            _ptrim(r)
            if not r:
                break
        a, b = b, _ptrim(r)
    return a


def _is_irreducible_mod_p(f, p) -> bool:
    """Rabin test for a monic polynomial f (low-to-high coeffs) over F_p."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    if f[0] == 0:  # divisible by t
        return False
    t = [0, 1]
    # x_j = t^(p^j) mod f, built by iterated Frobenius
    xj = list(t)
    frob = {}
    for j in range(1, k + 1):
        xj = _ppowmod(xj, p, f, p)
        frob[j] = list(xj)
    if _ptrim([(c - tc) % p for c, tc in itertools.zip_longest(frob[k], t, fillvalue=0)]):
        return False
    for ell in {d for d in range(2, k + 1) if k % d == 0 and is_prime(d)}:
        diff = _ptrim([(c - tc) % p
                       for c, tc in itertools.zip_longest(frob[k // ell], t, fillvalue=0)])
        g = _pgcd(f, diff, p)
        if len(g) - 1 != 0:
            return False
    return True


def least_irreducible(p: int, k: int) -> tuple:
    """Lexicographically least monic irreducible of degree k over F_p.

    Returns the full coefficient tuple (c_0, ..., c_{k-1}, 1).  Tuples are
    compared low-to-high, i.e. (0,1) < (1,0).
    """
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        if _is_irreducible_mod_p(f, p):
            return tuple(f)
    raise AssertionError("no irreducible of degree %d over F_%d" % (k, p))


class Field:
    """The finite field F_{p^k}, acting on integer element codes."""

    __slots__ = ("p", "k", "q", "modulus", "_mul_tab", "_inv_tab", "_trace_tab")

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if p > MAX_P:
            raise ValueError(f"p = {p} exceeds the 63-bit bound")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        q = p ** k
        if k > 1 and q > EXT_Q_CAP:
            raise ValueError(f"q = {q} too large for an extension field (cap {EXT_Q_CAP})")
        self.p = p
        self.k = k
        self.q = q
        if k == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = least_irreducible(p, k)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree k")
            if not _is_irreducible_mod_p(list(modulus), p):
                raise ValueError("modulus is not irreducible over F_p")
            self.modulus = modulus
        self._mul_tab = None
        self._inv_tab = None
        self._trace_tab = None

    # -- identity ----------------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus))

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"F_{self.p}"
        return f"F_{self.q} (= F_{self.p}[t]/{self.modulus})"

    def __getstate__(self):
        return (self.p, self.k, self.modulus)

    def __setstate__(self, state):
        self.p, self.k, self.modulus = state
        self.q = self.p ** self.k
        self._mul_tab = self._inv_tab = self._trace_tab = None

    # -- element codecs ----------------------------------------------------
    def decode(self, a: int) -> tuple:
        """Integer code -> coefficient tuple (c_0, ..., c_{k-1})."""
        coeffs = []
        for _ in range(self.k):
            a, c = divmod(a, self.p)
            coeffs.append(c)
        return tuple(coeffs)

    def encode(self, coeffs) -> int:
        a = 0
        for c in reversed(list(coeffs)):
            a = a * self.p + c % self.p
        return a

    def elements(self):
        return range(self.q)

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element code of {self!r}")
        return a

    # -- arithmetic --------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.k == 1:
            return (a + b) % p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if self.k == 1:
            return (-a) % p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if self.q <= TABLE_CAP:
            if self._mul_tab is None:
                self._build_tables()
            return self._mul_tab[a][b]
        return self._mul_slow(a, b)

    def _mul_slow(self, a, b):
        prod = _pmulmod(list(self.decode(a)), list(self.decode(b)),
                        list(self.modulus), self.p)
        return self.encode(prod + [0] * (self.k - len(prod)))

    def _build_tables(self):
        q = self.q
        tab = [[0] * q for _ in range(q)]
        for a in range(q):
            row = tab[a]
            for b in range(a, q):
                v = self._mul_slow(a, b)
                row[b] = v
                tab[b][a] = v
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if tab[a][b] == 1:
                    inv[a] = b
                    break
        self._mul_tab = tab
        self._inv_tab = inv

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inversion of zero in {self!r}")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self.q <= TABLE_CAP:
            if self._inv_tab is None:
                self._build_tables()
            return self._inv_tab[a]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a = self.inv(a)
            e = -e
        result = 1  # the identity has code 1 in every representation
        base = a
        while e > 0:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- trace and characters ----------------------------------------------
    def trace(self, a: int) -> int:
        """Tr(a) = a + a^p + ... + a^(p^(k-1)), as a residue mod p."""
        if self.k == 1:
            return a % self.p
        if self._trace_tab is not None:
            return self._trace_tab[a]
        if self.q <= EXT_Q_CAP:
            self._trace_tab = [self._trace_slow(x) for x in range(self.q)]
            return self._trace_tab[a]
        return self._trace_slow(a)

    def _trace_slow(self, a):
        x = a
        s = a
        for _ in range(self.k - 1):
            x = self.pow(x, self.p)
            s = self.add(s, x)
        assert s < self.p, "trace landed outside the prime subfield"
        return s

    def char_value(self, a: int) -> complex:
        """The canonical nontrivial additive character chi(a) = e^(2*pi*i*Tr(a)/p)."""
        t = self.trace(a)
        if self.p == 2:
            return -1.0 + 0j if t else 1.0 + 0j
        return cmath.exp(2j * math.pi * t / self.p)


def parse_field_spec(spec: str) -> Field:
    """Parse a field spec: "q=p^k" or "q=N" (N factored; must be a prime power)."""
    s = spec.strip().lower()
    if s.startswith("q="):
        s = s[2:]
    if "^" in s:
        p_str, k_str = s.split("^", 1)
        return Field(int(p_str), int(k_str))
    n = int(s)
    if n < 2:
        raise ValueError(f"{spec!r}: not a prime power")
    if is_prime(n):
        return Field(n, 1)
    # find the smallest prime factor; a prime power must then be p^k exactly
    p = None
    d = 2
    while d * d <= n:
        if n % d == 0:
            p = d
            break
        d += 1
    if p is None:
        raise ValueError(f"{spec!r}: not a prime power")
    k = 0
    m = n
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"{spec!r}: {n} is not a prime power")
    return Field(p, k)
