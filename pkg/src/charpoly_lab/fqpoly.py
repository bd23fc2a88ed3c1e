"""Polynomial arithmetic and complete factorization over F_q.

Polynomials are coefficient tuples of element codes, low-to-high, with no
trailing zeros; the zero polynomial is the empty tuple.  The factorization
pipeline is squarefree decomposition (characteristic-p aware), then
distinct-degree splitting via t^(q^i) mod f, then randomized equal-degree
splitting seeded by the caller, so results are deterministic per seed.

Samplers that only need factor *degrees* should call factor_degrees, which
skips the equal-degree stage entirely and, over F_2, runs on integer
bitsets (see gf2x).
"""

from dataclasses import dataclass

from . import gf2x
from .gf import Field
from .rng import py_rng

ZERO = ()
ONE = (1,)


def trim(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def degree(a) -> int:
    """Degree, with deg 0 = -1."""
    return len(a) - 1


def add(field: Field, a, b) -> tuple:
    if field.k == 1:
        p = field.p
        n = max(len(a), len(b))
        return trim([( (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p
                     for i in range(n)])
    n = max(len(a), len(b))
    return trim([field.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0)
                 for i in range(n)])


def neg(field: Field, a) -> tuple:
    return tuple(field.neg(c) for c in a)


def sub(field: Field, a, b) -> tuple:
    return add(field, a, neg(field, b))


def scale(field: Field, a, c) -> tuple:
    if c == 0:
        return ZERO
    return trim([field.mul(x, c) for x in a])


def mul(field: Field, a, b) -> tuple:
    if not a or not b:
        return ZERO
    if field.k == 1:
        p = field.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % p
        return trim(out)
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = field.add(out[i + j], field.mul(ai, bj))
    return trim(out)


def divrem(field: Field, a, b):
    """Quotient and remainder; b must be nonzero."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    da, db = degree(a), degree(b)
    if da < db:
        return ZERO, tuple(a)
    inv_lead = field.inv(b[-1])
    rem = list(a)
    quo = [0] * (da - db + 1)
    if field.k == 1:
        p = field.p
        for i in range(da - db, -1, -1):
            c = (rem[db + i] * inv_lead) % p
            if c:
                quo[i] = c
                for j in range(db + 1):
                    rem[i + j] = (rem[i + j] - c * b[j]) % p
    else:
        for i in range(da - db, -1, -1):
            c = field.mul(rem[db + i], inv_lead)
            if c:
                quo[i] = c
                for j in range(db + 1):
                    rem[i + j] = field.sub(rem[i + j], field.mul(c, b[j]))
    return trim(quo), trim(rem[:db])


def mod(field: Field, a, m) -> tuple:
    return divrem(field, a, m)[1]


def monic(field: Field, a) -> tuple:
    if not a:
        return ZERO
    if a[-1] == 1:
        return tuple(a)
    return scale(field, a, field.inv(a[-1]))


def gcd(field: Field, a, b) -> tuple:
    """Monic gcd; gcd(a, 0) = monic(a)."""
    a, b = tuple(a), tuple(b)
    while b:
        a, b = b, mod(field, a, b)
    return monic(field, a)


def powmod(field: Field, base, e: int, modulus) -> tuple:
    """base^e reduced mod modulus, by square-and-multiply."""
    if degree(modulus) < 1:
        raise ValueError("powmod needs a modulus of degree >= 1")
    result = ONE
    base = mod(field, base, modulus)
    while e > 0:
        if e & 1:
            result = mod(field, mul(field, result, base), modulus)
        base = mod(field, mul(field, base, base), modulus)
        e >>= 1
    return result


def evaluate(field: Field, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = field.add(field.mul(acc, x), c)
    return acc


def derivative(field: Field, a) -> tuple:
    if field.k == 1:
        p = field.p
        return trim([(i * a[i]) % p for i in range(1, len(a))])
    out = []
    for i in range(1, len(a)):
        c = a[i]
        s = 0
        for _ in range(i % field.p):
            s = field.add(s, c)
        out.append(s)
    return trim(out)


def pth_root(field: Field, a) -> tuple:
    """Inverse of x -> x^p on polynomials of the form u(t^p)."""
    p, k = field.p, field.k
    out = []
    for i in range(0, len(a), p):
        c = a[i]
        # p-th root of a coefficient is c^(p^(k-1))
        out.append(field.pow(c, p ** (k - 1)) if k > 1 else c)
    for i, c in enumerate(a):
        if i % p and c:
            raise ArithmeticError("polynomial is not a p-th power")
    return trim(out)


# ---------------------------------------------------------------------------
# Factorization pipeline

def squarefree_decomposition(field: Field, f) -> list:
    """[(g, m)] with each g monic squarefree, pairwise coprime, f = unit * prod g^m."""
    f = monic(field, f)
    out = []
    if degree(f) < 1:
        return out
    fp = derivative(field, f)
    if not fp:
        for g, m in squarefree_decomposition(field, pth_root(field, f)):
            out.append((g, m * field.p))
        return out
    c = gcd(field, f, fp)
    w = divrem(field, f, c)[0]
    i = 1
    while degree(w) > 0:
        y = gcd(field, w, c)
        z = divrem(field, w, y)[0]
        if degree(z) > 0:
            out.append((z, i))
        w = y
        c = divrem(field, c, y)[0]
        i += 1
    if degree(c) > 0:
        for g, m in squarefree_decomposition(field, pth_root(field, c)):
            out.append((g, m * field.p))
    return out


def squarefree_split(field: Field, f):
    """Coprime split f = unit * psi1 * psi2: psi1 squarefree (the multiplicity-one
    part), psi2 square-full (everything of multiplicity >= 2, at full power)."""
    if not f:
        raise ZeroDivisionError("zero polynomial")
    psi1, psi2 = ONE, ONE
    for g, m in squarefree_decomposition(field, f):
        if m == 1:
            psi1 = mul(field, psi1, g)
        else:
            gm = ONE
            for _ in range(m):
                gm = mul(field, gm, g)
            psi2 = mul(field, psi2, gm)
    return psi1, psi2


def distinct_degree(field: Field, g) -> list:
    """Split monic squarefree g into [(h_d, d)] where h_d collects the degree-d factors."""
    out = []
    q = field.q
    t = (0, 1)
    h = t
    d = 0
    g = tuple(g)
    while degree(g) >= 2 * (d + 1):
        d += 1
        h = powmod(field, h, q, g)
        f = gcd(field, g, sub(field, h, t))
        if degree(f) > 0:
            out.append((f, d))
            g = divrem(field, g, f)[0]
            if degree(g) > 0:
                h = mod(field, h, g)
    if degree(g) > 0:
        out.append((g, degree(g)))
    return out


def _edf(field: Field, f, d: int, rng) -> list:
    """Equal-degree splitting of monic squarefree f, all factors of degree d."""
    n = degree(f)
    if n == d:
        return [f]
    q = field.q
    while True:
        a = trim([rng.randrange(q) for _ in range(n)])
        if degree(a) < 1:
            continue
        g = gcd(field, a, f)
        if 0 < degree(g) < n:
            break
        if field.p == 2:
            # trace map over the F_2-linear structure of F_{q^d}
            e = field.k * d
            tr = a
            x = a
            for _ in range(e - 1):
                x = mod(field, mul(field, x, x), f)
                tr = add(field, tr, x)
            g = gcd(field, tr, f)
        else:
            b = powmod(field, a, (q ** d - 1) // 2, f)
            g = gcd(field, sub(field, b, ONE), f)
        if 0 < degree(g) < n:
            break
    rest = divrem(field, f, g)[0]
    return _edf(field, g, d, rng) + _edf(field, rest, d, rng)


@dataclass(frozen=True)
class Factorization:
    """unit * prod(factor^multiplicity), factors monic irreducible, sorted
    by (degree, coefficient tuple)."""
    field: Field
    unit: int
    factors: tuple  # of (coeff tuple, multiplicity)

    def expand(self) -> tuple:
        out = (self.unit,)
        for fac, m in self.factors:
            for _ in range(m):
                out = mul(self.field, out, fac)
        return out

    def degrees(self) -> tuple:
        """Factor degrees with multiplicity, largest first."""
        parts = []
        for fac, m in self.factors:
            parts.extend([degree(fac)] * m)
        return tuple(sorted(parts, reverse=True))


def factor(field: Field, f, seed: int = 0) -> Factorization:
    """Complete factorization into monic irreducibles."""
    if degree(f) < 1:
        raise ValueError("factor requires degree >= 1")
    unit = f[-1]
    rng = py_rng(seed, 0x0fac)
    found = {}
    for g, m in squarefree_decomposition(field, f):
        for h, d in distinct_degree(field, g):
            for irr in _edf(field, h, d, rng):
                found[irr] = found.get(irr, 0) + m
    factors = tuple(sorted(found.items(), key=lambda im: (degree(im[0]), im[0])))
    return Factorization(field, unit, factors)


def factor_degrees(field: Field, f) -> tuple:
    """Degrees with multiplicity of the irreducible factors, largest first.

    Avoids equal-degree splitting; over F_2 it runs on integer bitsets.
    """
    if degree(f) < 1:
        raise ValueError("factor_degrees requires degree >= 1")
    if field.p == 2 and field.k == 1:
        return tuple(gf2x.factor_degrees(gf2x.from_coeffs(f)))
    parts = []
    for g, m in squarefree_decomposition(field, f):
        for h, d in distinct_degree(field, g):
            parts.extend([d] * ((degree(h) // d) * m))
    return tuple(sorted(parts, reverse=True))


def is_irreducible(field: Field, f) -> bool:
    """Rabin irreducibility test for monic-izable f of degree >= 1."""
    n = degree(f)
    if n < 1:
        return False
    f = monic(field, f)
    if n == 1:
        return True
    q = field.q
    t = (0, 1)
    h = t
    for _ in range(n):
        h = powmod(field, h, q, f)
    if sub(field, h, t):
        return False
    for ell in {d for d in range(2, n + 1) if n % d == 0 and _is_prime_small(d)}:
        h = t
        for _ in range(n // ell):
            h = powmod(field, h, q, f)
        if degree(gcd(field, sub(field, h, t), f)) != 0:
            return False
    return True


def _is_prime_small(n):
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def count_roots(field: Field, f) -> int:
    """Number of distinct roots of f in F_q, via deg gcd(f, t^q - t)."""
    if not f:
        raise ZeroDivisionError("zero polynomial")
    if degree(f) == 0:
        return 0
    t = (0, 1)
    h = powmod(field, t, field.q, f)
    return degree(gcd(field, f, sub(field, h, t)))


def _mobius(n: int) -> int:
    m = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            m = -m
        d += 1
    if n > 1:
        m = -m
    return m


def irreducible_count(q: int, d: int) -> int:
    """I(d) = (1/d) sum_{e | d} mobius(e) q^(d/e), the necklace count."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    total = sum(_mobius(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0)
    assert total % d == 0
    return total // d


def count_irreducibles(field: Field, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q."""
    return irreducible_count(field.q, d)


# ---------------------------------------------------------------------------
# Text format: "c0,c1,...,cd" low-to-high

def poly_from_text(field: Field, text: str) -> tuple:
    coeffs = [int(tok) % field.q if field.k > 1 else int(tok) % field.p
              for tok in text.strip().split(",")]
    return trim(coeffs)


def poly_to_text(a) -> str:
    if not a:
        return "0"
    return ",".join(str(c) for c in a)
