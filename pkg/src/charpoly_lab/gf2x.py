"""Polynomials over GF(2) packed into Python integers (bit i = coeff of t^i).

Carry-less integer arithmetic makes degree-100 polynomials cheap, which is
what the partition samplers need: they only ever ask for the multiset of
irreducible factor degrees, so squarefree decomposition plus distinct-degree
splitting is enough and no equal-degree stage is required.
"""


def deg(a: int) -> int:
    return a.bit_length() - 1


def mul(a: int, b: int) -> int:
    out = 0
    while b:
        low = b & -b
        out ^= a * low  # a << shift, as one multiply
        b ^= low
    return out


def mod(a: int, m: int) -> int:
    dm = deg(m)
    da = deg(a)
    while da >= dm:
        a ^= m << (da - dm)
        da = deg(a)
    return a


def gcd(a: int, b: int) -> int:
    while b:
        a, b = b, mod(a, b)
    return a


def square(a: int) -> int:
    # spread bits: coefficient i moves to position 2i
    out = 0
    i = 0
    while a:
        if a & 1:
            out |= 1 << (2 * i)
        a >>= 1
        i += 1
    return out


def derivative(a: int) -> int:
    # d/dt sum a_i t^i = sum over odd i of a_i t^(i-1)
    out = 0
    pos = 1
    a >>= 1
    while a:
        if a & 1:
            out |= 1 << (pos - 1)
        a >>= 2
        pos += 2
    return out


def sqrt(a: int) -> int:
    """Inverse of square() on squares: keep even-position bits."""
    out = 0
    i = 0
    while a:
        if a & 1:
            out |= 1 << i
        a >>= 2
        i += 1
    return out


def squarefree_decomposition(f: int) -> list:
    """Return [(g, m)] with g squarefree, pairwise coprime, f = prod g^m."""
    if f == 0:
        raise ZeroDivisionError("zero polynomial")
    out = []
    if deg(f) < 1:
        return out
    fp = derivative(f)
    if fp == 0:
        for g, m in squarefree_decomposition(sqrt(f)):
            out.append((g, 2 * m))
        return out
    c = gcd(f, fp)
    w = _div(f, c)
    i = 1
    while deg(w) > 0:
        y = gcd(w, c)
        z = _div(w, y)
        if deg(z) > 0:
            out.append((z, i))
        w = y
        c = _div(c, y)
        i += 1
    if deg(c) > 0:
        for g, m in squarefree_decomposition(sqrt(c)):
            out.append((g, 2 * m))
    return out


def _div(a: int, b: int) -> int:
    q = 0
    db = deg(b)
    da = deg(a)
    while da >= db:
        q |= 1 << (da - db)
        a ^= b << (da - db)
        da = deg(a)
    if a:
        raise ArithmeticError("non-exact division in GF(2)[t]")
    return q


def distinct_degree_degrees(g: int) -> list:
    """Degrees (with count) of the irreducible factors of squarefree g.

    Returns a list of (degree d, number of degree-d factors).
    """
    out = []
    h = 2  # the polynomial t
    d = 0
    while deg(g) > 2 * d + 1:
        d += 1
        h = mod(square(h), g)  # now h = t^(2^d) mod g
        f = gcd(h ^ 2, g)
        if deg(f) > 0:
            out.append((d, deg(f) // d))
            g = _div(g, f)
            h = mod(h, g) if deg(g) > 0 else 0
    if deg(g) > 0:
        out.append((deg(g), 1))
    return out


def factor_degrees(f: int) -> list:
    """Sorted degrees, with multiplicity, of the irreducible factors of f."""
    parts = []
    for g, m in squarefree_decomposition(f):
        for d, cnt in distinct_degree_degrees(g):
            parts.extend([d] * (cnt * m))
    parts.sort(reverse=True)
    return parts


def from_coeffs(coeffs) -> int:
    a = 0
    for i, c in enumerate(coeffs):
        if c & 1:
            a |= 1 << i
    return a
