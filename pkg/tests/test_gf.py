import cmath
import itertools
import random

import pytest

from charpoly_lab.gf import Field, least_irreducible, parse_field_spec


def brute_least_irreducible(p, k):
    """Independent modulus oracle: lex-least monic irreducible by root-free
    trial division against all lower-degree monic polynomials."""
    def poly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
        return out

    monics = {d: [list(t) + [1] for t in itertools.product(range(p), repeat=d)]
              for d in range(1, k)}
    products = set()
    for d1 in range(1, k):
        d2 = k - d1
        if d2 < 1:
            continue
        for a in monics[d1]:
            for b in monics.get(d2, []):
                products.add(tuple(poly_mul(a, b)))
    for tail in itertools.product(range(p), repeat=k):
        cand = tuple(tail) + (1,)
        if cand not in products:
            return cand
    raise AssertionError


@pytest.mark.parametrize("p,k,expect", [
    (2, 2, (1, 1, 1)),    # t^2 + t + 1
    (3, 2, (1, 0, 1)),    # t^2 + 1: no root mod 3, precedes t^2+t+2 lexicographically
])
def test_least_irreducible_examples(p, k, expect):
    assert least_irreducible(p, k) == expect


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_least_irreducible_vs_brute_force(p, k):
    assert least_irreducible(p, k) == brute_least_irreducible(p, k)


def test_prime_field_has_no_modulus():
    f = Field(2, 1)
    assert f.modulus is None and f.q == 2


def test_field_rejects_bad_input():
    with pytest.raises(ValueError):
        Field(4)
    with pytest.raises(ValueError):
        Field(2, 0)
    with pytest.raises(ValueError):
        Field(2, 40)  # q over the extension cap


def test_arithmetic_examples():
    f4 = Field(2, 2)
    t, t1 = 2, 3
    assert f4.mul(t, t1) == 1          # t(t+1) = t^2+t = 1 mod t^2+t+1
    f5 = Field(5)
    assert f5.inv(2) == 3
    for f in (f4, f5):
        for a in f.elements():
            assert f.add(a, 0) == a


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        Field(7).inv(0)


def test_trace_examples():
    f4 = Field(2, 2)
    assert f4.trace(0) == 0 and f4.trace(1) == 0
    assert f4.trace(2) == 1            # Tr(t) = t + t^2 = 1
    f7 = Field(7)
    for a in f7.elements():
        assert f7.trace(a) == a


def test_char_examples():
    f2 = Field(2)
    assert f2.char_value(0) == 1 and f2.char_value(1) == -1
    f5 = Field(5)
    assert abs(f5.char_value(1) - cmath.exp(2j * cmath.pi / 5)) < 1e-15
    f4 = Field(2, 2)
    assert f4.char_value(2) == -1      # chi(t) = -1 since Tr(t) = 1


def test_char_is_additive():
    for spec in ("4", "5", "9", "8"):
        f = parse_field_spec(spec)
        for a in f.elements():
            for b in f.elements():
                lhs = f.char_value(f.add(a, b))
                rhs = f.char_value(a) * f.char_value(b)
                assert abs(lhs - rhs) < 1e-12


def test_frobenius_and_char_sum_all_small_fields():
    # a^q = a for every element, and sum chi(a) = 0, for every q <= 64
    for q in range(2, 65):
        try:
            f = parse_field_spec(str(q))
        except ValueError:
            continue
        for a in f.elements():
            assert f.pow(a, f.q) == a
        assert abs(sum(f.char_value(a) for a in f.elements())) < 1e-12


def test_mul_commutative_associative_inverse():
    rnd = random.Random(0)
    for spec in ("2", "3", "4", "8", "9", "25", "101"):
        f = parse_field_spec(spec)
        for _ in range(60):
            a, b, c = (rnd.randrange(f.q) for _ in range(3))
            assert f.mul(a, b) == f.mul(b, a)
            assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            if a:
                assert f.mul(f.inv(a), a) == 1


def test_distributivity_and_sub():
    rnd = random.Random(1)
    f = Field(3, 3)
    for _ in range(80):
        a, b, c = (rnd.randrange(f.q) for _ in range(3))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.add(f.sub(a, b), b) == a


def test_encode_decode_roundtrip():
    f = Field(5, 3)
    for a in (0, 1, 4, 24, 124):
        assert f.encode(f.decode(a)) == a


def test_parse_field_spec():
    assert parse_field_spec("q=2^3").q == 8
    assert parse_field_spec("q=49").q == 49
    assert parse_field_spec("27").k == 3
    assert parse_field_spec("q=101").p == 101
    for bad in ("q=12", "q=1", "q=0"):
        with pytest.raises(ValueError):
            parse_field_spec(bad)
