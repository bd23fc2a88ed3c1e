"""Exact combinatorics of factorization types of random matrices over F_q.

Everything here is either an exact rational/integer formula or a complete
enumeration of M_n(q), so this module doubles as the oracle layer for the
Monte Carlo samplers.
"""

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import fqpoly, kernels, linalg
from .gf import Field

ENUM_CAP = 1 << 24


def f_qn(q: int, n: int) -> Fraction:
    """F(q, n) = q^(-n^2) |GL_n(q)| = (1 - q^-1) ... (1 - q^-n), exactly."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = Fraction(1)
    for i in range(1, n + 1):
        out *= 1 - Fraction(1, q ** i)
    return out


def gl_order(q: int, n: int) -> int:
    val = f_qn(q, n) * Fraction(q) ** (n * n)
    assert val.denominator == 1
    return val.numerator


def reiner_count(q: int, n: int, factor_type) -> int:
    """Number of matrices in M_n(q) with characteristic polynomial
    f_1^(m_1) ... f_k^(m_k), the f_i distinct monic irreducibles with
    deg f_i = d_i:   q^(n^2-n) F(q,n) / prod_i F(q^(d_i), m_i).

    factor_type is a sequence of (degree, multiplicity) pairs, one per
    *named* factor.
    """
    factor_type = list(factor_type)
    if sum(d * m for d, m in factor_type) != n:
        raise ValueError("degree sum does not match n")
    val = Fraction(q) ** (n * n - n) * f_qn(q, n)
    for d, m in factor_type:
        val /= f_qn(q ** d, m)
    assert val.denominator == 1, "Reiner's formula always clears denominators"
    return val.numerator


def _partitions(n: int):
    """All integer partitions of n, as weakly decreasing tuples."""
    if n == 0:
        yield ()
        return
    def gen(rest, maxpart):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, maxpart), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail
    yield from gen(n, n)


def _falling(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


def partition_count(q: int, n: int, partition) -> int:
    """Matrices whose factor-degree multiset (with multiplicity) is the given
    partition: sum Reiner counts over named types, weighting each degree d by
    the number of ways to choose distinct irreducibles with the prescribed
    multiplicities out of the I(d) available."""
    partition = tuple(sorted(partition, reverse=True))
    if sum(partition) != n:
        raise ValueError("partition must sum to n")
    by_deg = defaultdict(int)
    for part in partition:
        by_deg[part] += 1
    degs = sorted(by_deg)
    profile_sets = []
    for d in degs:
        profile_sets.append(list(_partitions(by_deg[d])))
    total = 0
    for choice in itertools.product(*profile_sets):
        named = []
        ways = 1
        for d, prof in zip(degs, choice):
            named.extend((d, m) for m in prof)
            counts = defaultdict(int)
            for m in prof:
                counts[m] += 1
            # ordered choices of distinct irreducibles, divided by the
            # permutations of equal-multiplicity slots
            ways_d = _falling(fqpoly.irreducible_count(q, d), len(prof))
            denom = 1
            for c in counts.values():
                f = 1
                for i in range(2, c + 1):
                    f *= i
                denom *= f
            assert ways_d % denom == 0
            ways *= ways_d // denom
        total += ways * reiner_count(q, n, named)
    return total


# ---------------------------------------------------------------------------
# The Z_d laws and their normalizer

def zeta_d_minus_one(q: int, d: int, tol: float = 1e-18) -> float:
    """zeta_d - 1 = sum_{c>=1} 1 / (q^(dc) F(q^d, c)), truncated when the
    geometric tail (ratio <= 2 q^-d) drops below tolerance.  Summed without
    the leading 1 so the value keeps full relative precision."""
    bigq = q ** d
    total = 0.0
    c = 1
    fq = 1 - 1.0 / bigq
    term = (1.0 / bigq) / fq
    while term > tol:
        total += term
        c += 1
        fq *= 1 - float(bigq) ** -c
        term = float(bigq) ** -c / fq
        if c > 10000:
            raise AssertionError("zeta_d series failed to converge")
    return total


def zeta_d(q: int, d: int, tol: float = 1e-18) -> float:
    """zeta_d = sum_{c>=0} 1 / (q^(dc) F(q^d, c))."""
    return 1.0 + zeta_d_minus_one(q, d, tol)


def zeta_d_product(q: int, d: int, tol: float = 1e-18) -> float:
    """Independent evaluation: zeta_d = 1 / prod_{i>=1} (1 - q^(-d i))."""
    prod = 1.0
    i = 1
    while True:
        f = 1 - float(q) ** (-d * i)
        prod *= f
        if 1 - f < tol:
            break
        i += 1
    return 1.0 / prod


def zd_law(q: int, d: int, cmax: int):
    """P(Z_d = c) for c = 0..cmax, plus zeta_d.

    Z_d has probability generating function
    (zeta_d^-1 sum_c u^c / (q^(dc) F(q^d, c)))^I(d); the series is truncated
    at degree cmax (harmless: the power is lower triangular) and raised by
    binary exponentiation.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    bigq = q ** d
    a = [1.0]
    fq = 1.0
    for c in range(1, cmax + 1):
        fq *= 1 - float(bigq) ** -c
        a.append(float(bigq) ** -c / fq)
    count = fqpoly.irreducible_count(q, d)
    zm1 = zeta_d_minus_one(q, d)
    # S^I has constant term exactly 1 and O(1) coefficients (zeta^I <= e^2),
    # so the huge exponent never amplifies rounding; the zeta^-I scale is
    # applied once, in log space.
    powered = _series_pow(a, count, cmax)
    scale = math.exp(-count * math.log1p(zm1))
    return [scale * c for c in powered], 1.0 + zm1


def _series_mul(a, b, cmax):
    out = [0.0] * (cmax + 1)
    for i, ai in enumerate(a):
        if ai:
            for j in range(min(cmax - i, len(b) - 1) + 1):
                out[i + j] += ai * b[j]
    return out


def _series_pow(base, e: int, cmax: int):
    result = [0.0] * (cmax + 1)
    result[0] = 1.0
    cur = list(base)
    while e > 0:
        if e & 1:
            result = _series_mul(result, cur, cmax)
        cur = _series_mul(cur, cur, cmax)
        e >>= 1
    return result


def bell(m: int) -> int:
    """Bell number B_m via the Bell triangle."""
    if m < 0:
        raise ValueError("m must be >= 0")
    row = [1]
    for _ in range(m):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
    return row[0]


# ---------------------------------------------------------------------------
# Exhaustive enumeration of M_n(q)

@dataclass
class TypeCounts:
    """Exact tallies over all of M_n(q) (and the GL_n(q) restriction)."""
    q: int
    n: int
    total: int
    named: dict = dc_field(default_factory=dict)        # named factor type -> count
    partitions: dict = dc_field(default_factory=dict)   # degree partition -> count
    gl_total: int = 0
    gl_named: dict = dc_field(default_factory=dict)
    gl_partitions: dict = dc_field(default_factory=dict)

    def partition_probability(self, partition) -> Fraction:
        return Fraction(self.partitions.get(tuple(partition), 0), self.total)


def enumerate_types(field: Field, n: int) -> TypeCounts:
    """Factor the characteristic polynomial of every matrix in M_n(q).

    Named-type keys are tuples of ((coeff tuple), multiplicity) in canonical
    order; partition keys are weakly decreasing degree tuples.
    """
    q = field.q
    count = q ** (n * n)
    if count > ENUM_CAP:
        raise ValueError(f"q^(n^2) = {count} exceeds the cap {ENUM_CAP}")
    tc = TypeCounts(q=q, n=n, total=count)
    use_fast = field.k == 1
    factor_cache = {}
    cells = n * n
    mat = [[0] * n for _ in range(n)]
    for idx in range(count):
        rem = idx
        for c in range(cells):
            mat[c // n][c % n] = rem % q
            rem //= q
        if use_fast:
            phi = tuple(int(x) for x in
                        kernels.charpoly_mod_p(np.array(mat, dtype=np.int64), q))
        else:
            phi = linalg.charpoly_fq(field, mat)
        if phi not in factor_cache:
            fac = fqpoly.factor(field, phi, seed=0)
            factor_cache[phi] = (fac.factors, fac.degrees())
        named, parts = factor_cache[phi]
        tc.named[named] = tc.named.get(named, 0) + 1
        tc.partitions[parts] = tc.partitions.get(parts, 0) + 1
        if phi[0] != 0:  # det = (-1)^n phi(0) nonzero
            tc.gl_total += 1
            tc.gl_named[named] = tc.gl_named.get(named, 0) + 1
            tc.gl_partitions[parts] = tc.gl_partitions.get(parts, 0) + 1
    return tc


# ---------------------------------------------------------------------------
# Conditioning-relation ratio test

def cr_ratios(q: int, n: int):
    """For every achievable factor-count vector (c_1..c_n) of M_n(q), the
    ratio of the enumerated probability to prod_d P(Z_d = c_d).

    Returns (list of (partition, ratio), max relative spread).  Constancy of
    the ratio across partitions is the conditioning relation; the common
    value is the empirical normalizer beta_n.
    """
    field = Field(q, 1)
    tc = enumerate_types(field, n)
    zd_cache = {d: zd_law(q, d, n)[0] for d in range(1, n + 1)}
    rows = []
    for partition, cnt in sorted(tc.partitions.items()):
        cvec = [0] * (n + 1)
        for part in partition:
            cvec[part] += 1
        prob = cnt / tc.total
        zprob = 1.0
        for d in range(1, n + 1):
            zprob *= zd_cache[d][cvec[d]]
        rows.append((partition, prob / zprob))
    ratios = [r for _, r in rows]
    spread = (max(ratios) - min(ratios)) / min(ratios)
    return rows, spread
