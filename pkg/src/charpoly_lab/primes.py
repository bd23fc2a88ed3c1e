"""Prime windows, the normalized log-weight, and weighted root-count moments.

The weight w_X(u) = u * 2 exp(-X) 1{u in (X - log 2, X]} integrates the
prime counting so that sum_p w_X(log p) -> 1 as X grows; the rate of that
convergence at desk scale is measured, never bounded.  Root counts R(p)
are computed on the reduction of one exact integer characteristic
polynomial per prime, in ascending prime order, with math.fsum holding the
accumulation error down.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact, fqpoly
from .gf import Field

X_CAP = 16.0  # e^16 is about 8.9e6; enough primes for every desk experiment


def weight(u: float, x: float) -> float:
    """w_X(u) = u * 2 exp(-X) on (X - log 2, X], zero elsewhere."""
    if x - math.log(2) < u <= x:
        return u * 2.0 * math.exp(-x)
    return 0.0


def _simple_sieve(limit: int) -> np.ndarray:
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if mask[p]:
            mask[p * p::p] = False
    return np.nonzero(mask)[0]


def segmented_primes(lo: int, hi: int, segment: int = 1 << 18) -> list:
    """Primes in (lo, hi], by a segmented sieve (independent of _simple_sieve;
    used to cross-verify the window)."""
    if hi < 2 or hi <= lo:
        return []
    base = _simple_sieve(int(hi ** 0.5) + 1)
    out = []
    start = max(lo + 1, 2)
    while start <= hi:
        stop = min(start + segment - 1, hi)
        mask = np.ones(stop - start + 1, dtype=bool)
        for p in base:
            p = int(p)
            first = max(p * p, ((start + p - 1) // p) * p)
            if first > stop:
                continue
            mask[first - start::p] = False
        out.extend(int(v) for v in np.nonzero(mask)[0] + start)
        start = stop + 1
    return out


@dataclass(frozen=True)
class PrimeWindow:
    """Ascending primes with log p in (X - log 2, X], i.e. p in (e^X / 2, e^X]."""
    x: float
    primes: tuple

    def weights(self) -> list:
        return [weight(math.log(p), self.x) for p in self.primes]


def sieve_window(x: float) -> PrimeWindow:
    if x > X_CAP:
        raise ValueError(f"X = {x} exceeds the desk-scale cap {X_CAP}")
    hi = int(math.exp(x)) + 1
    candidates = _simple_sieve(hi)
    logs = np.log(candidates.astype(float))
    keep = (logs > x - math.log(2)) & (logs <= x)
    return PrimeWindow(x, tuple(int(p) for p in candidates[keep]))


def pit_unit_check(x: float) -> float:
    """sum_p w_X(log p) over the window; |result - 1| is the empirical
    prime-counting error at scale X."""
    win = sieve_window(x)
    return math.fsum(win.weights())


# ---------------------------------------------------------------------------
# Squarefree part over Z (monic input), for flagging bad primes

def _frac_poly_divmod(a, b):
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        c = a[-1] / b[-1]
        s = len(a) - len(b)
        q[s] = c
        for i in range(len(b)):
            a[s + i] -= c * b[i]
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return q, a


def squarefree_part_z(coeffs) -> tuple:
    """The product of the distinct irreducible factors of a monic integer
    polynomial (computed over Q; result is integral and monic)."""
    if not coeffs or coeffs[-1] != 1:
        raise ValueError("monic integer polynomial required")
    if len(coeffs) == 2:
        return tuple(coeffs)
    deriv = [i * coeffs[i] for i in range(1, len(coeffs))]
    a = [Fraction(c) for c in coeffs]
    b = [Fraction(c) for c in deriv]
    while any(b):
        _, r = _frac_poly_divmod(a, b)
        a, b = b, r
    # a is gcd(phi, phi'); make it monic, then divide out
    a = [c / a[-1] for c in a]
    quo, rem = _frac_poly_divmod([Fraction(c) for c in coeffs], a)
    assert not any(rem)
    out = []
    for c in quo:
        assert c.denominator == 1
        out.append(int(c))
    return tuple(out)


# ---------------------------------------------------------------------------
# Weighted moments of the root count

@dataclass
class MomentReport:
    m: int
    x: float
    weighted_sum: float
    bell_target: int
    prime_count: int
    singular_prime_count: int  # window primes where the squarefree part drops
    per_prime: list = None     # optional (p, R, weight, contribution) rows


def weighted_moment(phi, m: int, x: float, keep_per_prime: bool = False) -> MomentReport:
    """sum_p R(p)^m w_X(log p) for a monic integer polynomial phi.

    R(p) counts distinct roots of phi mod p.  Window primes where the
    squarefree part of phi stops being squarefree mod p (those dividing its
    discriminant) are included in the sum and counted separately.
    """
    phi = tuple(int(c) for c in phi)
    if not phi or phi[-1] != 1 or len(phi) < 2:
        raise ValueError("monic integer polynomial of degree >= 1 required")
    if m < 1:
        raise ValueError("moment order must be >= 1")
    deg = len(phi) - 1
    win = sieve_window(x)
    sf = squarefree_part_z(phi)
    sf_deriv = [i * sf[i] for i in range(1, len(sf))]
    contribs = []
    rows = [] if keep_per_prime else None
    singular = 0
    for p in win.primes:
        fld = Field(p)
        fp = fqpoly.trim([c % p for c in phi])
        r = fqpoly.count_roots(fld, fp)
        assert r <= deg, "root count exceeded the degree"
        w = weight(math.log(p), x)
        contribs.append(float(r) ** m * w)
        sfp = fqpoly.trim([c % p for c in sf])
        sfd = fqpoly.trim([c % p for c in sf_deriv])
        if fqpoly.degree(fqpoly.gcd(fld, sfp, sfd)) != 0:
            singular += 1
        if keep_per_prime:
            rows.append((p, r, w, contribs[-1]))
    return MomentReport(m=m, x=x, weighted_sum=math.fsum(contribs),
                        bell_target=exact.bell(m), prime_count=len(win.primes),
                        singular_prime_count=singular, per_prime=rows)
