"""Sound certificates: irreducibility over Q, and Galois group >= A_n.

Irreducibility is certified by intersecting divisor-degree sets modulo
several primes: a monic integer factor of degree d would reduce to a
degree-d divisor mod every prime, so once the intersection of achievable
degrees is {0, n} no proper factor can exist.  The certificate is sound by
construction; refusal carries the residual degree set and is not a proof
of reducibility.

The A_n route finds a prime p where the reduction is squarefree, so the
factor degrees realize a cycle type in the Galois group.  If that type
contains a prime part ell with n/2 < ell <= n-3, powering the element by
the lcm of the other parts gives an honest ell-cycle; a transitive group
with a prime cycle longer than n/2 is primitive, and a primitive group
containing an ell-cycle with ell <= n-3 contains A_n (Jordan).  The
criterion is incomplete and says so rather than guessing.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import fqpoly, linalg
from .gf import Field, is_prime
from .measures import MeasureZ
from .montecarlo import Estimate
from .primes import _simple_sieve
from .rng import substream


@dataclass(frozen=True)
class DegreeSet:
    """Achievable divisor degrees of phi mod p: subset sums of the factor
    degrees, held as a bitmask.  0 and n are always present and the set is
    closed under d -> n - d."""
    n: int
    prime: int
    mask: int
    degrees: tuple      # factor degrees with multiplicity, descending
    squarefree: bool    # gcd(phi, phi') = 1 mod p

    def achievable(self, d: int) -> bool:
        return 0 <= d <= self.n and bool(self.mask >> d & 1)

    def as_set(self) -> list:
        return [d for d in range(self.n + 1) if self.mask >> d & 1]


def _subset_sum_mask(degrees) -> int:
    mask = 1
    for d in degrees:
        mask |= mask << d
    return mask


def degree_set(phi, p: int) -> DegreeSet:
    """Factor phi mod p and collect the subset sums of the factor degrees."""
    phi = tuple(int(c) for c in phi)
    if not phi or phi[-1] != 1:
        raise ValueError("monic integer polynomial required")
    n = len(phi) - 1
    fld = Field(p)
    fp = fqpoly.trim([c % p for c in phi])
    degs = fqpoly.factor_degrees(fld, fp)
    fpd = fqpoly.derivative(fld, fp)
    sf = fqpoly.degree(fqpoly.gcd(fld, fp, fpd)) == 0
    return DegreeSet(n=n, prime=p, mask=_subset_sum_mask(degs),
                     degrees=tuple(degs), squarefree=sf)


@dataclass
class Certificate:
    """kind is 'irreducible', 'at_least_An', or 'none' (a refusal).  A
    certificate is only ever emitted when its logical derivation holds;
    refusals carry a reason and any residual data."""
    kind: str
    n: int
    witnesses: list = dc_field(default_factory=list)
    reason: str = None
    residual_degrees: list = None
    justification: list = dc_field(default_factory=list)


def _primes_up_to(b: int) -> list:
    return [int(p) for p in _simple_sieve(max(b, 2))]


def certify_irreducible(phi, budget: int = 100) -> Certificate:
    """Intersect degree sets over the primes up to the budget.

    Sound: emits an irreducibility certificate only when the intersection
    is exactly {0, n}.  Refuses (kind 'none') on inputs that are not
    squarefree over Z, or when shared degrees survive the budget.
    """
    phi = tuple(int(c) for c in phi)
    if not phi or phi[-1] != 1:
        raise ValueError("monic integer polynomial required")
    n = len(phi) - 1
    if n < 2:
        raise ValueError("degree must be >= 2")
    if _has_repeated_factor_z(phi):
        return Certificate(kind="none", n=n,
                           reason="not squarefree over Z (gcd with derivative "
                                  "is nonconstant), so no degree argument applies")
    full = (1 << (n + 1)) - 1
    inter = full
    witnesses = []
    target = 1 | (1 << n)
    for p in _primes_up_to(budget):
        ds = degree_set(phi, p)
        new = inter & ds.mask
        if new != inter:
            witnesses.append({"prime": p, "factor_degrees": list(ds.degrees),
                              "squarefree_mod_p": ds.squarefree})
            inter = new
        if inter == target:
            return Certificate(
                kind="irreducible", n=n, witnesses=witnesses,
                justification=[
                    "a monic integer factor of degree d reduces to a degree-d "
                    "divisor modulo every prime",
                    "the intersection of achievable divisor degrees over the "
                    "witness primes is {0, %d}" % n,
                ])
    return Certificate(kind="none", n=n, witnesses=witnesses,
                       reason=f"shared divisor degrees survive all primes <= {budget}",
                       residual_degrees=[d for d in range(n + 1) if inter >> d & 1])


def _has_repeated_factor_z(phi) -> bool:
    from .primes import squarefree_part_z
    return len(squarefree_part_z(phi)) != len(phi)


def certify_at_least_An(phi, budget: int = 10000,
                        irreducible: Certificate = None) -> Certificate:
    """Certify Gal(phi) >= A_n from a squarefree reduction whose factor-degree
    partition contains a prime part ell with n/2 < ell <= n-3."""
    phi = tuple(int(c) for c in phi)
    n = len(phi) - 1
    if irreducible is None:
        irreducible = certify_irreducible(phi)
    if irreducible.kind != "irreducible":
        raise ValueError("an irreducibility certificate is required first "
                         "(the criterion needs a transitive Galois group)")
    lo = n // 2  # ell must satisfy ell > n/2, prime, and ell <= n - 3
    candidates = [ell for ell in range(lo + 1, n - 2) if ell > n / 2 and is_prime(ell)]
    if not candidates:
        return Certificate(kind="none", n=n,
                           reason=f"no prime ell with n/2 < ell <= n-3 exists "
                                  f"for n = {n}; criterion inapplicable")
    for p in _primes_up_to(budget):
        ds = degree_set(phi, p)
        if not ds.squarefree:
            continue
        hit = next((ell for ell in ds.degrees if ell in candidates), None)
        if hit is None:
            continue
        # re-verify the witness factorization independently before emitting
        check = degree_set(phi, p)
        assert check.squarefree and hit in check.degrees
        return Certificate(
            kind="at_least_An", n=n,
            witnesses=[{"prime": p, "factor_degrees": list(ds.degrees),
                        "ell": hit,
                        "irreducibility_witnesses": list(irreducible.witnesses)}],
            justification=[
                "the Galois group is transitive (irreducibility certificate)",
                "the reduction mod %d is squarefree, so its factor degrees "
                "are realized as the cycle type of a Galois element" % p,
                "raising that element to the lcm of the other part lengths "
                "(coprime to %d, a prime exceeding n/2) yields an honest "
                "%d-cycle" % (hit, hit),
                "a transitive group containing a cycle of prime length "
                "> n/2 is primitive",
                "a primitive group containing an ell-cycle with ell <= n-3 "
                "contains A_n (Jordan)",
            ])
    return Certificate(kind="none", n=n,
                       reason=f"no squarefree reduction with a prime factor "
                              f"degree in (n/2, n-3] found below {budget}")


# ---------------------------------------------------------------------------
# The four-prime experiment

@dataclass
class FourPrimeReport:
    certified: Estimate          # intersection of the four degree sets = {0, n}
    shared_large_degree: Estimate  # some d in [ceil(n^(1/4)), n) in all four sets
    shared_small_degree: Estimate  # some d in (0, ceil(n^(1/4))) in all four sets
    primes: tuple
    n: int
    trials: int
    seed: int


def _z_sampler_tables(mu: MeasureZ):
    den = 1
    for _, w in mu.support:
        den = den * w.denominator // math.gcd(den, w.denominator)
    cum = []
    vals = []
    acc = 0
    for v, w in mu.support:
        acc += w.numerator * (den // w.denominator)
        cum.append(acc)
        vals.append(v)
    return np.array(cum, dtype=np.int64), np.array(vals, dtype=np.int64), den


def sample_integer_matrix(mu: MeasureZ, n: int, rng) -> list:
    """n x n integer matrix with iid entries from mu (inverse CDF on exact
    cumulative weights)."""
    cum, vals, den = _z_sampler_tables(mu)
    raw = rng.integers(0, den, size=(n, n), dtype=np.int64)
    m = vals[np.searchsorted(cum, raw, side="right")]
    return [[int(x) for x in row] for row in m]


def _four_prime_chunk(task):
    mu, n, primes, seed, start, stop = task
    thr = math.ceil(n ** 0.25)
    cert = large = small = 0
    small_mask = ((1 << thr) - 1) & ~1  # degrees 1..thr-1
    large_mask = ((1 << n) - 1) & ~((1 << thr) - 1)  # degrees thr..n-1
    target = 1 | (1 << n)
    for t in range(start, stop):
        rng = substream(seed, t)
        m = sample_integer_matrix(mu, n, rng)
        phi = linalg.charpoly_z(m)
        inter = (1 << (n + 1)) - 1
        for p in primes:
            inter &= degree_set(phi, p).mask
        if inter == target:
            cert += 1
        if inter & large_mask:
            large += 1
        if inter & small_mask:
            small += 1
    return cert, large, small


def four_prime_experiment(mu: MeasureZ, n: int, trials: int, seed: int,
                          primes=(2, 3, 5, 7), threads: int = 1) -> FourPrimeReport:
    """Per trial: draw M over Z, take the exact characteristic polynomial,
    intersect its divisor-degree sets at the four primes, and record whether
    irreducibility is certified.  Requires mu to be uniform mod each prime."""
    if len(set(primes)) != 4:
        raise ValueError("exactly four distinct primes required")
    for p in primes:
        if not mu.reduce_mod(Field(p)).is_uniform():
            raise ValueError(f"measure is not uniform mod {p}")
    if threads <= 1:
        cert, large, small = _four_prime_chunk((mu, n, tuple(primes), seed, 0, trials))
    else:
        bounds = np.linspace(0, trials, threads + 1, dtype=int)
        tasks = [(mu, n, tuple(primes), seed, int(a), int(b))
                 for a, b in zip(bounds[:-1], bounds[1:]) if a < b]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_four_prime_chunk, tasks))
        cert = sum(p[0] for p in parts)
        large = sum(p[1] for p in parts)
        small = sum(p[2] for p in parts)
    meta = {"n": n, "primes": list(primes)}
    return FourPrimeReport(
        certified=Estimate.from_indicator(cert, trials, seed, dict(meta, event="certified")),
        shared_large_degree=Estimate.from_indicator(
            large, trials, seed, dict(meta, event="shared_large_degree")),
        shared_small_degree=Estimate.from_indicator(
            small, trials, seed, dict(meta, event="shared_small_degree")),
        primes=tuple(primes), n=n, trials=trials, seed=seed)
