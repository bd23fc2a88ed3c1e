"""Seeded samplers for random-matrix factorization statistics.

Every estimator draws trial t from the substream (seed, t), so results are
bitwise reproducible for a fixed seed no matter how trials are chunked
across workers; merging is integer addition of success counts.
"""

import math
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import fqpoly, kernels, linalg
from .gf import Field
from .measures import MeasureFq
from .rng import substream

REJECTION_CAP = 10 ** 6
EXACT_CAP = 1 << 20

PARTITION_SOURCES = ("matrix", "gl", "unipoly", "perm", "poisson")
_BOOTSTRAP_PATH = len(PARTITION_SOURCES)


@dataclass
class Estimate:
    """A Monte Carlo point estimate with its binomial standard error."""
    value: float
    stderr: float
    trials: int
    seed: int
    metadata: dict = dc_field(default_factory=dict)
    target: float = None

    @classmethod
    def from_indicator(cls, successes: int, trials: int, seed: int,
                       metadata=None, target=None):
        v = successes / trials if trials else 0.0
        se = math.sqrt(v * (1 - v) / trials) if trials else 0.0
        return cls(v, se, trials, seed, metadata or {}, target)


class MeasureMatrix:
    """Entry laws for an n x n random matrix: one shared measure on F_q plus
    optional per-cell additive shifts (enough for iid ensembles and for the
    diagonal-shifted ensembles of M - lambda*I)."""

    def __init__(self, field: Field, n: int, base: MeasureFq, shifts=None):
        if base.field != field:
            raise ValueError("base measure lives on a different field")
        self.field = field
        self.n = n
        self.base = base
        if shifts is not None:
            shifts = tuple(tuple(int(s) % field.q for s in row) for row in shifts)
            if len(shifts) != n or any(len(r) != n for r in shifts):
                raise ValueError("shift matrix must be n x n")
            if not any(any(row) for row in shifts):
                shifts = None
        self.shifts = shifts
        self._tables = None
        self._shift_arr = None
        self._add_tab = None

    @classmethod
    def iid(cls, base: MeasureFq, n: int):
        return cls(base.field, n, base)

    @classmethod
    def shifted_diagonal(cls, base: MeasureFq, n: int, lam: int):
        """The law of M - lam*I when M has iid entries from base."""
        f = base.field
        neg = f.neg(lam)
        shifts = [[neg if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(f, n, base, shifts)

    def cell(self, i: int, j: int) -> MeasureFq:
        if self.shifts is None:
            return self.base
        return self.base.translate(self.shifts[i][j])

    def row_measures(self, i: int):
        return [self.cell(i, j) for j in range(self.n)]

    def alpha(self) -> Fraction:
        """Balancedness (translation invariant, so one check suffices)."""
        return self.base.balancedness()

    def __getstate__(self):
        return (self.field, self.n, self.base, self.shifts)

    def __setstate__(self, state):
        self.field, self.n, self.base, self.shifts = state
        self._tables = self._shift_arr = self._add_tab = None

    # -- sampling ----------------------------------------------------------
    def _sampler_tables(self):
        if self._tables is None:
            items = self.base.items()
            den = 1
            for _, w in items:
                den = den * w.denominator // math.gcd(den, w.denominator)
            cum = []
            vals = []
            acc = 0
            for x, w in items:
                acc += w.numerator * (den // w.denominator)
                cum.append(acc)
                vals.append(x)
            assert acc == den
            self._tables = (np.array(cum, dtype=np.int64),
                            np.array(vals, dtype=np.int64), den)
            if self.shifts is not None:
                self._shift_arr = np.array(self.shifts, dtype=np.int64)
                if self.field.k > 1:
                    q = self.field.q
                    self._add_tab = np.array(
                        [[self.field.add(a, b) for b in range(q)] for a in range(q)],
                        dtype=np.int64)
        return self._tables

    def sample(self, rng: np.random.Generator, rows: int = None) -> np.ndarray:
        """Draw a matrix of element codes (top `rows` rows if given).

        Entries are chosen by inverse CDF on the exact cumulative weights;
        the underlying integer draws are unbiased (rejection sampling inside
        numpy's bounded-integer generator).
        """
        cum, vals, den = self._sampler_tables()
        r = self.n if rows is None else rows
        raw = rng.integers(0, den, size=(r, self.n), dtype=np.int64)
        m = vals[np.searchsorted(cum, raw, side="right")]
        if self.shifts is not None:
            sh = self._shift_arr[:r]
            if self.field.k == 1:
                m = (m + sh) % self.field.p
            else:
                m = self._add_tab[m, sh]
        return m


def sample_matrix(mm: MeasureMatrix, seed: int) -> np.ndarray:
    """One matrix from the ensemble, deterministic in the seed."""
    return mm.sample(substream(seed))


# ---------------------------------------------------------------------------
# Rank plumbing (fast kernel over prime fields, generic fallback otherwise)

def _rank(field: Field, arr: np.ndarray) -> int:
    if field.k == 1:
        return int(kernels.rank_mod_p(np.ascontiguousarray(arr), field.p))
    return linalg.rank(field, [list(map(int, row)) for row in arr])


def _charpoly(field: Field, arr: np.ndarray) -> tuple:
    if field.k == 1:
        return tuple(int(c) for c in
                     kernels.charpoly_mod_p(np.ascontiguousarray(arr), field.p))
    return linalg.charpoly_fq(field, [list(map(int, row)) for row in arr])


def partial_product(q: int, start: int = 1) -> float:
    """prod_{i >= start} (1 - q^-i) to machine precision."""
    out = 1.0
    i = start
    while True:
        t = float(q) ** -i
        if t < 1e-18:
            break
        out *= 1 - t
        i += 1
    return out


def limit_nonsingular(q: int) -> float:
    return partial_product(q, 1)


# ---------------------------------------------------------------------------
# Chunked estimator core

def _count_chunk(task) -> int:
    kind, mm, params, seed, start, stop = task
    field = mm.field
    n = mm.n
    cnt = 0
    if kind == "nonsingular":
        for t in range(start, stop):
            m = mm.sample(substream(seed, t))
            if _rank(field, m) == n:
                cnt += 1
    elif kind == "rank_full":
        k = params["k"]
        for t in range(start, stop):
            m = mm.sample(substream(seed, t), rows=k)
            if _rank(field, m) == k:
                cnt += 1
    elif kind == "joint_eigen":
        lams = params["lams"]
        idx = np.arange(n)
        for t in range(start, stop):
            m = mm.sample(substream(seed, t))
            ok = True
            for lam in lams:
                ms = m.copy()
                if field.k == 1:
                    ms[idx, idx] = (ms[idx, idx] - lam) % field.p
                else:
                    for i in range(n):
                        ms[i, i] = field.sub(int(ms[i, i]), lam)
                if _rank(field, ms) == n:
                    ok = False
                    break
            if ok:
                cnt += 1
    else:
        raise ValueError(f"unknown estimator kind {kind!r}")
    return cnt


def _run_trials(kind, mm, params, seed, trials, threads) -> int:
    if threads <= 1:
        return _count_chunk((kind, mm, params, seed, 0, trials))
    bounds = np.linspace(0, trials, threads + 1, dtype=int)
    tasks = [(kind, mm, params, seed, int(a), int(b))
             for a, b in zip(bounds[:-1], bounds[1:]) if a < b]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return sum(ex.map(_count_chunk, tasks))


def _check_alpha(mm: MeasureMatrix):
    if mm.alpha() <= 0:
        warnings.warn("entry measure is supported on a coset of a proper "
                      "subgroup (alpha = 0); limit formulas need alpha > 0")


def estimate_nonsingular(mm: MeasureMatrix, trials: int, seed: int,
                         threads: int = 1) -> Estimate:
    """Indicator average of {rank M = n}; target is prod (1 - q^-i)."""
    _check_alpha(mm)
    cnt = _run_trials("nonsingular", mm, {}, seed, trials, threads)
    meta = {"n": mm.n, "q": mm.field.q, "estimator": "nonsingular"}
    return Estimate.from_indicator(cnt, trials, seed, meta,
                                   target=limit_nonsingular(mm.field.q))


def exact_nonsingular(mm: MeasureMatrix) -> Fraction:
    """Exact nonsingularity probability by weighted enumeration of M_n(q)."""
    q = mm.field.q
    n = mm.n
    total = q ** (n * n)
    if total > EXACT_CAP:
        raise ValueError(f"q^(n^2) = {total} exceeds the cap {EXACT_CAP}")
    masses = [[{x: mm.cell(i, j).mass(x) for x in range(q)} for j in range(n)]
              for i in range(n)]
    out = Fraction(0)
    mat = np.zeros((n, n), dtype=np.int64)
    for idx in range(total):
        rem = idx
        w = Fraction(1)
        for c in range(n * n):
            e = rem % q
            rem //= q
            w *= masses[c // n][c % n][e]
            if not w:
                break
            mat[c // n, c % n] = e
        if w and _rank(mm.field, mat.copy()) == n:
            out += w
    return out


def estimate_rank_full(mm: MeasureMatrix, k: int, trials: int, seed: int,
                       threads: int = 1) -> Estimate:
    """P(top k x n block has rank k); target prod_{i=n-k+1}^inf (1 - q^-i)."""
    if not 0 <= k <= mm.n:
        raise ValueError("need 0 <= k <= n")
    _check_alpha(mm)
    cnt = _run_trials("rank_full", mm, {"k": k}, seed, trials, threads)
    meta = {"n": mm.n, "q": mm.field.q, "k": k, "estimator": "rank_full"}
    return Estimate.from_indicator(cnt, trials, seed, meta,
                                   target=partial_product(mm.field.q, mm.n - k + 1))


def estimate_joint_eigen(mm: MeasureMatrix, lams, trials: int, seed: int,
                         threads: int = 1) -> Estimate:
    """P(every lam_j is an eigenvalue), one matrix per trial serving all j.

    The reference level (q-1)^-m is reported as the target.
    """
    lams = [mm.field.check(l) for l in lams]
    if len(lams) != len(set(lams)) or not lams:
        raise ValueError("eigenvalue list must be nonempty and distinct")
    _check_alpha(mm)
    cnt = _run_trials("joint_eigen", mm, {"lams": lams}, seed, trials, threads)
    m = len(lams)
    meta = {"n": mm.n, "q": mm.field.q, "lambdas": lams, "estimator": "joint_eigen"}
    return Estimate.from_indicator(cnt, trials, seed, meta,
                                   target=(mm.field.q - 1) ** -m)


# ---------------------------------------------------------------------------
# Partition samplers: factor-degree / cycle-length laws

def _cycle_type(perm) -> tuple:
    n = len(perm)
    seen = bytearray(n)
    parts = []
    for i in range(n):
        if not seen[i]:
            ln = 0
            j = i
            while not seen[j]:
                seen[j] = 1
                j = int(perm[j])
                ln += 1
            parts.append(ln)
    return tuple(sorted(parts, reverse=True))


def sample_partition(source: str, n: int, field: Field,
                     rng: np.random.Generator) -> tuple:
    """One partition of n from the named generator.

    matrix:  factor degrees of det(tI - M), M uniform in M_n(q)
    gl:      the same conditioned on M invertible (rejection)
    unipoly: factor degrees of a uniform monic degree-n polynomial
    perm:    cycle type of a uniform permutation (Fisher-Yates)
    poisson: Z_i copies of i, Z_i ~ Poisson(1/i), conditioned on
             sum i Z_i = n (rejection)
    """
    q = field.q
    if source == "matrix" or source == "gl":
        for _ in range(REJECTION_CAP):
            m = rng.integers(0, q, size=(n, n), dtype=np.int64)
            phi = _charpoly(field, m)
            if source == "gl" and phi[0] == 0:
                continue
            return tuple(fqpoly.factor_degrees(field, fqpoly.trim(phi)))
        raise RuntimeError("rejection cap exceeded in GL sampling")
    if source == "unipoly":
        coeffs = tuple(int(c) for c in rng.integers(0, q, size=n)) + (1,)
        return tuple(fqpoly.factor_degrees(field, coeffs))
    if source == "perm":
        return _cycle_type(rng.permutation(n))
    if source == "poisson":
        sizes = np.arange(1, n + 1)
        lam = 1.0 / sizes
        for _ in range(REJECTION_CAP):
            z = rng.poisson(lam)
            if int(np.dot(sizes, z)) == n:
                parts = []
                for i in range(n, 0, -1):
                    parts.extend([i] * int(z[i - 1]))
                return tuple(parts)
        raise RuntimeError("rejection cap exceeded in conditioned-Poisson sampling")
    raise ValueError(f"unknown partition source {source!r}; "
                     f"choose from {PARTITION_SOURCES}")


def sample_partitions(source: str, n: int, field: Field, count: int,
                      seed: int) -> list:
    """count partitions; sample i uses substream (seed, source index, i), so
    two calls with the same source and seed coincide sample for sample."""
    tag = PARTITION_SOURCES.index(source)
    return [sample_partition(source, n, field, substream(seed, tag, i))
            for i in range(count)]


def truncate_partition(partition, r: int) -> tuple:
    """Keep the parts of size at least r."""
    return tuple(p for p in partition if p >= r)


@dataclass
class TVReport:
    tv: float
    stderr: float
    samples: int
    seed: int
    metadata: dict = dc_field(default_factory=dict)


def tv_compare(source_a: str, source_b: str, n: int, field: Field, r: int,
               samples: int, seed: int, bootstrap: int = 200) -> TVReport:
    """Plug-in total variation between the truncated laws of two sources.

    Empirical histograms over the truncated-partition alphabet;
    TV = (1/2) sum |p_hat_A - p_hat_B|, with a paired-bootstrap stderr.
    Identical sources with the same seed share substreams and give TV = 0.
    """
    if r < 1:
        raise ValueError("truncation threshold r must be >= 1")
    part_a = [truncate_partition(p, r)
              for p in sample_partitions(source_a, n, field, samples, seed)]
    part_b = [truncate_partition(p, r)
              for p in sample_partitions(source_b, n, field, samples, seed)]
    hist_a = Counter(part_a)
    hist_b = Counter(part_b)
    keys = sorted(set(hist_a) | set(hist_b))
    ca = np.array([hist_a.get(k, 0) for k in keys], dtype=float)
    cb = np.array([hist_b.get(k, 0) for k in keys], dtype=float)
    tv = 0.5 * float(np.abs(ca / samples - cb / samples).sum())
    boots = []
    pa = ca / samples
    pb = cb / samples
    for b in range(bootstrap):
        rng = substream(seed, _BOOTSTRAP_PATH, b)
        ra = rng.multinomial(samples, pa) / samples
        rb = rng.multinomial(samples, pb) / samples
        boots.append(0.5 * float(np.abs(ra - rb).sum()))
    stderr = float(np.std(boots, ddof=1)) if bootstrap > 1 else 0.0
    meta = {"source_a": source_a, "source_b": source_b, "n": n,
            "q": field.q, "r": r, "distinct_types": len(keys)}
    return TVReport(tv, stderr, samples, seed, meta)
