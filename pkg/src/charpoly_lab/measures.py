"""Finitely supported measures on Z and on F_q.

Weights are exact rationals end to end; floating point enters only through
the character values of the Fourier transform.  Balancedness quantifies
over every proper additive subgroup of F_q (the F_p-subspaces), which is
nontrivial precisely for extension fields.
"""

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .gf import Field

RHO_CAP = 10 ** 6       # cap on q^codim for coset enumeration
ENUM_CAP = 10 ** 6      # cap on q^n for exact whole-space checks


class MeasureFq:
    """A probability measure on F_q with exact rational weights.

    weights is a dict {element code: Fraction}; None marks the uniform
    measure, which gets exact shortcuts throughout.
    """

    def __init__(self, field: Field, weights=None):
        self.field = field
        if weights is None:
            self.weights = None
        else:
            w = {int(x): Fraction(v) for x, v in dict(weights).items() if v != 0}
            if any(v < 0 for v in w.values()):
                raise ValueError("negative weight")
            if sum(w.values()) != 1:
                raise ValueError("weights must sum to exactly 1")
            if any(not 0 <= x < field.q for x in w):
                raise ValueError("support outside the field")
            self.weights = w
        self._fourier = {}
        self._alpha = None

    # -- constructors --------------------------------------------------
    @classmethod
    def uniform(cls, field: Field):
        return cls(field, None)

    @classmethod
    def point(cls, field: Field, x: int):
        return cls(field, {x: Fraction(1)})

    # -- basics ----------------------------------------------------------
    def is_uniform(self) -> bool:
        if self.weights is None:
            return True
        share = Fraction(1, self.field.q)
        return (len(self.weights) == self.field.q
                and all(v == share for v in self.weights.values()))

    def mass(self, x: int) -> Fraction:
        if self.weights is None:
            return Fraction(1, self.field.q)
        return self.weights.get(x, Fraction(0))

    def items(self):
        if self.weights is None:
            share = Fraction(1, self.field.q)
            return [(x, share) for x in range(self.field.q)]
        return sorted(self.weights.items())

    def support(self):
        if self.weights is None:
            return list(range(self.field.q))
        return sorted(self.weights)

    def translate(self, s: int) -> "MeasureFq":
        if self.weights is None or s == 0:
            return MeasureFq(self.field, self.weights)
        f = self.field
        return MeasureFq(f, {f.add(x, s): w for x, w in self.weights.items()})

    def negate(self) -> "MeasureFq":
        if self.weights is None:
            return MeasureFq(self.field, None)
        f = self.field
        return MeasureFq(f, {f.neg(x): w for x, w in self.weights.items()})

    def convolve(self, other: "MeasureFq") -> "MeasureFq":
        f = self.field
        out = defaultdict(Fraction)
        for x, wx in self.items():
            for y, wy in other.items():
                out[f.add(x, y)] += wx * wy
        return MeasureFq(f, out)

    def __getstate__(self):
        return (self.field, self.weights)

    def __setstate__(self, state):
        self.field, self.weights = state
        self._fourier = {}
        self._alpha = None

    def __repr__(self):
        if self.weights is None:
            return f"MeasureFq(uniform on {self.field!r})"
        return f"MeasureFq({self.field!r}, {dict(self.items())})"

    # -- balancedness ------------------------------------------------------
    def balancedness(self) -> Fraction:
        """Largest alpha with mu(x+H) <= 1-alpha for every proper subgroup H
        and every shift x.  Zero iff the measure sits on a single coset."""
        if self._alpha is not None:
            return self._alpha
        f = self.field
        if self.weights is None:
            self._alpha = 1 - Fraction(1, f.p)
            return self._alpha
        worst = Fraction(0)
        for basis in _proper_subspace_bases(f.p, f.k):
            coset_mass = defaultdict(Fraction)
            for x, w in self.weights.items():
                coset_mass[_coset_rep(f, x, basis)] += w
            m = max(coset_mass.values())
            if m > worst:
                worst = m
        self._alpha = 1 - worst
        return self._alpha

    # -- Fourier -----------------------------------------------------------
    def fourier(self, u: int) -> complex:
        """mu_hat(u) = sum_x mu(x) chi(-u x), with the canonical character chi."""
        if u == 0:
            return 1.0 + 0j
        if u in self._fourier:
            return self._fourier[u]
        f = self.field
        if self.weights is None:
            val = 0j  # character orthogonality, exactly
        else:
            val = sum(float(w) * f.char_value(f.mul(u, x)).conjugate()
                      for x, w in self.weights.items())
        self._fourier[u] = val
        return val

    def fourier_table(self) -> np.ndarray:
        return np.array([self.fourier(u) for u in range(self.field.q)])


def _proper_subspace_bases(p: int, k: int):
    """RREF bases of all proper F_p-subspaces of F_p^k, including {0} (d = 0)."""
    yield ()
    for d in range(1, k):
        for pivots in itertools.combinations(range(k), d):
            free_pos = [(r, c) for r in range(d) for c in range(k)
                        if c > pivots[r] and c not in pivots]
            for assign in itertools.product(range(p), repeat=len(free_pos)):
                rows = [[0] * k for _ in range(d)]
                for r in range(d):
                    rows[r][pivots[r]] = 1
                for (r, c), v in zip(free_pos, assign):
                    rows[r][c] = v
                yield tuple(tuple(r) for r in rows)


def _coset_rep(field: Field, x: int, basis) -> int:
    """Canonical representative of x + span(basis): zero out pivot coords."""
    if not basis:
        return x
    coords = list(field.decode(x))
    p = field.p
    for row in basis:
        piv = next(i for i, v in enumerate(row) if v)
        c = coords[piv]
        if c:
            for i, v in enumerate(row):
                if v:
                    coords[i] = (coords[i] - c * v) % p
    return field.encode(coords)


def additive_subgroups(field: Field):
    """All proper additive subgroups of F_q, as sorted tuples of codes."""
    out = []
    for basis in _proper_subspace_bases(field.p, field.k):
        elems = {0}
        for row in basis:
            code = field.encode(row)
            multiples = [0]
            m = 0
            for _ in range(field.p - 1):
                m = field.add(m, code)
                multiples.append(m)
            elems = {field.add(e, mult) for e in elems for mult in multiples}
        out.append(tuple(sorted(elems)))
    return out


# ---------------------------------------------------------------------------
# Measures on Z

@dataclass(frozen=True)
class MeasureZ:
    """Finitely supported measure on Z: ((value, weight), ...) sorted by value."""
    support: tuple

    def __post_init__(self):
        vals = [v for v, _ in self.support]
        if len(vals) != len(set(vals)) or not vals:
            raise ValueError("support values must be distinct and nonempty")
        if sum(w for _, w in self.support) != 1:
            raise ValueError("weights must sum to exactly 1")
        if any(w <= 0 for _, w in self.support):
            raise ValueError("weights must be positive")

    @classmethod
    def from_pairs(cls, pairs):
        return cls(tuple(sorted((int(v), Fraction(w)) for v, w in pairs)))

    @classmethod
    def pm1(cls):
        return cls.from_pairs([(-1, Fraction(1, 2)), (1, Fraction(1, 2))])

    @classmethod
    def uniform_range(cls, a: int, b: int):
        n = b - a + 1
        if n < 1:
            raise ValueError("empty range")
        return cls.from_pairs([(v, Fraction(1, n)) for v in range(a, b + 1)])

    def reduce_mod(self, field: Field) -> MeasureFq:
        """Push forward along Z -> F_p.  Extension fields are rejected."""
        if field.k != 1:
            raise ValueError("reduction targets prime fields only")
        out = defaultdict(Fraction)
        for v, w in self.support:
            out[v % field.p] += w
        return MeasureFq(field, out)


# ---------------------------------------------------------------------------
# Smoothing (replaces a measure by one with strictly positive transform)

def smooth(mu: MeasureFq, gamma=Fraction(1, 8)) -> MeasureFq:
    """nu = (1-gamma) delta_0 + gamma mu * mu^-.

    nu_hat = 1 - gamma + gamma |mu_hat|^2 is real and positive; nu is
    (gamma*alpha)-balanced when mu is alpha-balanced, nu_hat^4 >= |mu_hat|,
    and nu_hat(s+t)^2 >= |mu_hat(s)| |mu_hat(t)|.
    """
    gamma = Fraction(gamma)
    if not 0 < gamma <= Fraction(1, 8):
        raise ValueError("gamma must lie in (0, 1/8]")
    f = mu.field
    out = defaultdict(Fraction)
    out[0] = 1 - gamma
    for x, wx in mu.items():
        for y, wy in mu.items():
            out[f.sub(x, y)] += gamma * wx * wy
    return MeasureFq(f, out)


def large_spectrum(mu: MeasureFq, t: float) -> list:
    """Spec_t(mu) = {u : |mu_hat(u)| >= t}, by full scan."""
    if not 0 <= t <= 1:
        raise ValueError("threshold must lie in [0, 1]")
    return [u for u in range(mu.field.q) if abs(mu.fourier(u)) >= t]


def spectrum_ratio(mu: MeasureFq, eps: float) -> float:
    """Diagnostic |Spec_{1 - eps*alpha} \\ {0}| / (eps^(1/2) q).

    For alpha-balanced measures the nonzero large spectrum has size
    O(eps^(1/2) q); the constant is not pinned anywhere, so this reports the
    measured ratio and asserts nothing.
    """
    alpha = float(mu.balancedness())
    spec = large_spectrum(mu, 1 - eps * alpha)
    return (len(spec) - 1) / (eps ** 0.5 * mu.field.q)


# ---------------------------------------------------------------------------
# Subspaces and coset nonuniformity

@dataclass(frozen=True)
class Subspace:
    """V <= F_q^n given by a basis of V-perp (rows of a full-row-rank d x n matrix)."""
    field: Field
    n: int
    perp: tuple  # d rows, each a length-n tuple of codes

    def __post_init__(self):
        rows = [list(r) for r in self.perp]
        if any(len(r) != self.n for r in rows):
            raise ValueError("perp rows must have length n")
        if rows and linalg.rank(self.field, rows) != len(rows):
            raise ValueError("perp basis rows must be independent")

    @property
    def codim(self) -> int:
        return len(self.perp)

    def basis(self):
        """A basis of V itself (the kernel of the perp matrix)."""
        if not self.perp:
            return [tuple(1 if j == i else 0 for j in range(self.n))
                    for i in range(self.n)]
        return linalg.nullspace(self.field, [list(r) for r in self.perp])


def _syndrome_distribution(sub: Subspace, coord_measures):
    """Exact law of (v . X)_{v in perp basis}; dict {syndrome tuple: Fraction}."""
    f = sub.field
    d = sub.codim
    dist = {(0,) * d: Fraction(1)}
    for j in range(sub.n):
        col = tuple(sub.perp[i][j] for i in range(d))
        new = defaultdict(Fraction)
        for x, wx in coord_measures[j].items():
            inc = tuple(f.mul(x, c) for c in col)
            if any(inc):
                for s, ws in dist.items():
                    key = tuple(f.add(a, b) for a, b in zip(s, inc))
                    new[key] += ws * wx
            else:
                for s, ws in dist.items():
                    new[s] += ws * wx
        dist = new
    return dist


def coset_deviation_exact(sub: Subspace, coord_measures) -> Fraction:
    """rho for one row, exactly: max_x |P(X in x+V) - q^-codim|, by direct
    dynamic-programming enumeration over coset representatives."""
    d = sub.codim
    if d == 0:
        return Fraction(0)
    q = sub.field.q
    if q ** d > RHO_CAP:
        raise ValueError(f"q^codim = {q ** d} exceeds the cap {RHO_CAP}")
    dist = _syndrome_distribution(sub, coord_measures)
    target = Fraction(1, q ** d)
    worst = max(abs(w - target) for w in dist.values())
    if len(dist) < q ** d:
        worst = max(worst, target)
    return worst


def coset_deviation(sub: Subspace, coord_measures) -> float:
    """rho for one row via the Fourier coset identity
    P(X in x+V) = q^-d sum_{v in V-perp} chi(x.v) prod_j mu_j_hat(v_j)."""
    f = sub.field
    d = sub.codim
    if d == 0:
        return 0.0
    q = f.q
    if q ** d > RHO_CAP:
        raise ValueError(f"q^codim = {q ** d} exceeds the cap {RHO_CAP}")
    tables = [m.fourier_table() for m in coord_measures]
    w = np.empty((q,) * d, dtype=complex)
    for cvec in itertools.product(range(q), repeat=d):
        v = [0] * sub.n
        for ci, row in zip(cvec, sub.perp):
            if ci:
                for j in range(sub.n):
                    v[j] = f.add(v[j], f.mul(ci, row[j]))
        acc = 1.0 + 0j
        for j in range(sub.n):
            acc *= tables[j][v[j]]
            if acc == 0:
                break
        w[cvec] = acc
    chi_mat = np.array([[f.char_value(f.mul(a, b)) for b in range(q)]
                        for a in range(q)])
    for _ in range(d):
        w = np.tensordot(w, chi_mat, axes=([0], [1]))
    probs = w / q ** d
    return float(np.max(np.abs(probs - 1.0 / q ** d)))


def rho(sub: Subspace, rows_of_measures):
    """Per-row rho_i over a sequence of rows (each a sequence of n coordinate
    measures) and rho = max_i rho_i."""
    rhos = [coset_deviation(sub, row) for row in rows_of_measures]
    return rhos, max(rhos) if rhos else 0.0


def odlyzko_bound_check(sub: Subspace, coord_measures, shift=None):
    """Exact P(X in shift+V) against the bound (1-alpha)^codim with alpha the
    least per-coordinate balancedness.  Returns (probability, bound)."""
    f = sub.field
    n = sub.n
    if f.q ** n > ENUM_CAP:
        raise ValueError(f"q^n = {f.q ** n} exceeds the cap {ENUM_CAP}")
    d = sub.codim
    dist = _syndrome_distribution(sub, coord_measures)
    if shift is None:
        target = (0,) * d
    else:
        target = tuple(
            _dot(f, sub.perp[i], shift) for i in range(d))
    prob = dist.get(target, Fraction(0))
    alpha = min(m.balancedness() for m in coord_measures)
    bound = (1 - alpha) ** d
    assert prob <= bound, "Odlyzko bound violated (impossible for product measures)"
    return prob, bound


def _dot(field: Field, u, v) -> int:
    acc = 0
    for a, b in zip(u, v):
        acc = field.add(acc, field.mul(a, b))
    return acc


# ---------------------------------------------------------------------------
# Measure spec grammar (shared by the CLI):
#   pm1          (delta_-1 + delta_1)/2
#   uniform      uniform on F_q
#   range:a..b   uniform on the integers a..b
#   table:v1:w1,v2:w2,...   rational weights like 2/3

def parse_measure_spec(spec: str):
    """Parse to a MeasureZ, or the string 'uniform' (resolved per field)."""
    s = spec.strip()
    if s == "uniform":
        return "uniform"
    if s == "pm1":
        return MeasureZ.pm1()
    if s.startswith("range:"):
        a, b = s[len("range:"):].split("..")
        return MeasureZ.uniform_range(int(a), int(b))
    if s.startswith("table:"):
        pairs = []
        for item in s[len("table:"):].split(","):
            v, w = item.split(":")
            pairs.append((int(v), Fraction(w)))
        return MeasureZ.from_pairs(pairs)
    raise ValueError(f"unrecognized measure spec {spec!r}")


def measure_on_field(spec: str, field: Field) -> MeasureFq:
    mz = parse_measure_spec(spec)
    if mz == "uniform":
        return MeasureFq.uniform(field)
    return mz.reduce_mod(field)
