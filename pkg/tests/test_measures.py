import math
import random
from fractions import Fraction

import pytest

from charpoly_lab import measures as ms
from charpoly_lab.gf import Field, parse_field_spec

F2 = Field(2)
F5 = Field(5)


def random_measure(field, rnd, min_support=2):
    """Random rational measure; resampled until balanced (alpha > 0)."""
    q = field.q
    while True:
        k = rnd.randrange(min_support, q + 1)
        support = rnd.sample(range(q), k)
        raw = [rnd.randrange(1, 20) for _ in support]
        tot = sum(raw)
        mu = ms.MeasureFq(field, {x: Fraction(w, tot) for x, w in zip(support, raw)})
        if mu.balancedness() > 0:
            return mu


# -- reduction -----------------------------------------------------------

def test_reduce_mod_examples():
    mu = ms.MeasureZ.pm1().reduce_mod(F5)
    assert mu.items() == [(1, Fraction(1, 2)), (4, Fraction(1, 2))]
    assert ms.MeasureZ.uniform_range(1, 210).reduce_mod(Field(7)).is_uniform()
    degenerate = ms.MeasureZ.pm1().reduce_mod(F2)
    assert degenerate.items() == [(1, Fraction(1))]
    assert degenerate.balancedness() == 0


def test_reduce_mod_rejects_extension_fields():
    with pytest.raises(ValueError):
        ms.MeasureZ.pm1().reduce_mod(Field(2, 2))


def test_measure_validation():
    with pytest.raises(ValueError):
        ms.MeasureFq(F2, {0: Fraction(1, 2)})
    with pytest.raises(ValueError):
        ms.MeasureFq(F2, {0: Fraction(3, 2), 1: Fraction(-1, 2)})


# -- balancedness --------------------------------------------------------

def test_balancedness_examples():
    assert ms.MeasureZ.pm1().reduce_mod(F5).balancedness() == Fraction(1, 2)
    assert ms.MeasureFq.uniform(Field(2, 2)).balancedness() == Fraction(1, 2)
    assert ms.MeasureFq.point(F5, 0).balancedness() == 0
    # uniform on F_q: worst coset is an index-p subgroup coset
    for spec in ("4", "8", "9", "25"):
        f = parse_field_spec(spec)
        assert ms.MeasureFq.uniform(f).balancedness() == 1 - Fraction(1, f.p)


def test_balancedness_uniform_shortcut_matches_scan():
    for spec in ("4", "9", "8"):
        f = parse_field_spec(spec)
        share = Fraction(1, f.q)
        explicit = ms.MeasureFq(f, {x: share for x in range(f.q)})
        assert explicit.balancedness() == ms.MeasureFq.uniform(f).balancedness()


def test_balancedness_detects_subgroup_support():
    # measure on the subgroup {0, 1} of F_4 is 0-balanced
    f4 = Field(2, 2)
    mu = ms.MeasureFq(f4, {0: Fraction(1, 2), 1: Fraction(1, 2)})
    assert mu.balancedness() == 0
    # a shifted copy too
    mu2 = ms.MeasureFq(f4, {2: Fraction(1, 2), 3: Fraction(1, 2)})
    assert mu2.balancedness() == 0


# -- Fourier -------------------------------------------------------------

def test_fourier_examples():
    mu = ms.MeasureZ.pm1().reduce_mod(F5)
    assert abs(mu.fourier(1) - math.cos(2 * math.pi / 5)) < 1e-12
    uni = ms.MeasureFq.uniform(Field(3, 2))
    assert uni.fourier(0) == 1
    assert all(abs(uni.fourier(u)) < 1e-12 for u in range(1, 9))
    delta = ms.MeasureFq.point(F5, 0)
    assert all(abs(delta.fourier(u) - 1) < 1e-12 for u in range(5))


def test_parseval():
    rnd = random.Random(2)
    for spec in ("3", "4", "5", "9"):
        f = parse_field_spec(spec)
        for _ in range(20):
            mu = random_measure(f, rnd)
            lhs = float(sum(w * w for _, w in mu.items()))
            rhs = sum(abs(mu.fourier(u)) ** 2 for u in range(f.q)) / f.q
            assert abs(lhs - rhs) < 1e-12


def test_large_spectrum():
    uni = ms.MeasureFq.uniform(F5)
    assert ms.large_spectrum(uni, 0.5) == [0]
    delta = ms.MeasureFq.point(F5, 0)
    assert ms.large_spectrum(delta, 1.0) == list(range(5))
    # |mu_hat(u)| = |cos(2 pi u / 5)|: 1, .309, .809, .809, .309
    mu = ms.MeasureZ.pm1().reduce_mod(F5)
    assert ms.large_spectrum(mu, 0.5) == [0, 2, 3]
    assert ms.large_spectrum(mu, 0.3) == [0, 1, 2, 3, 4]


def test_spec_sumset_containment():
    # Spec_{1-e1} + Spec_{1-e2} inside Spec_{1-2(e1+e2)}, exhaustively
    rnd = random.Random(4)
    for spec in ("3", "4", "5", "7", "8", "9", "25"):
        f = parse_field_spec(spec)
        for _ in range(50 if f.q <= 9 else 10):
            mu = random_measure(f, rnd)
            e1 = rnd.uniform(0, 0.15)
            e2 = rnd.uniform(0, 0.15)
            s1 = ms.large_spectrum(mu, 1 - e1)
            s2 = ms.large_spectrum(mu, 1 - e2)
            big = set(ms.large_spectrum(mu, max(0.0, 1 - 2 * (e1 + e2))))
            for a in s1:
                for b in s2:
                    assert f.add(a, b) in big


def test_spectrum_contains_no_subgroup():
    # Spec_{1 - alpha/2} never contains a nonzero subgroup
    rnd = random.Random(6)
    for spec in ("4", "8", "9"):
        f = parse_field_spec(spec)
        subgroups = [h for h in ms.additive_subgroups(f) if len(h) > 1]
        subgroups.append(tuple(range(f.q)))
        for _ in range(50):
            mu = random_measure(f, rnd)
            alpha = float(mu.balancedness())
            spec_set = set(ms.large_spectrum(mu, 1 - alpha / 2))
            for h in subgroups:
                assert not set(h) <= spec_set


def test_spectrum_ratio_diagnostic_runs():
    mu = ms.MeasureZ.pm1().reduce_mod(F5)
    assert ms.spectrum_ratio(mu, 0.5) >= 0.0


# -- smoothing -----------------------------------------------------------

def test_smooth_example():
    mu = ms.MeasureZ.pm1().reduce_mod(F5)
    nu = ms.smooth(mu, Fraction(1, 8))
    assert nu.mass(0) == Fraction(15, 16)
    assert nu.mass(2) == nu.mass(3) == Fraction(1, 32)
    delta = ms.MeasureFq.point(F5, 0)
    assert ms.smooth(delta, Fraction(1, 8)).items() == [(0, Fraction(1))]
    with pytest.raises(ValueError):
        ms.smooth(mu, Fraction(1, 4))


def test_smooth_properties():
    rnd = random.Random(8)
    gamma = Fraction(1, 8)
    for spec in ("3", "4", "5", "9"):
        f = parse_field_spec(spec)
        for _ in range(50):
            mu = random_measure(f, rnd)
            nu = ms.smooth(mu, gamma)
            # (1) nu is (gamma * alpha)-balanced, exactly
            assert nu.balancedness() >= gamma * mu.balancedness()
            mu_hat = [mu.fourier(u) for u in range(f.q)]
            nu_hat = [nu.fourier(u) for u in range(f.q)]
            for u in range(f.q):
                want = 1 - float(gamma) + float(gamma) * abs(mu_hat[u]) ** 2
                assert abs(nu_hat[u] - want) < 1e-12
                # (2) positive; (3) nu_hat^4 >= |mu_hat|
                assert nu_hat[u].real > 0
                assert nu_hat[u].real ** 4 >= abs(mu_hat[u]) - 1e-12
            # (4) nu_hat(s+t)^2 >= |mu_hat(s) mu_hat(t)|
            for s in range(f.q):
                for t in range(f.q):
                    lhs = nu_hat[f.add(s, t)].real ** 2
                    assert lhs >= abs(mu_hat[s]) * abs(mu_hat[t]) - 1e-12


# -- subspaces, rho, Odlyzko ----------------------------------------------

def test_subspace_validation():
    with pytest.raises(ValueError):
        ms.Subspace(F2, 2, ((1, 1), (1, 1)))  # dependent rows
    sub = ms.Subspace(F2, 3, ((1, 1, 0), (0, 1, 1)))
    assert sub.codim == 2
    basis = sub.basis()
    assert len(basis) == 1


def test_rho_examples():
    mu = ms.MeasureFq(F2, {0: Fraction(3, 4), 1: Fraction(1, 4)})
    sub = ms.Subspace(F2, 2, ((1, 1),))
    assert abs(ms.coset_deviation(sub, [mu, mu]) - 0.125) < 1e-12
    assert ms.coset_deviation_exact(sub, [mu, mu]) == Fraction(1, 8)
    # uniform rows are exactly equidistributed
    uni = ms.MeasureFq.uniform(F2)
    assert ms.coset_deviation(sub, [uni, uni]) < 1e-12
    # the whole space (codim 0)
    whole = ms.Subspace(F2, 2, ())
    assert ms.coset_deviation(whole, [mu, mu]) == 0.0
    rhos, worst = ms.rho(sub, [[mu, mu], [uni, uni]])
    assert worst == rhos[0] >= rhos[1]


def test_rho_fourier_matches_exact():
    rnd = random.Random(10)
    for spec in ("2", "3", "4", "5"):
        f = parse_field_spec(spec)
        for _ in range(15):
            n = rnd.randrange(2, 5)
            d = rnd.randrange(1, n + 1)
            rows = []
            while len(rows) < d:
                cand = tuple(rnd.randrange(f.q) for _ in range(n))
                try:
                    ms.Subspace(f, n, tuple(rows) + (cand,))
                except ValueError:
                    continue
                rows.append(cand)
            sub = ms.Subspace(f, n, tuple(rows))
            coords = [random_measure(f, rnd) for _ in range(n)]
            got = ms.coset_deviation(sub, coords)
            want = float(ms.coset_deviation_exact(sub, coords))
            assert abs(got - want) < 1e-10


def test_odlyzko_examples():
    mu = ms.MeasureFq(F2, {0: Fraction(3, 4), 1: Fraction(1, 4)})
    sub = ms.Subspace(F2, 2, ((1, 1),))
    prob, bound = ms.odlyzko_bound_check(sub, [mu, mu])
    assert prob == Fraction(5, 8) and bound == Fraction(3, 4)
    # a point (d = n): P = product of point masses
    f3 = Field(3)
    point = ms.Subspace(f3, 2, ((1, 0), (0, 1)))
    mu3 = ms.MeasureFq(f3, {0: Fraction(2, 3), 1: Fraction(1, 3)})
    prob, bound = ms.odlyzko_bound_check(point, [mu3, mu3], shift=(0, 1))
    assert prob == Fraction(2, 3) * Fraction(1, 3)
    assert bound == (1 - mu3.balancedness()) ** 2
    # uniform: P = q^-d
    uni = ms.MeasureFq.uniform(f3)
    prob, bound = ms.odlyzko_bound_check(point, [uni, uni])
    assert prob == Fraction(1, 9)


def test_odlyzko_random_measures():
    rnd = random.Random(12)
    for spec in ("2", "3", "4"):
        f = parse_field_spec(spec)
        for _ in range(30):
            n = rnd.randrange(1, 5)
            d = rnd.randrange(0, n + 1)
            rows = []
            while len(rows) < d:
                cand = tuple(rnd.randrange(f.q) for _ in range(n))
                try:
                    ms.Subspace(f, n, tuple(rows) + (cand,))
                except ValueError:
                    continue
                rows.append(cand)
            sub = ms.Subspace(f, n, tuple(rows))
            coords = [random_measure(f, rnd) for _ in range(n)]
            shift = tuple(rnd.randrange(f.q) for _ in range(n))
            prob, bound = ms.odlyzko_bound_check(sub, coords, shift=shift)
            assert 0 <= prob <= bound  # the assert inside also enforces this


# -- spec grammar ----------------------------------------------------------

def test_parse_measure_spec():
    assert ms.parse_measure_spec("uniform") == "uniform"
    assert ms.parse_measure_spec("pm1") == ms.MeasureZ.pm1()
    assert ms.parse_measure_spec("range:1..3") == ms.MeasureZ.uniform_range(1, 3)
    tab = ms.parse_measure_spec("table:0:3/4,1:1/4")
    assert tab.support == ((0, Fraction(3, 4)), (1, Fraction(1, 4)))
    with pytest.raises(ValueError):
        ms.parse_measure_spec("nope")
    assert ms.measure_on_field("uniform", F5).is_uniform()
