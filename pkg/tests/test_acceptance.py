"""Acceptance suite: one test per criterion, at the stated trial counts and
tolerances, each printing a PASS/FAIL line with the measured values.

Criteria 6 and 9 are implemented exactly as stated and are expected to fail
for structural reasons (measured and documented in the failure messages):
the plug-in TV noise floor between *equal* laws already exceeds the stated
thresholds at the stated sample sizes, and the four-prime certified rate is
capped near 0.6 by the probability that degree 1 is achievable modulo all
four primes.  The tests stay red rather than bending the thresholds.
"""

import math
import random
from collections import Counter
from fractions import Fraction

import pytest

from charpoly_lab import certify as ct
from charpoly_lab import exact, fqpoly
from charpoly_lab import measures as ms
from charpoly_lab import montecarlo as mc
from charpoly_lab import primes as pr
from charpoly_lab.gf import Field, parse_field_spec
from charpoly_lab.measures import MeasureZ
from charpoly_lab.rng import substream

THREADS = 2  # results are worker-count independent; this only buys time


def report(num, ok, detail):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}", flush=True)
    assert ok, f"criterion {num}: {detail}"


def test_criterion_01_reiner_exactness():
    import time
    t0 = time.time()
    bad = []
    for q, n in ((2, 2), (2, 3), (3, 2), (2, 4)):
        tc = exact.enumerate_types(Field(q), n)
        for named, cnt in tc.named.items():
            ftype = [(fqpoly.degree(c), m) for c, m in named]
            if exact.reiner_count(q, n, ftype) != cnt:
                bad.append((q, n, named))
        if sum(tc.named.values()) != q ** (n * n):
            bad.append((q, n, "total"))
    dt = time.time() - t0
    report(1, not bad and dt < 60,
           f"formula == enumeration for all named types at (2,2),(2,3),(3,2),(2,4); "
           f"{dt:.1f}s" + (f"; mismatches {bad}" if bad else ""))


def test_criterion_02_cr_ratio_constancy():
    rows, spread = exact.cr_ratios(2, 3)
    report(2, spread < 1e-8,
           f"P(C)/prod P(Z_d=c_d) constant over {len(rows)} tuples, "
           f"relative spread {spread:.2e} (beta_3 ~ {rows[0][1]:.6f})")


def test_criterion_03_nonsingularity():
    f3 = Field(3)
    mm = mc.MeasureMatrix.iid(ms.MeasureFq.uniform(f3), 30)
    est_a = mc.estimate_nonsingular(mm, 100000, seed=301, threads=THREADS)
    dev_a = abs(est_a.value - est_a.target)
    f5 = Field(5)
    pm15 = MeasureZ.pm1().reduce_mod(f5)
    mm_b = mc.MeasureMatrix.iid(pm15, 40)
    est_b = mc.estimate_nonsingular(mm_b, 100000, seed=302, threads=THREADS)
    dev_b = abs(est_b.value - est_b.target)
    ok = dev_a < 4 * est_a.stderr and dev_b < 4 * est_b.stderr
    report(3, ok,
           f"q=3 n=30: {est_a.value:.5f} vs {est_a.target:.6f} "
           f"({dev_a / est_a.stderr:.2f} se); pm1 mod 5 n=40: {est_b.value:.5f} "
           f"vs {est_b.target:.6f} ({dev_b / est_b.stderr:.2f} se)")


def test_criterion_04_rank_of_block():
    f2 = Field(2)
    mm = mc.MeasureMatrix.iid(ms.MeasureFq.uniform(f2), 25)
    est = mc.estimate_rank_full(mm, 24, 100000, seed=401, threads=THREADS)
    dev = abs(est.value - est.target)
    report(4, dev < 4 * est.stderr,
           f"q=2 n=25 k=24: {est.value:.5f} vs {est.target:.6f} "
           f"({dev / est.stderr:.2f} se)")


def test_criterion_05_eigenvalue_correlation():
    f7 = Field(7)
    mm = mc.MeasureMatrix.iid(ms.MeasureFq.uniform(f7), 25)
    joint = mc.estimate_joint_eigen(mm, [1, 2], 200000, seed=501, threads=THREADS)
    single = mc.estimate_joint_eigen(mm, [1], 200000, seed=502, threads=THREADS)
    level = (1 / 6) ** 2
    cap_ok = joint.value <= level * 1.2 + 4 * joint.stderr
    combined_se = math.sqrt(joint.stderr ** 2
                            + (2 * single.value * single.stderr) ** 2)
    indep_ok = abs(joint.value - single.value ** 2) < 4 * combined_se
    report(5, cap_ok and indep_ok,
           f"joint {joint.value:.5f} <= 1.2/36 + 4se = {level * 1.2 + 4 * joint.stderr:.5f}; "
           f"|joint - single^2| = {abs(joint.value - single.value ** 2):.5f} "
           f"vs 4se = {4 * combined_se:.5f}")


def _equal_law_floor(source, n, r, samples, seed_a, seed_b, field):
    ha = Counter(mc.truncate_partition(p, r)
                 for p in mc.sample_partitions(source, n, field, samples, seed_a))
    hb = Counter(mc.truncate_partition(p, r)
                 for p in mc.sample_partitions(source, n, field, samples, seed_b))
    keys = set(ha) | set(hb)
    return 0.5 * sum(abs(ha.get(k, 0) - hb.get(k, 0)) / samples for k in keys)


def test_criterion_06_tv_equivalences():
    f2 = Field(2)
    rep_45 = mc.tv_compare("perm", "poisson", 40, f2, 1, 20000, seed=601)
    rep_14 = mc.tv_compare("matrix", "perm", 80, f2, 8, 20000, seed=602)
    floor_45 = _equal_law_floor("perm", 40, 1, 20000, 6011, 6012, f2)
    floor_14 = _equal_law_floor("perm", 80, 8, 20000, 6021, 6022, f2)
    ok = rep_45.tv <= 0.05 and rep_14.tv <= 0.2
    report(6, ok,
           f"TV(perm, poisson; n=40, r=1) = {rep_45.tv:.4f} (threshold 0.05, "
           f"equal-law plug-in floor {floor_45:.4f}); "
           f"TV(matrix q=2, perm; n=80, r=8) = {rep_14.tv:.4f} (threshold 0.2, "
           f"equal-law floor {floor_14:.4f}).  The floors exceed the "
           f"thresholds at 2e4 samples, so the stated bounds are unattainable "
           f"for any plug-in estimator, including on identical laws.")


def test_criterion_07_weighted_moments():
    import time
    t0 = time.time()
    r1 = pr.weighted_moment((1, 0, 1), 1, 12.0)
    r2 = pr.weighted_moment((1, 0, 1), 2, 12.0)
    prod = [0] * 6
    for i, a in enumerate((1, 0, 1)):
        for j, b in enumerate((-1, -1, 0, 1)):
            prod[i + j] += a * b
    r3 = pr.weighted_moment(tuple(prod), 1, 13.0)
    dt = time.time() - t0
    ok = (0.85 <= r1.weighted_sum <= 1.15 and 1.7 <= r2.weighted_sum <= 2.3
          and 1.8 <= r3.weighted_sum <= 2.2 and dt < 240)
    report(7, ok,
           f"moments: m=1 X=12 -> {r1.weighted_sum:.4f} in [0.85,1.15]; "
           f"m=2 X=12 -> {r2.weighted_sum:.4f} in [1.7,2.3]; "
           f"product m=1 X=13 -> {r3.weighted_sum:.4f} in [1.8,2.2]; {dt:.0f}s")


def test_criterion_08_certifier_soundness():
    rnd = random.Random(801)
    false_certs = 0
    for _ in range(1000):
        d1 = rnd.randrange(1, 11)
        d2 = rnd.randrange(1, 21 - d1) if d1 < 20 else 1
        a = [rnd.randrange(-10, 11) for _ in range(d1)] + [1]
        b = [rnd.randrange(-10, 11) for _ in range(d2)] + [1]
        prod = [0] * (d1 + d2 + 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        if ct.certify_irreducible(prod, budget=50).kind == "irreducible":
            false_certs += 1
    mu = MeasureZ.uniform_range(1, 210)
    from charpoly_lab import linalg
    block_certs = 0
    for trial in range(100):
        rng = substream(802, trial)
        a = ct.sample_integer_matrix(mu, 3, rng)
        b = ct.sample_integer_matrix(mu, 3, rng)
        m = [[0] * 6 for _ in range(6)]
        for i in range(3):
            for j in range(3):
                m[i][j] = a[i][j]
                m[3 + i][3 + j] = b[i][j]
        if ct.certify_irreducible(linalg.charpoly_z(m), budget=100).kind == "irreducible":
            block_certs += 1
    # every emitted A_n certificate must carry a witness that re-verifies
    unverified_an = 0
    phi10 = (-1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 1)
    cert = ct.certify_at_least_An(phi10, budget=10000)
    if cert.kind == "at_least_An":
        w = cert.witnesses[0]
        ds = ct.degree_set(phi10, w["prime"])
        if not (ds.squarefree and w["ell"] in ds.degrees):
            unverified_an += 1
    ok = false_certs == 0 and block_certs == 0 and unverified_an == 0
    report(8, ok,
           f"false certificates: {false_certs}/1000 fuzzed products, "
           f"{block_certs}/100 block-diagonal charpolys; "
           f"unverified A_n witnesses: {unverified_an}")


def test_criterion_09_four_prime_rate():
    rep = ct.four_prime_experiment(MeasureZ.uniform_range(1, 210), 30, 200,
                                   seed=20250811, threads=THREADS)
    rate = rep.certified.value
    # Regression anchor: rate 0.375 +- 0.034 at this seed.  The criterion's
    # 0.7 threshold cannot be met at any n with the four hypothesis primes:
    # already P(degree 1 achievable mod all of 2,3,5,7) tends to about 0.40
    # (product of 1 - zeta_1(p)^-p complements), capping the certified rate
    # near 0.6 asymptotically and at ~0.375 for n=30.
    report(9, rate >= 0.7,
           f"certified-irreducible rate {rate:.3f} +- {rep.certified.stderr:.3f} "
           f"(threshold 0.7; shared small-degree rate "
           f"{rep.shared_small_degree.value:.3f}, shared large-degree rate "
           f"{rep.shared_large_degree.value:.3f})")


def test_criterion_10_an_certificate():
    phi10 = (-1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 1)  # t^10 - t - 1
    cert = ct.certify_at_least_An(phi10, budget=10000)
    ok = (cert.kind == "at_least_An" and cert.witnesses[0]["prime"] == 2
          and cert.witnesses[0]["ell"] == 7)
    report(10, ok,
           f"t^10 - t - 1: kind={cert.kind}, witness prime "
           f"{cert.witnesses[0]['prime']}, ell={cert.witnesses[0]['ell']} "
           f"(pre-recorded witness: p=2, degrees [7,3])")


def _random_balanced_measure(field, rnd):
    q = field.q
    while True:
        k = rnd.randrange(2, q + 1)
        support = rnd.sample(range(q), k)
        raw = [rnd.randrange(1, 20) for _ in support]
        tot = sum(raw)
        mu = ms.MeasureFq(field, {x: Fraction(w, tot) for x, w in zip(support, raw)})
        if mu.balancedness() > 0:
            return mu


def test_criterion_11_measure_suite():
    rnd = random.Random(1101)
    gamma = Fraction(1, 8)
    failures = []
    for spec in ("3", "4", "5", "8", "9"):
        f = parse_field_spec(spec)
        q = f.q
        subgroups = [h for h in ms.additive_subgroups(f) if len(h) > 1]
        subgroups.append(tuple(range(q)))
        for i in range(50):
            mu = _random_balanced_measure(f, rnd)
            alpha = mu.balancedness()
            # smoothing properties (1)-(4)
            nu = ms.smooth(mu, gamma)
            if nu.balancedness() < gamma * alpha:
                failures.append((q, i, "smooth-balance"))
            mu_hat = [mu.fourier(u) for u in range(q)]
            nu_hat = [nu.fourier(u) for u in range(q)]
            for u in range(q):
                if not nu_hat[u].real > 0:
                    failures.append((q, i, "smooth-positive"))
                if nu_hat[u].real ** 4 < abs(mu_hat[u]) - 1e-12:
                    failures.append((q, i, "smooth-fourth-power"))
            for s in range(q):
                for t in range(q):
                    if nu_hat[f.add(s, t)].real ** 2 < abs(mu_hat[s]) * abs(mu_hat[t]) - 1e-12:
                        failures.append((q, i, "smooth-sumset"))
            # spectrum sumset containment
            e1, e2 = rnd.uniform(0, 0.1), rnd.uniform(0, 0.1)
            s1 = ms.large_spectrum(mu, 1 - e1)
            s2 = ms.large_spectrum(mu, 1 - e2)
            big = set(ms.large_spectrum(mu, max(0.0, 1 - 2 * (e1 + e2))))
            for a in s1:
                for b in s2:
                    if f.add(a, b) not in big:
                        failures.append((q, i, "spec-sumset"))
            # no nonzero subgroup inside Spec_{1 - alpha/2}
            spec_set = set(ms.large_spectrum(mu, 1 - float(alpha) / 2))
            for h in subgroups:
                if set(h) <= spec_set:
                    failures.append((q, i, "spec-subgroup"))
            # Odlyzko bound on a random affine subspace, exact rationals
            n = 3
            d = rnd.randrange(0, n + 1)
            rows = []
            while len(rows) < d:
                cand = tuple(rnd.randrange(q) for _ in range(n))
                try:
                    ms.Subspace(f, n, tuple(rows) + (cand,))
                except ValueError:
                    continue
                rows.append(cand)
            sub = ms.Subspace(f, n, tuple(rows))
            coords = [mu] * n
            shift = tuple(rnd.randrange(q) for _ in range(n))
            prob, bound = ms.odlyzko_bound_check(sub, coords, shift=shift)
            if prob > bound:
                failures.append((q, i, "odlyzko"))
    report(11, not failures,
           f"smoothing (1)-(4), spectrum sumset, no-subgroup, Odlyzko bound: "
           f"50 random measures per q in (3,4,5,8,9); failures: {failures[:5]}")


def test_criterion_12_zeta_cross_check():
    worst = 0.0
    for q in (2, 3, 5):
        for d in range(1, 9):
            worst = max(worst, abs(exact.zeta_d(q, d) - exact.zeta_d_product(q, d)))
    report(12, worst < 1e-10,
           f"series vs Euler-product reciprocal, q in (2,3,5), d <= 8: "
           f"max |diff| = {worst:.2e}")
