"""One binary, every experiment: reproducible seeds, JSON (or CSV) out.

Exit codes: 0 = ran, 1 = usage error, 2 = internal invariant violation.
Whether a certificate was found is part of the payload, not the exit code.
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import asdict
from fractions import Fraction

import numpy as np

from . import certify, exact, fqpoly, linalg, measures, montecarlo, primes
from .gf import Field, parse_field_spec
from .rng import fresh_seed


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_poly_arg(val: str):
    if os.path.exists(val):
        with open(val) as fh:
            val = fh.read()
    return [int(tok) for tok in val.strip().split(",")]


def _estimate_doc(est, args, extra=None):
    params = {"command": args.command, "n": getattr(args, "n", None),
              "q": getattr(args, "q", None),
              "measure": getattr(args, "measure", None),
              "threads": getattr(args, "threads", 1)}
    if extra:
        params.update(extra)
    return {"value": est.value, "stderr": est.stderr, "trials": est.trials,
            "seed": est.seed, "target": est.target,
            "params": {**params, **est.metadata}}


def _emit(doc, args):
    if not getattr(args, "no_timestamp", False):
        doc = dict(doc)
        doc["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    text = json.dumps(doc, sort_keys=True, indent=2, default=_json_default) + "\n"
    _write_out(text, args)


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _write_out(text, args):
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(header, rows, args):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    w.writerows(rows)
    _write_out(buf.getvalue(), args)


def _field(args) -> Field:
    return parse_field_spec(str(args.q))


def _mm(args, field) -> montecarlo.MeasureMatrix:
    base = measures.measure_on_field(args.measure, field)
    return montecarlo.MeasureMatrix.iid(base, args.n)


# ---------------------------------------------------------------------------
# Subcommand handlers

def cmd_field_selftest(args):
    worst = 0.0
    checked = []
    for q in range(2, args.qmax + 1):
        try:
            f = parse_field_spec(str(q))
        except ValueError:
            continue
        for a in f.elements():
            assert f.pow(a, f.q) == a, f"Frobenius identity failed in {f!r}"
        s = sum(f.char_value(a) for a in f.elements())
        worst = max(worst, abs(s))
        assert abs(s) < 1e-12, f"character sum nonzero in {f!r}"
        checked.append(q)
    _emit({"command": "field-selftest", "fields": checked,
           "max_abs_char_sum": worst, "ok": True}, args)
    return 0


def cmd_charpoly(args):
    rows = linalg.mat_from_text(args.matrix)
    if args.ring == "z":
        poly = linalg.charpoly_z(rows)
    else:
        f = parse_field_spec(args.ring)
        poly = linalg.charpoly_fq(f, linalg.reduce_rows(f, rows))
    _emit({"command": "charpoly", "ring": args.ring,
           "poly": fqpoly.poly_to_text(poly)}, args)
    return 0


def cmd_factor(args):
    f = _field(args)
    poly = fqpoly.poly_from_text(f, args.poly)
    fac = fqpoly.factor(f, poly, seed=args.seed)
    _emit({"command": "factor", "q": f.q, "seed": args.seed,
           "unit": fac.unit,
           "factors": [{"coeffs": list(c), "multiplicity": m}
                       for c, m in fac.factors],
           "degrees": list(fac.degrees())}, args)
    return 0


def cmd_roots(args):
    f = _field(args)
    poly = fqpoly.poly_from_text(f, args.poly)
    _emit({"command": "roots", "q": f.q,
           "distinct_roots": fqpoly.count_roots(f, poly)}, args)
    return 0


def cmd_measure_info(args):
    f = _field(args)
    mu = measures.measure_on_field(args.measure, f)
    doc = {"command": "measure-info", "q": f.q, "measure": args.measure,
           "support": [[x, str(w)] for x, w in mu.items()],
           "alpha": str(mu.balancedness()),
           "uniform": mu.is_uniform()}
    if args.spectrum_t is not None:
        doc["spectrum_threshold"] = args.spectrum_t
        doc["large_spectrum"] = measures.large_spectrum(mu, args.spectrum_t)
    if f.q <= 64:
        doc["fourier_abs"] = [abs(mu.fourier(u)) for u in range(f.q)]
    _emit(doc, args)
    return 0


def cmd_rho(args):
    f = _field(args)
    mu = measures.measure_on_field(args.measure, f)
    perp = [tuple(int(t) % f.q for t in row.split(","))
            for row in args.perp.split(";")]
    sub = measures.Subspace(f, args.n, tuple(perp))
    coords = [mu] * args.n
    rho_f = measures.coset_deviation(sub, coords)
    doc = {"command": "rho", "q": f.q, "n": args.n, "codim": sub.codim,
           "measure": args.measure, "rho_fourier": rho_f}
    if f.q ** args.n <= 10 ** 6:
        doc["rho_exact"] = float(measures.coset_deviation_exact(sub, coords))
    _emit(doc, args)
    return 0


def cmd_singularity(args):
    f = _field(args)
    mm = _mm(args, f)
    if args.exact:
        p = montecarlo.exact_nonsingular(mm)
        _emit({"value": float(p), "exact": str(p), "stderr": 0.0,
               "trials": 0, "seed": args.seed,
               "target": montecarlo.limit_nonsingular(f.q),
               "params": {"command": "singularity", "n": args.n, "q": f.q,
                          "measure": args.measure, "mode": "exact"}}, args)
        return 0
    est = montecarlo.estimate_nonsingular(mm, args.trials, args.seed, args.threads)
    _emit(_estimate_doc(est, args), args)
    return 0


def cmd_rank_dist(args):
    f = _field(args)
    mm = _mm(args, f)
    est = montecarlo.estimate_rank_full(mm, args.k, args.trials, args.seed,
                                        args.threads)
    _emit(_estimate_doc(est, args), args)
    return 0


def cmd_eig_corr(args):
    f = _field(args)
    mm = _mm(args, f)
    lams = [int(t) for t in args.lambdas.split(",")]
    est = montecarlo.estimate_joint_eigen(mm, lams, args.trials, args.seed,
                                          args.threads)
    _emit(_estimate_doc(est, args), args)
    return 0


def cmd_factor_stats(args):
    f = _field(args)
    parts = montecarlo.sample_partitions(args.source, args.n, f,
                                         args.samples, args.seed)
    from collections import Counter
    hist = Counter(montecarlo.truncate_partition(p, args.r) for p in parts)
    top = hist.most_common(args.top)
    _emit({"command": "factor-stats", "source": args.source, "n": args.n,
           "q": f.q, "r": args.r, "samples": args.samples, "seed": args.seed,
           "distinct_types": len(hist),
           "top": [{"partition": list(k), "count": c,
                    "freq": c / args.samples} for k, c in top]}, args)
    return 0


def cmd_tv_compare(args):
    f = _field(args)
    rep = montecarlo.tv_compare(args.source_a, args.source_b, args.n, f,
                                args.r, args.samples, args.seed)
    _emit({"command": "tv-compare", "tv": rep.tv, "stderr": rep.stderr,
           "samples": rep.samples, "seed": rep.seed, "params": rep.metadata},
          args)
    return 0


def cmd_reiner_verify(args):
    field = parse_field_spec(str(args.q))
    tc = exact.enumerate_types(field, args.n)
    rows = []
    all_match = True
    for named, cnt in sorted(tc.named.items()):
        ftype = [(fqpoly.degree(c), m) for c, m in named]
        formula = exact.reiner_count(tc.q, args.n, ftype)
        match = formula == cnt
        all_match = all_match and match
        rows.append(("|".join(f"{fqpoly.poly_to_text(c)}^{m}" for c, m in named),
                     formula, cnt, match))
    if args.csv:
        _emit_csv(("type", "formula_count", "enumerated_count", "match"), rows, args)
    else:
        _emit({"command": "reiner-verify", "q": tc.q, "n": args.n,
               "total": tc.total, "all_match": all_match,
               "types": [{"type": t, "formula": f, "enumerated": e, "match": m}
                         for t, f, e, m in rows]}, args)
    return 0


def cmd_moment(args):
    poly = _read_poly_arg(args.poly)
    rep = primes.weighted_moment(poly, args.m, args.x,
                                 keep_per_prime=bool(args.per_prime))
    if args.per_prime:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(("p", "R", "weight", "contribution"))
        w.writerows(rep.per_prime)
        with open(args.per_prime, "w") as fh:
            fh.write(buf.getvalue())
    _emit({"command": "moment", "m": rep.m, "x": rep.x,
           "weighted_sum": rep.weighted_sum, "bell_target": rep.bell_target,
           "prime_count": rep.prime_count,
           "singular_prime_count": rep.singular_prime_count,
           "per_prime_file": args.per_prime}, args)
    return 0


def cmd_certify(args):
    poly = _read_poly_arg(args.poly)
    cert = certify.certify_irreducible(poly, budget=args.budget)
    doc = {"command": "certify", "budget": args.budget,
           "irreducible": asdict(cert)}
    if args.an:
        if cert.kind == "irreducible":
            an = certify.certify_at_least_An(poly, budget=args.an_budget,
                                             irreducible=cert)
            doc["at_least_An"] = asdict(an)
        else:
            doc["at_least_An"] = {"kind": "none",
                                  "reason": "no irreducibility certificate"}
    _emit(doc, args)
    return 0


def cmd_four_prime(args):
    mu = measures.parse_measure_spec(args.measure)
    if mu == "uniform":
        raise ValueError("four-prime needs an integer measure, e.g. range:1..210")
    pr = tuple(int(t) for t in args.primes.split(","))
    rep = certify.four_prime_experiment(mu, args.n, args.trials, args.seed,
                                        primes=pr, threads=args.threads)
    _emit({"command": "four-prime", "n": rep.n, "trials": rep.trials,
           "seed": rep.seed, "primes": list(rep.primes),
           "certified_rate": rep.certified.value,
           "certified_stderr": rep.certified.stderr,
           "shared_large_degree_rate": rep.shared_large_degree.value,
           "shared_small_degree_rate": rep.shared_small_degree.value,
           "params": {"measure": args.measure}}, args)
    return 0


def cmd_selftest(args):
    checks = []

    def check(name, fn):
        try:
            detail = fn()
            checks.append({"name": name, "ok": True, "detail": detail})
        except Exception as e:  # noqa: BLE001 - report, then fail via exit code
            checks.append({"name": name, "ok": False, "detail": str(e)})

    def reiner():
        for q, n in ((2, 2), (3, 2), (2, 3)):
            tc = exact.enumerate_types(Field(q), n)
            for named, cnt in tc.named.items():
                ftype = [(fqpoly.degree(c), m) for c, m in named]
                assert exact.reiner_count(q, n, ftype) == cnt
            assert sum(tc.named.values()) == q ** (n * n)
        return "named counts match enumeration at (2,2),(3,2),(2,3)"

    def zeta():
        for q in (2, 3, 5):
            for d in range(1, 5):
                a = exact.zeta_d(q, d)
                b = exact.zeta_d_product(q, d)
                assert abs(a - b) < 1e-10
        return "series and Euler product agree to 1e-10"

    def cr():
        _, spread = exact.cr_ratios(2, 3)
        assert spread < 1e-8
        return f"ratio spread {spread:.2e}"

    def roots():
        for q in (2, 3, 5, 7, 9):
            f = parse_field_spec(str(q))
            rng = np.random.default_rng(12)
            for _ in range(20):
                poly = fqpoly.trim([int(c) for c in rng.integers(0, f.q, 6)]) or (1,)
                got = fqpoly.count_roots(f, poly)
                want = sum(1 for x in range(f.q) if fqpoly.evaluate(f, poly, x) == 0)
                assert got == want
        return "gcd root count matches exhaustive evaluation"

    def soundness():
        rng = np.random.default_rng(99)
        for _ in range(100):
            d1 = int(rng.integers(1, 6))
            d2 = int(rng.integers(1, 6))
            a = [int(x) for x in rng.integers(-10, 11, d1)] + [1]
            b = [int(x) for x in rng.integers(-10, 11, d2)] + [1]
            prod = [0] * (d1 + d2 + 1)
            for i, ai in enumerate(a):
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
            cert = certify.certify_irreducible(prod, budget=60)
            assert cert.kind != "irreducible"
        return "no false certificates on 100 constructed products"

    check("reiner", reiner)
    check("zeta", zeta)
    check("conditioning-ratio", cr)
    check("roots", roots)
    check("certifier-soundness", soundness)
    ok = all(c["ok"] for c in checks)
    _emit({"command": "selftest", "ok": ok, "checks": checks}, args)
    return 0 if ok else 2


# ---------------------------------------------------------------------------

def _add_common(p, seed=True, threads=False, trials=None):
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp (byte-identical reruns)")
    if seed:
        p.add_argument("--seed", type=int, default=None,
                       help="master seed; generated and echoed if omitted")
    if threads:
        p.add_argument("--threads", type=int,
                       default=int(os.environ.get("CHARPOLY_LAB_THREADS", "1")),
                       help="worker count (results are identical for any value)")
    if trials is not None:
        p.add_argument("--trials", type=int, default=trials)


def build_parser() -> _Parser:
    ap = _Parser(prog="charpoly-lab",
                 description="Factorization statistics and certificates for "
                             "characteristic polynomials of random matrices.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-selftest", help="verify F_q arithmetic: Frobenius "
                       "identity and nontrivial character sums for q <= qmax")
    p.add_argument("--qmax", type=int, default=64)
    _add_common(p, seed=False)
    p.set_defaults(fn=cmd_field_selftest)

    p = sub.add_parser("charpoly", help="characteristic polynomial det(tI - M) "
                       "over Z (division-free) or over F_q")
    p.add_argument("--ring", default="z", help='"z" or a field spec like q=5')
    p.add_argument("--matrix", required=True, help='rows "a,b;c,d"')
    _add_common(p, seed=False)
    p.set_defaults(fn=cmd_charpoly)

    p = sub.add_parser("factor", help="complete factorization over F_q "
                       "(squarefree, distinct-degree, equal-degree stages)")
    p.add_argument("--q", required=True, help="field spec: q=p^k or q=N")
    p.add_argument("--poly", required=True, help='coeffs "c0,c1,...,cd" low-to-high')
    _add_common(p)
    p.set_defaults(fn=cmd_factor)

    p = sub.add_parser("roots", help="number of distinct roots in F_q, "
                       "via gcd with t^q - t")
    p.add_argument("--q", required=True)
    p.add_argument("--poly", required=True)
    _add_common(p, seed=False)
    p.set_defaults(fn=cmd_roots)

    p = sub.add_parser("measure-info", help="balancedness alpha, support and "
                       "Fourier data of an entry measure on F_q")
    p.add_argument("--q", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--spectrum-t", type=float, default=None,
                   help="also report the large spectrum at this threshold")
    _add_common(p, seed=False)
    p.set_defaults(fn=cmd_measure_info)

    p = sub.add_parser("rho", help="worst-case coset nonuniformity of a row "
                       "law modulo a subspace (Fourier identity, with exact "
                       "cross-check when feasible)")
    p.add_argument("--q", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perp", required=True,
                   help='basis of V-perp, rows "v1;v2" with entries comma-separated')
    p.add_argument("--measure", required=True)
    _add_common(p, seed=False)
    p.set_defaults(fn=cmd_rho)

    p = sub.add_parser("singularity", help="P(M nonsingular) for iid entries, "
                       "vs the limit prod(1 - q^-i)")
    p.add_argument("--q", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--measure", default="uniform")
    p.add_argument("--exact", action="store_true",
                   help="exact enumeration instead of Monte Carlo (small n)")
    _add_common(p, threads=True, trials=100000)
    p.set_defaults(fn=cmd_singularity)

    p = sub.add_parser("rank-dist", help="P(top k x n block has full rank k), "
                       "vs prod_{i>=n-k+1}(1 - q^-i)")
    p.add_argument("--q", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--measure", default="uniform")
    _add_common(p, threads=True, trials=100000)
    p.set_defaults(fn=cmd_rank_dist)

    p = sub.add_parser("eig-corr", help="P(all given lambda_j are eigenvalues), "
                       "vs the reference level (q-1)^-m")
    p.add_argument("--q", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambdas", required=True, help='e.g. "1,2"')
    p.add_argument("--measure", default="uniform")
    _add_common(p, threads=True, trials=100000)
    p.set_defaults(fn=cmd_eig_corr)

    p = sub.add_parser("factor-stats", help="empirical histogram of factor-degree "
                       "partitions from one of the five generators")
    p.add_argument("--source", choices=montecarlo.PARTITION_SOURCES, required=True)
    p.add_argument("--q", default="2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--r", type=int, default=1, help="keep parts of size >= r")
    p.add_argument("--top", type=int, default=20)
    _add_common(p)
    p.set_defaults(fn=cmd_factor_stats)

    p = sub.add_parser("tv-compare", help="plug-in total variation between the "
                       "truncated partition laws of two generators")
    p.add_argument("--source-a", choices=montecarlo.PARTITION_SOURCES, required=True)
    p.add_argument("--source-b", choices=montecarlo.PARTITION_SOURCES, required=True)
    p.add_argument("--q", default="2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--samples", type=int, default=20000)
    _add_common(p)
    p.set_defaults(fn=cmd_tv_compare)

    p = sub.add_parser("reiner-verify", help="matrix counts by characteristic "
                       "polynomial: closed formula vs exhaustive enumeration")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--csv", action="store_true")
    _add_common(p, seed=False)
    p.set_defaults(fn=cmd_reiner_verify)

    p = sub.add_parser("moment", help="prime-weighted moment sum of the mod-p "
                       "root count of an integer polynomial")
    p.add_argument("--poly", required=True, help="inline coeffs or a file path")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--per-prime", default=None,
                   help="also write per-prime CSV (p,R,weight,contribution)")
    _add_common(p, seed=False)
    p.set_defaults(fn=cmd_moment)

    p = sub.add_parser("certify", help="sound irreducibility certificate by "
                       "multi-prime divisor-degree intersection; optionally "
                       "certify Gal >= A_n from a prime-length cycle")
    p.add_argument("--poly", required=True)
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("--an", action="store_true")
    p.add_argument("--an-budget", type=int, default=10000)
    _add_common(p, seed=False)
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("four-prime", help="certified-irreducibility rate for "
                       "random integer matrices whose entry law is uniform "
                       "mod four primes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--measure", default="range:1..210")
    p.add_argument("--primes", default="2,3,5,7")
    _add_common(p, threads=True, trials=200)
    p.set_defaults(fn=cmd_four_prime)

    p = sub.add_parser("selftest", help="fast exact-oracle suite (counts, "
                       "zeta cross-check, ratio constancy, certifier soundness)")
    _add_common(p, seed=False)
    p.set_defaults(fn=cmd_selftest)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        args.seed = fresh_seed()
    try:
        return args.fn(args)
    except AssertionError as e:
        print(f"internal invariant violated: {e}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError, RuntimeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
