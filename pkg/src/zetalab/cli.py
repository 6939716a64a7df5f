"""Command-line orchestration: run computations, emit CSV + manifest.

Exit codes: 0 success, 2 flag/validation errors, 3 computation errors,
4 precision errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .argz import s_of_t, shared_s1_evaluator
from .config import (
    CacheMissError,
    DEFAULT_CONFIG,
    DomainError,
    PrecisionConfig,
    PrecisionError,
    ZetaLabError,
)
from .fermat import fermat_equivalence_check, witness_csv_rows
from .functionals import chain_compare, functional_approximant, substitution_constant
from .gram import gram_csv_rows, gram_range
from .ladders import ladder_chain, ladder_csv_rows, reverse_iterate
from .manifest import RunManifest, write_csv
from .moments import (
    CbarEstimate,
    ConstantsCache,
    estimate_cbar,
    s1_moment,
    second_moment_critical,
    second_moment_sigma,
)
from .sums import fourth_power_sum, sums_csv_rows, titchmarsh_sum, verify_asymptotic_trend
from .zeta import EULER_GAMMA, hardy_z, theta, theta_deriv

EXIT_OK = 0
EXIT_FLAGS = 2
EXIT_COMPUTE = 3
EXIT_PRECISION = 4


def _float_list(text: str) -> List[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="zetalab",
        description="Desk-scale numerical laboratory for critical-line statistics.",
    )
    ap.add_argument("--version", action="version", version=f"zetalab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with PrecisionConfig overrides")
    common.add_argument("--out", help="CSV output path")
    common.add_argument("--manifest", default="zetalab_manifest.jsonl",
                        help="append-only run manifest (JSON lines)")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker threads for independent items (results identical at any value)")
    common.add_argument("--cache-dir", help="constants-cache directory (else $ZLAB_CACHE_DIR)")

    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theta", parents=[common], help="theta(t) and its derivative")
    p.add_argument("--t", type=_float_list, required=True)

    p = sub.add_parser("z", parents=[common], help="Hardy Z(t)")
    p.add_argument("--t", type=_float_list, required=True)

    p = sub.add_parser("s", parents=[common], help="S(t) traces")
    p.add_argument("--t", type=_float_list, required=True)

    p = sub.add_parser("gram", parents=[common], help="Gram points in [from, to)")
    p.add_argument("--from", dest="t_lo", type=float, required=True)
    p.add_argument("--to", dest="t_hi", type=float, required=True)

    p = sub.add_parser("moments", parents=[common], help="interval moments")
    p.add_argument("--kind", choices=["critical2", "sigma2", "s1moment"], required=True)
    p.add_argument("--from", dest="t_lo", type=float, required=True)
    p.add_argument("--to", dest="t_hi", type=float, required=True)
    p.add_argument("--sigma", type=float)
    p.add_argument("--l", type=int)

    p = sub.add_parser("cbar", parents=[common], help="estimate cbar(l) on [T, T+H]")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--H", type=float, required=True)

    p = sub.add_parser("ladder", parents=[common], help="reverse-iteration chain")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("sum", parents=[common], help="Gram pair / fourth-power sums")
    p.add_argument("--kind", choices=["pair", "fourth"], required=True)
    p.add_argument("--from", dest="t_lo", type=float, required=True)
    p.add_argument("--to", dest="t_hi", type=float, required=True)

    p = sub.add_parser("functional", parents=[common], help="cross-bred functional value")
    p.add_argument("--kind", choices=["A", "B", "C"], required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--tau", type=_float_list, required=True)
    p.add_argument("--sigma", type=float)
    p.add_argument("--l", type=int)
    p.add_argument("--cbar-T", type=float, help="cache key part for kind B")
    p.add_argument("--cbar-H", type=float, help="cache key part for kind B")

    p = sub.add_parser("fermat", parents=[common], help="Fermat witness with functional trace")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=["A", "B", "C"], default="C")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--l", type=int)
    p.add_argument("--cbar-T", type=float)
    p.add_argument("--cbar-H", type=float)
    p.add_argument("--tau", type=_float_list, default=[])

    p = sub.add_parser("chain", parents=[common], help="compare functionals A, B, C")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--cbar-T", type=float, required=True)
    p.add_argument("--cbar-H", type=float, required=True)

    p = sub.add_parser("verify", parents=[common], help="PASS/FAIL property suites")
    p.add_argument("--suite",
                   choices=["asymptotics", "gram", "branch", "ladder", "quotients"],
                   default="asymptotics")
    p.add_argument("--heights", type=_float_list, default=[1e3, 5e3, 2e4])
    p.add_argument("--nu-max", type=int, default=20000)
    p.add_argument("--n-heights", type=int, default=25)
    p.add_argument("--seed", type=int, default=20260809)

    return ap


def _load_config(args) -> PrecisionConfig:
    if args.config:
        return PrecisionConfig.from_json(args.config)
    return DEFAULT_CONFIG


def _cache(args) -> ConstantsCache:
    if args.cache_dir:
        return ConstantsCache(os.path.join(args.cache_dir, "constants.json"))
    return ConstantsCache()


def _need_cbar(args, cache: ConstantsCache) -> CbarEstimate:
    if args.cbar_T is None or args.cbar_H is None:
        raise CacheMissError("kind B requires --cbar-T and --cbar-H (run `cbar` first)")
    est = cache.get(args.l, args.cbar_T, args.cbar_H)
    if est is None:
        raise CacheMissError(
            f"no cached cbar for l={args.l}, T={args.cbar_T}, H={args.cbar_H}; run `cbar` first"
        )
    return est


def _emit(manifest: RunManifest, args, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    for row in rows:
        print(",".join(row))
    if args.out:
        digest = write_csv(args.out, header, rows)
        manifest.add_output(args.out, digest)
    manifest.write(args.manifest)


def _pmap(jobs: int, fn, items: Sequence):
    """Order-preserving parallel map; results identical at any jobs value."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _run(args, raw_argv: Sequence[str]) -> int:
    config = _load_config(args)
    manifest = RunManifest(raw_argv, config)
    cache = _cache(args)

    if args.command == "theta":
        rows = [[f"{t:.15g}", f"{theta(t):.15g}",
                 f"{theta_deriv(t):.15g}" if t > 2 * math.pi else ""] for t in args.t]
        _emit(manifest, args, ["t", "theta", "theta_deriv"], rows)

    elif args.command == "z":
        vals = _pmap(args.jobs, lambda t: hardy_z(t, config), args.t)
        rows = [[f"{t:.15g}", f"{v:.15g}"] for t, v in zip(args.t, vals)]
        _emit(manifest, args, ["t", "Z"], rows)

    elif args.command == "s":
        traces = _pmap(args.jobs, lambda t: s_of_t(t, config), args.t)
        rows = [[f"{tr.t:.15g}", f"{tr.s_value:.15g}", str(tr.zero_count),
                 f"{tr.branch_residual:.15g}"] for tr in traces]
        _emit(manifest, args, ["t", "S", "zero_count", "branch_residual"], rows)

    elif args.command == "gram":
        rng = gram_range(args.t_lo, args.t_hi, config)
        _emit(manifest, args, ["nu", "t", "residual"], gram_csv_rows(rng.points))

    elif args.command == "moments":
        if args.kind == "critical2":
            est = second_moment_critical(args.t_lo, args.t_hi, config)
        elif args.kind == "sigma2":
            if args.sigma is None:
                raise DomainError("sigma2 requires --sigma")
            est = second_moment_sigma(args.sigma, args.t_lo, args.t_hi, config)
        else:
            if args.l is None:
                raise DomainError("s1moment requires --l")
            est = s1_moment(args.l, args.t_lo, args.t_hi, config)
        _emit(manifest, args,
              ["kind", "param", "t_lo", "t_hi", "value", "per_unit", "quad_error"],
              [est.csv_row()])

    elif args.command == "cbar":
        est = estimate_cbar(args.l, args.T, args.H, config, cache=cache)
        manifest.add_cbar_key(est.cache_key)
        _emit(manifest, args, ["l", "T", "H", "cbar", "spread"],
              [[str(est.l), f"{est.T:.15g}", f"{est.H:.15g}",
                f"{est.cbar:.15g}", f"{est.spread:.15g}"]])

    elif args.command == "ladder":
        chain = ladder_chain(args.T, args.k, config)
        _emit(manifest, args, ["r", "T_r", "gap", "slice_integral", "residual"],
              ladder_csv_rows(chain, config))

    elif args.command == "sum":
        res = (titchmarsh_sum if args.kind == "pair" else fourth_power_sum)(
            args.t_lo, args.t_hi, config)
        _emit(manifest, args, ["kind", "T", "terms", "value", "main_term", "ratio"],
              sums_csv_rows([res]))

    elif args.command == "functional":
        if args.kind in ("A", "C") and args.sigma is None:
            raise DomainError(f"kind {args.kind} requires --sigma")
        if args.kind == "B" and args.l is None:
            raise DomainError("kind B requires --l")
        cbar = _need_cbar(args, cache) if args.kind == "B" else None
        if cbar is not None:
            manifest.add_cbar_key(cbar.cache_key)
        K = substitution_constant(args.kind, sigma=args.sigma, cbar=cbar)
        manifest.add_constant(f"substitution_K_{args.kind}", K)

        def one(tau: float):
            return functional_approximant(
                args.kind, args.x, tau, sigma=args.sigma, l=args.l,
                cbar=cbar, config=config)

        results = _pmap(args.jobs, one, args.tau)
        _emit(manifest, args, ["kind", "x", "param", "tau", "T", "value", "rel_err"],
              [r.csv_row() for r in results])

    elif args.command == "fermat":
        if args.kind == "B" and args.l is None:
            raise DomainError("kind B requires --l")
        cbar = _need_cbar(args, cache) if args.kind == "B" else None
        w = fermat_equivalence_check(
            args.x, args.y, args.z, args.n, kind=args.kind, sigma=args.sigma,
            l=args.l, cbar=cbar, tau_schedule=args.tau, config=config)
        _emit(manifest, args,
              ["x", "y", "z", "n", "numerator", "denominator", "is_one", "verdict"],
              witness_csv_rows([w]))

    elif args.command == "chain":
        est = cache.get(args.l, args.cbar_T, args.cbar_H)
        if est is None:
            raise CacheMissError("no cached cbar for the chain comparison; run `cbar` first")
        manifest.add_cbar_key(est.cache_key)
        rep = chain_compare(args.x, args.sigma, args.l, args.tau, est, config)
        rows = [[k, f"{rep.values[k]:.15g}", f"{rep.rel_errs[k]:.15g}"] for k in ("A", "B", "C")]
        rows.append(["PASS" if rep.passed else "FAIL",
                     f"{rep.implied_T:.15g}", f"{rep.x:.15g}"])
        _emit(manifest, args, ["kind", "value", "rel_err"], rows)

    elif args.command == "verify":
        rows = _verify_suite(args, config)
        _emit(manifest, args, ["check", "status", "detail"], rows)
        if any(r[1] == "FAIL" for r in rows):
            return EXIT_COMPUTE

    return EXIT_OK


def _verify_suite(args, config: PrecisionConfig) -> List[List[str]]:
    rows: List[List[str]] = []

    def add(check: str, ok: bool, detail: str) -> None:
        rows.append([check, "PASS" if ok else "FAIL", detail])

    if args.suite == "asymptotics":
        for kind in ("pair", "fourth"):
            rep = verify_asymptotic_trend(kind, args.heights, config)
            for T, r in zip(rep.heights, rep.ratios):
                add(f"{kind}-band-T={T:g}", 0.4 <= r <= 1.6, f"ratio={r:.4f}")
            add(f"{kind}-trend", rep.passed,
                "|r-1| non-increasing over top two heights: "
                + ",".join(f"{abs(r-1):.4f}" for r in rep.ratios))

    elif args.suite == "gram":
        from .gram import gram_points
        pts = gram_points(1, args.nu_max, config)
        worst = max(p.residual for p in pts)
        mono = all(b.t > a.t for a, b in zip(pts, pts[1:]))
        add("gram-residuals", worst <= config.abs_tol, f"worst={worst:.3e}")
        add("gram-monotone", mono, f"nu<={args.nu_max}")

    elif args.suite == "branch":
        rng = np.random.default_rng(args.seed)
        hs = 10.0 + rng.random(args.n_heights) * (1e4 - 10.0)
        ev = shared_s1_evaluator(config)
        ev.ensure(float(hs.max()) + 1.0)
        worst = 0.0
        count_ok = True
        for t in hs:
            tr = s_of_t(float(t), config)
            worst = max(worst, tr.branch_residual)
            if tr.zero_count != ev.zeros_cache.count_below(float(t)):
                count_ok = False
        add("branch-integrality", worst <= 1e-8, f"worst residual={worst:.3e}")
        add("branch-count-vs-signchanges", count_ok, f"{args.n_heights} heights")

    elif args.suite == "ladder":
        for T in args.heights:
            if T < 100.0:
                continue
            U = reverse_iterate(T, config)
            got = second_moment_critical(T, U, config).value
            target = (1.0 - EULER_GAMMA) * T
            gap_pred = target / math.log(T)
            add(f"ladder-residual-T={T:g}", abs(got - target) <= 1e-6 * T,
                f"resid={abs(got - target):.3e}")
            add(f"ladder-gap-T={T:g}", 0.8 <= (U - T) / gap_pred <= 1.2,
                f"gap/pred={(U - T) / gap_pred:.4f}")

    elif args.suite == "quotients":
        from scipy.special import zeta as real_zeta

        from .functionals import quotient_s1, quotient_zeta
        from .moments import estimate_cbar

        for T in args.heights:
            if T < 100.0:
                continue
            qz = quotient_zeta(1.0, T, config)
            check = qz * float(real_zeta(2.0)) / math.log(T)
            add(f"quotient-zeta-T={T:g}", 0.85 <= check <= 1.15,
                f"normalized={check:.4f}")
            est = estimate_cbar(1, T, max(T ** 0.6, T / 10.0), config, cache=_cache(args))
            qs = quotient_s1(1, T, config)
            s_check = qs * est.cbar / math.log(T)
            add(f"quotient-s1-T={T:g}", 0.7 <= s_check <= 1.3,
                f"normalized={s_check:.4f} cbar={est.cbar:.4f}")

    return rows


def main(argv: Optional[Sequence[str]] = None) -> int:
    raw = list(argv) if argv is not None else sys.argv[1:]
    ap = _build_parser()
    try:
        args = ap.parse_args(raw)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_FLAGS
    try:
        return _run(args, raw)
    except PrecisionError as e:
        print(f"precision error: {e}", file=sys.stderr)
        return EXIT_PRECISION
    except (DomainError, CacheMissError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FLAGS
    except ZetaLabError as e:
        print(f"computation error: {e}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
