"""Command-line interface.

Subcommands: series, blocks, transition, critical, exponent, sample,
scaling, oracle, verify.  Weights are exact "P/Q" strings so the critical
point can be passed exactly.  Exit codes: 0 ok, 1 check/runtime failure,
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

import mpmath as mp

from . import oracle, reference, sampler, schemes, svgplot, transition, verify


def frac(text: str) -> Fraction:
    try:
        u = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact fraction: {text!r}") from exc
    return u


def positive_frac(text: str) -> Fraction:
    u = frac(text)
    if u <= 0:
        raise argparse.ArgumentTypeError("the weight u must be positive")
    return u


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _json_out(payload: dict, path: str | None) -> None:
    payload.setdefault("meta", {})["timestamp"] = time.strftime(
        "%Y-%m-%dT%H:%M:%S", time.gmtime())
    _write(json.dumps(payload, indent=2, default=str) + "\n", path)


def _mpf_str(x, digits: int) -> str:
    return mp.nstr(x, digits, strip_zeros=False)


# ----------------------------------------------------------- subcommands


def cmd_series(args) -> int:
    M = schemes.solve_weighted(args.scheme, args.u, args.N)
    rows = [(n, M[n]) for n in range(1, args.N + 1)]
    if args.format == "json":
        _json_out({
            "scheme": args.scheme, "u": str(args.u), "order": args.N,
            "coefficients": {str(n): str(c) for n, c in rows},
        }, args.output)
    else:
        lines = [f"{n},{c.numerator}" if c.denominator == 1
                 else f"{n},{c.numerator}/{c.denominator}" for n, c in rows]
        _write("\n".join(lines) + "\n", args.output)
    return 0


def cmd_blocks(args) -> int:
    B = schemes.block_series(args.scheme, args.N)
    lines = [f"{n},{B[n].numerator}" for n in range(1, args.N + 1)]
    _write("\n".join(lines) + "\n", args.output)
    return 0


def cmd_transition(args) -> int:
    digits = max(8, int(args.precision_bits * 0.301)) + 2
    lines = ["u,rho,y,E,regime"]
    steps = args.steps
    for i in range(steps):
        if steps == 1:
            u = args.u_min
        else:
            u = args.u_min + (args.u_max - args.u_min) * Fraction(i, steps - 1)
        tp = transition.singular_point(args.scheme, u, N=args.N,
                                       prec_bits=args.precision_bits,
                                       cross_check=not args.no_cross_check)
        lines.append(",".join([
            str(u), _mpf_str(tp.rho, digits), _mpf_str(tp.y, digits),
            _mpf_str(tp.mean, digits), tp.regime]))
    _write("\n".join(lines) + "\n", args.output)
    return 0


def cmd_critical(args) -> int:
    uc, residual = transition.find_critical_u(
        args.scheme, prec_bits=args.precision_bits)
    digits = max(8, int(args.precision_bits * 0.301)) + 2
    _json_out({
        "scheme": args.scheme,
        "u_c": _mpf_str(uc, digits),
        "residual": _mpf_str(residual, 3),
    }, args.output)
    return 0


def cmd_exponent(args) -> int:
    fit = transition.exponent_estimate(args.scheme, args.u, N=args.N,
                                       prec_bits=args.precision_bits)
    _json_out({
        "scheme": args.scheme, "u": str(args.u),
        "alpha": fit.alpha_estimate, "stderr": fit.alpha_stderr,
        "n_range": list(fit.n_range), "regime": fit.regime,
    }, args.output)
    return 0


def cmd_sample(args) -> int:
    sp = schemes.load_scheme(args.scheme)
    a, b = sp.tree_size
    n_tree = a * args.n + b
    law = transition.offspring_law(sp, args.u, N=max(256, n_tree - 1))
    seq = sampler.sample_conditioned(law, n_tree, args.seed,
                                     strategy=args.strategy)
    records = sampler.decorate_blocks(sp, args.u, seq.degrees,
                                      sampler._derive(args.seed, 1))
    L = sampler.largest_blocks(records, 3)
    payload = {
        "scheme": sp.id, "u": str(args.u), "map_size": args.n,
        "tree_vertices": n_tree, "seed": args.seed, "regime": law.regime,
        "L1": L[0], "L2": L[1], "L3": L[2],
        "blocks_total": sum(len(r.block_sizes) for r in records),
    }
    if args.emit_tree:
        payload["degrees"] = [int(d) for d in seq.degrees]
        payload["blocks"] = [r.block_sizes for r in records]
    _json_out(payload, args.output)
    return 0


def cmd_scaling(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    threads = int(os.environ.get("BLOCKMAPS_THREADS", "1"))
    report = sampler.scaling_experiment(
        args.scheme, args.u, sizes, args.reps, args.seed,
        threads=threads)
    if args.svg:
        Path(args.svg).write_text(svgplot.scaling_svg(report))
    if args.format == "json":
        payload = {
            "scheme": report.scheme_id, "u": str(report.u),
            "sizes": report.n_grid, "replicates": report.replicates,
            "seed": report.seed, "regime": report.regime,
            "mean_offspring": report.mean_offspring,
            "stats": {str(n): report.stats[n] for n in report.n_grid},
            "fits": report.fits,
            "fixture_versions": fixture_versions(),
        }
        if report.diagnostics:
            payload["diagnostics"] = {
                k: v[:50] for k, v in report.diagnostics.items()}
        _json_out(payload, args.output)
    else:
        _write(sampler.report_rows_csv(report), args.output)
    return 0


def fixture_versions() -> dict:
    out = {}
    for fam in ("all_maps", "loopless_maps", "bipartite_maps",
                "loopless_triangulations"):
        try:
            _, _, stamp = schemes.read_fixture(fam)
            out[fam] = stamp
        except Exception:  # noqa: BLE001
            out[fam] = None
    return out


def cmd_oracle(args) -> int:
    if args.blocks:
        if args.family != "all":
            print("--blocks census is defined for the 'all' family (scheme 2)",
                  file=sys.stderr)
            return 2
        table = oracle.bivariate_census(args.max_edges)
        lines = ["n,blocks,count"]
        for (n, bcount), c in sorted(table.items()):
            lines.append(f"{n},{bcount},{c}")
    else:
        lines = ["n,count"]
        for n in range(0, args.max_edges + 1):
            lines.append(f"{n},{oracle.enumerate_rooted_maps(n, args.family, max_edges=args.max_edges)}")
    _write("\n".join(lines) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    groups = args.only.split(",") if args.only else None
    filt = {args.scheme} if args.scheme else None
    checks = verify.run_all(
        schemes_filter=filt, groups=groups, depth=args.depth,
        chain_N=args.chain_N, table_N=args.N,
        N_sub=args.exponent_N, N_crit=args.exponent_N_critical)
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"[{status}] {c['name']}: {c['detail']}")
    failed = [c for c in checks if not c["passed"]]
    if args.output:
        _json_out({"checks": checks, "failed": len(failed)}, args.output)
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return 1 if failed else 0


# ----------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="blockmaps",
        description="block-weighted random planar maps workbench")
    p.add_argument("--config", help="key=value defaults file (flags win)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scheme=True, u=False, seed=False):
        if scheme:
            sp.add_argument("--scheme", type=int, required=True,
                            choices=range(1, 9), metavar="K")
        if u:
            sp.add_argument("-u", type=positive_frac, required=True,
                            help="block weight as exact fraction P/Q")
        if seed:
            sp.add_argument("--seed", type=int, required=True)
        sp.add_argument("-o", "--output", help="write to file instead of stdout")
        sp.add_argument("--precision-bits", type=int, default=128)

    sp = sub.add_parser("series", help="weighted map series coefficients")
    common(sp, u=True)
    sp.add_argument("-N", type=int, default=16)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(fn=cmd_series)

    sp = sub.add_parser("blocks", help="block family counting series")
    common(sp)
    sp.add_argument("-N", type=int, default=16)
    sp.set_defaults(fn=cmd_blocks)

    sp = sub.add_parser("transition", help="rho, y, E over a u-grid")
    common(sp)
    sp.add_argument("--u-min", type=positive_frac, required=True)
    sp.add_argument("--u-max", type=positive_frac, required=True)
    sp.add_argument("--steps", type=int, default=9)
    sp.add_argument("-N", type=int, default=512)
    sp.add_argument("--no-cross-check", action="store_true",
                    help="skip the series-side ratio cross-check")
    sp.set_defaults(fn=cmd_transition)

    sp = sub.add_parser("critical", help="locate u_C")
    common(sp)
    sp.set_defaults(fn=cmd_critical)

    sp = sub.add_parser("exponent", help="coefficient asymptotics exponent")
    common(sp, u=True)
    sp.add_argument("-N", type=int, default=2048)
    sp.set_defaults(fn=cmd_exponent)

    sp = sub.add_parser("sample", help="one conditioned block tree")
    common(sp, u=True, seed=True)
    sp.add_argument("-n", type=int, required=True, help="map size")
    sp.add_argument("--emit-tree", action="store_true")
    sp.add_argument("--strategy", choices=("auto", "dp", "rejection"),
                    default="auto")
    sp.set_defaults(fn=cmd_sample)

    sp = sub.add_parser("scaling", help="largest-block scaling experiment")
    common(sp, u=True, seed=True)
    sp.add_argument("--sizes", required=True, help="comma-separated map sizes")
    sp.add_argument("--reps", type=int, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--svg", help="write an SVG plot here")
    sp.set_defaults(fn=cmd_scaling)

    sp = sub.add_parser("oracle", help="brute-force family counts")
    sp.add_argument("--family", required=True, choices=sorted(oracle.FAMILIES))
    sp.add_argument("--max-edges", type=int, default=4)
    sp.add_argument("--blocks", action="store_true",
                    help="bivariate census (n, blocks) for the all family")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_oracle)

    sp = sub.add_parser("verify", help="run the full verification suite")
    sp.add_argument("--scheme", type=int, choices=range(1, 9))
    sp.add_argument("--only", help="comma list of groups "
                    f"({','.join(verify.GROUPS)})")
    sp.add_argument("--depth", type=int, default=4, help="oracle depth")
    sp.add_argument("--chain-N", type=int, default=128)
    sp.add_argument("-N", type=int, default=512, help="table-check order")
    sp.add_argument("--exponent-N", type=int, default=1024)
    sp.add_argument("--exponent-N-critical", type=int, default=2048)
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_verify)
    return p


def apply_config(parser, argv):
    """key=value config file as defaults; explicit flags win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    pairs = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        k, _, v = line.partition("=")
        pairs[k.strip().replace("-", "_")] = v.strip()
    rest = argv[:i] + argv[i + 2:]
    extra = []
    present = {a.lstrip("-").replace("-", "_").split("=")[0] for a in rest
               if a.startswith("-")}
    for k, v in pairs.items():
        if k not in present:
            flag = "--" + k.replace("_", "-")
            if k in ("u", "n", "N", "o"):
                flag = "-" + k
            extra.extend([flag, v])
    return rest + extra


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    argv = apply_config(parser, argv)
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (schemes.FixtureError, schemes.ConventionError,
            sampler.SamplerError, transition.SingularSolveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
