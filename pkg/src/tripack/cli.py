"""Command line interface: gen, verify, pack, bounds, sweep, check.

Exit codes: 0 success, 1 assertion/identity failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import generators
from .bounds import parse_rational, threshold_profile
from .graphs import read_edge_list, write_edge_list
from .harness import (
    SweepConfig,
    construction_check,
    emit_csv,
    load_sweep_config,
    run_sweep,
    verify_batch,
)
from .packing import (
    PipelineConfig,
    brute_force_max_pack,
    fractional_pack_lp,
    greedy_pack,
    local_search_improve,
    partition_pipeline_pack,
    round_to_integral,
)


def _cmd_gen(args) -> int:
    d = parse_rational(args.d) if args.d is not None else Fraction(0)
    g, side = generators.generate_family(args.family, args.n, d, args.seed)
    if args.p:
        g = generators.perturb(g, float(parse_rational(args.p)), args.seed + 1)
    write_edge_list(args.out, g, side)
    print(f"wrote {args.out}: n={g.n} m={g.edge_count}")
    return 0


def _cmd_verify(args) -> int:
    n_range = range(args.n_min, args.n + 1)
    report = verify_batch(n_range, args.trials, args.r, args.seed)
    print(report.summary())
    return 0 if report.ok else 1


def _cmd_pack(args) -> int:
    g, side = read_edge_list(getattr(args, "in"))
    seed = args.seed
    fr = None
    pk = None
    if args.method == "greedy":
        pk = greedy_pack(g, seed)
    elif args.method == "ls":
        pk = local_search_improve(greedy_pack(g, seed), g, budget=args.budget, seed=seed + 1)
    elif args.method == "bruteforce":
        pk = brute_force_max_pack(g)
    elif args.method == "lp":
        fr = fractional_pack_lp(g)
    elif args.method in ("pipeline", "pipeline+round"):
        cfg = PipelineConfig(M=args.M, eps=args.eps, seed=seed)
        fr = partition_pipeline_pack(g, args.d or 0, args.p or 0, cfg)
        if args.method == "pipeline+round":
            pk = round_to_integral(fr, seed=seed + 1)
    if fr is not None:
        extra = f" lp_upper={fr.lp_upper:.6f}" if fr.lp_upper is not None else ""
        print(f"fractional value={fr.value:.6f} max_load={fr.max_edge_load():.9f}{extra}")
    if pk is not None:
        pk.audit()
        print(f"triangles={len(pk)} uncovered={pk.uncovered}")
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(f"# triangles={len(pk)} uncovered={pk.uncovered}\n")
                for t in sorted(pk.triangles):
                    fh.write(f"{t.i} {t.j} {t.k}\n")
    return 0


def _cmd_bounds(args) -> int:
    prof = threshold_profile(parse_rational(args.d))
    print(f"{'d':>20}: {prof.d} = {float(prof.d):.6f}")
    print(f"{'upper 2d/(1+2d)':>20}: {prof.upper} = {float(prof.upper):.6f}")
    print(f"{'lower':>20}: {prof.lower} = {float(prof.lower):.6f}")
    if prof.conditional_upper is not None:
        print(f"{'conditional upper':>20}: {prof.conditional_upper} = {float(prof.conditional_upper):.6f}")
        print(f"{'blackbox upper':>20}: {prof.blackbox_upper} = {float(prof.blackbox_upper):.6f}")
    print("csv: d,upper,lower,conditional_upper,blackbox_upper")
    print("csv: " + prof.csv_row())
    return 0


def _cmd_sweep(args) -> int:
    if args.config:
        cfg = load_sweep_config(args.config)
    else:
        if not (args.d and args.family and args.n and args.p_grid):
            raise ValueError("sweep needs --config or all of --d --family --n --p-grid")
        cfg = SweepConfig(
            d=parse_rational(args.d), family=args.family, n=args.n,
            p_grid=[parse_rational(x) for x in args.p_grid.split(",")],
            reps=args.reps, base_seed=args.seed, method=args.method,
        )
    rows = run_sweep(cfg, threads=args.threads)
    emit_csv(rows, args.out)
    done = sum(1 for r in rows if not r.skipped)
    print(f"wrote {args.out}: {done} rows ({len(rows) - done} skipped)")
    return 0


def _cmd_check(args) -> int:
    report = construction_check(parse_rational(args.d), parse_rational(args.p),
                                args.n, args.seed)
    for key, val in report.items():
        print(f"{key:>16}: {val}")
    return 0 if report["bound_respected"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tripack")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph instance")
    g.add_argument("--family", required=True, choices=generators.FAMILIES)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", default=None, help='density of the regular part, "num/den" or decimal')
    g.add_argument("--p", default=None, help="perturbation probability")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen)

    v = sub.add_parser("verify", help="exact weighting identity batch")
    v.add_argument("--n", type=int, default=12, help="largest instance size")
    v.add_argument("--n-min", type=int, default=5)
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--r", type=int, nargs="*", default=[3, 4])
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=_cmd_verify)

    p = sub.add_parser("pack", help="pack a graph from an edge-list file")
    p.add_argument("--in", required=True)
    p.add_argument("--method", default="ls",
                   choices=["greedy", "ls", "bruteforce", "lp", "pipeline", "pipeline+round"])
    p.add_argument("--M", type=int, default=20)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--d", default=None)
    p.add_argument("--p", default=None)
    p.add_argument("--budget", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_pack)

    b = sub.add_parser("bounds", help="threshold profile for a given d")
    b.add_argument("--d", required=True)
    b.set_defaults(func=_cmd_bounds)

    s = sub.add_parser("sweep", help="run a seeded experiment sweep")
    s.add_argument("--config", default=None)
    s.add_argument("--d", default=None)
    s.add_argument("--family", default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--p-grid", default=None, help="comma-separated p values")
    s.add_argument("--reps", type=int, default=1)
    s.add_argument("--method", default="ls")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_sweep)

    c = sub.add_parser("check", help="extremal construction obstruction check")
    c.add_argument("--d", required=True)
    c.add_argument("--p", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
