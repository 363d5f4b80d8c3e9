"""Command-line front end: ladder, compile, evaluate, emit, check, bench-grid."""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from .bdd import DEFAULT_NODE_CAP, Ordering, dump_bdd, incidence_bandwidth, stats
from .bench import bench_grid, format_table
from .errors import ScenBddError, ValidationError
from .instance import check_decision, fmt_num, load_instance
from .mip import emit_mip, write_lp
from .pipeline import check_against_oracle, compile_instance
from .recourse import build_ladder, dump_ladder, load_ladder

NODE_CAP_ENV = "SCENBDD_NODE_CAP"


def _node_cap(args) -> int:
    if args.node_cap is not None:
        return args.node_cap
    env = os.environ.get(NODE_CAP_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"{NODE_CAP_ENV}={env!r} is not an integer") from None
    return DEFAULT_NODE_CAP


def _heuristic(args):
    if args.order == "file":
        if not args.order_file:
            raise ValidationError("--order file needs --order-file")
        text = Path(args.order_file).read_text(encoding="utf-8")
        try:
            return [int(tok) for tok in text.replace(",", " ").split()]
        except ValueError:
            raise ValidationError(f"{args.order_file}: order must list edge ids") from None
    return Ordering(args.order)


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(args):
    inst = load_instance(args.instance)
    ladder = None
    if getattr(args, "ladder", None):
        ladder = load_ladder(Path(args.ladder).read_text(encoding="utf-8"), inst)
    return inst, ladder


def _compiled(args):
    inst, ladder = _load(args)
    if ladder is not None and not ladder.levels:
        raise ValidationError("ladder has no levels; nothing to compile")
    try:
        heuristic = _heuristic(args)
        return compile_instance(inst, ladder, heuristic, _node_cap(args))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def cmd_ladder(args) -> int:
    inst = load_instance(args.instance)
    ladder = build_ladder(inst)
    if args.out:
        Path(args.out).write_text(dump_ladder(ladder), encoding="utf-8")
    else:
        sys.stdout.write(dump_ladder(ladder))
    out = sys.stderr if not args.out else sys.stdout
    print(f"levels {len(ladder.levels)}", file=out)
    for i, lv in enumerate(ladder.levels):
        print(
            f"level {i} value={fmt_num(ladder.value(i))} points={len(lv.min_true_points)}",
            file=out,
        )
    if ladder.penalty is not None:
        print(f"penalty {fmt_num(ladder.penalty)}", file=out)
    return 0


def cmd_compile(args) -> int:
    comp = _compiled(args)
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    print(f"order {','.join(map(str, comp.order))}")
    print(f"{'level':>5} {'alpha':>12} {'size':>8} {'width':>6} {'bandwidth':>9}")
    for i, b in enumerate(comp.bdds):
        st = stats(b)
        bw = incidence_bandwidth(comp.ladder.levels[i].min_true_points, comp.order)
        print(f"{i:>5} {fmt_num(comp.ladder.value(i)):>12} {st.total_size:>8} {st.width:>6} {bw:>9}")
        if args.out:
            (Path(args.out) / f"level{i}.bdd").write_text(dump_bdd(b), encoding="utf-8")
    return 0


def cmd_evaluate(args) -> int:
    comp = _compiled(args)
    x = check_decision(comp.instance, args.x)
    sys.stdout.write(comp.evaluate(x).to_text())
    return 0


def cmd_emit(args) -> int:
    comp = _compiled(args)
    _emit(write_lp(emit_mip(comp.instance, comp.ladder, list(comp.bdds))), args.out)
    return 0


def cmd_check(args) -> int:
    comp = _compiled(args)
    res = check_against_oracle(comp)
    for x, got, want in res.failures:
        print(f"mismatch x={''.join(map(str, x))} pipeline={got!r} oracle={want!r}")
    x, v = res.optimum
    print(f"checked {res.checked} decisions, max error {res.max_error:.3e}")
    if x is not None:
        print(f"optimum x={''.join(map(str, x))} value={v!r}")
    print("PASS" if res.passed else "FAIL")
    return 0 if res.passed else 3


def cmd_bench_grid(args) -> int:
    if max(args.n) > 5 and not args.force:
        raise ValidationError("--n above 5 is beyond desk scale; pass --force to run anyway")
    heuristic = Ordering(args.order) if args.order != "file" else Ordering.OCCURRENCE
    results = [
        bench_grid(n, a, args.reps, args.seed, args.density, heuristic, _node_cap(args))
        for a in args.alpha_factor
        for n in args.n
    ]
    _emit(format_table(results), args.out)
    return 0


def _alpha(tok: str) -> float:
    v = float(tok)
    if not v >= 1.0:
        raise argparse.ArgumentTypeError("alpha factor must be >= 1 (or inf)")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scenbdd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, ladder=True):
        p.add_argument("--instance", required=True)
        if ladder:
            p.add_argument("--ladder", help="ladder file to use instead of enumerating")
        p.add_argument("--order", choices=["occ", "cmk", "id", "file"], default="occ")
        p.add_argument("--order-file", help="whitespace/comma separated edge permutation")
        p.add_argument("--node-cap", type=int, default=None)
        p.add_argument("--out")

    p = sub.add_parser("ladder", help="enumerate the critical-value ladder")
    p.add_argument("--instance", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("compile", help="compile one BDD per level, print stats")
    common(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("evaluate", help="level probabilities and expected recourse for x")
    common(p)
    p.add_argument("--x", required=True, help="decision bit string, edge 1 first")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("emit", help="write the MILP in CPLEX-LP format")
    common(p)
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("check", help="pipeline vs brute-force oracle over all feasible x")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench-grid", help="random road-network size benchmark")
    p.add_argument("--n", type=int, action="append", default=None)
    p.add_argument("--alpha-factor", type=_alpha, action="append", default=None)
    p.add_argument("--reps", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=1.2)
    p.add_argument("--order", choices=["occ", "cmk", "id"], default="occ")
    p.add_argument("--node-cap", type=int, default=None)
    p.add_argument("--force", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench_grid)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "bench-grid":
        args.n = args.n or [1, 2]
        args.alpha_factor = args.alpha_factor or [1.1, 1.5, math.inf]
    try:
        return args.func(args)
    except ScenBddError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
