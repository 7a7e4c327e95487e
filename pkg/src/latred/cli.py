"""Command-line front end: gen / reduce / bench.

All numerical work lives in the library modules; this file only parses
flags, moves files, and maps failures to exit codes (0 ok, 1 input error,
2 usage error, 3 numerical fault).
"""

from __future__ import annotations

import argparse
import json
import sys

from .altreduce import AltConfig, mgs_pivot_reduce, random_combination_reduce
from .core import (
    TransformRecord,
    apply_transform,
    is_unimodular,
    read_mat,
    write_mat,
)
from .genlat import ExampleSpec, gen_example
from .greedy import ReduceConfig, ReductionResult, reduce as greedy_reduce
from .harness import ExperimentConfig, aggregate_rows, run_experiment
from .lll import LLLConfig, lll_reduce

DEFAULT_DELTA = 1.0 - 1e-15
DEFAULT_ELLS = "2,4,8,16"
FULL_SWEEP_ELLS = "2,4,8,16,32,64,128"


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma list of integers: {text!r}")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma list of numbers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latred", description="Integer lattice reduction toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a q-ary example basis")
    gen.add_argument("--q", type=int, required=True)
    gen.add_argument("--ell", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_gen)

    red = sub.add_parser("reduce", help="reduce a basis from a .mat file")
    red.add_argument(
        "--algo", required=True,
        choices=["greedy", "lll", "lll+greedy", "rand-comb", "mgs"],
    )
    red.add_argument("--in", dest="in_path", required=True)
    red.add_argument("--out", required=True)
    red.add_argument("--p", type=float, default=2.0)
    red.add_argument("--p-schedule", type=_float_list, default=None)
    red.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    red.add_argument("--score", choices=["sum", "max"], default="sum")
    red.add_argument("--iters", type=int, default=None,
                     help="step budget for rand-comb (default 10*n)")
    red.add_argument("--seed", type=int, default=0)
    red.add_argument("--track-transform", action="store_true")
    red.add_argument("--report", default=None)
    red.set_defaults(func=cmd_reduce)

    bench = sub.add_parser("bench", help="run the benchmark protocol")
    bench.add_argument("--q", type=int, required=True)
    bench.add_argument("--ell-list", type=_int_list, default=None)
    bench.add_argument("--full-sweep", action="store_true",
                       help="use ell up to 128 (slow)")
    bench.add_argument("--trials", type=int, default=10)
    bench.add_argument("--mode", choices=["once", "repeat"], default="once")
    bench.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    bench.add_argument("--p", type=float, default=2.0)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--csv", required=True)
    bench.set_defaults(func=cmd_bench)

    return parser


def cmd_gen(args) -> int:
    if args.q < 3 or args.q % 2 == 0:
        print(f"latred gen: --q must be odd and >= 3, got {args.q}",
              file=sys.stderr)
        return 2
    if args.ell < 1:
        print(f"latred gen: --ell must be positive, got {args.ell}",
              file=sys.stderr)
        return 2
    basis = gen_example(ExampleSpec(args.q, args.ell, args.seed))
    write_mat(basis, args.out)
    print(f"n={basis.n} {args.out}")
    return 0


def _run_algo(args, basis) -> ReductionResult:
    track = args.track_transform
    if args.algo == "greedy":
        cfg = ReduceConfig(p=args.p, p_schedule=args.p_schedule,
                           score_mode=args.score)
        return greedy_reduce(basis, cfg, track_transform=track)
    if args.algo == "lll":
        return lll_reduce(basis, LLLConfig(delta=args.delta),
                          track_transform=track)
    if args.algo == "lll+greedy":
        first = lll_reduce(basis, LLLConfig(delta=args.delta),
                           track_transform=track)
        cfg = ReduceConfig(p=args.p, p_schedule=args.p_schedule,
                           score_mode=args.score)
        second = greedy_reduce(first.basis, cfg, track_transform=track)
        transform = None
        if track:
            transform = _compose(first.transform, second.transform)
        return ReductionResult(
            basis=second.basis,
            iterations_applied=second.iterations_applied,
            before=first.before,
            after=second.after,
            seconds=first.seconds + second.seconds,
            transform=transform,
        )
    if args.algo == "rand-comb":
        iters = args.iters if args.iters is not None else 10 * basis.n
        cfg = AltConfig(variant="random_combination", p=args.p,
                        iterations=iters, seed=args.seed)
        return random_combination_reduce(basis, cfg, track_transform=track)
    return mgs_pivot_reduce(basis, args.p, track_transform=track)


def _compose(u_first: TransformRecord, u_second: TransformRecord) -> TransformRecord:
    n = u_first.n
    cols = []
    for scol in u_second.cols:
        col = [0] * n
        for i, s in enumerate(scol):
            if s == 0:
                continue
            fi = u_first.cols[i]
            for r in range(n):
                col[r] += s * fi[r]
        cols.append(col)
    return TransformRecord(cols)


def _flag_error(message: str) -> int:
    print(f"latred: {message}", file=sys.stderr)
    return 2


def cmd_reduce(args) -> int:
    if not 0.25 < args.delta <= 1.0:
        return _flag_error(f"--delta must lie in (1/4, 1], got {args.delta}")
    if not args.p > 0:
        return _flag_error(f"--p must be positive, got {args.p}")
    if args.p_schedule is not None and any(p <= 0 for p in args.p_schedule):
        return _flag_error("--p-schedule entries must be positive")
    if args.iters is not None and args.iters < 0:
        return _flag_error("--iters must be nonnegative")
    basis = read_mat(args.in_path)
    result = _run_algo(args, basis)
    write_mat(result.basis, args.out)
    if args.report:
        report = {
            "algo": args.algo,
            "before": {
                "frobenius_sq": result.before.frobenius_sq,
                "min_norm_sq": result.before.min_norm_sq,
            },
            "after": {
                "frobenius_sq": result.after.frobenius_sq,
                "min_norm_sq": result.after.min_norm_sq,
            },
            "iterations": result.iterations_applied,
            "seconds": result.seconds,
        }
        if result.transform is not None:
            matches = apply_transform(basis, result.transform) == result.basis
            report["transform_matches"] = matches
            if basis.n <= 16:
                report["unimodular"] = is_unimodular(result.transform)
            else:
                report["unimodular"] = None
        with open(args.report, "w", encoding="ascii") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    print(
        f"{args.algo}: frobenius_sq {result.before.frobenius_sq} -> "
        f"{result.after.frobenius_sq} in {result.seconds:.3f}s"
    )
    return 0


def cmd_bench(args) -> int:
    if args.trials < 1:
        return _flag_error("--trials must be at least 1")
    if not 0.25 < args.delta <= 1.0:
        return _flag_error(f"--delta must lie in (1/4, 1], got {args.delta}")
    if not args.p > 0:
        return _flag_error(f"--p must be positive, got {args.p}")
    if args.q < 3 or args.q % 2 == 0:
        return _flag_error(f"--q must be odd and >= 3, got {args.q}")
    if args.full_sweep:
        ells = _int_list(FULL_SWEEP_ELLS)
    elif args.ell_list is not None:
        ells = args.ell_list
    else:
        ells = _int_list(DEFAULT_ELLS)
    config = ExperimentConfig(
        q=args.q,
        ell_list=ells,
        delta=args.delta,
        p_schedule=(args.p,),
        trials=args.trials,
        mode=args.mode,
        seed=args.seed,
        csv_path=args.csv,
    )
    records = run_experiment(config)
    header = ["mode", "n", "q", "delta", "p", "stat",
              "frob_sq_0", "frob_sq_lll", "frob_sq_ours",
              "min_sq_0", "min_sq_lll", "min_sq_ours",
              "secs_lll", "secs_ours", "iters_ours"]
    print(" ".join(header))
    for row in aggregate_rows(records):
        print(" ".join(row))
    print(f"wrote {len(records)} trial rows to {args.csv}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ArithmeticError as exc:
        print(f"latred: numerical fault: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"latred: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
