"""Command-line interface: partition, evaluate, generate, profile, bench."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import __version__
from .balance import fits, lpt_balance_bound, standard_bound
from .bench import run_bench, write_bench_csv
from .driver import partition_pipeline
from .hgr_io import (HgrFormatError, generate_artificial, load_hgr,
                     read_partition, write_hgr, write_partition)
from .hypergraph import HypergraphError, Partition, connectivity
from .profiles import performance_profile

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="balpart",
        description="Balance-guaranteed k-way partitioning of weighted "
                    "hypergraphs")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="partition a .hgr hypergraph")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--output", help="partition file to write")
    p.add_argument("--report", choices=["json", "csv"], default="json")
    p.add_argument("--report-file", help="write the report here instead of "
                                         "stdout")
    p.add_argument("--trials", type=int, default=16,
                   help="initial-partitioning candidates per bipartition")
    p.add_argument("--max-passes", type=int, default=8,
                   help="FM passes per level")
    p.add_argument("--threads", type=int, default=1,
                   help="run recursion children concurrently")

    e = sub.add_parser("evaluate", help="re-evaluate a partition file")
    e.add_argument("--hypergraph", required=True)
    e.add_argument("--partition", required=True)
    e.add_argument("--k", type=int, help="block count for bound reporting "
                                         "(default: blocks in the file)")
    e.add_argument("--epsilon", type=float,
                   help="report balance against the bounds for this epsilon")

    g = sub.add_parser("generate", help="re-weight a base .hgr into an "
                                        "artificial heavy-vertex instance")
    g.add_argument("--base", required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--output", required=True)

    f = sub.add_parser("profile", help="performance profiles from a results "
                                       "CSV (algorithm,instance,quality)")
    f.add_argument("--input", required=True)
    f.add_argument("--output", help="CSV output (default stdout)")

    b = sub.add_parser("bench", help="sweep k x epsilon x seeds and emit "
                                     "balanced-rate statistics")
    b.add_argument("--hypergraphs", nargs="+", required=True)
    b.add_argument("--k", default="2,4,8",
                   help="comma-separated block counts")
    b.add_argument("--epsilon", default="0.01,0.03,0.1",
                   help="comma-separated imbalance values")
    b.add_argument("--seeds", type=int, default=3, help="seeds per cell")
    b.add_argument("--base-seed", type=int, default=1)
    b.add_argument("--output", help="CSV output (default stdout)")
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--trials", type=int, default=16)
    b.add_argument("--max-passes", type=int, default=8)
    return parser


def _emit_report(report: dict, fmt: str, path):
    if fmt == "json":
        text = json.dumps(report, indent=2, default=str) + "\n"
    else:
        lines = ["key,value"]
        for key, value in report.items():
            if isinstance(value, list):
                value = " ".join(str(x) for x in value)
            lines.append(f"{key},{value}")
        text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_partition(args) -> int:
    hg = load_hgr(args.hypergraph)
    partition, report = partition_pipeline(
        hg, args.k, args.epsilon, args.seed, trials=args.trials,
        max_passes=args.max_passes, threads=args.threads)
    if args.output:
        write_partition(partition, args.output)
    _emit_report(report.to_dict(), args.report, args.report_file)
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    hg = load_hgr(args.hypergraph)
    raw = read_partition(args.partition, hg.num_vertices)
    k = args.k if args.k is not None else raw.k
    part = Partition.from_block_of(hg, raw.block_of, max(k, raw.k))
    report = {
        "km1": connectivity(hg, part),
        "blocks": part.k,
        "block_weights": [int(x) for x in part.block_weights],
        "max_block_weight": int(part.block_weights.max()),
        "empty_blocks": part.empty_blocks(),
    }
    if args.epsilon is not None:
        bound_std = standard_bound(hg.total_weight, k, args.epsilon)
        bound_lpt = lpt_balance_bound(hg, k, args.epsilon)
        weights = [int(x) for x in part.block_weights]
        report.update({
            "epsilon": args.epsilon,
            "bound_standard": bound_std,
            "bound_l_lpt": bound_lpt,
            "balanced_standard": all(fits(w, Fraction(bound_std))
                                     for w in weights),
            "balanced_l_lpt": all(fits(w, Fraction(bound_lpt))
                                  for w in weights),
        })
    _emit_report(report, "json", None)
    return EXIT_OK


def _cmd_generate(args) -> int:
    base = load_hgr(args.base)
    hg = generate_artificial(base, args.seed)
    write_hgr(hg, args.output)
    print(f"wrote {args.output}: n={hg.num_vertices} m={hg.num_nets} "
          f"c(V)={hg.total_weight}")
    return EXIT_OK


def _cmd_profile(args) -> int:
    table: dict[str, dict[str, float]] = {}
    with open(args.input, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"algorithm", "instance", "quality"}
        if reader.fieldnames is None or not required.issubset(
                reader.fieldnames):
            raise HgrFormatError(
                f"profile input needs columns {sorted(required)}")
        for row in reader:
            table.setdefault(row["algorithm"], {})[row["instance"]] = \
                float(row["quality"])
    if not table:
        raise HgrFormatError("profile input has no rows")
    instances = sorted({i for per in table.values() for i in per})
    for alg, per in table.items():
        missing = [i for i in instances if i not in per]
        if missing:
            raise HgrFormatError(
                f"algorithm {alg!r} lacks results for {missing[:3]}")
    quality = {alg: [per[i] for i in instances] for alg, per in table.items()}
    curves = performance_profile(quality)

    out = sys.stdout if not args.output else open(args.output, "w",
                                                  encoding="utf-8",
                                                  newline="")
    try:
        writer = csv.writer(out)
        writer.writerow(["algorithm", "tau", "fraction"])
        for alg in sorted(curves):
            for tau, frac in curves[alg]:
                writer.writerow([alg, f"{tau:.10g}", f"{frac:.10g}"])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _parse_list(text: str, conv):
    try:
        return [conv(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise HgrFormatError(f"bad list argument {text!r}") from None


def _cmd_bench(args) -> int:
    ks = _parse_list(args.k, int)
    epsilons = _parse_list(args.epsilon, float)
    if not ks or not epsilons or args.seeds < 1:
        raise HgrFormatError("bench needs at least one k, epsilon and seed")
    rows = run_bench(args.hypergraphs, ks, epsilons, args.seeds,
                     base_seed=args.base_seed, threads=args.threads,
                     trials=args.trials, max_passes=args.max_passes)
    if args.output:
        write_bench_csv(rows, args.output)
    else:
        write_bench_csv(rows, sys.stdout)
    return EXIT_OK


_COMMANDS = {
    "partition": _cmd_partition,
    "evaluate": _cmd_evaluate,
    "generate": _cmd_generate,
    "profile": _cmd_profile,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (HgrFormatError, HypergraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
