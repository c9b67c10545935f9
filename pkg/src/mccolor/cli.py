"""Command-line interface.

Exit codes: 0 success, 1 contract violation or bad input data, 2 usage
error, 10 no coloring found within the budget, 11 coloring is improper.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness
from .coloring import VerificationError, read_coloring, verify_coloring, write_coloring
from .graph import ContractError, DimacsError, read_dimacs
from .greedy import greedy_dsatur
from .policy import SearchParams
from .sat_encoder import DecodeError, InconsistentModelError, decode_model, encode_k_coloring, parse_model
from .search import nmcs_increasing, nrpa

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_UNSOLVED = 10
EXIT_IMPROPER = 11


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--level", type=int, default=7, help="NRPA nesting level (default 7)")
    p.add_argument("--iterations", type=int, default=100, help="NRPA iterations per level (default 100)")
    p.add_argument("--alpha", type=float, default=1.0, help="adaptation step size (default 1.0)")
    p.add_argument("--adapt", choices=["all", "legal"], default="all",
                   help="normalise adapt over all colors or only legal ones (default all)")
    p.add_argument("--timeout", type=float, default=1800.0, help="seconds per run (default 1800)")
    p.add_argument("--max-playouts", type=int, default=None, help="playout budget per run")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mccolor", description="Monte Carlo search for graph k-coloring")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="look for a proper k-coloring of one graph")
    p.add_argument("graph", type=Path)
    p.add_argument("--algo", choices=["nrpa", "nmcs", "greedy"], default="nrpa")
    p.add_argument("--colors", type=int, help="number of colors k (not used by greedy)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="write the coloring here when one is found")
    _add_search_flags(p)

    p = sub.add_parser("bench", help="run the k-descent protocol over instances")
    p.add_argument("instances", nargs="+", type=Path,
                   help=".col files, directories of .col files, or text files listing paths")
    p.add_argument("--algo", choices=list(harness.ALGORITHMS), default="nrpa")
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--seed", type=int, default=0, help="base seed; run i uses seed + i")
    p.add_argument("--meta", type=Path, help="instance metadata: 'name chi difficulty' per line")
    p.add_argument("--use-chi", action="store_true",
                   help="never try k below the metadata chromatic number")
    p.add_argument("--jobs", type=int, default=1, help="concurrent runs within a k batch")
    p.add_argument("--sat-command", help="solver template for sat-external, e.g. 'minisat {cnf} {out}'")
    p.add_argument("--out", type=Path, default=Path("results.csv"))
    p.add_argument("--summary", type=Path, default=Path("summary.csv"))
    p.add_argument("--trace", type=Path, default=Path("trace.csv"))
    _add_search_flags(p)

    p = sub.add_parser("encode-sat", help="write the CNF encoding of k-colorability")
    p.add_argument("graph", type=Path)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--out", type=Path, help="output file (default stdout)")

    p = sub.add_parser("decode-sat", help="turn a SAT model into a coloring file")
    p.add_argument("graph", type=Path)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--out", type=Path, help="output file (default stdout)")

    p = sub.add_parser("verify", help="check a coloring file against a graph")
    p.add_argument("graph", type=Path)
    p.add_argument("--coloring", type=Path, required=True)
    return parser


def _instance_paths(items: list[Path]) -> list[Path]:
    paths: list[Path] = []
    for item in items:
        if item.is_dir():
            paths.extend(sorted(item.glob("*.col")))
        elif item.suffix == ".col":
            paths.append(item)
        else:
            base = item.parent
            for line in item.read_text().splitlines():
                line = line.strip()
                if line and not line.startswith("#"):
                    p = Path(line)
                    paths.append(p if p.is_absolute() else base / p)
    return paths


def cmd_solve(args) -> int:
    g = read_dimacs(args.graph)
    if args.algo == "greedy":
        used, colors = greedy_dsatur(g)
        print(f"greedy: {used} colors")
        if args.out:
            write_coloring(args.out, colors)
        return EXIT_OK
    if args.colors is None:
        raise ContractError("--colors is required for nrpa and nmcs")
    if args.algo == "nrpa":
        params = SearchParams(
            level=args.level, iterations=args.iterations, alpha=args.alpha,
            adapt_all=args.adapt == "all", seed=args.seed, timeout=args.timeout,
            max_playouts=args.max_playouts,
        )
        res = nrpa(g, args.colors, params)
    else:
        res = nmcs_increasing(g, args.colors, timeout=args.timeout, seed=args.seed, max_playouts=args.max_playouts)
    print(
        f"{args.algo}: k={args.colors} solved={res.solved} score={res.best_score}/{g.edge_count} "
        f"playouts={res.playout_count} elapsed={res.elapsed:.3f}s"
    )
    if not res.solved:
        return EXIT_UNSOLVED
    if args.out:
        write_coloring(args.out, res.assignment)
    return EXIT_OK


def cmd_bench(args) -> int:
    metas = harness.read_meta(args.meta) if args.meta else {}
    config = harness.AlgorithmConfig(
        args.algo, timeout=args.timeout, level=args.level, iterations=args.iterations,
        alpha=args.alpha, adapt_all=args.adapt == "all", max_playouts=args.max_playouts,
        sat_command=args.sat_command,
    )
    all_records, summary_rows, trace_rows, pairs = [], [], [], []
    for path in _instance_paths(args.instances):
        g = read_dimacs(path)
        meta = metas.get(g.name, harness.InstanceMeta(g.name))
        lower = meta.chi_known if args.use_chi else None
        summary, records = harness.run_protocol(
            g, config, runs=args.runs, base_seed=args.seed, lower_bound=lower, jobs=args.jobs,
        )
        all_records.extend(records)
        summary_rows.append(harness.summary_row(meta, args.algo, summary, records))
        trace_rows.extend((g.name, args.algo, t, imp) for t, imp in harness.improvement_trace(records, summary.ubi))
        pairs.append((summary, meta))
        reached = "--" if summary.reached is None else f"{summary.reached:.0f}%"
        print(f"{g.name}: UBI {summary.ubi} UB {summary.ub} Reached {reached}")
    harness.write_results(args.out, all_records)
    harness.write_summary(args.summary, summary_rows)
    harness.write_trace(args.trace, trace_rows)
    if pairs and all(m.chi_known is not None for _, m in pairs):
        print(f"Avg. ratio to chi: {harness.format_ratio(harness.avg_ratio_to_chi(pairs))}")
    return EXIT_OK


def cmd_encode(args) -> int:
    g = read_dimacs(args.graph)
    text = encode_k_coloring(g, args.colors).to_dimacs()
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_decode(args) -> int:
    g = read_dimacs(args.graph)
    status, true_vars = parse_model(args.model.read_text())
    if status is False:
        print("model file reports UNSATISFIABLE", file=sys.stderr)
        return EXIT_UNSOLVED
    colors = decode_model(g, args.colors, true_vars)
    if args.out:
        write_coloring(args.out, colors)
    else:
        for v, c in enumerate(colors, start=1):
            print(v, c)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = read_dimacs(args.graph)
    check = verify_coloring(g, read_coloring(args.coloring, g.vertex_count))
    print(f"proper={check.proper} colors_used={check.colors_used} monochromatic_edges={check.monochromatic_edges}")
    return EXIT_OK if check.proper else EXIT_IMPROPER


COMMANDS = {
    "solve": cmd_solve,
    "bench": cmd_bench,
    "encode-sat": cmd_encode,
    "decode-sat": cmd_decode,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        parser.print_usage(sys.stderr)
        print(f"mccolor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ContractError, DimacsError, VerificationError, DecodeError, InconsistentModelError,
            harness.MetadataError, ValueError) as exc:
        print(f"mccolor: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
