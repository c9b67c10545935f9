"""Run the k-descent protocol on the bundled instances and print a results table.

    python scripts/run_easy.py [--algo nrpa] [--runs 5] [--timeout 300] [--use-chi] [--outdir results/]

Writes results.csv, summary.csv and trace.csv into --outdir.
"""

import argparse
import logging
from pathlib import Path

from mccolor import harness
from mccolor.graph import read_dimacs

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algo", choices=["nrpa", "nmcs"], default="nrpa")
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--timeout", type=float, default=300.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--use-chi", action="store_true", help="stop the descent at the known chromatic number")
    ap.add_argument("--instances", nargs="*", type=Path, default=sorted((DATA / "instances").glob("*.col")))
    ap.add_argument("--outdir", type=Path, default=ROOT / "results")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    metas = harness.read_meta(DATA / "meta.txt")
    args.outdir.mkdir(parents=True, exist_ok=True)
    records, rows, trace, pairs = [], [], [], []
    print(f"{'instance':14s} {'|V|':>5s} {'|E|':>6s} {'chi':>4s} {'UBI':>4s} {'UB':>4s} {'Reached':>8s}")
    for path in args.instances:
        g = read_dimacs(path)
        meta = metas.get(g.name, harness.InstanceMeta(g.name))
        summary, recs = harness.run_protocol(
            g, args.algo, runs=args.runs, timeout=args.timeout, base_seed=args.seed,
            lower_bound=meta.chi_known if args.use_chi else None, jobs=args.jobs,
        )
        records += recs
        rows.append(harness.summary_row(meta, args.algo, summary, recs))
        trace += [(g.name, args.algo, t, imp) for t, imp in harness.improvement_trace(recs, summary.ubi)]
        pairs.append((summary, meta))
        reached = "--" if summary.reached is None else f"{summary.reached:.0f}%"
        print(f"{g.name:14s} {g.vertex_count:5d} {g.edge_count:6d} {meta.chi_known or '?':>4} "
              f"{summary.ubi:4d} {summary.ub:4d} {reached:>8s}")
    harness.write_results(args.outdir / "results.csv", records)
    harness.write_summary(args.outdir / "summary.csv", rows)
    harness.write_trace(args.outdir / "trace.csv", trace)
    if all(m.chi_known is not None for _, m in pairs):
        print("Avg. ratio to chi:", harness.format_ratio(harness.avg_ratio_to_chi(pairs)))


if __name__ == "__main__":
    main()
