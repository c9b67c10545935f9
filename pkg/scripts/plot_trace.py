"""Plot improvement-over-greedy against accumulated time from a trace CSV.

    python scripts/plot_trace.py results/trace.csv [-o trace.png]

One step line per (instance, algorithm); time axis is logarithmic.
"""

import argparse
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("trace", type=Path)
    ap.add_argument("-o", "--output", type=Path, default=Path("trace.png"))
    args = ap.parse_args()

    series = defaultdict(list)
    with open(args.trace) as fh:
        for row in csv.DictReader(fh):
            series[row["instance"], row["algorithm"]].append(
                (float(row["cumulative_seconds"]), int(row["improvements"]))
            )
    fig, ax = plt.subplots(figsize=(7, 4))
    for (name, algo), pts in sorted(series.items()):
        # a zero-length first run would vanish on a log axis
        xs = [max(t, 1e-3) for t, _ in pts]
        ax.step(xs, [i for _, i in pts], where="post", marker="o", label=f"{name} ({algo})")
    ax.set_xscale("log")
    ax.set_xlabel("accumulated time (s)")
    ax.set_ylabel("colors saved over greedy")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
