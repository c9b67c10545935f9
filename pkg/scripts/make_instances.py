"""Write the bundled benchmark instances to data/instances/.

The deterministic families are rebuilt exactly (up to vertex labels); mug
and le450 graphs are random members of the same families with the
published sizes and chromatic numbers, and say so in their comment header.

    python scripts/make_instances.py [outdir]
"""

import sys
from pathlib import Path

from mccolor.graph import write_dimacs
from mccolor.instances import full_insertions, hajos_k4_chain, leighton, mycielski, queen

ROOT = Path(__file__).resolve().parents[1]


def main(outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    exact = [
        mycielski(6),
        full_insertions(1, 4),
        full_insertions(3, 3),
        queen(10),
    ]
    for g in exact:
        write_dimacs(g, outdir / f"{g.name}.col", [f"{g.name}: regenerated from the family construction"])
    # the published queen files list every edge in both directions
    q = exact[-1]
    lines = [f"c {q.name}: regenerated, each edge listed twice as in the DIMACS file",
             f"p edge {q.vertex_count} {2 * q.edge_count}"]
    for u, v in q.edges:
        lines += [f"e {u + 1} {v + 1}", f"e {v + 1} {u + 1}"]
    (outdir / f"{q.name}.col").write_text("\n".join(lines) + "\n")
    surrogates = [
        (hajos_k4_chain(32, seed=1, name="mug100_1"), "random Hajos chain of 33 K4s, chi = 4"),
        (hajos_k4_chain(32, seed=25, name="mug100_25"), "random Hajos chain of 33 K4s, chi = 4"),
        (leighton(450, 15, 8169, seed=15, name="le450_15b"), "planted 15-partition with a 15-clique, chi = 15"),
    ]
    for g, note in surrogates:
        write_dimacs(g, outdir / f"{g.name}.col", [f"{g.name}: SURROGATE, not the DIMACS file", note])
    for g in exact + [g for g, _ in surrogates]:
        print(f"{g.name:12s} |V|={g.vertex_count:4d} |E|={g.edge_count}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "data" / "instances")
