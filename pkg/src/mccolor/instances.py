"""Generators for benchmark-family graphs.

``mycielski``, ``queen`` and ``full_insertions`` rebuild the deterministic
DIMACS families (myciel*, queen*_*, k-FullIns_*) up to vertex labelling.
``hajos_k4_chain`` and ``leighton`` draw random members of the families
behind the mug* and le450_* instances; they match the published sizes and
chromatic numbers but are not the published files.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .graph import Graph

Edges = list[tuple[int, int]]


def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2), name=f"K{n}")


def _mycielskian(n: int, edges: Edges) -> tuple[int, Edges]:
    # copies u_i = n + i, apex 2n
    out = list(edges)
    for a, b in edges:
        out.append((a, n + b))
        out.append((b, n + a))
    out.extend((n + i, 2 * n) for i in range(n))
    return 2 * n + 1, out


def mycielski(order: int) -> Graph:
    """DIMACS ``myciel<order>``: the Mycielskian applied ``order - 1`` times to K2.

    Chromatic number ``order + 1``.
    """
    n, edges = 2, [(0, 1)]
    for _ in range(order - 1):
        n, edges = _mycielskian(n, edges)
    return Graph.from_edges(n, edges, name=f"myciel{order}")


def _full_insertion(n: int, edges: Edges, k: int) -> tuple[int, Edges]:
    layers = k + 2
    out: Edges = []
    for a, b in edges:
        out.append((a, b))
        for j in range(k + 1):
            out.append((j * n + a, (j + 1) * n + b))
            out.append((j * n + b, (j + 1) * n + a))
    hub = layers * n
    for j in range(layers):
        out.extend((j * n + v, hub + j) for v in range(n))
    out.extend((hub + a, hub + b) for a, b in combinations(range(layers), 2))
    return layers * n + layers, out


def full_insertions(k: int, order: int) -> Graph:
    """DIMACS ``<k>-FullIns_<order>``, built from K2 by ``order - 1`` full insertions.

    Each insertion keeps the graph as layer 0, adds ``k + 1`` shifted copies
    wired along the edges, and ties every layer to its own vertex of a
    ``(k + 2)``-clique. Chromatic number ``order + k``.
    """
    n, edges = 2, [(0, 1)]
    for _ in range(order - 1):
        n, edges = _full_insertion(n, edges, k)
    return Graph.from_edges(n, edges, name=f"{k}-FullIns_{order}")


def queen(rows: int, cols: int | None = None) -> Graph:
    """Queen graph on a ``rows x cols`` board (DIMACS ``queen<r>_<c>``)."""
    cols = rows if cols is None else cols
    cells = [(r, c) for r in range(rows) for c in range(cols)]
    edges = [
        (i, j)
        for (i, (r1, c1)), (j, (r2, c2)) in combinations(enumerate(cells), 2)
        if r1 == r2 or c1 == c2 or abs(r1 - r2) == abs(c1 - c2)
    ]
    return Graph.from_edges(len(cells), edges, name=f"queen{rows}_{cols}")


def hajos_k4_chain(joins: int, seed: int, name: str = "") -> Graph:
    """Random Hajós construction over ``joins + 1`` copies of K4.

    Each step glues a fresh K4 onto a random edge ``xy`` of the current
    graph: one K4 vertex is identified with ``x``, the edge ``xy`` and one
    K4 edge at the glued vertex are removed, and their free ends are joined.
    Every result is 4-critical with ``3 * joins + 4`` vertices and
    ``5 * joins + 6`` edges; 32 joins give the 100-vertex, 166-edge size of
    the mug100 instances.
    """
    rng = np.random.default_rng(seed)
    edges: set[tuple[int, int]] = set(combinations(range(4), 2))
    n = 4
    for _ in range(joins):
        x, y = sorted(edges)[rng.integers(len(edges))]
        if rng.random() < 0.5:
            x, y = y, x
        a, b, c = n, n + 1, n + 2
        edges.discard((min(x, y), max(x, y)))
        # fresh K4 on {x, a, b, c} minus the edge x-a
        edges.update([(x, b), (x, c), (a, b), (a, c), (b, c)])
        edges.add((min(y, a), max(y, a)))
        n += 3
    return Graph.from_edges(n, edges, name=name or f"hajos{n}_{seed}")


def leighton(n: int, colors: int, target_edges: int, seed: int, name: str = "") -> Graph:
    """Leighton-style graph: random cliques inside a planted ``colors``-partition.

    Vertices are split round-robin into ``colors`` classes. Cliques take one
    random vertex from each of ``size`` random classes; sizes cycle from
    ``colors`` down to 2 until the graph has ``target_edges`` edges (the last
    clique is cut short to land on the target). The partition is a proper
    coloring and the first clique has full size, so the chromatic number is
    exactly ``colors``.
    """
    rng = np.random.default_rng(seed)
    classes = [list(range(c, n, colors)) for c in range(colors)]
    edges: set[tuple[int, int]] = set()
    size = colors
    while len(edges) < target_edges:
        picked = rng.choice(colors, size=size, replace=False)
        verts = [classes[c][rng.integers(len(classes[c]))] for c in picked]
        for a, b in combinations(verts, 2):
            if len(edges) == target_edges:
                break
            edges.add((min(a, b), max(a, b)))
        size = size - 1 if size > 2 else colors
    return Graph.from_edges(n, edges, name=name or f"leighton{n}_{colors}")
