"""Partial colorings and the move model used by the searches.

A move colors the DSatur-selected vertex. Colors already used by colored
neighbours are pruned (forward checking) unless every color is used, in
which case all ``k`` colors are offered and the playout goes on with a
conflict. Terminal states are complete assignments; the score is the number
of non-monochromatic edges, so a score of ``|E|`` is a proper coloring.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .graph import ContractError, Graph

UNCOLORED = -1


class Move(NamedTuple):
    vertex: int
    color: int


class VerificationError(ValueError):
    pass


class ColoringState:
    """Mutable partial coloring of ``graph`` with ``k`` colors.

    ``color_counts[v, c]`` is the number of colored neighbours of ``v`` that
    hold color ``c``; the saturation of ``v`` is the number of nonzero
    entries in that row.
    """

    def __init__(self, graph: Graph, k: int):
        if k < 1:
            raise ContractError(f"k must be >= 1, got {k}")
        self.graph = graph
        self.k = k
        n = graph.vertex_count
        self.assignment = np.full(n, UNCOLORED, dtype=np.int64)
        self.color_counts = np.zeros((n, k), dtype=np.int32)
        self.saturation = np.zeros(n, dtype=np.int64)
        self.colored_count = 0
        self.conflict_count = 0
        self._degree = graph.csr()[2].astype(np.int64)
        self._nbrs = [np.asarray(a, dtype=np.int64) for a in graph.adjacency]

    def copy(self) -> "ColoringState":
        other = object.__new__(ColoringState)
        other.graph = self.graph
        other.k = self.k
        other.assignment = self.assignment.copy()
        other.color_counts = self.color_counts.copy()
        other.saturation = self.saturation.copy()
        other.colored_count = self.colored_count
        other.conflict_count = self.conflict_count
        other._degree = self._degree
        other._nbrs = self._nbrs
        return other

    @property
    def is_terminal(self) -> bool:
        return self.colored_count == self.graph.vertex_count

    def neighbor_color_set(self, v: int) -> set[int]:
        return set(np.flatnonzero(self.color_counts[v]).tolist())

    def possible_colors(self, v: int) -> list[int]:
        """Colors not used by a colored neighbour of ``v``, ascending."""
        return np.flatnonzero(self.color_counts[v] == 0).tolist()

    def recount_conflicts(self) -> int:
        """Monochromatic edges among colored endpoints, by a full edge scan."""
        a = self.assignment
        return sum(1 for u, v in self.graph.edges if a[u] != UNCOLORED and a[u] == a[v])

    def __repr__(self) -> str:
        return (
            f"ColoringState({self.graph.name or 'graph'}, k={self.k}, "
            f"colored={self.colored_count}/{self.graph.vertex_count}, conflicts={self.conflict_count})"
        )


def select_vertex_dsatur(s: ColoringState) -> int:
    """Uncolored vertex with the fewest remaining colors.

    Ties go to the highest static degree, then to the lowest vertex id.
    """
    if s.is_terminal:
        raise ContractError("no uncolored vertex left")
    max_deg = int(s._degree.max(initial=0))
    key = s.saturation * (max_deg + 1) + s._degree
    key = np.where(s.assignment == UNCOLORED, key, -1)
    return int(np.argmax(key))


def legal_moves(s: ColoringState) -> list[Move]:
    v = select_vertex_dsatur(s)
    colors = s.possible_colors(v)
    if not colors:
        colors = range(s.k)
    return [Move(v, c) for c in colors]


def apply_move(s: ColoringState, m: Move) -> ColoringState:
    """Color ``m.vertex`` in place and return ``s``."""
    v, c = m
    if not 0 <= c < s.k:
        raise ContractError(f"color {c} outside 0..{s.k - 1}")
    if s.assignment[v] != UNCOLORED:
        raise ContractError(f"vertex {v} is already colored {s.assignment[v]}")
    s.conflict_count += int(s.color_counts[v, c])
    s.assignment[v] = c
    s.colored_count += 1
    nbrs = s._nbrs[v]
    if nbrs.size:
        col = s.color_counts[:, c]
        col[nbrs] += 1
        s.saturation[nbrs[col[nbrs] == 1]] += 1
    return s


def score(s: ColoringState) -> int:
    if not s.is_terminal:
        raise ContractError("score is only defined on complete assignments")
    return s.graph.edge_count - s.conflict_count


def encode_move(m: Move, k: int) -> int:
    if not 0 <= m.color < k:
        raise ContractError(f"color {m.color} outside 0..{k - 1}")
    return m.vertex * k + m.color


def decode_move(code: int, k: int) -> Move:
    return Move(*divmod(int(code), k))


def replay(g: Graph, k: int, seq: Sequence[Move]) -> ColoringState:
    """Play ``seq`` from the empty coloring, checking every move is legal."""
    s = ColoringState(g, k)
    for m in seq:
        if s.is_terminal:
            raise ContractError("sequence is longer than the number of vertices")
        if m not in legal_moves(s):
            raise ContractError(f"move {tuple(m)} is not legal at step {s.colored_count}")
        apply_move(s, m)
    return s


@dataclass(frozen=True)
class Verification:
    proper: bool
    colors_used: int
    monochromatic_edges: int


def verify_coloring(g: Graph, assignment: Sequence[int]) -> Verification:
    a = np.asarray(assignment, dtype=np.int64)
    if a.shape != (g.vertex_count,):
        raise VerificationError(f"expected {g.vertex_count} colors, got {a.size}")
    if g.vertex_count and a.min() < 0:
        raise VerificationError(f"vertex {int(np.argmin(a))} has no color")
    bad = sum(1 for u, v in g.edges if a[u] == a[v])
    return Verification(bad == 0, len(set(a.tolist())), bad)


def format_coloring(assignment: Sequence[int]) -> str:
    colors = [int(c) for c in assignment]
    lines = [f"s {len(set(colors))}"]
    lines.extend(f"{v + 1} {c}" for v, c in enumerate(colors))
    return "\n".join(lines) + "\n"


def write_coloring(path: str | Path, assignment: Sequence[int]) -> None:
    Path(path).write_text(format_coloring(assignment))


def read_coloring(path: str | Path, vertex_count: int) -> list[int]:
    """Read a coloring file; vertices missing from the file stay at -1."""
    colors = [UNCOLORED] * vertex_count
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] in ("s", "c"):
            continue
        try:
            v, c = int(parts[0]), int(parts[1])
        except (ValueError, IndexError):
            raise VerificationError(f"line {lineno}: malformed coloring line {raw!r}") from None
        if not 1 <= v <= vertex_count:
            raise VerificationError(f"line {lineno}: vertex {v} out of range")
        colors[v - 1] = c
    return colors
