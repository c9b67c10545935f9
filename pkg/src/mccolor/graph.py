"""Undirected simple graphs and the DIMACS ``.col`` text format.

Vertices are dense integers ``0..n-1`` internally; DIMACS files use 1-based
ids and the conversion happens only in :func:`parse_dimacs` and
:func:`serialize_dimacs`.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

log = logging.getLogger(__name__)


class DimacsError(ValueError):
    """Malformed DIMACS input. ``lineno`` is 1-based (0 when not line specific)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno else ""
        super().__init__(prefix + message)


class ContractError(ValueError):
    """A precondition of an operation was violated by the caller."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    ``edges`` holds each edge once as ``(u, v)`` with ``u < v``, sorted.
    ``adjacency[v]`` is the ascending tuple of neighbours of ``v``.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)
    name: str = ""

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str = "") -> "Graph":
        if n < 0:
            raise ContractError(f"vertex count must be >= 0, got {n}")
        distinct: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ContractError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise ContractError(f"self-loop on vertex {u}")
            distinct.add((u, v) if u < v else (v, u))
        ordered = tuple(sorted(distinct))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in ordered:
            adj[u].append(v)
            adj[v].append(u)
        return cls(n, ordered, tuple(tuple(sorted(a)) for a in adj), name)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        if not 0 <= v < self.vertex_count:
            raise ContractError(f"vertex {v} out of range 0..{self.vertex_count - 1}")
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, indices, degree)`` as int32 arrays, cached."""
        cached = self.__dict__.get("_csr")
        if cached is None:
            degree = np.fromiter((len(a) for a in self.adjacency), dtype=np.int32, count=self.vertex_count)
            indptr = np.zeros(self.vertex_count + 1, dtype=np.int32)
            np.cumsum(degree, out=indptr[1:])
            indices = np.fromiter(
                (u for a in self.adjacency for u in a), dtype=np.int32, count=int(indptr[-1])
            )
            cached = (indptr, indices, degree)
            object.__setattr__(self, "_csr", cached)
        return cached

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    def __repr__(self) -> str:
        return f"Graph(name={self.name!r}, |V|={self.vertex_count}, |E|={self.edge_count})"


def neighbors(g: Graph, v: int) -> tuple[int, ...]:
    return g.neighbors(v)


def parse_dimacs(stream: TextIO | str, name: str = "") -> Graph:
    """Parse a DIMACS ``.col`` graph from a text stream (or a string).

    Duplicate and reversed-duplicate edges are merged with a warning. A
    header edge count that disagrees with the number of distinct edges is
    logged and otherwise ignored.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    n: int | None = None
    declared_m = 0
    seen: set[tuple[int, int]] = set()
    duplicates = 0
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise DimacsError("second 'p' line", lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"non-integer header field in {line!r}", lineno) from None
            if n < 0 or declared_m < 0:
                raise DimacsError("negative count in header", lineno)
        elif tag == "e":
            if n is None:
                raise DimacsError("edge line before 'p' line", lineno)
            if len(parts) != 3:
                raise DimacsError(f"malformed edge line {line!r}", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsError(f"non-integer vertex id in {line!r}", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(f"vertex id out of range 1..{n} in {line!r}", lineno)
            if u == v:
                raise DimacsError(f"self-loop on vertex {u}", lineno)
            key = (u - 1, v - 1) if u < v else (v - 1, u - 1)
            if key in seen:
                duplicates += 1
            else:
                seen.add(key)
        elif tag in ("n", "x", "d", "v"):
            # vertex weights and other optional DIMACS extensions carry no edges
            continue
        else:
            raise DimacsError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise DimacsError("missing 'p edge <n> <m>' line")
    if duplicates:
        log.warning("%s: merged %d duplicate edge lines", name or "graph", duplicates)
    if declared_m != len(seen):
        log.warning(
            "%s: header declares %d edges, found %d distinct", name or "graph", declared_m, len(seen)
        )
    return Graph.from_edges(n, seen, name)


def read_dimacs(path: str | Path) -> Graph:
    path = Path(path)
    with path.open() as fh:
        return parse_dimacs(fh, name=path.stem)


def serialize_dimacs(g: Graph, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p edge {g.vertex_count} {g.edge_count}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def write_dimacs(g: Graph, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(serialize_dimacs(g, comments))
