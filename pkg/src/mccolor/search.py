"""Nested searches over the coloring move model: NRPA and NMCS.

Both drivers stop as soon as a playout scores ``|E|`` (a proper coloring)
or when the budget runs out. The budget is a wall-clock timeout, a playout
count, or both; it is checked before every playout but the first, so a
search always returns at least one complete assignment.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels as K
from .coloring import Move, decode_move
from .graph import ContractError, Graph
from .policy import SearchParams, as_rng


@dataclass
class SearchResult:
    best_score: int
    best_sequence: list[Move]
    solved: bool
    playout_count: int
    elapsed: float
    k: int
    # (playout index, score) each time the best score improved
    history: list[tuple[int, int]] = field(default_factory=list, repr=False)

    @property
    def assignment(self) -> list[int]:
        colors = [-1] * len(self.best_sequence)
        for v, c in self.best_sequence:
            colors[v] = c
        return colors


class _Stop(Exception):
    pass


class _State:
    __slots__ = ("assign", "counts", "sat", "seq", "colored", "conflicts")

    def __init__(self, n: int, k: int):
        self.assign = np.full(n, -1, dtype=np.int64)
        self.counts = np.zeros(n * k, dtype=np.int64)
        self.sat = np.zeros(n, dtype=np.int64)
        self.seq = np.zeros(n, dtype=np.int64)
        self.colored = 0
        self.conflicts = 0

    def copy(self) -> "_State":
        other = object.__new__(_State)
        other.assign = self.assign.copy()
        other.counts = self.counts.copy()
        other.sat = self.sat.copy()
        other.seq = self.seq.copy()
        other.colored = self.colored
        other.conflicts = self.conflicts
        return other


class _Runner:
    """Shared playout engine: budget, random draws and the global incumbent."""

    def __init__(
        self, g: Graph, k: int, seed, timeout: float | None, max_playouts: int | None, ties_replace: bool = False
    ):
        if k < 1:
            raise ContractError(f"k must be >= 1, got {k}")
        self.g = g
        self.k = k
        self.n = g.vertex_count
        self.edge_count = g.edge_count
        indptr, indices, degree = g.csr()
        self.indptr = indptr.astype(np.int64)
        self.indices = indices.astype(np.int64)
        self.degree = degree.astype(np.int64)
        self.rng = as_rng(seed)
        self.start = time.perf_counter()
        self.deadline = None if timeout is None else self.start + timeout
        self.max_playouts = max_playouts
        self.playouts = 0
        self.best_score = -1
        self.best_seq = np.zeros(0, dtype=np.int64)
        self.history: list[tuple[int, int]] = []
        self.solved = False
        self.ties_replace = ties_replace

    def out_of_budget(self) -> bool:
        if self.max_playouts is not None and self.playouts >= self.max_playouts:
            return True
        return self.deadline is not None and time.perf_counter() >= self.deadline

    def playout(self, state: _State, weights: np.ndarray) -> tuple[int, np.ndarray]:
        """Finish a copy of ``state`` under ``weights``; return ``(score, codes)``."""
        if self.playouts and self.out_of_budget():
            raise _Stop
        s = state.copy()
        uniforms = self.rng.random(self.n)
        conflicts = K.playout(
            self.indptr, self.indices, self.degree, self.k, weights,
            s.assign, s.counts, s.sat, s.seq, s.colored, s.conflicts, uniforms,
        )
        self.playouts += 1
        result = self.edge_count - conflicts
        if result > self.best_score:
            self.history.append((self.playouts, result))
        if result > self.best_score or (self.ties_replace and result == self.best_score):
            self.best_score = result
            self.best_seq = s.seq
        if result == self.edge_count:
            self.solved = True
            raise _Stop
        return result, s.seq

    def play(self, state: _State, v: int, c: int) -> None:
        state.conflicts += K.play(self.indptr, self.indices, self.k, state.assign, state.counts, state.sat, v, c)
        state.seq[state.colored] = v * self.k + c
        state.colored += 1

    def result(self) -> SearchResult:
        return SearchResult(
            best_score=self.best_score,
            best_sequence=[decode_move(c, self.k) for c in self.best_seq.tolist()],
            solved=self.solved,
            playout_count=self.playouts,
            elapsed=time.perf_counter() - self.start,
            k=self.k,
            history=self.history,
        )


AdaptHook = Callable[[int, np.ndarray, np.ndarray, np.ndarray], None]


def nrpa(g: Graph, k: int, params: SearchParams | None = None, on_adapt: AdaptHook | None = None) -> SearchResult:
    """Nested Rollout Policy Adaptation from a uniform policy.

    ``on_adapt(level, before, after, codes)`` is called after every policy
    update, ``codes`` being the sequence adapted toward. Instrumentation only.

    Ties replace the incumbent at every level, so the nested calls return
    the latest playout with the highest score; the result reports that same
    sequence even when the budget cuts the recursion short.
    """
    params = params or SearchParams()
    run = _Runner(g, k, params.seed, params.timeout, params.max_playouts, ties_replace=True)
    empty = _State(run.n, k)

    def level(lvl: int, weights: np.ndarray) -> tuple[int, np.ndarray]:
        if lvl == 0:
            return run.playout(empty, weights)
        best_score = -1
        best_seq = None
        for _ in range(params.iterations):
            # adapt never writes into its input, so the child works on its own tables
            result, seq = level(lvl - 1, weights)
            if result >= best_score:
                best_score = result
                best_seq = seq
            new = K.adapt(run.indptr, run.indices, run.degree, k, weights, best_seq, params.alpha, params.adapt_all)
            if on_adapt is not None:
                on_adapt(lvl, weights, new, best_seq)
            weights = new
        return best_score, best_seq

    try:
        level(params.level, np.zeros(run.n * k, dtype=np.float64))
    except _Stop:
        pass
    return run.result()


def _nmcs_level(run: _Runner, state: _State, lvl: int, uniform: np.ndarray) -> tuple[int, np.ndarray]:
    if lvl == 0 or state.colored == run.n:
        return run.playout(state, uniform)
    state = state.copy()
    best_score = -1
    best_seq = None
    colors = np.empty(run.k, dtype=np.int64)
    while state.colored < run.n:
        v = K.select_vertex(state.assign, state.sat, run.degree)
        for c in colors[: K.candidate_colors(state.counts, run.k, v, colors)].tolist():
            child = state.copy()
            run.play(child, v, c)
            result, seq = _nmcs_level(run, child, lvl - 1, uniform)
            if result > best_score:
                best_score = result
                best_seq = seq
        v, c = divmod(int(best_seq[state.colored]), run.k)
        run.play(state, v, c)
    return best_score, best_seq


def nmcs(
    g: Graph, k: int, level: int, timeout: float | None = None, seed=0, max_playouts: int | None = None
) -> SearchResult:
    """Nested Monte Carlo Search at a fixed level with uniform playouts."""
    if level < 0:
        raise ContractError(f"level must be >= 0, got {level}")
    run = _Runner(g, k, seed, timeout, max_playouts)
    try:
        _nmcs_level(run, _State(run.n, k), level, np.zeros(run.n * k))
    except _Stop:
        pass
    return run.result()


def nmcs_increasing(
    g: Graph,
    k: int,
    timeout: float | None = None,
    seed=0,
    max_playouts: int | None = None,
    max_level: int | None = None,
) -> SearchResult:
    """NMCS at levels 1, 2, 3, ... until solved or out of budget.

    One random stream, playout budget and incumbent are shared by all
    levels, so the result is the best over every level tried.
    """
    if timeout is None and max_playouts is None and max_level is None:
        raise ContractError("nmcs_increasing needs a timeout, a playout budget or a max level")
    run = _Runner(g, k, seed, timeout, max_playouts)
    uniform = np.zeros(run.n * k)
    lvl = 1
    try:
        while max_level is None or lvl <= max_level:
            _nmcs_level(run, _State(run.n, k), lvl, uniform)
            if run.out_of_budget():
                break
            lvl += 1
    except _Stop:
        pass
    return run.result()
