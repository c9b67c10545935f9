"""Move-weight policies, softmax playouts and the two adaptation rules.

This module is the readable reference: it works on :class:`ColoringState`
one move at a time. The searches run the compiled twins in ``_kernels``,
which consume the random draws in the same way, so a seeded reference
playout and a seeded kernel playout produce the same sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coloring import (
    ColoringState,
    Move,
    apply_move,
    encode_move,
    legal_moves,
    replay,
    score,
    select_vertex_dsatur,
)
from .graph import ContractError, Graph


@dataclass
class Policy:
    """Dense weight table indexed by move code ``vertex * k + color``.

    A fresh table is all zeros, i.e. uniform over whatever moves are legal.
    """

    weights: np.ndarray

    @classmethod
    def uniform(cls, vertex_count: int, k: int) -> "Policy":
        return cls(np.zeros(vertex_count * k, dtype=np.float64))

    def __getitem__(self, code: int) -> float:
        return float(self.weights[code])

    def copy(self) -> "Policy":
        return Policy(self.weights.copy())


@dataclass
class SearchParams:
    level: int = 7
    iterations: int = 100
    alpha: float = 1.0
    adapt_all: bool = True
    seed: int = 0
    timeout: float | None = None
    # deterministic alternative to the wall-clock budget
    max_playouts: int | None = None

    def __post_init__(self):
        if self.level < 0:
            raise ContractError(f"level must be >= 0, got {self.level}")
        if self.iterations < 1:
            raise ContractError(f"iterations must be >= 1, got {self.iterations}")
        if not self.alpha > 0:
            raise ContractError(f"alpha must be > 0, got {self.alpha}")


def as_rng(rng: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def softmax(policy: Policy, moves: Sequence[Move], k: int) -> list[float]:
    """Probabilities of ``moves`` under ``policy`` (max-shifted exponentials)."""
    w = [policy.weights[encode_move(m, k)] for m in moves]
    top = max(w)
    e = [math.exp(x - top) for x in w]
    z = sum(e)
    return [x / z for x in e]


def _sample(policy: Policy, moves: list[Move], k: int, u: float) -> Move:
    # same arithmetic as _kernels._sample
    w = [policy.weights[m.vertex * k + m.color] for m in moves]
    top = max(w)
    z = 0.0
    for x in w:
        z += math.exp(x - top)
    target = u * z
    acc = 0.0
    for m, x in zip(moves, w):
        acc += math.exp(x - top)
        if acc > target:
            return m
    return moves[-1]


def playout(
    g: Graph, k: int, policy: Policy, rng: np.random.Generator | int | None = None,
    state: ColoringState | None = None,
) -> tuple[int, list[Move]]:
    """Sample a complete coloring move by move; return ``(score, moves)``.

    Starts from ``state`` (a copy is made) or from the empty coloring. One
    uniform draw is taken per vertex up front, whatever the start.
    """
    rng = as_rng(rng)
    uniforms = rng.random(g.vertex_count)
    s = ColoringState(g, k) if state is None else state.copy()
    seq: list[Move] = []
    while not s.is_terminal:
        moves = legal_moves(s)
        m = _sample(policy, moves, k, uniforms[s.colored_count])
        apply_move(s, m)
        seq.append(m)
    return score(s), seq


def _adapt(policy: Policy, seq: Sequence[Move], alpha: float, g: Graph, k: int, all_colors: bool) -> Policy:
    replay(g, k, seq)
    new = policy.copy()
    s = ColoringState(g, k)
    for move in seq:
        if all_colors:
            v = select_vertex_dsatur(s)
            step_moves = [Move(v, c) for c in range(k)]
        else:
            step_moves = legal_moves(s)
        w = [policy.weights[m.vertex * k + m.color] for m in step_moves]
        top = max(w)
        e = [math.exp(x - top) for x in w]
        z = sum(e)
        new.weights[encode_move(move, k)] += alpha
        for m, x in zip(step_moves, e):
            new.weights[m.vertex * k + m.color] -= alpha * x / z
        apply_move(s, move)
    return new


def adapt(policy: Policy, seq: Sequence[Move], alpha: float, g: Graph, k: int) -> Policy:
    """Gradient step toward ``seq``, normalising over the legal moves of each step."""
    return _adapt(policy, seq, alpha, g, k, all_colors=False)


def adapt_all(policy: Policy, seq: Sequence[Move], alpha: float, g: Graph, k: int) -> Policy:
    """Like :func:`adapt`, but each step normalises over all ``k`` colors of its vertex."""
    return _adapt(policy, seq, alpha, g, k, all_colors=True)


def sequence_probability(policy: Policy, seq: Sequence[Move], g: Graph, k: int) -> float:
    """Probability that a playout under ``policy`` reproduces ``seq`` exactly."""
    s = ColoringState(g, k)
    p = 1.0
    for move in seq:
        moves = legal_moves(s)
        if move not in moves:
            return 0.0
        p *= softmax(policy, moves, k)[moves.index(move)]
        apply_move(s, move)
    return p
