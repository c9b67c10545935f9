"""Greedy DSatur coloring, used as the initial upper bound of the benchmark protocol."""

from __future__ import annotations

from .coloring import ColoringState, Move, apply_move, select_vertex_dsatur
from .graph import Graph


def greedy_dsatur(g: Graph) -> tuple[int, list[int]]:
    """Color ``g`` properly with no fixed color budget.

    Vertices come in DSatur order (same selection as the searches); each
    gets the lowest color unused by its colored neighbours. Returns
    ``(colors_used, assignment)``.
    """
    if g.vertex_count == 0:
        return 0, []
    # Δ + 1 colors can never run out, so the selection rule is unaffected by the cap
    s = ColoringState(g, g.max_degree + 1)
    while not s.is_terminal:
        v = select_vertex_dsatur(s)
        apply_move(s, Move(v, s.possible_colors(v)[0]))
    assignment = s.assignment.tolist()
    return max(assignment) + 1, assignment
