"""Compiled inner loops for playouts and policy updates.

These mirror ``coloring`` and ``policy`` move-for-move (same vertex
selection, same color order, same sampling arithmetic) on flat arrays so
that the nested searches can run millions of playouts. State layout:

    assign[n]      color per vertex, -1 when uncolored
    counts[n * k]  colored neighbours of v holding color c, at v * k + c
    sat[n]         number of nonzero counts in row v
    seq[n]         move codes played so far (vertex * k + color)
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def select_vertex(assign, sat, degree):
    best = -1
    best_sat = -1
    best_deg = -1
    for v in range(assign.shape[0]):
        if assign[v] >= 0:
            continue
        s = sat[v]
        if s > best_sat or (s == best_sat and degree[v] > best_deg):
            best = v
            best_sat = s
            best_deg = degree[v]
    return best


@njit(cache=True)
def candidate_colors(counts, k, v, out):
    """Write the forward-checked colors of ``v`` into ``out``; return how many."""
    m = 0
    base = v * k
    for c in range(k):
        if counts[base + c] == 0:
            out[m] = c
            m += 1
    if m == 0:
        for c in range(k):
            out[c] = c
        m = k
    return m


@njit(cache=True)
def play(indptr, indices, k, assign, counts, sat, v, c):
    """Color ``v`` with ``c``; return the number of new monochromatic edges."""
    added = counts[v * k + c]
    assign[v] = c
    for p in range(indptr[v], indptr[v + 1]):
        u = indices[p]
        idx = u * k + c
        counts[idx] += 1
        if counts[idx] == 1:
            sat[u] += 1
    return added


@njit(cache=True)
def _sample(weights, k, v, colors, m, u):
    wmax = -np.inf
    for i in range(m):
        w = weights[v * k + colors[i]]
        if w > wmax:
            wmax = w
    z = 0.0
    for i in range(m):
        z += math.exp(weights[v * k + colors[i]] - wmax)
    target = u * z
    acc = 0.0
    for i in range(m):
        acc += math.exp(weights[v * k + colors[i]] - wmax)
        if acc > target:
            return colors[i]
    return colors[m - 1]


@njit(cache=True)
def playout(indptr, indices, degree, k, weights, assign, counts, sat, seq, start, conflicts, uniforms):
    """Complete the state from step ``start``; return the final conflict count.

    ``uniforms[i]`` is the draw used at step ``i``. The state arrays are
    modified in place.
    """
    n = assign.shape[0]
    colors = np.empty(k, dtype=np.int64)
    for step in range(start, n):
        v = select_vertex(assign, sat, degree)
        m = candidate_colors(counts, k, v, colors)
        c = _sample(weights, k, v, colors, m, uniforms[step])
        conflicts += play(indptr, indices, k, assign, counts, sat, v, c)
        seq[step] = v * k + c
    return conflicts


@njit(cache=True)
def adapt(indptr, indices, degree, k, weights, seq, alpha, all_colors):
    """Return a new weight table moved toward ``seq``.

    Probabilities are read from ``weights`` (the table before the update)
    and the deltas accumulate in the copy. With ``all_colors`` the
    normalisation runs over every color of the step's vertex, pruned or not.
    """
    n = degree.shape[0]
    out = weights.copy()
    assign = np.full(n, -1, dtype=np.int64)
    counts = np.zeros(n * k, dtype=np.int64)
    sat = np.zeros(n, dtype=np.int64)
    colors = np.empty(k, dtype=np.int64)
    probs = np.empty(k, dtype=np.float64)
    for step in range(seq.shape[0]):
        code = seq[step]
        v = code // k
        c = code - v * k
        if all_colors:
            m = k
            for i in range(k):
                colors[i] = i
        else:
            m = candidate_colors(counts, k, v, colors)
        wmax = -np.inf
        for i in range(m):
            w = weights[v * k + colors[i]]
            if w > wmax:
                wmax = w
        z = 0.0
        for i in range(m):
            probs[i] = math.exp(weights[v * k + colors[i]] - wmax)
            z += probs[i]
        out[code] += alpha
        for i in range(m):
            out[v * k + colors[i]] -= alpha * probs[i] / z
        play(indptr, indices, k, assign, counts, sat, v, c)
    return out


@njit(cache=True)
def check_sequence(indptr, indices, degree, k, seq):
    """Index of the first move that is not legal on replay, or -1."""
    n = degree.shape[0]
    assign = np.full(n, -1, dtype=np.int64)
    counts = np.zeros(n * k, dtype=np.int64)
    sat = np.zeros(n, dtype=np.int64)
    colors = np.empty(k, dtype=np.int64)
    for step in range(seq.shape[0]):
        code = seq[step]
        v = code // k
        c = code - v * k
        if v != select_vertex(assign, sat, degree):
            return step
        m = candidate_colors(counts, k, v, colors)
        ok = False
        for i in range(m):
            if colors[i] == c:
                ok = True
        if not ok:
            return step
        play(indptr, indices, k, assign, counts, sat, v, c)
    return -1
