import collections
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from conftest import make_random_graph, small_graphs
from mccolor import _kernels as K
from mccolor.coloring import ColoringState, Move, apply_move, legal_moves, verify_coloring
from mccolor.graph import ContractError, Graph
from mccolor.policy import (
    Policy,
    SearchParams,
    adapt,
    adapt_all,
    playout,
    sequence_probability,
    softmax,
)

TRIANGLE_SEQ = [Move(0, 0), Move(1, 1), Move(2, 2)]


def test_triangle_playouts_always_proper(k3):
    for seed in range(50):
        result, seq = playout(k3, 3, Policy.uniform(3, 3), seed)
        assert result == 3
        assert [m.vertex for m in seq] == [0, 1, 2]


def test_degenerate_graphs():
    edgeless = Graph.from_edges(4, [])
    result, seq = playout(edgeless, 2, Policy.uniform(4, 2), 0)
    assert result == 0 and len(seq) == 4
    single = Graph.from_edges(1, [])
    assert playout(single, 1, Policy.uniform(1, 1), 0) == (0, [Move(0, 0)])


def test_sequence_probability_uniform_triangle(k3):
    # 3 choices, then 2, then 1
    assert sequence_probability(Policy.uniform(3, 3), TRIANGLE_SEQ, k3, 3) == pytest.approx(1 / 6)
    assert sequence_probability(Policy.uniform(3, 3), [Move(0, 0), Move(1, 0)], k3, 3) == 0.0


def _enumerate(g, k):
    out = []

    def rec(s, prefix):
        if s.is_terminal:
            out.append(tuple(prefix))
            return
        for m in legal_moves(s):
            rec(apply_move(s.copy(), m), prefix + [m])

    rec(ColoringState(g, k), [])
    return out


def test_sequence_probabilities_sum_to_one():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)])
    pol = Policy(np.random.default_rng(3).normal(size=15))
    total = sum(sequence_probability(pol, list(s), g, 3) for s in _enumerate(g, 3))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_adapt_triangle_by_hand(k3):
    a = 0.7
    new = adapt(Policy.uniform(3, 3), TRIANGLE_SEQ, a, k3, 3).weights.reshape(3, 3)
    # step 1: three legal colors; step 2: two (color 0 is taken); step 3: forced
    expected = np.array([
        [2 * a / 3, -a / 3, -a / 3],
        [0.0, a / 2, -a / 2],
        [0.0, 0.0, 0.0],
    ])
    np.testing.assert_allclose(new, expected, atol=1e-15)


def test_adapt_all_triangle_by_hand(k3):
    a = 1.0
    new = adapt_all(Policy.uniform(3, 3), TRIANGLE_SEQ, a, k3, 3).weights.reshape(3, 3)
    expected = np.full((3, 3), -a / 3)
    np.fill_diagonal(expected, 2 * a / 3)
    np.testing.assert_allclose(new, expected, atol=1e-15)


def test_adapt_reads_pre_update_weights():
    # two vertices, no edges, k=2: both steps see the original table
    g = Graph.from_edges(2, [])
    pol = Policy(np.array([math.log(3.0), 0.0, 0.0, 0.0]))
    new = adapt(pol, [Move(0, 0), Move(1, 1)], 1.0, g, 2).weights
    np.testing.assert_allclose(new, [math.log(3.0) + 0.25, -0.25, -0.5, 0.5], atol=1e-15)


def test_adapt_does_not_mutate_input(k3):
    pol = Policy.uniform(3, 3)
    adapt(pol, TRIANGLE_SEQ, 1.0, k3, 3)
    adapt_all(pol, TRIANGLE_SEQ, 1.0, k3, 3)
    assert not pol.weights.any()


def test_adapt_rejects_foreign_sequence(k3):
    with pytest.raises(ContractError):
        adapt(Policy.uniform(3, 3), [Move(2, 0)], 1.0, k3, 3)


def test_search_params_validation():
    assert SearchParams().level == 7
    for bad in ({"level": -1}, {"iterations": 0}, {"alpha": 0.0}):
        with pytest.raises(ContractError):
            SearchParams(**bad)


def test_first_move_uniform_chi_square():
    g = make_random_graph(8, 0.4, 1)
    counts = collections.Counter(playout(g, 4, Policy.uniform(8, 4), s)[1][0].color for s in range(4000))
    assert chisquare([counts[c] for c in range(4)]).pvalue > 1e-3


def test_weighted_sequences_follow_softmax(k3):
    pol = Policy(np.random.default_rng(11).normal(size=9))
    rng = np.random.default_rng(5)
    n = 6000
    seen = collections.Counter(tuple(playout(k3, 3, pol, rng)[1]) for _ in range(n))
    seqs = _enumerate(k3, 3)
    expected = [n * sequence_probability(pol, list(s), k3, 3) for s in seqs]
    assert chisquare([seen[s] for s in seqs], expected).pvalue > 1e-3


def test_softmax_matches_closed_form():
    pol = Policy(np.array([0.0, math.log(2.0), math.log(5.0)]))
    probs = softmax(pol, [Move(0, 0), Move(0, 1), Move(0, 2)], 3)
    np.testing.assert_allclose(probs, [1 / 8, 2 / 8, 5 / 8])


def test_playout_is_seeded(k3):
    g = make_random_graph(20, 0.3, 4)
    pol = Policy(np.random.default_rng(0).normal(size=60))
    assert playout(g, 3, pol, 42) == playout(g, 3, pol, 42)


def _kernel_playout(g, k, weights, seed):
    indptr, indices, degree = (a.astype(np.int64) for a in g.csr())
    n = g.vertex_count
    assign = np.full(n, -1, dtype=np.int64)
    counts = np.zeros(n * k, dtype=np.int64)
    sat = np.zeros(n, dtype=np.int64)
    seq = np.zeros(n, dtype=np.int64)
    uniforms = np.random.default_rng(seed).random(n)
    conflicts = K.playout(indptr, indices, degree, k, weights, assign, counts, sat, seq, 0, 0, uniforms)
    return g.edge_count - conflicts, [Move(*divmod(int(c), k)) for c in seq]


def _kernel_adapt(g, k, weights, seq, alpha, all_colors):
    indptr, indices, degree = (a.astype(np.int64) for a in g.csr())
    codes = np.array([m.vertex * k + m.color for m in seq], dtype=np.int64)
    return K.adapt(indptr, indices, degree, k, weights, codes, alpha, all_colors)


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_vertices=14), st.integers(1, 5), st.integers(0, 2**32 - 1), st.booleans())
def test_reference_and_kernel_agree(g, k, seed, all_colors):
    weights = np.random.default_rng(seed).normal(scale=2.0, size=g.vertex_count * k)
    ref = playout(g, k, Policy(weights.copy()), seed)
    assert _kernel_playout(g, k, weights.copy(), seed) == ref
    seq = ref[1]
    rule = adapt_all if all_colors else adapt
    expect = rule(Policy(weights.copy()), seq, 1.0, g, k).weights
    np.testing.assert_allclose(_kernel_adapt(g, k, weights, seq, 1.0, all_colors), expect, atol=1e-12, rtol=0)


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_vertices=10), st.integers(1, 4), st.integers(0, 2**32 - 1),
       st.floats(0.05, 3.0), st.booleans())
def test_adapt_invariants(g, k, seed, alpha, all_colors):
    rng = np.random.default_rng(seed)
    pol = Policy(rng.normal(size=g.vertex_count * k))
    _, seq = playout(g, k, pol, rng)
    rule = adapt_all if all_colors else adapt
    new = rule(pol, seq, alpha, g, k)
    # every vertex is one step, and each step's deltas cancel
    delta = (new.weights - pol.weights).reshape(g.vertex_count, k)
    np.testing.assert_allclose(delta.sum(axis=1), 0.0, atol=1e-9)
    # the adapted sequence never becomes less likely
    before = sequence_probability(pol, seq, g, k)
    after = sequence_probability(new, seq, g, k)
    assert after >= before * (1 - 1e-12)
    if not all_colors:
        for v in range(g.vertex_count):
            step = [m for m in seq if m.vertex == v][0]
            # only the colors of the legal set at that step moved
            s = ColoringState(g, k)
            for m in seq[: seq.index(step)]:
                apply_move(s, m)
            legal = {m.color for m in legal_moves(s)}
            for c in range(k):
                if c not in legal:
                    assert delta[v, c] == 0.0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_adapt_rules_coincide_without_edges(n, k, seed):
    g = Graph.from_edges(n, [])
    rng = np.random.default_rng(seed)
    pol = Policy(rng.normal(size=n * k))
    _, seq = playout(g, k, pol, rng)
    np.testing.assert_allclose(adapt(pol, seq, 1.0, g, k).weights, adapt_all(pol, seq, 1.0, g, k).weights)


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_vertices=12), st.integers(0, 2**32 - 1))
def test_playout_with_enough_colors_is_proper(g, seed):
    k = g.max_degree + 1
    result, seq = playout(g, k, Policy.uniform(g.vertex_count, k), seed)
    colors = [0] * g.vertex_count
    for v, c in seq:
        colors[v] = c
    assert result == g.edge_count
    assert verify_coloring(g, colors).proper
