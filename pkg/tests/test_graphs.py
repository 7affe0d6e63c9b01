import json

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sysgirth.constructors import SamplerConfig, pairing_model_sample
from sysgirth.graphs import (
    ForestError, GraphError, MultiGraph, OddDegreeError, circulant, complete_graph, girth,
    girth_with_witness, length_spectrum, load_graph, short_cycle_counts, shortest_other_cycle,
    splice, splice_girth_safe, two_factorize, two_girth,
)


def nx_graph(g: MultiGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def random_simple(n, seed):
    h = nx.random_regular_graph(4, n, seed=seed)
    return MultiGraph(n, tuple(h.edges()))


def test_edges_are_normalized_and_serialized():
    g = MultiGraph(3, ((2, 0), (1, 1), (0, 2)))
    assert g.edges == ((0, 2), (1, 1), (0, 2))
    assert g.degrees() == [2, 2, 2]
    assert MultiGraph.from_json(g.to_json()).edges == g.edges
    assert MultiGraph.from_edgelist("0 2\n1 1\n0 2\n").multiset() == g.multiset()


def test_load_graph_formats(tmp_path):
    g = complete_graph(5)
    (tmp_path / "k5.json").write_text(g.to_json())
    (tmp_path / "k5.txt").write_text("\n".join(f"{u} {v}" for u, v in g.edges))
    assert load_graph(tmp_path / "k5.json").multiset() == g.multiset()
    assert load_graph(tmp_path / "k5.txt").multiset() == g.multiset()
    (tmp_path / "bad.json").write_text(json.dumps({"n": 2, "edges": [[0, 5]]}))
    with pytest.raises(ValueError):
        load_graph(tmp_path / "bad.json")


def test_loops_and_parallel_edges_are_short_cycles():
    g = MultiGraph(1, ((0, 0), (0, 0)))
    assert girth(g) == 1
    h = MultiGraph(2, ((0, 1), (0, 1), (0, 0), (1, 1)))
    assert girth(h) == 1
    p = MultiGraph(2, ((0, 1), (0, 1), (0, 1), (0, 1)))
    assert girth(p) == 2
    assert short_cycle_counts(p)[2] == 6  # C(4, 2) pairs of parallel edges


def test_forest_has_no_girth():
    with pytest.raises(ForestError):
        girth(MultiGraph(3, ((0, 1), (1, 2))))


@pytest.mark.parametrize("seed", range(25))
def test_girth_matches_networkx(seed):
    g = random_simple(40 + 4 * seed, seed)
    L, c = girth_with_witness(g)
    c.validate(g)
    assert L == nx.girth(nx_graph(g))


def test_circulant_girths():
    # abelian Cayley graphs always contain the 4-cycle a b a^-1 b^-1
    assert girth(circulant(26, [1, 4])) == 4
    assert girth(circulant(500, [1, 21])) == 4
    assert girth(complete_graph(5)) == 3


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 120), st.integers(0, 2**32 - 1))
def test_two_factorization_of_pairing_multigraphs(n, seed):
    g = pairing_model_sample(SamplerConfig(n, seed))
    tf = two_factorize(g)
    tf.validate()
    assert len(tf.factor1) == len(tf.factor2) == n


def test_two_factorization_rejects_odd_degree():
    with pytest.raises(OddDegreeError):
        two_factorize(MultiGraph(4, ((0, 1), (1, 2), (2, 3))))
    with pytest.raises(GraphError):
        two_factorize(circulant(7, [1]))  # 2-regular: only 4-regular input is supported


@pytest.mark.parametrize("seed", range(6))
def test_spectrum_matches_trace_counts(seed):
    g = pairing_model_sample(SamplerConfig(60, seed))
    sc = short_cycle_counts(g)
    ls = length_spectrum(g, 4)
    assert {i: ls.counts[i] for i in range(1, 5)} == sc


@pytest.mark.parametrize("seed", range(4))
def test_spectrum_counts_match_networkx_simple_cycles(seed):
    g = random_simple(24, 100 + seed)
    ls = length_spectrum(g, 7)
    h = nx_graph(g)
    counts = {}
    for cyc in nx.simple_cycles(h, length_bound=7):
        counts[len(cyc)] = counts.get(len(cyc), 0) + 1
    for L in range(3, 8):
        assert ls.counts.get(L, 0) == counts.get(L, 0)


def test_spectrum_cutoff_limit():
    with pytest.raises(ValueError):
        length_spectrum(complete_graph(5), 40)


def test_two_girth_and_other_cycle():
    k5 = complete_graph(5)
    assert two_girth(k5) == 4
    # one triangle glued into a long cycle structure: unique shortest cycle
    g = circulant(30, [1, 2])
    L, c = girth_with_witness(g)
    assert L == 3
    assert shortest_other_cycle(g, c) == 3
    assert two_girth(g) == 4


def test_splice_vertex_count_and_girth():
    a, b = complete_graph(5), circulant(13, [1, 5])
    s = splice(a, 0, b, 0)
    assert s.n == a.n + b.n + 1 and s.is_regular(4) and s.is_connected()
    safe = splice_girth_safe(circulant(13, [1, 5]), circulant(17, [1, 4]))
    assert girth(safe) == min(girth(circulant(13, [1, 5])), girth(circulant(17, [1, 4])))
    with pytest.raises(GraphError):
        splice(a, 99, b, 0)


def test_components_and_relabel():
    g = MultiGraph(6, ((0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)))
    assert len(g.components()) == 2 and not g.is_connected()
    r = g.relabel(10, 20)
    assert r.n == 20 and (10, 11) in r.edges


def test_short_cycle_counts_trace_formula():
    # C4 = (tr A^4 - 28 n) / 8 for simple 4-regular graphs
    g = random_simple(50, 3)
    A = nx.to_numpy_array(nx_graph(g), dtype=np.int64)
    tr4 = int(np.trace(np.linalg.matrix_power(A, 4)))
    assert short_cycle_counts(g)[4] == (tr4 - 28 * g.n) // 8
