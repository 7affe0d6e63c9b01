import networkx as nx
import pytest

from sysgirth.constructors import (
    InfeasibleError, PreconditionError, SamplerConfig, TriesExhaustedError, build_girth_graph,
    cycle_stats, decompose_remainder, exact_girth_gadget, lps_like, moore_bound, n_min,
    pairing_model_sample, plant_unique_short_cycle, poisson_mean, sample_theta,
    theta_acceptance,
)
from sysgirth.graphs import girth, two_girth


def test_moore_bounds():
    assert [moore_bound(g) for g in range(3, 9)] == [5, 8, 17, 26, 53, 80]
    assert n_min(9) == 2 * moore_bound(9) + 1 == 323


@pytest.mark.parametrize("g", [3, 4, 5, 6, 7])
def test_exact_girth_gadget(g):
    graph, cert = exact_girth_gadget(g)
    cert.validate(graph)
    assert cert.girth == g and graph.is_regular(4) and graph.is_connected()
    if g == 3:
        assert graph.n == 5


@pytest.mark.parametrize("n,g", [(50, 3), (50, 5), (100, 6), (500, 7), (1000, 7)])
def test_build_girth_graph(n, g):
    graph, cert = build_girth_graph(n, g, seed=0)
    cert.validate(graph)
    assert graph.n == n and cert.girth == g
    assert nx.girth(nx.Graph(graph.edges)) == g


def test_build_is_deterministic():
    a = build_girth_graph(120, 5, seed=3).graph
    b = build_girth_graph(120, 5, seed=3).graph
    assert a.edges == b.edges


def test_build_girth_graph_infeasible():
    with pytest.raises(InfeasibleError) as info:
        build_girth_graph(12, 9)
    assert info.value.threshold >= moore_bound(9)


def test_lps_fillers_mode_uses_lps_terms():
    graph, cert = build_girth_graph(500, 5, lps_fillers=True)
    cert.validate(graph)
    assert cert.girth == 5 and "filler(120)" in cert.construction


@pytest.mark.parametrize("q,order,g", [(5, 120, 6), (7, 336, 8)])
def test_lps_like(q, order, g):
    graph, cert = lps_like(q)
    assert graph.n == order and cert.girth == g
    assert cert.extra["order"] == order


def test_lps_like_rejects_non_primes():
    with pytest.raises(ValueError):
        lps_like(4)
    with pytest.raises(ValueError):
        lps_like(3)


def test_decompose_remainder():
    assert decompose_remainder(121) == [121]
    assert decompose_remainder(242) == [121, 121]
    with pytest.raises(InfeasibleError):
        decompose_remainder(7)


def test_pairing_model_is_deterministic_and_4_regular():
    a = pairing_model_sample(SamplerConfig(300, 11))
    b = pairing_model_sample(SamplerConfig(300, 11))
    assert a.edges == b.edges and a.is_regular(4)
    one = pairing_model_sample(SamplerConfig(1, 5))
    assert one.degrees() == [4]


def test_poisson_means():
    assert poisson_mean(3) == 4.5 and poisson_mean(4) == 10.125
    assert poisson_mean(1) == 1.5 and poisson_mean(2) == 2.25


def test_cycle_stats_small_run():
    stats = cycle_stats(SamplerConfig(300, 1), 200, 4)
    for i in (1, 2, 3, 4):
        assert abs(stats.mean[i] - poisson_mean(i)) < 5 * stats.stderr[i] + 0.2
    with pytest.raises(ValueError):
        cycle_stats(SamplerConfig(10), 5, 9)


def test_sample_theta_small_k_l():
    graph, cert = sample_theta(100, 3, 4, SamplerConfig(100, 0))
    cert.validate(graph)
    assert cert.girth == 3 and cert.two_girth > 4
    assert cert.extra["tries"] <= 100_000


def test_sample_theta_exhaustion():
    with pytest.raises(TriesExhaustedError) as info:
        sample_theta(50, 4, 5, SamplerConfig(50, 0, max_tries=2000))
    assert info.value.acceptance == pytest.approx(theta_acceptance(4, 5))


def test_plant_unique_short_cycle():
    X = build_girth_graph(500, 8).graph
    graph, cert = plant_unique_short_cycle(X, 3, 4)
    cert.validate(graph)
    assert graph.n == 503 and cert.girth == 3
    assert two_girth(graph) > 4


def test_plant_preconditions():
    X = build_girth_graph(100, 5).graph
    with pytest.raises(PreconditionError):
        plant_unique_short_cycle(X, 3, 4)  # girth 5 is not above separation + 2
    with pytest.raises(PreconditionError):
        plant_unique_short_cycle(X, 2, 1)
    assert girth(X) == 5
