from random import Random

import pytest

from nigpart.gpvs import SIDE_S, CsrGraph
from nigpart.hgraph import PartitionVector, build_hypergraph, evaluate
from nigpart.oracle import (
    TooLarge,
    optimal_bipartition,
    optimal_separator,
    pairwise_nig,
    random_hypergraph,
)


def test_h0_optimal_bipartition(h0):
    res = optimal_bipartition(h0, 0.1)
    assert res.best_cutnet == 1
    assert res.best_connectivity == 1
    assert res.argmin_cutnet == [0, 0, 1, 1]
    r = evaluate(h0, PartitionVector.from_parts(res.argmin_cutnet, 2, h0))
    assert r.cutnet_cost == 1


def test_disjoint_halves_bipartition():
    h = build_hypergraph(4, 2, [(0, 0), (0, 1), (1, 2), (1, 3)])
    res = optimal_bipartition(h, 0.1)
    assert res.best_cutnet == 0


def test_single_net_always_cut():
    h = build_hypergraph(4, 1, [(0, v) for v in range(4)])
    res = optimal_bipartition(h, 0.1)
    assert res.best_cutnet == 1


def test_bipartition_witness_is_balanced():
    rng = Random(3)
    for _ in range(20):
        h = random_hypergraph(rng, max_vertices=8, max_nets=6,
                              unit_weights=True)
        res = optimal_bipartition(h, 0.5)
        pv = PartitionVector.from_parts(res.argmin_cutnet, 2, h)
        assert evaluate(h, pv).cutnet_cost == res.best_cutnet


def test_bipartition_too_large():
    h = build_hypergraph(17, 1, [])
    with pytest.raises(TooLarge):
        optimal_bipartition(h, 0.1)


def path3():
    return CsrGraph.from_edges(3, [(0, 1), (1, 2)])


def test_path_separator():
    res = optimal_separator(path3(), 0.1)
    assert res.best_sep_weight == 1
    assert res.argmin_separator.count(SIDE_S) == 1


def test_k4_separator():
    k4 = CsrGraph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3),
                                 (2, 3)])
    res = optimal_separator(k4, 0.1)
    assert res.best_sep_weight == 2


def test_edgeless_separator():
    g = CsrGraph(4, [[], [], [], []], [[], [], [], []], [1, 1, 1, 1])
    res = optimal_separator(g, 0.1)
    assert res.best_sep_weight == 0


def test_unconstrained_separator_is_trivial():
    # without a balance filter, everything-in-one-side is optimal
    res = optimal_separator(path3(), None)
    assert res.best_sep_weight == 0


def test_separator_too_large():
    g = CsrGraph(13, [[] for _ in range(13)], [[] for _ in range(13)],
                 [1] * 13)
    with pytest.raises(TooLarge):
        optimal_separator(g, 0.1)


def test_pairwise_nig_h0(h0):
    assert pairwise_nig(h0) == [(0, 1), (1, 2)]


def test_pairwise_nig_disjoint():
    h = build_hypergraph(4, 2, [(0, 0), (0, 1), (1, 2), (1, 3)])
    assert pairwise_nig(h) == []


def test_pairwise_too_large():
    h = build_hypergraph(1, 65, [])
    with pytest.raises(TooLarge):
        pairwise_nig(h)
