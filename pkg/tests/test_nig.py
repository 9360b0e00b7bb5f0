from random import Random

import numpy as np
import pytest

from nigpart.hgraph import build_hypergraph
from nigpart.ingest import column_net_model
from nigpart.nig import (
    CliqueBlowup,
    ModelMismatch,
    WeightScheme,
    assign_weights,
    build_nig,
)
from nigpart.oracle import pairwise_nig, random_hypergraph, random_pattern


def edge_list(g):
    return [(a, b) for a in range(g.num_vertices) for b in g.adj[a] if a < b]


def test_h0_is_a_path(h0):
    g = build_nig(h0)
    assert g.num_vertices == 3
    assert edge_list(g) == [(0, 1), (1, 2)]


def test_star_hypergraph_makes_triangle():
    # nets n0={v0,v1}, n1={v0,v2}, n2={v0,v3}: v0's clique is a triangle
    h = build_hypergraph(4, 3, [(0, 0), (0, 1), (1, 0), (1, 2), (2, 0), (2, 3)])
    g = build_nig(h)
    assert edge_list(g) == [(0, 1), (0, 2), (1, 2)]


def test_colnet_nig_equals_ata_pattern():
    rng = Random(29)
    for _ in range(30):
        m = random_pattern(rng, max_rows=7, max_cols=7)
        h = column_net_model(m)
        g = build_nig(h)
        a = np.zeros((m.rows, m.cols), dtype=bool)
        for r, c in m.entries:
            a[r, c] = True
        ata = a.T @ a
        expected = [(i, j) for i in range(m.cols) for j in range(m.cols)
                    if i < j and ata[i, j]]
        assert edge_list(g) == expected


def test_matches_pairwise_oracle():
    rng = Random(37)
    for _ in range(100):
        h = random_hypergraph(rng, max_vertices=12, max_nets=10)
        assert edge_list(build_nig(h)) == pairwise_nig(h)


def test_zero_degree_nets_are_isolated():
    h = build_hypergraph(2, 3, [(0, 0), (0, 1)])
    g = build_nig(h)
    assert g.adj == [[], [], []]
    assert g.adj[1] == []


def test_order_independence(h0):
    pins = [(n, v) for n, ps in enumerate(h0.net_pins) for v in ps]
    rng = Random(5)
    g0 = build_nig(h0)
    for _ in range(10):
        rng.shuffle(pins)
        h = build_hypergraph(4, 3, pins)
        g = build_nig(h)
        assert g.adj == g0.adj


def test_clique_blowup_guard():
    h = build_hypergraph(2, 40, [(n, 0) for n in range(40)])
    with pytest.raises(CliqueBlowup):
        build_nig(h, edge_cap=100)


def test_drop_degree():
    h = build_hypergraph(3, 3, [(0, 0), (1, 0), (2, 0), (0, 1), (1, 2)])
    g = build_nig(h, drop_degree=2)
    # vertex 0 (degree 3) is dropped, so its clique edges disappear
    assert edge_list(g) == []
    assert g.dropped_vertices == [0]


def test_unit_weights(h0):
    g = assign_weights(build_nig(h0), h0, WeightScheme.UNIT)
    assert g.vertex_weights == [1, 1, 1]


def test_shared_weights_h0(h0):
    g = assign_weights(build_nig(h0), h0, WeightScheme.SHARED, scale=2)
    # v0: 2/1 to n0; v1: 2/2 split n0,n1; v2 split n1,n2; v3: 2/1 to n2
    assert g.vertex_weights == [3, 2, 3]


def test_shared_weight_conservation():
    rng = Random(41)
    for _ in range(50):
        h = random_hypergraph(rng, max_vertices=12, max_nets=10)
        scale = 10 ** 6
        g = assign_weights(build_nig(h), h, WeightScheme.SHARED, scale)
        covered = sum(h.vertex_weights[v] for v in range(h.num_vertices)
                      if h.degree(v) > 0)
        assert abs(sum(g.vertex_weights) - scale * covered) <= h.num_nets


def test_model_mismatch():
    h = build_hypergraph(2, 2, [(0, 0), (1, 1)])
    other = build_hypergraph(2, 3, [(0, 0)])
    g = build_nig(h)
    with pytest.raises(ModelMismatch):
        assign_weights(g, other, WeightScheme.SHARED)
