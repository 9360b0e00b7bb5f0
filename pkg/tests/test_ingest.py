from random import Random

import pytest

from nigpart.hgraph import build_hypergraph
from nigpart.ingest import (
    FormatError,
    SparseMatrixPattern,
    column_net_model,
    read_hypergraph_text,
    read_matrix_market,
    read_partition_file,
    row_net_model,
    write_hypergraph_text,
    write_matrix_market,
)
from nigpart.oracle import random_hypergraph, random_pattern


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_read_general_coordinate(tmp_path):
    path = write(tmp_path, "a.mtx", "\n".join([
        "%%MatrixMarket matrix coordinate real general",
        "% a comment",
        "2 3 4",
        "1 1 0.5",
        "1 2 1.0",
        "2 2 2.0",
        "2 3 3.0",
    ]))
    m = read_matrix_market(path)
    assert m.rows == 2 and m.cols == 3
    assert m.entries == [(0, 0), (0, 1), (1, 1), (1, 2)]


def test_symmetric_expansion(tmp_path):
    path = write(tmp_path, "s.mtx", "\n".join([
        "%%MatrixMarket matrix coordinate pattern symmetric",
        "3 3 2",
        "2 1",
        "3 2",
    ]))
    m = read_matrix_market(path)
    assert m.entries == [(0, 1), (1, 0), (1, 2), (2, 1)]


def test_out_of_bounds_entry(tmp_path):
    path = write(tmp_path, "b.mtx", "\n".join([
        "%%MatrixMarket matrix coordinate pattern general",
        "2 3 1",
        "5 1",
    ]))
    with pytest.raises(FormatError):
        read_matrix_market(path)


def test_malformed_header(tmp_path):
    path = write(tmp_path, "h.mtx", "not a matrix market file\n1 1 0\n")
    with pytest.raises(FormatError):
        read_matrix_market(path)
    path = write(tmp_path, "h2.mtx",
                 "%%MatrixMarket matrix array real general\n2 2\n")
    with pytest.raises(FormatError):
        read_matrix_market(path)


def test_entry_count_mismatch(tmp_path):
    path = write(tmp_path, "c.mtx", "\n".join([
        "%%MatrixMarket matrix coordinate pattern general",
        "2 2 3",
        "1 1",
        "2 2",
    ]))
    with pytest.raises(FormatError):
        read_matrix_market(path)


def test_matrix_market_round_trip(tmp_path):
    rng = Random(3)
    for i in range(20):
        m = random_pattern(rng)
        path = str(tmp_path / f"m{i}.mtx")
        write_matrix_market(m, path)
        assert read_matrix_market(path) == m


def test_column_net_model_small():
    # A = [[1,1,0],[0,1,1]]
    m = SparseMatrixPattern(2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)])
    h = column_net_model(m)
    assert h.num_vertices == 2
    assert h.num_nets == 3
    assert h.net_pins == [[0], [0, 1], [1]]
    assert h.vertex_weights == [2, 2]
    assert h.net_costs == [1, 1, 1]


def test_column_net_model_identity():
    m = SparseMatrixPattern(3, 3, [(0, 0), (1, 1), (2, 2)])
    h = column_net_model(m)
    assert h.net_pins == [[0], [1], [2]]
    assert h.vertex_weights == [1, 1, 1]


def test_column_net_pin_count_matches_nnz():
    rng = Random(9)
    for _ in range(30):
        m = random_pattern(rng, max_rows=6, max_cols=5)
        h = column_net_model(m)
        # independent per-column scan
        for j in range(m.cols):
            col = sorted(r for r, c in m.entries if c == j)
            assert h.net_pins[j] == col
        assert h.num_pins == m.nnz


def test_row_net_model_small():
    m = SparseMatrixPattern(2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)])
    h = row_net_model(m)
    assert h.num_vertices == 3
    assert h.num_nets == 2
    assert h.net_pins == [[0, 1], [1, 2]]


def test_row_net_equals_colnet_of_transpose():
    rng = Random(13)
    for _ in range(30):
        m = random_pattern(rng, max_rows=6, max_cols=5)
        assert row_net_model(m) == column_net_model(m.transpose())


def test_hypergraph_text_round_trip(h0, tmp_path):
    path = str(tmp_path / "h0.hg")
    write_hypergraph_text(h0, path)
    assert read_hypergraph_text(path) == h0


def test_hypergraph_text_fuzz_round_trip(tmp_path):
    rng = Random(17)
    path = str(tmp_path / "fuzz.hg")
    for _ in range(100):
        h = random_hypergraph(rng)
        write_hypergraph_text(h, path)
        assert read_hypergraph_text(path) == h


def test_pin_count_mismatch(tmp_path):
    path = write(tmp_path, "bad.hg", "0 3 2 5 0\n0 1\n1 2\n")
    with pytest.raises(FormatError):
        read_hypergraph_text(path)


def test_one_based_and_flags(tmp_path):
    # costs and weights present, 1-based pins
    path = write(tmp_path, "w.hg", "\n".join([
        "% comment line",
        "1 3 2 4 3",
        "5 1 2",
        "2 2 3",
        "7",
        "8",
        "9",
    ]))
    h = read_hypergraph_text(path)
    assert h.net_pins == [[0, 1], [1, 2]]
    assert h.net_costs == [5, 2]
    assert h.vertex_weights == [7, 8, 9]


def test_empty_net_round_trip(tmp_path):
    h = build_hypergraph(2, 3, [(0, 0), (2, 1)], [1, 1], [2, 1, 1])
    path = str(tmp_path / "e.hg")
    write_hypergraph_text(h, path)
    h2 = read_hypergraph_text(path)
    assert h2 == h
    assert h2.net_pins[1] == []


def test_partition_file(tmp_path):
    path = write(tmp_path, "p.part", "0\n1\n0\n1\n")
    assert read_partition_file(path, 4, 2) == [0, 1, 0, 1]
    with pytest.raises(FormatError):
        read_partition_file(path, 5, 2)
    with pytest.raises(FormatError):
        read_partition_file(path, 4, 1)
