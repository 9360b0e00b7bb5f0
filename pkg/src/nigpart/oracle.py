"""Exhaustive reference solvers and random instance generators.

Everything here is deliberately independent of the partitioning engine:
costs are recomputed from first principles so these functions can serve
as oracles in tests and in the verify suites. Hard size caps keep the
2^n / 3^n scans at desk scale.
"""

import numpy as np

from .gpvs import SIDE_A, SIDE_B, SIDE_S, CsrGraph
from .hgraph import build_hypergraph
from .ingest import SparseMatrixPattern

MAX_BIPARTITION_VERTICES = 16
MAX_SEPARATOR_VERTICES = 12
MAX_NIG_NETS = 64


class TooLarge(ValueError):
    pass


class OracleResult:
    def __init__(self, best_cutnet=None, best_connectivity=None,
                 best_sep_weight=None, argmin_cutnet=None,
                 argmin_connectivity=None, argmin_separator=None):
        self.best_cutnet = best_cutnet
        self.best_connectivity = best_connectivity
        self.best_sep_weight = best_sep_weight
        self.argmin_cutnet = argmin_cutnet
        self.argmin_connectivity = argmin_connectivity
        self.argmin_separator = argmin_separator


def _canonical_bipartition(mask, n):
    # part 0 is the part containing vertex 0
    flip = mask & 1
    return [((mask >> v) & 1) ^ flip for v in range(n)]


def optimal_bipartition(h, epsilon):
    """Scan all 2^n bipartitions meeting balance; minimize both metrics.

    For two parts the cutnet and connectivity-1 metrics coincide, so a
    single scan serves both. If no bipartition meets the balance bound,
    the least-imbalanced ones are scanned instead.
    """
    n = h.num_vertices
    if n > MAX_BIPARTITION_VERTICES:
        raise TooLarge(f"{n} vertices exceeds cap {MAX_BIPARTITION_VERTICES}")
    size = 1 << n
    masks = np.arange(size, dtype=np.uint32)

    w1 = np.zeros(size, dtype=np.int64)
    for v, w in enumerate(h.vertex_weights):
        w1[(masks & np.uint32(1 << v)) != 0] += w
    total = sum(h.vertex_weights)
    w0 = total - w1

    cost = np.zeros(size, dtype=np.int64)
    for pins, c in zip(h.net_pins, h.net_costs):
        if len(pins) < 2:
            continue
        net_mask = np.uint32(sum(1 << v for v in pins))
        x = masks & net_mask
        cost += c * ((x != 0) & (x != net_mask))

    if total == 0:
        feasible = np.ones(size, dtype=bool)
    else:
        cap = (1.0 + epsilon) * total / 2.0
        feasible = (np.maximum(w0, w1) <= cap)
    if not feasible.any():
        util = np.maximum(w0, w1) / (total / 2.0)
        feasible = util <= util.min()

    best = cost[feasible].min()
    mask = int(masks[feasible & (cost == best)][0])
    witness = _canonical_bipartition(mask, n)
    return OracleResult(best_cutnet=int(best), best_connectivity=int(best),
                        argmin_cutnet=witness, argmin_connectivity=witness)


def optimal_separator(g, epsilon):
    """Scan all 3^n labelings with no A-B edge; minimize separator weight.

    Balance caps each side at (1+epsilon) times half the total vertex
    weight; pass epsilon=None to drop the balance filter entirely.
    The all-separator labeling is always feasible, so the scan never
    comes up empty.
    """
    n = g.num_vertices
    if n > MAX_SEPARATOR_VERTICES:
        raise TooLarge(f"{n} vertices exceeds cap {MAX_SEPARATOR_VERTICES}")
    size = 3 ** n
    codes = np.arange(size, dtype=np.int64)
    digit = [((codes // (3 ** v)) % 3).astype(np.uint8) for v in range(n)]

    valid = np.ones(size, dtype=bool)
    for v in range(n):
        for u in g.adj[v]:
            if u > v:
                valid &= ~(((digit[v] == SIDE_A) & (digit[u] == SIDE_B))
                           | ((digit[v] == SIDE_B) & (digit[u] == SIDE_A)))

    w_a = np.zeros(size, dtype=np.int64)
    w_b = np.zeros(size, dtype=np.int64)
    w_s = np.zeros(size, dtype=np.int64)
    for v, w in enumerate(g.vertex_weights):
        w_a[digit[v] == SIDE_A] += w
        w_b[digit[v] == SIDE_B] += w
        w_s[digit[v] == SIDE_S] += w

    feasible = valid
    total = g.total_weight()
    if epsilon is not None and total > 0:
        cap = (1.0 + epsilon) * total / 2.0
        feasible = valid & (w_a <= cap) & (w_b <= cap)
    if not feasible.any():
        raise AssertionError("all-separator labeling should be feasible")

    best = w_s[feasible].min()
    code = int(codes[feasible & (w_s == best)][0])
    side_of = [(code // (3 ** v)) % 3 for v in range(n)]
    return OracleResult(best_sep_weight=int(best), argmin_separator=side_of)


def pairwise_nig(h):
    """All-pairs pin intersection test; the reference NIG edge set."""
    if h.num_nets > MAX_NIG_NETS:
        raise TooLarge(f"{h.num_nets} nets exceeds cap {MAX_NIG_NETS}")
    pin_sets = [set(p) for p in h.net_pins]
    edges = []
    for i in range(h.num_nets):
        for j in range(i + 1, h.num_nets):
            if pin_sets[i] & pin_sets[j]:
                edges.append((i, j))
    return edges


# --- random instance generators for fuzz suites ---

def random_hypergraph(rng, max_vertices=10, max_nets=8, unit_weights=False,
                      max_net_size=5, allow_empty_nets=True):
    nv = rng.randint(1, max_vertices)
    nn = rng.randint(1, max_nets)
    pins = []
    for n in range(nn):
        lo = 0 if allow_empty_nets else 1
        size = rng.randint(lo, min(nv, max_net_size))
        for v in rng.sample(range(nv), size):
            pins.append((n, v))
    if unit_weights:
        weights = [1] * nv
        costs = [1] * nn
    else:
        weights = [rng.randint(1, 4) for _ in range(nv)]
        costs = [rng.randint(1, 3) for _ in range(nn)]
    return build_hypergraph(nv, nn, pins, weights, costs)


def random_pattern(rng, max_rows=8, max_cols=8, density=0.3):
    rows = rng.randint(1, max_rows)
    cols = rng.randint(1, max_cols)
    entries = [(r, c) for r in range(rows) for c in range(cols)
               if rng.random() < density]
    return SparseMatrixPattern(rows, cols, entries)


def random_connected_graph(rng, min_vertices=4, max_vertices=12,
                           unit_weights=True):
    """Random spanning tree plus extra edges; always connected."""
    n = rng.randint(min_vertices, max_vertices)
    edges = set()
    for v in range(1, n):
        edges.add((rng.randrange(v), v))
    extra = rng.randint(0, n)
    for _ in range(extra):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    weights = [1] * n if unit_weights else [rng.randint(1, 4) for _ in range(n)]
    return CsrGraph.from_edges(n, sorted(edges), weights)


def random_graph(rng, max_vertices=12, edge_prob=0.3, unit_weights=True):
    """Random graph, possibly disconnected."""
    n = rng.randint(1, max_vertices)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < edge_prob]
    weights = [1] * n if unit_weights else [rng.randint(1, 4) for _ in range(n)]
    return CsrGraph.from_edges(n, edges, weights)
