"""Multilevel graph partitioning by vertex separator.

Finds (A, B, S) with no edge joining A to B, minimizing the vertex
weight of S subject to A/B balance. Pipeline: heavy-edge-matching
coarsening, BFS-grown initial separators on the coarsest graph, then
FM-style refinement during uncoarsening. All randomness flows from the
configured seed; ties break toward the smaller vertex id, so identical
inputs give identical output.
"""

import heapq
import logging
from collections import deque
from dataclasses import dataclass, replace
from random import Random

logger = logging.getLogger("nigpart.gpvs")

SIDE_A = 0
SIDE_B = 1
SIDE_S = 2


class InvalidSeparator(ValueError):
    pass


class CsrGraph:
    """Symmetric weighted graph: sorted adjacency plus parallel edge weights."""

    def __init__(self, num_vertices, adj, adj_w, vertex_weights):
        self.num_vertices = num_vertices
        self.adj = adj
        self.adj_w = adj_w
        self.vertex_weights = vertex_weights

    @classmethod
    def from_edges(cls, num_vertices, edges, vertex_weights=None,
                   edge_weights=None):
        """Build from undirected (u, v) pairs; duplicates are rejected."""
        if vertex_weights is None:
            vertex_weights = [1] * num_vertices
        adj = [[] for _ in range(num_vertices)]
        adj_w = [[] for _ in range(num_vertices)]
        for idx, (u, v) in enumerate(edges):
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            w = 1 if edge_weights is None else edge_weights[idx]
            adj[u].append((v, w))
            adj[v].append((u, w))
        for v in range(num_vertices):
            adj[v].sort()
            if any(adj[v][i][0] == adj[v][i + 1][0]
                   for i in range(len(adj[v]) - 1)):
                raise ValueError(f"duplicate edge at vertex {v}")
            adj_w[v] = [w for _, w in adj[v]]
            adj[v] = [u for u, _ in adj[v]]
        return cls(num_vertices, adj, adj_w, list(vertex_weights))

    @property
    def num_edges(self):
        return sum(len(a) for a in self.adj) // 2

    def total_weight(self):
        return sum(self.vertex_weights)

    def __repr__(self):
        return f"CsrGraph(V={self.num_vertices}, E={self.num_edges})"


@dataclass
class GpvsConfig:
    epsilon: float = 0.10
    coarsen_until: int = 100
    num_initial_tries: int = 4
    max_refine_passes: int = 10
    rng_seed: int = 0
    target_ratio: float = 0.5
    # verify separation and weight conservation after every stage
    check_invariants: bool = False

    def derive(self, **kw):
        return replace(self, **kw)


@dataclass
class Separator:
    """Three-way labeling with cached per-label weight sums."""
    side_of: list
    weight_a: int = 0
    weight_b: int = 0
    weight_s: int = 0

    @classmethod
    def from_side_of(cls, g, side_of):
        w = [0, 0, 0]
        for v, s in enumerate(side_of):
            w[s] += g.vertex_weights[v]
        return cls(list(side_of), w[SIDE_A], w[SIDE_B], w[SIDE_S])

    def copy(self):
        return Separator(list(self.side_of), self.weight_a, self.weight_b,
                         self.weight_s)

    def separation_holds(self, g):
        """True when no edge joins an A-vertex to a B-vertex."""
        side = self.side_of
        for v in range(g.num_vertices):
            sv = side[v]
            if sv == SIDE_S:
                continue
            other = SIDE_B if sv == SIDE_A else SIDE_A
            for u in g.adj[v]:
                if side[u] == other:
                    return False
        return True

    def weights_match(self, g):
        w = [0, 0, 0]
        for v, s in enumerate(self.side_of):
            w[s] += g.vertex_weights[v]
        return (w[SIDE_A], w[SIDE_B], w[SIDE_S]) == (
            self.weight_a, self.weight_b, self.weight_s)


def _utilization(weight_a, weight_b, total, cfg):
    """Max side load relative to its target share of the whole graph."""
    if total <= 0:
        return 0.0
    r = cfg.target_ratio
    return max(weight_a / (r * total), weight_b / ((1.0 - r) * total))


def balance_met(sep, total, cfg):
    return _utilization(sep.weight_a, sep.weight_b, total, cfg) <= 1.0 + cfg.epsilon


def _assert_stage(g, sep, total, stage):
    if not sep.separation_holds(g):
        raise InvalidSeparator(f"separation property violated after {stage}")
    if sep.weight_a + sep.weight_b + sep.weight_s != total:
        raise InvalidSeparator(f"weight conservation violated after {stage}")
    if not sep.weights_match(g):
        raise InvalidSeparator(f"cached weights stale after {stage}")


def coarsen(g, cfg, rng=None):
    """Heavy-edge-matching coarsening.

    Returns [(graph, fine_to_coarse), ...] where the first entry is the
    input with a None map. Stops at coarsen_until vertices or when a
    level shrinks the graph by less than 10%.
    """
    if rng is None:
        rng = Random(cfg.rng_seed)
    levels = [(g, None)]
    cur = g
    while cur.num_vertices > cfg.coarsen_until:
        cmap, nc = _heavy_edge_match(cur, rng)
        if nc > 0.9 * cur.num_vertices:
            break
        cur = _contract(cur, cmap, nc)
        levels.append((cur, cmap))
    return levels


def _heavy_edge_match(g, rng):
    n = g.num_vertices
    order = list(range(n))
    rng.shuffle(order)
    mate = [-1] * n
    for v in order:
        if mate[v] != -1:
            continue
        best = -1
        best_w = 0
        for u, w in zip(g.adj[v], g.adj_w[v]):
            if mate[u] == -1 and (w > best_w or (w == best_w and
                                                 (best == -1 or u < best))):
                best = u
                best_w = w
        mate[v] = best if best != -1 else v
        if best != -1:
            mate[best] = v
    cmap = [-1] * n
    nc = 0
    for v in range(n):
        if cmap[v] == -1:
            cmap[v] = nc
            cmap[mate[v]] = nc
            nc += 1
    return cmap, nc


def _contract(g, cmap, nc):
    weights = [0] * nc
    for v in range(g.num_vertices):
        weights[cmap[v]] += g.vertex_weights[v]
    rows = [{} for _ in range(nc)]
    for v in range(g.num_vertices):
        cv = cmap[v]
        row = rows[cv]
        for u, w in zip(g.adj[v], g.adj_w[v]):
            cu = cmap[u]
            if cu != cv:
                row[cu] = row.get(cu, 0) + w
    adj = []
    adj_w = []
    for row in rows:
        keys = sorted(row)
        adj.append(keys)
        adj_w.append([row[u] for u in keys])
    return CsrGraph(nc, adj, adj_w, weights)


def initial_separator(g, cfg, rng=None):
    """Grow BFS regions into edge bisections and cover their boundaries.

    Each try grows from a random start until the region holds about
    target_ratio of the total weight; every cut edge then donates its
    lighter endpoint (ties: the region side) to the separator. The best
    balanced try wins, falling back to the least-imbalanced one.
    """
    if rng is None:
        rng = Random(cfg.rng_seed)
    n = g.num_vertices
    if n == 0:
        return Separator([], 0, 0, 0)
    total = g.total_weight()
    target = cfg.target_ratio * total

    best = None
    best_key = None
    best_feasible = False
    for _ in range(max(1, cfg.num_initial_tries)):
        start = rng.randrange(n)
        side_of = _grow_region(g, start, target)
        _cover_boundary(g, side_of)
        sep = Separator.from_side_of(g, side_of)
        util = _utilization(sep.weight_a, sep.weight_b, total, cfg)
        feasible = util <= 1.0 + cfg.epsilon
        key = (sep.weight_s, util) if feasible else (util, sep.weight_s)
        if best is None or (feasible and not best_feasible) or (
                feasible == best_feasible and key < best_key):
            best = sep
            best_key = key
            best_feasible = feasible
    return best


def _grow_region(g, start, target):
    n = g.num_vertices
    side_of = [SIDE_B] * n
    seen = [False] * n
    queue = deque([start])
    seen[start] = True
    weight = 0
    next_unseen = 0
    while weight < target:
        if not queue:
            # component exhausted; continue from the smallest unseen vertex
            while next_unseen < n and seen[next_unseen]:
                next_unseen += 1
            if next_unseen == n:
                break
            seen[next_unseen] = True
            queue.append(next_unseen)
        v = queue.popleft()
        side_of[v] = SIDE_A
        weight += g.vertex_weights[v]
        for u in g.adj[v]:
            if not seen[u]:
                seen[u] = True
                queue.append(u)
    return side_of


def _cover_boundary(g, side_of):
    w = g.vertex_weights
    cut_deg = [0] * g.num_vertices
    for v in range(g.num_vertices):
        if side_of[v] != SIDE_A:
            continue
        for u in g.adj[v]:
            if side_of[u] == SIDE_B:
                cut_deg[v] += 1
                cut_deg[u] += 1
    # each still-uncovered cut edge donates one endpoint: the lighter one,
    # ties toward covering more cut edges, then toward side A
    for v in range(g.num_vertices):
        if side_of[v] != SIDE_A:
            continue
        for u in g.adj[v]:
            if side_of[u] != SIDE_B:
                continue
            if w[u] < w[v] or (w[u] == w[v] and cut_deg[u] > cut_deg[v]):
                side_of[u] = SIDE_S
            else:
                side_of[v] = SIDE_S
                break


def refine(g, sep, cfg):
    """FM-style separator refinement with per-pass rollback.

    Moving a separator vertex to a side pulls its neighbors on the
    opposite side into the separator; the gain of the move is the
    vertex weight minus the pulled weight. Each pass commits moves
    greedily (balance-violating ones are skipped), then rolls back to
    the best prefix, so the separator weight never increases.
    """
    if not sep.separation_holds(g):
        raise InvalidSeparator("input separator violates the separation property")
    sep = sep.copy()
    total = g.total_weight()
    for _ in range(max(0, cfg.max_refine_passes)):
        improved = _refine_pass(g, sep, total, cfg)
        if not improved:
            break
    return sep


def _candidate(g, sep, v, cfg):
    """Direction (lighter side by target-relative load) and its gain."""
    r = cfg.target_ratio
    if sep.weight_a / r <= sep.weight_b / (1.0 - r):
        direction = SIDE_A
    else:
        direction = SIDE_B
    other = SIDE_B if direction == SIDE_A else SIDE_A
    side = sep.side_of
    w = g.vertex_weights
    gain = w[v]
    for u in g.adj[v]:
        if side[u] == other:
            gain -= w[u]
    return direction, gain


def _refine_pass(g, sep, total, cfg):
    side = sep.side_of
    w = g.vertex_weights
    limit = 1.0 + cfg.epsilon

    heap = []
    for v in range(g.num_vertices):
        if side[v] == SIDE_S:
            _, gain = _candidate(g, sep, v, cfg)
            heap.append((-gain, v))
    heapq.heapify(heap)

    locked = [False] * g.num_vertices
    log = []
    start_key = (sep.weight_s,
                 _utilization(sep.weight_a, sep.weight_b, total, cfg))
    best_key = start_key
    best_idx = 0

    while heap:
        neg_gain, v = heapq.heappop(heap)
        if side[v] != SIDE_S or locked[v]:
            continue
        direction, gain = _candidate(g, sep, v, cfg)
        if gain != -neg_gain:
            heapq.heappush(heap, (-gain, v))
            continue
        other = SIDE_B if direction == SIDE_A else SIDE_A
        pulled = [u for u in g.adj[v] if side[u] == other]
        pulled_w = sum(w[u] for u in pulled)
        if direction == SIDE_A:
            new_a, new_b = sep.weight_a + w[v], sep.weight_b - pulled_w
        else:
            new_a, new_b = sep.weight_a - pulled_w, sep.weight_b + w[v]
        cur_util = _utilization(sep.weight_a, sep.weight_b, total, cfg)
        new_util = _utilization(new_a, new_b, total, cfg)
        if new_util > max(cur_util, limit):
            locked[v] = True
            continue

        side[v] = direction
        for u in pulled:
            side[u] = SIDE_S
        sep.weight_a = new_a
        sep.weight_b = new_b
        sep.weight_s += pulled_w - w[v]
        locked[v] = True
        log.append((v, direction, pulled))
        for u in pulled:
            if not locked[u]:
                _, g_u = _candidate(g, sep, u, cfg)
                heapq.heappush(heap, (-g_u, u))

        key = (sep.weight_s, new_util)
        if key < best_key:
            best_key = key
            best_idx = len(log)

    for v, direction, pulled in reversed(log[best_idx:]):
        other = SIDE_B if direction == SIDE_A else SIDE_A
        pulled_w = sum(w[u] for u in pulled)
        for u in pulled:
            side[u] = other
        side[v] = SIDE_S
        if direction == SIDE_A:
            sep.weight_a -= w[v]
            sep.weight_b += pulled_w
        else:
            sep.weight_b -= w[v]
            sep.weight_a += pulled_w
        sep.weight_s += w[v] - pulled_w

    return best_key < start_key


def find_separator(g, cfg):
    """Coarsen, seed a separator, then project and refine level by level."""
    rng = Random(cfg.rng_seed)
    total = g.total_weight()
    levels = coarsen(g, cfg, rng)
    coarsest = levels[-1][0]
    sep = initial_separator(coarsest, cfg, rng)
    if cfg.check_invariants:
        _assert_stage(coarsest, sep, total, "initial_separator")
    sep = refine(coarsest, sep, cfg)
    if cfg.check_invariants:
        _assert_stage(coarsest, sep, total, "coarsest refine")

    for i in range(len(levels) - 1, 0, -1):
        fine_g = levels[i - 1][0]
        cmap = levels[i][1]
        side_of = [sep.side_of[cmap[v]] for v in range(fine_g.num_vertices)]
        sep = Separator.from_side_of(fine_g, side_of)
        if cfg.check_invariants:
            _assert_stage(fine_g, sep, total, f"projection to level {i - 1}")
        sep = refine(fine_g, sep, cfg)
        if cfg.check_invariants:
            _assert_stage(fine_g, sep, total, f"refine at level {i - 1}")

    if not balance_met(sep, total, cfg):
        logger.info("separator imbalance %.3f exceeds epsilon %.3f",
                    _utilization(sep.weight_a, sep.weight_b, total, cfg) - 1.0,
                    cfg.epsilon)
    return sep
