"""Recursive bipartitioning of the net intersection graph.

Each step finds a vertex separator on the subproblem's NIG. Under the
cutnet metric the separator nets are removed from both children; under
the connectivity metric they are split into both children. Leaves give
every surviving net a part; the hypergraph vertex partition is then
derived from the net placements, and a greedy post-processing pass can
trade nothing but slack for better balance.
"""

import enum
import logging
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field

from .gpvs import SIDE_A, SIDE_B, SIDE_S, CsrGraph, GpvsConfig, find_separator
from .hgraph import UNASSIGNED, PartitionVector, evaluate
from .nig import DEFAULT_SCALE, WeightScheme, assign_weights, build_nig

logger = logging.getLogger("nigpart.rbpart")

MAX_POSTPROCESS_PASSES = 10

_MASK64 = (1 << 64) - 1


class ConsistencyError(RuntimeError):
    pass


class Metric(enum.Enum):
    CUTNET = "cutnet"
    CONNECTIVITY = "conn"


@dataclass
class RbConfig:
    k: int = 2
    metric: Metric = Metric.CONNECTIVITY
    epsilon: float = 0.10
    scheme: WeightScheme = WeightScheme.SHARED
    postprocess: bool = True
    rng_seed: int = 0
    gpvs: GpvsConfig = field(default_factory=GpvsConfig)
    nig_scale: int = DEFAULT_SCALE
    # relax the cost guard in postprocessing by this relative amount
    allow_cut_degrade: float | None = None
    # drop hypergraph vertices of higher degree from clique generation
    drop_degree: int | None = None


@dataclass
class RbNode:
    """One bipartitioning step over parts [parts_lo, parts_hi)."""
    nets: list
    parts_lo: int
    parts_hi: int
    separator_cost: int = 0
    children: tuple = None
    leaf_part: int = None
    weight_a: int = 0
    weight_b: int = 0
    weight_s: int = 0
    num_nets: int = 0
    balance_met: bool = True


class NetAssignment:
    """Per original net, the set of leaf parts its placements reached."""

    def __init__(self, num_nets):
        self.part_sets_of_net = [set() for _ in range(num_nets)]

    def lambda_hat(self, n):
        return len(self.part_sets_of_net[n])


@dataclass
class RbStats:
    nig_vertices: int = 0
    nig_edges: int = 0
    nodes: list = field(default_factory=list)
    total_separator_cost: int = 0
    separator_nets: list = field(default_factory=list)
    free_vertices: int = 0
    timings_ms: dict = field(default_factory=dict)


def _mix_seed(seed, lo, hi):
    x = (seed ^ (lo * 0x9E3779B97F4A7C15) ^ ((hi + 1) * 0xBF58476D1CE4E5B9)) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _induced_subgraph(g, nets):
    """Induced CsrGraph of the NIG on the given (sorted) net list."""
    local = {net: i for i, net in enumerate(nets)}
    adj = []
    adj_w = []
    for net in nets:
        row = [local[u] for u in g.adj[net] if u in local]
        adj.append(row)
        adj_w.append([1] * len(row))
    weights = [g.vertex_weights[net] for net in nets]
    return CsrGraph(len(nets), adj, adj_w, weights)


def _ab_balance_met(wa, wb, ratio, epsilon):
    total = wa + wb
    if total <= 0:
        return True
    return max(wa / (ratio * total),
               wb / ((1.0 - ratio) * total)) <= 1.0 + epsilon


def _solve_node(node, g, h, cfg):
    """Run one separator step; returns (a_nets, b_nets, s_nets)."""
    kappa = node.parts_hi - node.parts_lo
    kappa_left = (kappa + 1) // 2
    ratio = kappa_left / kappa
    sub = _induced_subgraph(g, node.nets)
    gcfg = cfg.gpvs.derive(
        rng_seed=_mix_seed(cfg.rng_seed, node.parts_lo, node.parts_hi),
        target_ratio=ratio,
        epsilon=cfg.epsilon,
    )
    sep = find_separator(sub, gcfg)
    a_nets = []
    b_nets = []
    s_nets = []
    for i, net in enumerate(node.nets):
        side = sep.side_of[i]
        if side == SIDE_A:
            a_nets.append(net)
        elif side == SIDE_B:
            b_nets.append(net)
        else:
            s_nets.append(net)
    node.weight_a = sep.weight_a
    node.weight_b = sep.weight_b
    node.weight_s = sep.weight_s
    node.num_nets = len(node.nets)
    node.separator_cost = sum(h.net_costs[g.origin_net[n]] for n in s_nets)
    node.balance_met = _ab_balance_met(sep.weight_a, sep.weight_b, ratio,
                                       cfg.epsilon)
    return a_nets, b_nets, s_nets


def _make_children(node, a_nets, b_nets, s_nets, metric):
    kappa = node.parts_hi - node.parts_lo
    mid = node.parts_lo + (kappa + 1) // 2
    if metric is Metric.CONNECTIVITY:
        left_nets = sorted(a_nets + s_nets)
        right_nets = sorted(b_nets + s_nets)
    else:
        left_nets = a_nets
        right_nets = b_nets
    left = RbNode(left_nets, node.parts_lo, mid)
    right = RbNode(right_nets, mid, node.parts_hi)
    node.children = (left, right)
    return left, right


def _run_rb_tree(g, h, cfg, threads):
    """Process the RB tree; returns (assignment, node list, separator set)."""
    assignment = NetAssignment(h.num_nets)
    separator_nets = set()
    nodes = []

    root = RbNode(list(range(g.num_vertices)), 0, cfg.k)
    pending = [root]

    def finish(node, result):
        nodes.append(node)
        a_nets, b_nets, s_nets = result
        separator_nets.update(g.origin_net[n] for n in s_nets)
        left, right = _make_children(node, a_nets, b_nets, s_nets, cfg.metric)
        for child in (left, right):
            if child.parts_hi - child.parts_lo == 1:
                child.leaf_part = child.parts_lo
                child.num_nets = len(child.nets)
                nodes.append(child)
                for net in child.nets:
                    assignment.part_sets_of_net[g.origin_net[net]].add(
                        child.leaf_part)
            else:
                pending.append(child)

    if root.parts_hi - root.parts_lo == 1:
        root.leaf_part = 0
        root.num_nets = len(root.nets)
        nodes.append(root)
        for net in root.nets:
            assignment.part_sets_of_net[g.origin_net[net]].add(0)
        pending.clear()

    if threads <= 1:
        while pending:
            node = pending.pop()
            finish(node, _solve_node(node, g, h, cfg))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {}
            while pending or futures:
                while pending:
                    node = pending.pop()
                    futures[pool.submit(_solve_node, node, g, h, cfg)] = node
                done, _ = wait(futures, return_when=FIRST_COMPLETED)
                for fut in done:
                    finish(futures.pop(fut), fut.result())

    nodes.sort(key=lambda nd: (nd.parts_lo, nd.parts_hi))
    return assignment, nodes, separator_nets


def assign_vertices(h, assignment, cfg, forced_free=()):
    """Derive the vertex partition from net placements.

    A vertex whose placed nets pin it to one part goes there; the
    remainder (all nets removed, degree zero, or split everywhere) are
    placed heaviest first onto the lightest allowed part.
    """
    k = cfg.k
    part_sets = assignment.part_sets_of_net
    part_of = [UNASSIGNED] * h.num_vertices
    part_weights = [0] * k
    free = []
    forced = set(forced_free)

    for v in range(h.num_vertices):
        if v in forced:
            free.append((v, None))
            continue
        nets = h.vertex_nets[v]
        if not nets:
            free.append((v, None))
            continue
        if cfg.metric is Metric.CUTNET:
            placed = set()
            for n in nets:
                placed |= part_sets[n]
            if len(placed) > 1:
                raise ConsistencyError(
                    f"vertex {v}: surviving nets span parts {sorted(placed)}")
            if placed:
                p = next(iter(placed))
                part_of[v] = p
                part_weights[p] += h.vertex_weights[v]
            else:
                free.append((v, None))
        else:
            inter = None
            for n in nets:
                s = part_sets[n]
                inter = set(s) if inter is None else inter & s
            if not inter:
                raise ConsistencyError(
                    f"vertex {v}: net placements have empty intersection")
            if len(inter) == 1:
                p = next(iter(inter))
                part_of[v] = p
                part_weights[p] += h.vertex_weights[v]
            else:
                free.append((v, inter))

    free.sort(key=lambda t: (-h.vertex_weights[t[0]], t[0]))
    for v, candidates in free:
        pool = range(k) if candidates is None else sorted(candidates)
        best = min(pool, key=lambda p: (part_weights[p], p))
        part_of[v] = best
        part_weights[best] += h.vertex_weights[v]

    return PartitionVector(part_of, k, part_weights), len(free)


def postprocess_balance(h, pv, cfg):
    """Greedy balance improvement that never raises either cutsize.

    Boundary vertices are visited heaviest first; a vertex may move to
    the lightest part already touched by its nets when that strictly
    lowers the maximum part weight without raising the cutnet or
    connectivity-1 cost. With allow_cut_degrade set, any target part is
    considered and each cost may grow up to that relative factor above
    its value on entry.
    """
    k = pv.k
    if k <= 1:
        return pv
    part_of = list(pv.part_of)
    part_weights = list(pv.part_weights)
    w = h.vertex_weights
    costs = h.net_costs

    counts = []
    for pins in h.net_pins:
        d = {}
        for v in pins:
            p = part_of[v]
            d[p] = d.get(p, 0) + 1
        counts.append(d)

    cut0 = sum(c for d, c in zip(counts, costs) if len(d) > 1)
    conn0 = sum(c * (len(d) - 1) for d, c in zip(counts, costs) if d)
    cut = cut0
    conn = conn0
    degrade = cfg.allow_cut_degrade
    cut_limit = cut0 if degrade is None else int((1.0 + degrade) * cut0)
    conn_limit = conn0 if degrade is None else int((1.0 + degrade) * conn0)

    order = sorted(range(h.num_vertices), key=lambda v: (-w[v], v))
    for _ in range(MAX_POSTPROCESS_PASSES):
        moved = False
        for v in order:
            nets = h.vertex_nets[v]
            if not nets or all(len(counts[n]) == 1 for n in nets):
                continue
            p = part_of[v]
            if degrade is None:
                candidates = set()
                for n in nets:
                    candidates |= counts[n].keys()
                candidates.discard(p)
            else:
                candidates = set(range(k)) - {p}
            if not candidates:
                continue
            q = min(candidates, key=lambda c: (part_weights[c], c))

            old_max = max(part_weights)
            new_weights_pq = (part_weights[p] - w[v], part_weights[q] + w[v])
            new_max = max(max(pw for i, pw in enumerate(part_weights)
                              if i not in (p, q)) if k > 2 else 0,
                          *new_weights_pq)
            if new_max >= old_max:
                continue

            d_cut = 0
            d_conn = 0
            for n in nets:
                d = counts[n]
                lam = len(d)
                new_lam = lam - (1 if d.get(p) == 1 else 0) \
                    + (0 if q in d else 1)
                d_conn += costs[n] * (new_lam - lam)
                d_cut += costs[n] * ((1 if new_lam > 1 else 0)
                                     - (1 if lam > 1 else 0))
            if cut + d_cut > cut_limit or conn + d_conn > conn_limit:
                continue

            for n in nets:
                d = counts[n]
                if d[p] == 1:
                    del d[p]
                else:
                    d[p] -= 1
                d[q] = d.get(q, 0) + 1
            part_of[v] = q
            part_weights[p] -= w[v]
            part_weights[q] += w[v]
            cut += d_cut
            conn += d_conn
            moved = True
        if not moved:
            break

    return PartitionVector(part_of, k, part_weights)


def partition(h, cfg, threads=1):
    """Partition a hypergraph into cfg.k parts via NIG separators.

    Returns (PartitionVector, CutReport, RbStats). Deterministic for a
    fixed (hypergraph, config) pair regardless of the thread count.
    """
    if cfg.k < 1:
        raise ValueError(f"k must be >= 1, got {cfg.k}")
    if cfg.epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {cfg.epsilon}")
    stats = RbStats()

    if cfg.k == 1:
        pv = PartitionVector.from_parts([0] * h.num_vertices, 1, h)
        report = evaluate(h, pv)
        stats.timings_ms = {"nig_build": 0.0, "rb": 0.0, "postprocess": 0.0}
        return pv, report, stats

    t0 = time.perf_counter()
    g = build_nig(h, drop_degree=cfg.drop_degree)
    g = assign_weights(g, h, cfg.scheme, cfg.nig_scale)
    t1 = time.perf_counter()

    assignment, nodes, separator_nets = _run_rb_tree(g, h, cfg, threads)
    pv, num_free = assign_vertices(h, assignment, cfg,
                                   forced_free=g.dropped_vertices)
    t2 = time.perf_counter()

    if cfg.postprocess:
        pv = postprocess_balance(h, pv, cfg)
    t3 = time.perf_counter()
    report = evaluate(h, pv)

    stats.nig_vertices = g.num_vertices
    stats.nig_edges = g.num_edges
    stats.nodes = nodes
    stats.total_separator_cost = sum(
        nd.separator_cost for nd in nodes if nd.leaf_part is None)
    stats.separator_nets = sorted(separator_nets)
    stats.free_vertices = num_free
    stats.timings_ms = {
        "nig_build": (t1 - t0) * 1000.0,
        "rb": (t2 - t1) * 1000.0,
        "postprocess": (t3 - t2) * 1000.0,
    }
    return pv, report, stats
