"""Hypergraph data structure, cutsize metrics and balance measures."""

import logging

logger = logging.getLogger("nigpart.hgraph")

UNASSIGNED = -1


class InvalidPin(ValueError):
    pass


class InvalidWeight(ValueError):
    pass


class IncompletePartition(ValueError):
    pass


class Hypergraph:
    """Vertex/net incidence stored in both directions.

    net_pins[n] is the sorted, duplicate-free list of vertices on net n;
    vertex_nets[v] is its exact transpose. Instances are immutable after
    construction and safe to share across threads.
    """

    def __init__(self, num_vertices, num_nets, net_pins, vertex_nets,
                 vertex_weights, net_costs, duplicates_collapsed=0):
        self.num_vertices = num_vertices
        self.num_nets = num_nets
        self.net_pins = net_pins
        self.vertex_nets = vertex_nets
        self.vertex_weights = vertex_weights
        self.net_costs = net_costs
        self.duplicates_collapsed = duplicates_collapsed

    @property
    def num_pins(self):
        return sum(len(p) for p in self.net_pins)

    def net_size(self, n):
        return len(self.net_pins[n])

    def degree(self, v):
        return len(self.vertex_nets[v])

    def total_vertex_weight(self):
        return sum(self.vertex_weights)

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.num_vertices == other.num_vertices
                and self.num_nets == other.num_nets
                and self.net_pins == other.net_pins
                and self.vertex_nets == other.vertex_nets
                and self.vertex_weights == other.vertex_weights
                and self.net_costs == other.net_costs)

    def __repr__(self):
        return (f"Hypergraph(V={self.num_vertices}, N={self.num_nets}, "
                f"P={self.num_pins})")

    def validate(self):
        """Check structural invariants; raises on violation."""
        for n, pins in enumerate(self.net_pins):
            prev = -1
            for v in pins:
                if not 0 <= v < self.num_vertices:
                    raise InvalidPin(f"net {n}: vertex {v} out of range")
                if v <= prev:
                    raise InvalidPin(f"net {n}: pins not sorted or duplicated")
                prev = v
        for v, nets in enumerate(self.vertex_nets):
            prev = -1
            for n in nets:
                if not 0 <= n < self.num_nets:
                    raise InvalidPin(f"vertex {v}: net {n} out of range")
                if n <= prev:
                    raise InvalidPin(f"vertex {v}: nets not sorted or duplicated")
                prev = n
        pin_set = {(n, v) for n, pins in enumerate(self.net_pins) for v in pins}
        dual_set = {(n, v) for v, nets in enumerate(self.vertex_nets) for n in nets}
        if pin_set != dual_set:
            raise InvalidPin("net_pins and vertex_nets are not transposes")
        if any(w < 0 for w in self.vertex_weights):
            raise InvalidWeight("negative vertex weight")
        if any(c < 0 for c in self.net_costs):
            raise InvalidWeight("negative net cost")


def build_hypergraph(num_vertices, num_nets, pins, vertex_weights=None,
                     net_costs=None):
    """Build a validated Hypergraph from a pin list of (net, vertex) pairs.

    Duplicate pins are collapsed; the number collapsed is recorded on the
    result and logged as a warning. Missing weights/costs default to 1.
    """
    if num_vertices < 0 or num_nets < 0:
        raise InvalidPin("negative vertex or net count")
    if vertex_weights is None:
        vertex_weights = [1] * num_vertices
    if net_costs is None:
        net_costs = [1] * num_nets
    if len(vertex_weights) != num_vertices:
        raise InvalidWeight("vertex_weights length mismatch")
    if len(net_costs) != num_nets:
        raise InvalidWeight("net_costs length mismatch")
    for w in vertex_weights:
        if w < 0:
            raise InvalidWeight(f"negative vertex weight {w}")
    for c in net_costs:
        if c < 0:
            raise InvalidWeight(f"negative net cost {c}")

    net_pins = [set() for _ in range(num_nets)]
    duplicates = 0
    for n, v in pins:
        if not 0 <= n < num_nets:
            raise InvalidPin(f"net id {n} out of range [0, {num_nets})")
        if not 0 <= v < num_vertices:
            raise InvalidPin(f"vertex id {v} out of range [0, {num_vertices})")
        if v in net_pins[n]:
            duplicates += 1
        else:
            net_pins[n].add(v)

    net_pins = [sorted(s) for s in net_pins]
    vertex_nets = [[] for _ in range(num_vertices)]
    for n, pin_list in enumerate(net_pins):
        for v in pin_list:
            vertex_nets[v].append(n)

    if duplicates:
        logger.warning("collapsed %d duplicate pins", duplicates)
    return Hypergraph(num_vertices, num_nets, net_pins, vertex_nets,
                      list(vertex_weights), list(net_costs), duplicates)


class PartitionVector:
    """Part id per vertex plus per-part weight bookkeeping."""

    def __init__(self, part_of, k, part_weights=None):
        self.part_of = part_of
        self.k = k
        if part_weights is None:
            part_weights = [0] * k
        self.part_weights = part_weights

    @classmethod
    def from_parts(cls, part_of, k, h):
        """Build with part_weights recomputed from the hypergraph weights."""
        pw = [0] * k
        for v, p in enumerate(part_of):
            if p != UNASSIGNED:
                pw[p] += h.vertex_weights[v]
        return cls(list(part_of), k, pw)

    def is_complete(self):
        return all(p != UNASSIGNED for p in self.part_of)


class CutReport:
    """Cutsize under both metrics plus per-part balance measures."""

    def __init__(self, cutnet_cost, connectivity_minus1_cost, lambda_of,
                 internal_nets_per_part, max_imbalance_vertex,
                 max_imbalance_internal_nets):
        self.cutnet_cost = cutnet_cost
        self.connectivity_minus1_cost = connectivity_minus1_cost
        self.lambda_of = lambda_of
        self.internal_nets_per_part = internal_nets_per_part
        self.max_imbalance_vertex = max_imbalance_vertex
        self.max_imbalance_internal_nets = max_imbalance_internal_nets

    def __repr__(self):
        return (f"CutReport(cutnet={self.cutnet_cost}, "
                f"conn-1={self.connectivity_minus1_cost}, "
                f"vimb={self.max_imbalance_vertex:.4f}, "
                f"nimb={self.max_imbalance_internal_nets:.4f})")


def _imbalance(values, k):
    # max over average, minus one; 0.0 for an all-zero vector
    total = sum(values)
    if total == 0 or k == 0:
        return 0.0
    return max(values) / (total / k) - 1.0


def evaluate(h, pv):
    """Score a complete partition: cutnet, connectivity-1, and balance.

    A net with pins in more than one part is cut. lambda(n) counts the
    distinct parts among the pins of n; empty nets have lambda 0 and
    contribute nothing to either metric.
    """
    if len(pv.part_of) != h.num_vertices:
        raise IncompletePartition(
            f"partition covers {len(pv.part_of)} vertices, hypergraph has "
            f"{h.num_vertices}")
    for v, p in enumerate(pv.part_of):
        if p == UNASSIGNED:
            raise IncompletePartition(f"vertex {v} unassigned")
        if not 0 <= p < pv.k:
            raise IncompletePartition(f"vertex {v}: part {p} out of range")

    k = pv.k
    lambda_of = [0] * h.num_nets
    cutnet = 0
    conn = 0
    internal = [0] * k
    for n, pins in enumerate(h.net_pins):
        if not pins:
            continue
        parts = {pv.part_of[v] for v in pins}
        lam = len(parts)
        lambda_of[n] = lam
        if lam > 1:
            cutnet += h.net_costs[n]
            conn += h.net_costs[n] * (lam - 1)
        else:
            internal[next(iter(parts))] += 1

    part_weights = [0] * k
    for v, p in enumerate(pv.part_of):
        part_weights[p] += h.vertex_weights[v]

    return CutReport(
        cutnet_cost=cutnet,
        connectivity_minus1_cost=conn,
        lambda_of=lambda_of,
        internal_nets_per_part=internal,
        max_imbalance_vertex=_imbalance(part_weights, k),
        max_imbalance_internal_nets=_imbalance(internal, k),
    )
