"""Net intersection graph construction and vertex weighting.

Every hypergraph vertex induces a clique over the nets that connect it;
the NIG is the union of those cliques. Nets sharing at least one pin are
therefore adjacent, and a vertex separator on this graph is a net
separator for the hypergraph.
"""

import enum
import logging

logger = logging.getLogger("nigpart.nig")

DEFAULT_EDGE_CAP = 2 ** 31
DEFAULT_SCALE = 1024


class CliqueBlowup(RuntimeError):
    pass


class ModelMismatch(ValueError):
    pass


class WeightScheme(enum.Enum):
    """How NIG vertex weights approximate hypergraph balance.

    UNIT gives every net weight 1, so balancing NIG parts balances
    internal-net counts. SHARED splits each hypergraph vertex weight
    evenly across its nets (fixed-point scaled), approximating vertex
    weight balance.
    """
    UNIT = "unit"
    SHARED = "shared"


class NigGraph:
    """Undirected graph on nets: sorted duplicate-free adjacency lists."""

    def __init__(self, num_vertices, adj, vertex_weights, origin_net,
                 dropped_vertices=()):
        self.num_vertices = num_vertices
        self.adj = adj
        self.vertex_weights = vertex_weights
        self.origin_net = origin_net
        # hypergraph vertices excluded from clique generation (degree cap)
        self.dropped_vertices = list(dropped_vertices)

    @property
    def num_edges(self):
        return sum(len(a) for a in self.adj) // 2

    def __repr__(self):
        return f"NigGraph(V={self.num_vertices}, E={self.num_edges})"


def build_nig(h, edge_cap=DEFAULT_EDGE_CAP, drop_degree=None):
    """Build the net intersection graph of a hypergraph.

    Uses a timestamped marker array to merge each vertex's net clique
    into per-net neighbor lists without hashing. Aborts with
    CliqueBlowup when the pre-dedup edge bound (sum of squared vertex
    degrees) exceeds edge_cap. Vertices of degree > drop_degree, when
    set, are skipped entirely; they must later be placed as free
    vertices since their nets need not be adjacent.
    """
    bound = 0
    for nets in h.vertex_nets:
        bound += len(nets) * len(nets)
        if bound > edge_cap:
            raise CliqueBlowup(
                f"predicted edge bound exceeds cap {edge_cap}")

    nn = h.num_nets
    dropped = []
    skip = [False] * h.num_vertices
    if drop_degree is not None:
        for v, nets in enumerate(h.vertex_nets):
            if len(nets) > drop_degree:
                dropped.append(v)
                skip[v] = True

    mark = [-1] * nn
    adj = []
    for a in range(nn):
        row = []
        for v in h.net_pins[a]:
            if skip[v]:
                continue
            for b in h.vertex_nets[v]:
                if b != a and mark[b] != a:
                    mark[b] = a
                    row.append(b)
        row.sort()
        adj.append(row)

    if dropped:
        logger.info("dropped %d high-degree vertices from clique generation",
                    len(dropped))
    return NigGraph(nn, adj, [1] * nn, list(range(nn)), dropped)


def assign_weights(g, h, scheme, scale=DEFAULT_SCALE):
    """Return a NigGraph sharing g's adjacency with weights per scheme.

    SHARED sets weight(n) = round(scale * sum over pins v of
    w(v)/deg(v)); each vertex's weight is split evenly among its nets,
    so the total is conserved up to one rounding unit per net.
    """
    if scheme is WeightScheme.UNIT:
        weights = [1] * g.num_vertices
    elif scheme is WeightScheme.SHARED:
        if g.num_vertices != h.num_nets:
            raise ModelMismatch(
                f"graph has {g.num_vertices} vertices, hypergraph has "
                f"{h.num_nets} nets")
        if scale < 1:
            raise ValueError(f"scale must be >= 1, got {scale}")
        share = [0.0] * h.num_vertices
        for v in range(h.num_vertices):
            d = h.degree(v)
            if d > 0:
                share[v] = h.vertex_weights[v] / d
        weights = []
        for n in range(g.num_vertices):
            total = 0.0
            for v in h.net_pins[g.origin_net[n]]:
                total += share[v]
            weights.append(round(scale * total))
    else:
        raise ValueError(f"unknown weight scheme {scheme!r}")
    return NigGraph(g.num_vertices, g.adj, weights, g.origin_net,
                    g.dropped_vertices)
