"""Readers and writers for sparse matrix patterns and hypergraphs.

Text hypergraph format: the first non-comment line is ``B V N P F`` where
B is the pin index base (0 or 1), V/N/P are vertex/net/pin counts, and F
flags per-net costs (bit 0) and per-vertex weights (bit 1). N net lines
follow, each ``[cost] pin pin ...``; if bit 1 is set, V single-integer
weight lines follow. Lines starting with ``%`` are comments.
"""

from .hgraph import Hypergraph, build_hypergraph


class FormatError(ValueError):
    pass


class SparseMatrixPattern:
    """Nonzero structure of a sparse matrix; values are never kept."""

    def __init__(self, rows, cols, entries):
        self.rows = rows
        self.cols = cols
        self.entries = entries  # sorted list of (row, col), 0-based

    @property
    def nnz(self):
        return len(self.entries)

    def transpose(self):
        return SparseMatrixPattern(
            self.cols, self.rows, sorted((c, r) for r, c in self.entries))

    def __eq__(self, other):
        if not isinstance(other, SparseMatrixPattern):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __repr__(self):
        return f"SparseMatrixPattern({self.rows}x{self.cols}, nnz={self.nnz})"


def read_matrix_market(path):
    """Read a Matrix Market coordinate file as a pattern.

    Any field type is accepted; values are discarded. symmetric,
    skew-symmetric and hermitian storage is expanded to both triangles.
    Indices are converted from the file's 1-based form to 0-based.
    """
    with open(path, "r", encoding="ascii") as f:
        header = f.readline()
        if not header.startswith("%%MatrixMarket"):
            raise FormatError(f"{path}: missing MatrixMarket header")
        fields = header.strip().split()
        if len(fields) < 5:
            raise FormatError(f"{path}: short MatrixMarket header")
        _, obj, fmt, _field, symmetry = (w.lower() for w in fields[:5])
        if obj != "matrix" or fmt != "coordinate":
            raise FormatError(
                f"{path}: expected 'matrix coordinate', got '{obj} {fmt}'")
        if symmetry not in ("general", "symmetric", "skew-symmetric",
                            "hermitian"):
            raise FormatError(f"{path}: unknown symmetry '{symmetry}'")

        size_line = None
        for line in f:
            stripped = line.strip()
            if not stripped or stripped.startswith("%"):
                continue
            size_line = stripped
            break
        if size_line is None:
            raise FormatError(f"{path}: missing size line")
        parts = size_line.split()
        if len(parts) != 3:
            raise FormatError(f"{path}: malformed size line '{size_line}'")
        try:
            rows, cols, nnz = (int(p) for p in parts)
        except ValueError:
            raise FormatError(f"{path}: malformed size line '{size_line}'")
        if rows < 0 or cols < 0 or nnz < 0:
            raise FormatError(f"{path}: negative dimension")

        entries = set()
        count = 0
        for line in f:
            stripped = line.strip()
            if not stripped or stripped.startswith("%"):
                continue
            count += 1
            if count > nnz:
                raise FormatError(f"{path}: more than {nnz} declared entries")
            parts = stripped.split()
            if len(parts) < 2:
                raise FormatError(f"{path}: malformed entry '{stripped}'")
            try:
                i = int(parts[0])
                j = int(parts[1])
            except ValueError:
                raise FormatError(f"{path}: malformed entry '{stripped}'")
            if not (1 <= i <= rows and 1 <= j <= cols):
                raise FormatError(
                    f"{path}: entry ({i},{j}) outside declared "
                    f"{rows}x{cols} bounds")
            entries.add((i - 1, j - 1))
            if symmetry != "general" and i != j:
                entries.add((j - 1, i - 1))
        if count < nnz:
            raise FormatError(f"{path}: {count} entries, {nnz} declared")

    return SparseMatrixPattern(rows, cols, sorted(entries))


def write_matrix_market(m, path):
    """Write a pattern as a general Matrix Market coordinate file."""
    with open(path, "w", encoding="ascii") as f:
        f.write("%%MatrixMarket matrix coordinate pattern general\n")
        f.write(f"{m.rows} {m.cols} {m.nnz}\n")
        for r, c in m.entries:
            f.write(f"{r + 1} {c + 1}\n")


def column_net_model(m, unit_weights=False):
    """One vertex per row, one net per column, pin (j, i) iff a_ij != 0.

    Vertex weight is the nonzero count of the row (1 with unit_weights);
    every net costs 1.
    """
    pins = [(c, r) for r, c in m.entries]
    if unit_weights:
        weights = [1] * m.rows
    else:
        weights = [0] * m.rows
        for r, _ in m.entries:
            weights[r] += 1
    return build_hypergraph(m.rows, m.cols, pins, weights, [1] * m.cols)


def row_net_model(m, unit_weights=False):
    """Column-net model of the transposed pattern."""
    return column_net_model(m.transpose(), unit_weights)


def _data_lines(path):
    with open(path, "r", encoding="ascii") as f:
        for line in f:
            if line.lstrip().startswith("%"):
                continue
            yield line.rstrip("\n")


def read_hypergraph_text(path):
    """Parse the text hypergraph format documented in the module header."""
    lines = _data_lines(path)
    try:
        header = next(lines)
    except StopIteration:
        raise FormatError(f"{path}: empty file")
    parts = header.split()
    if len(parts) != 5:
        raise FormatError(f"{path}: header must be 'B V N P F'")
    try:
        base, nv, nn, np_, flags = (int(p) for p in parts)
    except ValueError:
        raise FormatError(f"{path}: non-integer header field")
    if base not in (0, 1):
        raise FormatError(f"{path}: index base must be 0 or 1")
    if flags not in (0, 1, 2, 3):
        raise FormatError(f"{path}: flags must be in 0..3")
    if nv < 0 or nn < 0 or np_ < 0:
        raise FormatError(f"{path}: negative count in header")
    has_costs = bool(flags & 1)
    has_weights = bool(flags & 2)

    pins = []
    costs = [1] * nn
    pin_count = 0
    for n in range(nn):
        try:
            line = next(lines)
        except StopIteration:
            raise FormatError(f"{path}: expected {nn} net lines, got {n}")
        tokens = line.split()
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise FormatError(f"{path}: non-integer token on net line {n}")
        if has_costs:
            if not values:
                raise FormatError(f"{path}: net line {n} missing cost")
            cost, values = values[0], values[1:]
            if cost < 0:
                raise FormatError(f"{path}: negative cost on net line {n}")
            costs[n] = cost
        pin_count += len(values)
        for v in values:
            v -= base
            if not 0 <= v < nv:
                raise FormatError(
                    f"{path}: pin {v + base} on net line {n} out of range")
            pins.append((n, v))
    if pin_count != np_:
        raise FormatError(
            f"{path}: header declares {np_} pins, net lines hold {pin_count}")

    weights = [1] * nv
    if has_weights:
        for v in range(nv):
            try:
                line = next(lines)
            except StopIteration:
                raise FormatError(f"{path}: expected {nv} weight lines")
            tokens = line.split()
            if len(tokens) != 1:
                raise FormatError(f"{path}: weight line {v} malformed")
            try:
                weights[v] = int(tokens[0])
            except ValueError:
                raise FormatError(f"{path}: weight line {v} malformed")
            if weights[v] < 0:
                raise FormatError(f"{path}: negative weight for vertex {v}")
    for extra in lines:
        if extra.strip():
            raise FormatError(f"{path}: trailing content '{extra.strip()}'")

    return build_hypergraph(nv, nn, pins, weights, costs)


def write_hypergraph_text(h, path):
    """Write a hypergraph in the text format; read_hypergraph_text inverts it."""
    has_costs = any(c != 1 for c in h.net_costs)
    has_weights = any(w != 1 for w in h.vertex_weights)
    flags = (1 if has_costs else 0) | (2 if has_weights else 0)
    with open(path, "w", encoding="ascii") as f:
        f.write(f"0 {h.num_vertices} {h.num_nets} {h.num_pins} {flags}\n")
        for n in range(h.num_nets):
            tokens = []
            if has_costs:
                tokens.append(str(h.net_costs[n]))
            tokens.extend(str(v) for v in h.net_pins[n])
            f.write(" ".join(tokens) + "\n")
        if has_weights:
            for w in h.vertex_weights:
                f.write(f"{w}\n")


def read_partition_file(path, num_vertices, k):
    """Read one part id per line; length and range are checked."""
    part_of = []
    with open(path, "r", encoding="ascii") as f:
        for line in f:
            stripped = line.strip()
            if not stripped or stripped.startswith("%"):
                continue
            try:
                part_of.append(int(stripped))
            except ValueError:
                raise FormatError(f"{path}: non-integer part id '{stripped}'")
    if len(part_of) != num_vertices:
        raise FormatError(
            f"{path}: {len(part_of)} part ids for {num_vertices} vertices")
    for v, p in enumerate(part_of):
        if not 0 <= p < k:
            raise FormatError(f"{path}: part id {p} for vertex {v} not in [0,{k})")
    return part_of
