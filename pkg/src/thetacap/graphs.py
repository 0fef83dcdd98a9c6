"""Undirected simple graphs with strong products and exact invariants.

Vertices are 0..n-1.  Adjacency is stored as one Python-int bitset per
vertex, which keeps the branch-and-bound for the independence number in
pure integer operations.  The strong product uses the reflexive relation
(i ~ j iff i == j or ij is an edge): (i,j) and (k,l) are adjacent in
G boxtimes H iff i ~G k and j ~H l and the pairs differ.
"""

from __future__ import annotations

import numpy as np

from .errors import GraphExprError, ResourceLimitError

DEFAULT_VERTEX_CAP = 10_000   # construction cap for products/powers
DEFAULT_ALPHA_CAP = 200       # exact independence number budget
DEFAULT_CHI_CAP = 50          # exact chromatic number budget


class Graph:
    """Immutable simple graph; ``rows[i]`` is the neighbour bitset of vertex i."""

    __slots__ = ("n", "rows")

    def __init__(self, n, edges=()):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"vertex count must be a positive integer, got {n!r}")
        rows = [0] * n
        for e in edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {e!r} out of range for {n} vertices")
            if u == v:
                raise ValueError(f"self-loop {e!r} not allowed in a simple graph")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(rows))

    @classmethod
    def from_rows(cls, n, rows, validate=True):
        """Build directly from bitset rows (used by product constructors)."""
        g = cls.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "rows", tuple(rows))
        if validate:
            if len(g.rows) != n:
                raise ValueError("row count does not match vertex count")
            for i, r in enumerate(g.rows):
                if r >> n:
                    raise ValueError(f"row {i} references vertices >= {n}")
                if (r >> i) & 1:
                    raise ValueError(f"self-loop at vertex {i}")
                rr = r
                while rr:
                    b = rr & -rr
                    j = b.bit_length() - 1
                    rr ^= b
                    if not (g.rows[j] >> i) & 1:
                        raise ValueError(f"asymmetric adjacency between {i} and {j}")
        return g

    def __setattr__(self, name, value):
        raise AttributeError("Graph instances are immutable")

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    @property
    def m(self):
        """Number of edges."""
        return sum(r.bit_count() for r in self.rows) // 2

    def has_edge(self, u, v):
        return (self.rows[u] >> v) & 1 == 1

    def adjacent_or_equal(self, u, v):
        """The reflexive relation used by the strong product."""
        return u == v or self.has_edge(u, v)

    def degree(self, v):
        return self.rows[v].bit_count()

    def edges(self):
        """Sorted list of edges (u, v) with u < v."""
        out = []
        for u in range(self.n):
            r = self.rows[u] >> (u + 1)
            v = u + 1
            while r:
                if r & 1:
                    out.append((u, v))
                r >>= 1
                v += 1
        return out

    def adjacency_matrix(self):
        """Dense 0/1 adjacency matrix as float64."""
        a = np.zeros((self.n, self.n))
        for i, r in enumerate(self.rows):
            while r:
                b = r & -r
                a[i, b.bit_length() - 1] = 1.0
                r ^= b
        return a


def make_cycle(n):
    """Cycle graph C_n (n >= 3)."""
    if n < 3:
        raise ValueError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def make_complete(n):
    """Complete graph K_n."""
    if n < 1:
        raise ValueError(f"vertex count must be positive, got {n}")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def make_edgeless(n):
    """Edgeless graph on n vertices."""
    return Graph(n)


def complement(g):
    """Complement graph (all off-diagonal adjacencies flipped)."""
    full = (1 << g.n) - 1
    rows = [(~r & full) & ~(1 << i) for i, r in enumerate(g.rows)]
    return Graph.from_rows(g.n, rows, validate=False)


def strong_product(g, h, *, max_vertices=DEFAULT_VERTEX_CAP):
    """Strong product with flat vertex index i * |V(H)| + j (row-major)."""
    n = g.n * h.n
    if n > max_vertices:
        raise ResourceLimitError(
            f"strong product has {n} vertices, above the cap of {max_vertices}"
        )
    nh = h.n
    hmasks = [h.rows[j] | (1 << j) for j in range(nh)]
    rows = []
    for i in range(g.n):
        rg = g.rows[i] | (1 << i)
        for j in range(nh):
            acc = 0
            r = rg
            hm = hmasks[j]
            while r:
                b = r & -r
                acc |= hm << ((b.bit_length() - 1) * nh)
                r ^= b
            rows.append(acc & ~(1 << (i * nh + j)))
    return Graph.from_rows(n, rows, validate=False)


def strong_power(g, k, *, max_vertices=DEFAULT_VERTEX_CAP):
    """k-fold strong product of g with itself."""
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"power must be a positive integer, got {k!r}")
    if g.n ** k > max_vertices:
        raise ResourceLimitError(
            f"strong power has {g.n ** k} vertices, above the cap of {max_vertices}"
        )
    acc = g
    for _ in range(k - 1):
        acc = strong_product(acc, g, max_vertices=max_vertices)
    return acc


def independence_number(g, *, max_vertices=DEFAULT_ALPHA_CAP):
    """Exact independence number by branch-and-bound.

    Upper bound: greedy clique cover of the remaining subgraph (every clique
    meets an independent set at most once).  Branching vertex: maximum degree
    in the remaining subgraph, ties broken by lowest index.
    """
    if g.n > max_vertices:
        raise ResourceLimitError(
            f"independence number capped at {max_vertices} vertices, got {g.n}"
        )
    rows = g.rows
    best = 0
    # DFS; include-branch pushed last so it is explored first.
    stack = [((1 << g.n) - 1, 0)]
    while stack:
        mask, size = stack.pop()
        if mask == 0:
            if size > best:
                best = size
            continue
        if size + mask.bit_count() <= best:
            continue
        # greedy clique cover bound
        cliques = []
        mm = mask
        while mm:
            b = mm & -mm
            mm ^= b
            rv = rows[b.bit_length() - 1]
            for ci, c in enumerate(cliques):
                if c & ~rv == 0:
                    cliques[ci] = c | b
                    break
            else:
                cliques.append(b)
        if size + len(cliques) <= best:
            continue
        # branch on max-degree vertex, lowest index on ties
        v = -1
        dmax = -1
        mm = mask
        while mm:
            b = mm & -mm
            mm ^= b
            u = b.bit_length() - 1
            d = (rows[u] & mask).bit_count()
            if d > dmax:
                dmax = d
                v = u
        vb = 1 << v
        stack.append((mask & ~vb, size))
        stack.append((mask & ~rows[v] & ~vb, size + 1))
    return best


def chromatic_number(g, *, max_vertices=DEFAULT_CHI_CAP):
    """Exact chromatic number by iterated k-colourability backtracking."""
    if g.n > max_vertices:
        raise ResourceLimitError(
            f"chromatic number capped at {max_vertices} vertices, got {g.n}"
        )
    if g.m == 0:
        return 1
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    # greedy clique on the degree order gives a lower bound
    clique = 0
    for v in order:
        if clique & ~(g.rows[v]) == 0:
            clique |= 1 << v
    lower = clique.bit_count()
    # greedy colouring gives an upper bound
    colors = {}
    for v in order:
        used = {colors[u] for u in colors if g.has_edge(u, v)}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    upper = max(colors.values()) + 1

    def colorable(k):
        masks = [0] * k  # vertices per colour class

        def place(idx, maxused):
            if idx == len(order):
                return True
            v = order[idx]
            vb = 1 << v
            row = g.rows[v]
            limit = min(k - 1, maxused + 1)
            for c in range(limit + 1):
                if masks[c] & row == 0:
                    masks[c] |= vb
                    if place(idx + 1, max(maxused, c)):
                        return True
                    masks[c] &= ~vb
            return False

        return place(0, -1)

    for k in range(lower, upper):
        if colorable(k):
            return k
    return upper


# ---------------------------------------------------------------------------
# graph expression parser
#
# expr := cycle:N | complete:N | empty:N
#       | complement(expr) | box(expr, expr) | power(expr, K)
# Whitespace-insensitive; offsets in error messages refer to the raw input.

class _ExprParser:
    def __init__(self, text, max_vertices):
        self.text = text
        self.pos = 0
        self.cap = max_vertices

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _fail(self, expected):
        raise GraphExprError(
            f"syntax error at offset {self.pos}: expected {expected}", self.pos
        )

    def _literal(self, ch):
        self._skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self._fail(f"'{ch}'")
        self.pos += 1

    def _ident(self):
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        if self.pos == start:
            self._fail("a graph constructor name")
        return self.text[start:self.pos], start

    def _integer(self):
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self._fail("an integer")
        return int(self.text[start:self.pos])

    def parse_expr(self):
        name, start = self._ident()
        if name in ("cycle", "complete", "empty"):
            self._literal(":")
            count = self._integer()
            if name == "cycle":
                return make_cycle(count)
            if name == "complete":
                return make_complete(count)
            return make_edgeless(count)
        if name == "complement":
            self._literal("(")
            inner = self.parse_expr()
            self._literal(")")
            return complement(inner)
        if name == "box":
            self._literal("(")
            left = self.parse_expr()
            self._literal(",")
            right = self.parse_expr()
            self._literal(")")
            return strong_product(left, right, max_vertices=self.cap)
        if name == "power":
            self._literal("(")
            base = self.parse_expr()
            self._literal(",")
            k = self._integer()
            self._literal(")")
            return strong_power(base, k, max_vertices=self.cap)
        self.pos = start
        self._fail("one of cycle/complete/empty/complement/box/power")

    def expect_end(self):
        self._skip_ws()
        if self.pos != len(self.text):
            self._fail("end of input")


def parse_graph_expr(text, *, max_vertices=DEFAULT_VERTEX_CAP):
    """Parse a graph expression such as ``power(cycle:5, 2)``."""
    p = _ExprParser(text, max_vertices)
    g = p.parse_expr()
    p.expect_end()
    return g


# ---------------------------------------------------------------------------
# edge-list serialization
#
# Writer emits "p <n> <m>" then one 0-based "u v" line per edge.  The reader
# additionally accepts DIMACS-style lines: "p edge <n> <m>", 1-based
# "e u v" edges, and "c" comments.

def to_edge_list(g):
    lines = [f"p {g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def from_edge_list(text):
    n = None
    declared_m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ValueError(f"line {lineno}: duplicate header")
            fields = parts[2:] if len(parts) == 4 and not parts[1].isdigit() else parts[1:]
            if len(fields) != 2:
                raise ValueError(f"line {lineno}: malformed header {line!r}")
            n, declared_m = int(fields[0]), int(fields[1])
        elif parts[0] == "e":
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: malformed edge {line!r}")
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        else:
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: malformed edge {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise ValueError("missing 'p <n> <m>' header line")
    g = Graph(n, edges)
    if declared_m != g.m:
        raise ValueError(f"header declares {declared_m} edges but {g.m} distinct edges given")
    return g
