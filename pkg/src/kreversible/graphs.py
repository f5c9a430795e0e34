"""Simple undirected graphs with edge-list file I/O.

Vertices are 0-based internally; the text formats (edge-list files, reports)
are 1-based. A Graph is immutable and normalized: edges are stored as sorted
(u, v) pairs with u < v, so two graphs compare equal iff they are the same
labeled graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

Edge = tuple[int, int]


class MalformedLineError(ParseError):
    """A line that is not a header, comment, or 'u v' pair."""


class VertexIndexError(ParseError):
    """A vertex id outside 1..n."""


class SelfLoopError(ParseError):
    """An edge joining a vertex to itself."""


class DuplicateEdgeError(ParseError):
    """The same unordered pair listed twice."""


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph. Build through :meth:`from_edges`.

    neighbor_masks[i] is a bitmask of i's neighbors (bit j set iff ij is an
    edge); the dynamics hot path works on these masks directly.
    """

    n: int
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]
    neighbor_masks: tuple[int, ...]

    @classmethod
    def from_edges(cls, n: int, edges) -> Graph:
        """Validate and normalize an edge list (0-based endpoints)."""
        if n < 1:
            raise ValueError(f"vertex count must be positive, got {n}")
        normalized: list[Edge] = []
        seen: set[Edge] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexIndexError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise DuplicateEdgeError(f"edge {e} listed more than once")
            seen.add(e)
            normalized.append(e)
        normalized.sort()
        adjacency: list[list[int]] = [[] for _ in range(n)]
        masks = [0] * n
        for u, v in normalized:
            adjacency[u].append(v)
            adjacency[v].append(u)
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return cls(
            n=n,
            edges=tuple(normalized),
            adjacency=tuple(tuple(sorted(nbrs)) for nbrs in adjacency),
            degrees=tuple(len(nbrs) for nbrs in adjacency),
            neighbor_masks=tuple(masks),
        )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def max_degree(self) -> int:
        return max(self.degrees)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        seen = 1  # bitmask of visited vertices, start from 0
        frontier = [0]
        while frontier:
            v = frontier.pop()
            fresh = self.neighbor_masks[v] & ~seen
            seen |= fresh
            while fresh:
                w = (fresh & -fresh).bit_length() - 1
                frontier.append(w)
                fresh &= fresh - 1
        return seen == (1 << self.n) - 1


def is_tree(g: Graph) -> bool:
    """A tree is connected with exactly n - 1 edges."""
    return g.num_edges == g.n - 1 and g.is_connected()


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format: a header line ``n=<int>`` followed by one
    ``u v`` pair per line, 1-based. ``#`` starts a comment; blank lines are
    ignored. Raises a distinct ParseError subclass per defect.
    """
    n: int | None = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            if not line.startswith("n="):
                raise MalformedLineError(f"line {lineno}: expected 'n=<int>' header, got {line!r}")
            try:
                n = int(line[2:])
            except ValueError:
                raise MalformedLineError(f"line {lineno}: bad vertex count {line!r}") from None
            if n < 1:
                raise MalformedLineError(f"line {lineno}: vertex count must be positive")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLineError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLineError(f"line {lineno}: non-integer endpoint in {line!r}") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise VertexIndexError(f"line {lineno}: vertex out of range 1..{n} in {line!r}")
        if u == v:
            raise SelfLoopError(f"line {lineno}: self-loop at vertex {u}")
        edges.append((u - 1, v - 1))
    if n is None:
        raise MalformedLineError("missing 'n=<int>' header line")
    return Graph.from_edges(n, edges)


def to_edge_list(g: Graph) -> str:
    """Serialize back to the 1-based edge-list format (round-trips with
    parse_edge_list)."""
    lines = [f"n={g.n}"]
    lines.extend(f"{u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def relabel(g: Graph, perm: list[int] | tuple[int, ...]) -> Graph:
    """Apply a vertex permutation: vertex i of g becomes perm[i]."""
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    return Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges])


def parse_graph6(text: str) -> Graph:
    """Parse a single graph in graph6 ASCII format (n <= 62), as a convenience
    for interop with standard graph tooling."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    data = [ord(c) - 63 for c in s]
    if not data or any(not 0 <= b < 64 for b in data):
        raise ParseError("invalid graph6 byte")
    n = data[0]
    if n > 62:
        raise ParseError("only single-byte graph6 sizes (n <= 62) are supported")
    need = (n * (n - 1) // 2 + 5) // 6
    if len(data) - 1 != need:
        raise ParseError(f"graph6 body length {len(data) - 1}, expected {need}")
    bits = []
    for b in data[1:]:
        bits.extend((b >> shift) & 1 for shift in range(5, -1, -1))
    edges = []
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if bits[idx]:
                edges.append((u, v))
            idx += 1
    return Graph.from_edges(n, edges)
