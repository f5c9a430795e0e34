"""Tree canonicalization and unlabeled-tree enumeration.

Canonical codes are rooted-subtree encodings rooted at the tree's center
(minimum over both centers for bicentral trees), so two trees get the same
code iff they are isomorphic. An optional 0/1 coloring makes the code
canonical under color-preserving isomorphism, which is how configuration
orbits on a tree are counted.

enumerate_free_trees generates every unlabeled tree exactly once via the
canonical level-sequence successor method; prufer_oracle_trees is the slow
independent oracle that decodes all n^(n-2) Prufer sequences and keeps one
representative per isomorphism class.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence

from .errors import InternalInvariantError
from .graphs import Edge, Graph, is_tree

CanonicalCode = bytes

# Rooted code bytes: one open byte per vertex (0x02, or 0x03 for the second
# color), children codes in sorted order, then a 0x01 close byte.
_OPEN = (b"\x02", b"\x03")
_CLOSE = b"\x01"


def _centers_from_adjacency(n: int, adjacency: Sequence[Sequence[int]]) -> tuple[int, ...]:
    if n == 1:
        return (0,)
    deg = [len(adjacency[v]) for v in range(n)]
    layer = [v for v in range(n) if deg[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in adjacency[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return tuple(sorted(layer))


def tree_centers(g: Graph) -> tuple[int, ...]:
    """The one or two middle vertices of a tree (endpoints of no longest
    path's majority)."""
    if not is_tree(g):
        raise ValueError("centers are defined for trees only")
    return _centers_from_adjacency(g.n, g.adjacency)


def _bfs_order(n: int, adjacency: Sequence[Sequence[int]], root: int) -> tuple[list[int], list[int]]:
    parent = [-1] * n
    parent[root] = root
    order = [root]
    for v in order:
        for w in adjacency[v]:
            if parent[w] < 0:
                parent[w] = v
                order.append(w)
    return order, parent


def _rooted_code(
    n: int,
    adjacency: Sequence[Sequence[int]],
    root: int,
    colors: Sequence[int] | None,
) -> bytes:
    order, parent = _bfs_order(n, adjacency, root)
    code: list[bytes] = [b""] * n
    for v in reversed(order):
        children = sorted(code[w] for w in adjacency[v] if parent[w] == v and w != v)
        open_byte = _OPEN[0] if colors is None else _OPEN[colors[v] & 1]
        code[v] = open_byte + b"".join(children) + _CLOSE
    return code[root]


def canonical_code(g: Graph, colors: Sequence[int] | None = None) -> CanonicalCode:
    """Isomorphism-invariant code of a tree, optionally 0/1-colored.

    Serialized as lowercase hex (``.hex()``) in reports.
    """
    if not is_tree(g):
        raise ValueError("canonical codes are defined for trees only")
    if colors is not None and len(colors) != g.n:
        raise ValueError("colors must assign one value per vertex")
    return min(
        _rooted_code(g.n, g.adjacency, r, colors)
        for r in _centers_from_adjacency(g.n, g.adjacency)
    )


# ---------------------------------------------------------------------------
# Free-tree enumeration by canonical level sequences.
#
# A rooted tree on n vertices is encoded by its depth sequence in canonical
# (greatest-first) DFS order, levels[0] = 0. The rooted successor steps to
# the next-smaller canonical sequence; free-tree canonicity additionally
# requires the first root subtree to be no "heavier" than the rest, and
# invalid rootings are jumped over rather than filtered one by one.
# ---------------------------------------------------------------------------


def _rooted_successor(levels: list[int], p: int | None = None) -> list[int] | None:
    if p is None:
        p = len(levels) - 1
        while levels[p] == 1:
            p -= 1
    if p == 0:
        return None
    q = p - 1
    while levels[q] != levels[p] - 1:
        q -= 1
    nxt = levels[:p]
    for i in range(p, len(levels)):
        nxt.append(nxt[i - p + q])
    return nxt


def _split_levels(levels: list[int]) -> tuple[list[int], list[int]]:
    m = len(levels)
    for i in range(2, len(levels)):
        if levels[i] == 1:
            m = i
            break
    return [lv - 1 for lv in levels[1:m]], [0] + levels[m:]


def _free_tree_fixup(levels: list[int]) -> list[int]:
    for _ in range(8 * len(levels) + 8):
        left, rest = _split_levels(levels)
        height_left, height_rest = max(left), max(rest)
        if height_rest > height_left:
            return levels
        if height_rest == height_left and (
            len(left) < len(rest) or (len(left) == len(rest) and left <= rest)
        ):
            return levels
        p = len(left)
        was_deep = levels[p] > 2
        nxt = _rooted_successor(levels, p)
        if nxt is None:
            raise InternalInvariantError("level-sequence successor underflow")
        levels = nxt
        if was_deep:
            new_left, _ = _split_levels(levels)
            suffix = list(range(1, max(new_left) + 2))
            levels[-len(suffix) :] = suffix
    raise InternalInvariantError("free-tree fixup did not converge")


def _graph_from_levels(levels: list[int]) -> Graph:
    n = len(levels)
    edges: list[Edge] = []
    last_at_level = [0] * (max(levels) + 1)
    for i in range(1, n):
        lv = levels[i]
        edges.append((last_at_level[lv - 1], i))
        last_at_level[lv] = i
    return Graph.from_edges(n, edges)


def enumerate_free_trees(n: int) -> Iterator[Graph]:
    """Yield exactly one Graph per isomorphism class of trees on n vertices."""
    if n < 1:
        raise ValueError(f"need at least one vertex, got n={n}")
    return _enumerate_free_trees(n)


def _enumerate_free_trees(n: int) -> Iterator[Graph]:
    if n == 1:
        yield Graph.from_edges(1, [])
        return
    levels: list[int] | None = list(range(n // 2 + 1)) + list(range(1, (n + 1) // 2))
    while levels is not None:
        levels = _free_tree_fixup(levels)
        yield _graph_from_levels(levels)
        levels = _rooted_successor(levels)


# ---------------------------------------------------------------------------
# Prufer-sequence oracle.
# ---------------------------------------------------------------------------


def prufer_to_edges(sequence: Sequence[int], n: int) -> list[Edge]:
    """Decode a Prufer sequence (length n-2, entries in 0..n-1) into the
    labeled tree's edge list, in O(n)."""
    if n < 2:
        raise ValueError("Prufer decoding needs n >= 2")
    if len(sequence) != n - 2:
        raise ValueError(f"sequence length must be n-2={n - 2}, got {len(sequence)}")
    deg = [1] * n
    for a in sequence:
        if not 0 <= a < n:
            raise ValueError(f"sequence entry {a} out of range 0..{n - 1}")
        deg[a] += 1
    edges: list[Edge] = []
    ptr = 0
    leaf = -1
    for a in sequence:
        if leaf < 0:
            while deg[ptr] != 1:
                ptr += 1
            leaf = ptr
            ptr += 1
        edges.append((leaf, a))
        deg[a] -= 1
        # a just became a leaf below the scan pointer: it is the next minimum
        leaf = a if (deg[a] == 1 and a < ptr) else -1
    if leaf < 0:
        while deg[ptr] != 1:
            ptr += 1
        leaf = ptr
    edges.append((leaf, n - 1))
    return edges


def _index_to_sequence(index: int, n: int) -> list[int]:
    seq = [0] * (n - 2)
    for i in range(n - 3, -1, -1):
        index, seq[i] = divmod(index, n)
    return seq


def _advance_sequence(seq: list[int], n: int) -> None:
    for i in range(len(seq) - 1, -1, -1):
        seq[i] += 1
        if seq[i] < n:
            return
        seq[i] = 0


def _interned_rooted_key(
    n: int, adjacency: list[list[int]], root: int, intern: dict[tuple[int, ...], int]
) -> int:
    order, parent = _bfs_order(n, adjacency, root)
    child_keys: list[list[int]] = [[] for _ in range(n)]
    key = [0] * n
    for v in reversed(order):
        t = tuple(sorted(child_keys[v]))
        k = intern.get(t)
        if k is None:
            k = len(intern)
            intern[t] = k
        key[v] = k
        if v != root:
            child_keys[parent[v]].append(k)
    return key[root]


def _canonical_key(n: int, edges: list[Edge], intern: dict[tuple[int, ...], int]) -> int:
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    return min(
        _interned_rooted_key(n, adjacency, r, intern)
        for r in _centers_from_adjacency(n, adjacency)
    )


def prufer_oracle_trees(
    n: int, sequence_range: tuple[int, int] | None = None
) -> Iterator[Graph]:
    """Slow independent oracle: decode every Prufer sequence and yield one
    Graph per isomorphism class not seen before within this call.

    ``sequence_range=(start, stop)`` restricts to a slice of the n^(n-2)
    sequences (lexicographic index order) so callers can split the space by
    index ranges across workers; slices deduplicate independently, so the
    caller must merge by canonical_code.
    """
    if not 2 <= n <= 9:
        raise ValueError("oracle domain is 2 <= n <= 9")
    total = n ** (n - 2)
    start, stop = (0, total) if sequence_range is None else sequence_range
    if not 0 <= start <= stop <= total:
        raise ValueError(f"sequence_range must lie within [0, {total}]")
    return _prufer_oracle_scan(n, start, stop)


def _prufer_oracle_scan(n: int, start: int, stop: int) -> Iterator[Graph]:
    seq = _index_to_sequence(start, n)
    intern: dict[tuple[int, ...], int] = {}
    seen: set[int] = set()
    for _ in range(start, stop):
        edges = prufer_to_edges(seq, n)
        key = _canonical_key(n, edges, intern)
        if key not in seen:
            seen.add(key)
            yield Graph.from_edges(n, edges)
        _advance_sequence(seq, n)
