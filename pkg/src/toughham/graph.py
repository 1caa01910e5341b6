"""Immutable simple graphs on vertices 0..n-1 with bitmask adjacency.

A vertex set is a Python int used as a bitset: bit v is set iff v is in the
set. Every function that takes a vertex set also accepts any iterable of
ints, so callers can pass {0, 2} as easily as 0b101.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


def as_mask(vs) -> int:
    if isinstance(vs, int):
        return vs
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def lowest(mask: int) -> int:
    """Smallest member of a non-empty set."""
    return (mask & -mask).bit_length() - 1


class Graph:
    __slots__ = ("n", "adj", "_hash")

    def __init__(self, n: int, adj: Sequence[int]):
        if len(adj) != n:
            raise ValueError("adjacency length must equal n")
        full = (1 << n) - 1
        for v, a in enumerate(adj):
            if a >> v & 1:
                raise ValueError(f"self-loop at {v}")
            if a & ~full:
                raise ValueError(f"vertex {v} has a neighbour id >= n")
            for u in iter_bits(a):
                if not adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")
        self.n = n
        self.adj = tuple(adj)
        self._hash = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    @classmethod
    def _trusted(cls, n: int, adj: Sequence[int]) -> "Graph":
        g = object.__new__(cls)
        g.n = n
        g.adj = tuple(adj)
        g._hash = None
        return g

    @property
    def vertices(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> int:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def min_degree(self) -> int:
        return min((a.bit_count() for a in self.adj), default=0)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def num_edges(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def is_complete(self) -> bool:
        full = self.vertices
        return all(a | (1 << v) == full for v, a in enumerate(self.adj))

    def universal_vertices(self) -> int:
        full = self.vertices
        return as_mask(v for v, a in enumerate(self.adj) if a | (1 << v) == full)

    def complement(self) -> "Graph":
        full = self.vertices
        return Graph._trusted(self.n, [full & ~a & ~(1 << v) for v, a in enumerate(self.adj)])

    def with_edge_removed(self, u: int, v: int) -> "Graph":
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph._trusted(self.n, adj)

    def with_edge_added(self, u: int, v: int) -> "Graph":
        if u == v:
            raise ValueError("self-loop")
        adj = list(self.adj)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        return Graph._trusted(self.n, adj)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges()})"


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph._trusted(n, [full & ~(1 << v) for v in range(n)])


def empty_graph(n: int) -> Graph:
    return Graph._trusted(n, [0] * n)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return join(empty_graph(a), empty_graph(b))


def components(g: Graph, removed=0) -> list[int]:
    """Connected components of g - removed, ordered by smallest member."""
    rest = g.vertices & ~as_mask(removed)
    adj = g.adj
    out = []
    while rest:
        frontier = rest & -rest
        comp = frontier
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            frontier = nxt & rest & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out


def count_components(g: Graph, removed=0) -> int:
    return len(components(g, removed))


def component_of(g: Graph, v: int, within: int) -> int:
    """Component containing v in the subgraph induced by `within`."""
    comp = frontier = 1 << v
    while frontier:
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= g.adj[u]
        frontier = nxt & within & ~comp
        comp |= frontier
    return comp


def is_connected(g: Graph, within: int | None = None) -> bool:
    within = g.vertices if within is None else as_mask(within)
    if not within:
        return True
    return component_of(g, lowest(within), within) == within


def is_cutset(g: Graph, s) -> bool:
    return count_components(g, as_mask(s)) >= 2


def induced(g: Graph, s) -> tuple[Graph, list[int]]:
    """Subgraph induced by s, relabelled 0..|s|-1 in ascending order.

    Returns the graph and the new-to-old id list; its inverse is
    {old: new for new, old in enumerate(ids)}.
    """
    ids = members(as_mask(s))
    index = {old: new for new, old in enumerate(ids)}
    s_mask = as_mask(s)
    adj = []
    for old in ids:
        a = 0
        for u in iter_bits(g.adj[old] & s_mask):
            a |= 1 << index[u]
        adj.append(a)
    return Graph._trusted(len(ids), adj), ids


def lift_mask(mask: int, ids: Sequence[int]) -> int:
    """Translate a vertex set of an induced subgraph back to host ids."""
    return as_mask(ids[v] for v in iter_bits(mask))


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    shift = g1.n
    return Graph._trusted(g1.n + g2.n, list(g1.adj) + [a << shift for a in g2.adj])


def join(g1: Graph, g2: Graph) -> Graph:
    shift = g1.n
    side1 = (1 << shift) - 1
    side2 = ((1 << g2.n) - 1) << shift
    adj = [a | side2 for a in g1.adj] + [(a << shift) | side1 for a in g2.adj]
    return Graph._trusted(g1.n + g2.n, adj)


def union_all(graphs: Iterable[Graph]) -> Graph:
    out = empty_graph(0)
    for h in graphs:
        out = disjoint_union(out, h)
    return out


def neighbors_in(g: Graph, v: int, s) -> int:
    return g.adj[v] & as_mask(s)


def degree_in(g: Graph, v: int, s) -> int:
    return (g.adj[v] & as_mask(s)).bit_count()


def neighborhood_of_set(g: Graph, s) -> int:
    """N(S): vertices outside s with a neighbour in s."""
    s = as_mask(s)
    out = 0
    for v in iter_bits(s):
        out |= g.adj[v]
    return out & ~s


def is_path(g: Graph, seq: Sequence[int]) -> bool:
    if not seq or len(set(seq)) != len(seq):
        return False
    if any(not 0 <= v < g.n for v in seq):
        return False
    return all(g.has_edge(a, b) for a, b in zip(seq, seq[1:]))


def is_cycle(g: Graph, seq: Sequence[int]) -> bool:
    return len(seq) >= 3 and is_path(g, seq) and g.has_edge(seq[-1], seq[0])


def is_hamiltonian_path(g: Graph, seq: Sequence[int]) -> bool:
    return len(seq) == g.n and is_path(g, seq)


def is_hamiltonian_cycle(g: Graph, seq: Sequence[int]) -> bool:
    return len(seq) == g.n and is_cycle(g, seq)


def first_bad_edge(g: Graph, seq: Sequence[int], closed: bool) -> tuple[int, int] | None:
    pairs = list(zip(seq, seq[1:]))
    if closed and seq:
        pairs.append((seq[-1], seq[0]))
    for a, b in pairs:
        if not (0 <= a < g.n and 0 <= b < g.n) or not g.has_edge(a, b):
            return (a, b)
    return None
