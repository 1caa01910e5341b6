"""Induced P4 / P4+K1 detection, cotree recognition and completion queries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .graph import Graph, as_mask, components, iter_bits, lowest, members

P4 = "P4"
P4_UNION_P1 = "P4+P1"

UNTOUCHED = "untouched"
COMPLETE = "complete"
PARTIAL = "partial"


@dataclass(frozen=True)
class InducedWitness:
    pattern: str
    vertices: tuple

    def verify(self, g: Graph) -> bool:
        vs = self.vertices
        if len(set(vs)) != len(vs) or any(not 0 <= v < g.n for v in vs):
            return False
        a, b, c, d = vs[:4]
        path_ok = (g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(c, d)
                   and not g.has_edge(a, c) and not g.has_edge(a, d) and not g.has_edge(b, d))
        if self.pattern == P4:
            return len(vs) == 4 and path_ok
        if self.pattern == P4_UNION_P1:
            e = vs[4]
            return len(vs) == 5 and path_ok and not any(g.has_edge(e, w) for w in vs[:4])
        return False

    def to_dict(self) -> dict:
        return {"pattern": self.pattern, "vertices": list(self.vertices)}


def _p4_within(g: Graph, within: int):
    """Lexicographically smallest induced P4 (a,b,c,d) inside `within`."""
    adj = g.adj
    for a in iter_bits(within):
        closed_a = adj[a] | (1 << a)
        for b in iter_bits(adj[a] & within):
            cs = adj[b] & within & ~closed_a
            if not cs:
                continue
            not_ab = within & ~closed_a & ~adj[b] & ~(1 << b)
            for c in iter_bits(cs):
                ds = adj[c] & not_ab
                if ds:
                    return (a, b, c, lowest(ds))
    return None


def find_induced_p4(g: Graph, within=None) -> InducedWitness | None:
    within = g.vertices if within is None else as_mask(within)
    found = _p4_within(g, within)
    return InducedWitness(P4, found) if found else None


def find_induced_p4_union_p1(g: Graph) -> InducedWitness | None:
    # P4+P1 exists iff some e has an induced P4 among its non-neighbours.
    for e in range(g.n):
        rest = g.vertices & ~g.adj[e] & ~(1 << e)
        if rest.bit_count() < 4:
            continue
        found = _p4_within(g, rest)
        if found:
            return InducedWitness(P4_UNION_P1, found + (e,))
    return None


def is_p4_free(g: Graph) -> bool:
    return find_induced_p4(g) is None


def is_p4_union_p1_free(g: Graph) -> bool:
    return find_induced_p4_union_p1(g) is None


@dataclass(frozen=True)
class Cotree:
    kind: str  # "leaf" | "union" | "join"
    vertex: int = -1
    children: tuple = ()

    def leaves(self) -> list[int]:
        if self.kind == "leaf":
            return [self.vertex]
        out = []
        for ch in self.children:
            out.extend(ch.leaves())
        return sorted(out)

    def smallest_leaf(self) -> int:
        if self.kind == "leaf":
            return self.vertex
        return self.children[0].smallest_leaf()

    def is_canonical(self) -> bool:
        if self.kind == "leaf":
            return not self.children
        if len(self.children) < 2:
            return False
        keys = [ch.smallest_leaf() for ch in self.children]
        if keys != sorted(keys):
            return False
        return all(ch.kind != self.kind and ch.is_canonical() for ch in self.children)

    def evaluate(self, n: int | None = None) -> Graph:
        """Rebuild the graph on the original vertex labels."""
        leaves = self.leaves()
        size = (max(leaves) + 1) if n is None else n
        adj = [0] * size

        def walk(node: "Cotree") -> int:
            if node.kind == "leaf":
                return 1 << node.vertex
            masks = [walk(ch) for ch in node.children]
            if node.kind == "join":
                total = 0
                for m in masks:
                    total |= m
                for m in masks:
                    for v in iter_bits(m):
                        adj[v] |= total & ~m
            out = 0
            for m in masks:
                out |= m
            return out

        walk(self)
        return Graph(size, adj)

    def shape(self):
        """Label-free nested form; equal for isomorphic cographs."""
        if self.kind == "leaf":
            return ()
        return (self.kind, tuple(sorted(ch.shape() for ch in self.children)))

    def __str__(self) -> str:
        if self.kind == "leaf":
            return str(self.vertex)
        return f"{self.kind}({', '.join(str(ch) for ch in self.children)})"


def _co_components(g: Graph, within: int) -> list[int]:
    # components of the complement restricted to `within`, by smallest member
    out = []
    rest = within
    adj = g.adj
    while rest:
        frontier = rest & -rest
        comp = frontier
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= within & ~adj[v] & ~(1 << v)
            frontier = nxt & rest & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out


def _components_within(g: Graph, within: int) -> list[int]:
    return components(g, g.vertices & ~within)


def cotree(g: Graph) -> Union[Cotree, InducedWitness]:
    """Canonical cotree of g, or an induced P4 if g is not a cograph."""
    if g.n == 0:
        raise ValueError("empty graph has no cotree")

    def build(within: int):
        if within & (within - 1) == 0:
            return Cotree("leaf", lowest(within))
        parts = _components_within(g, within)
        kind = "union"
        if len(parts) == 1:
            parts = _co_components(g, within)
            kind = "join"
            if len(parts) == 1:
                found = _p4_within(g, within)
                assert found is not None, "connected and co-connected graph without a P4"
                return InducedWitness(P4, found)
        kids = []
        for p in parts:
            sub = build(p)
            if isinstance(sub, InducedWitness):
                return sub
            kids.append(sub)
        return Cotree(kind, -1, tuple(kids))

    return build(g.vertices)


def complete_bipartition(g: Graph) -> tuple[int, int] | None:
    """(U, V) with U holding vertex 0 if g is complete bipartite, else None."""
    if g.n < 2:
        return None
    side_u = g.vertices & ~g.adj[0]
    side_v = g.adj[0]
    if not side_v:
        return None
    for v in iter_bits(side_u):
        if g.adj[v] != side_v:
            return None
    for v in iter_bits(side_v):
        if g.adj[v] != side_u:
            return None
    return side_u, side_v


def is_complete_bipartite(g: Graph) -> bool:
    return complete_bipartition(g) is not None


def is_balanced_complete_bipartite(g: Graph) -> bool:
    parts = complete_bipartition(g)
    return parts is not None and parts[0].bit_count() == parts[1].bit_count()


def completion_profile(g: Graph, s, x: int) -> list[tuple[int, str]]:
    """For each component D of g - s: whether N(x) meets none, all or part of D."""
    s = as_mask(s)
    out = []
    for comp in components(g, s):
        hit = g.adj[x] & comp
        if not hit:
            status = UNTOUCHED
        elif hit == comp:
            status = COMPLETE
        else:
            status = PARTIAL
        out.append((comp, status))
    return out


def missing_in_component(g: Graph, x: int, comp: int) -> int | None:
    """A vertex of comp not adjacent to x, or None if x is complete to comp."""
    gap = comp & ~g.adj[x]
    return lowest(gap) if gap else None


__all__ = [
    "InducedWitness", "Cotree", "P4", "P4_UNION_P1", "UNTOUCHED", "COMPLETE", "PARTIAL",
    "find_induced_p4", "find_induced_p4_union_p1", "is_p4_free", "is_p4_union_p1_free",
    "cotree", "complete_bipartition", "is_complete_bipartite", "is_balanced_complete_bipartite",
    "completion_profile", "missing_in_component", "members",
]
