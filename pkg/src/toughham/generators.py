"""Cograph enumeration and certified graph families used as fixtures."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .errors import InstanceTooLarge, MalformedInput
from .freeness import Cotree, cotree
from .graph import (Graph, complete_graph, components, disjoint_union, empty_graph, join,
                    union_all)
from .metrics import INF, ToughnessCertificate, toughness

MAX_ENUM_N = 8

# Unlabelled cotree shapes: () is a single vertex, ("u", kids) / ("j", kids)
# with kids a sorted tuple of shapes of the opposite kind.


def _size(shape) -> int:
    if shape == ():
        return 1
    return sum(_size(k) for k in shape[1])


def _multisets(pool: list, total: int, min_parts: int):
    """Nondecreasing tuples from pool (indexed) whose sizes sum to total."""
    sizes = [_size(p) for p in pool]

    def rec(start: int, remaining: int, acc: list):
        if remaining == 0:
            if len(acc) >= min_parts:
                yield tuple(acc)
            return
        for i in range(start, len(pool)):
            if sizes[i] <= remaining:
                acc.append(pool[i])
                yield from rec(i, remaining - sizes[i], acc)
                acc.pop()

    yield from rec(0, total, [])


@lru_cache(maxsize=None)
def _shapes(n: int, root: str) -> tuple:
    """All shapes on n vertices whose root is not `root` ("u" or "j")."""
    if n == 1:
        return ((),)
    other = "j" if root == "u" else "u"
    out = []
    # a root of kind `other`, children rooted in anything but `other`
    pool = []
    for m in range(1, n):
        pool.extend(_shapes(m, other))
    for kids in _multisets(pool, n, 2):
        out.append((other, tuple(sorted(kids, key=repr))))
    return tuple(out)


def _shape_graph(shape) -> Graph:
    if shape == ():
        return empty_graph(1)
    parts = [_shape_graph(k) for k in shape[1]]
    acc = parts[0]
    for p in parts[1:]:
        acc = disjoint_union(acc, p) if shape[0] == "u" else join(acc, p)
    return acc


def enumerate_cographs(n: int) -> Iterator[Graph]:
    """Every unlabelled cograph on n vertices exactly once."""
    if n > MAX_ENUM_N:
        raise InstanceTooLarge(f"cograph enumeration limited to n <= {MAX_ENUM_N}", size=n, cap=MAX_ENUM_N)
    if n < 1:
        return
    if n == 1:
        yield empty_graph(1)
        return
    seen = set()
    for root in ("u", "j"):
        for shape in _shapes(n, root):
            if shape in seen:
                continue
            seen.add(shape)
            yield _shape_graph(shape)


def random_cograph(n: int, rng: random.Random, p_join: float = 0.5) -> Graph:
    def build(m: int, kind: str | None) -> Graph:
        if m == 1:
            return empty_graph(1)
        if kind is None:
            kind = "j" if rng.random() < p_join else "u"
        parts = rng.randint(2, min(m, 4))
        cuts = sorted(rng.sample(range(1, m), parts - 1))
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [m])]
        nxt = "u" if kind == "j" else "j"
        pieces = [build(sz, nxt) for sz in sizes]
        acc = pieces[0]
        for p in pieces[1:]:
            acc = join(acc, p) if kind == "j" else disjoint_union(acc, p)
        return acc

    g = build(n, None)
    perm = list(range(n))
    rng.shuffle(perm)
    return relabel(g, perm)


def relabel(g: Graph, perm: list[int]) -> Graph:
    """Vertex v of g becomes perm[v]."""
    return Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges()])


def complete_multipartite(sizes: list[int]) -> Graph:
    acc = empty_graph(0)
    for s in sizes:
        acc = join(acc, empty_graph(s))
    return acc


def clique_join(s: int, parts: list[int]) -> Graph:
    """K_s joined to the disjoint union of cliques K_{a_1}, ..., K_{a_c}."""
    return join(complete_graph(s), union_all(complete_graph(a) for a in parts))


def clique_join_graph(s: int, h: Graph) -> Graph:
    return join(complete_graph(s), h)


def attached_instance(s_size: int, pieces: list, rng: random.Random,
                      p_inside: float = 1.0, p_cross: float = 1.0) -> tuple[Graph, int]:
    """A host set S = {0..s_size-1} plus pieces hanging off it.

    A piece is a Graph or an int (a random cograph of that order). Edges
    inside S appear with probability p_inside, S-to-piece edges with
    p_cross. Returns (graph, mask of S).
    """
    body = union_all(p if isinstance(p, Graph) else random_cograph(p, rng) for p in pieces)
    n = s_size + body.n
    edges = [(i, j) for i in range(s_size) for j in range(i + 1, s_size) if rng.random() < p_inside]
    edges += [(s_size + u, s_size + v) for u, v in body.edges()]
    edges += [(i, s_size + v) for i in range(s_size) for v in range(body.n) if rng.random() < p_cross]
    return Graph.from_edges(n, edges), (1 << s_size) - 1


FAMILIES = ("complete", "complete-multipartite", "clique-join", "random-cograph", "clique-join-cograph")


@dataclass
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def describe(self) -> str:
        return f"{self.family}({self.params}, seed={self.seed})"


@dataclass
class Generated:
    graph: Graph
    spec: FamilySpec
    toughness: ToughnessCertificate
    method: str
    tree: Cotree


def _clique_join_certificate(s: int, parts: list[int]) -> ToughnessCertificate:
    c = len(parts)
    if c <= 1:
        return ToughnessCertificate(INF, None)
    return ToughnessCertificate(Fraction(s, c), (1 << s) - 1, c)


def generate(spec: FamilySpec) -> Generated:
    fam = spec.family
    p = spec.params
    rng = random.Random(spec.seed)
    try:
        if fam == "complete":
            g = complete_graph(int(p["n"]))
            cert, method = ToughnessCertificate(INF, None), "formula"
        elif fam == "complete-multipartite":
            sizes = [int(x) for x in p["sizes"]]
            g = complete_multipartite(sizes)
            cert, method = toughness(g), "cotree"
        elif fam == "clique-join":
            s = int(p["s"])
            parts = [int(x) for x in p["parts"]]
            if s < 0 or any(a < 1 for a in parts):
                raise MalformedInput("clique-join needs s >= 0 and positive part sizes")
            g = clique_join(s, parts)
            cert, method = _clique_join_certificate(s, parts), "formula"
        elif fam == "random-cograph":
            g = random_cograph(int(p["n"]), rng, float(p.get("p_join", 0.5)))
            cert, method = toughness(g), "cotree"
        elif fam == "clique-join-cograph":
            h = random_cograph(int(p["h"]), rng, float(p.get("p_join", 0.5)))
            g = clique_join_graph(int(p["s"]), h)
            cert, method = toughness(g), "cotree"
        else:
            raise MalformedInput(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedInput(f"bad parameters for {fam}: {exc}") from exc
    if g.n == 0:
        raise MalformedInput("generated graph is empty")
    tree = cotree(g)
    assert isinstance(tree, Cotree)
    return Generated(g, spec, cert, method, tree)


def clique_join_components(h: Graph) -> int:
    return len(components(h))
