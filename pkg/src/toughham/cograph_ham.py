"""Constructive Hamiltonicity for P4-free graphs.

Everything is driven by a maximum-cardinality scattering set S:

* s(G) >= 1: cover each component of G - S by one Hamiltonian path, then
  re-add the vertices of S one minimal element at a time; each one is
  complete to G - S and links two paths.
* s(G) = 0: delete a minimal element x, cover G - x by a single path whose
  ends lie outside S, and close the cycle through x.
* s(G) < 0: a (u, v)-path is u followed by a (w, v)-path of G - u, which is
  either again Hamiltonian-connected or has scattering number 0 and is handled
  by the relative construction in `ham_connected_wrt`.

Every adjacency a step depends on is checked; a missing one raises
HypothesisViolation instead of producing an invalid path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

from .errors import HypothesisViolation, Infeasible, MalformedInput
from .freeness import Cotree, complete_bipartition, cotree
from .graph import (Graph, as_mask, components, induced, is_path, iter_bits, lift_mask, lowest,
                    members)
from .metrics import NEG_INF, ScatteringCertificate, minimal_element, scattering

CHECK_LEMMAS = False


@dataclass
class PathCoverResult:
    paths: list
    scattering: object
    scattering_set: list
    honored: dict = field(default_factory=dict)


def _require_p4_free(g: Graph) -> None:
    tree = cotree(g) if g.n else None
    if tree is not None and not isinstance(tree, Cotree):
        raise MalformedInput("graph contains an induced P4", witness=tree.to_dict())


def _missing(a: int, b: int, claim: str):
    return HypothesisViolation("missing-adjacency", f"expected edge {a}-{b} ({claim})",
                               witness={"pair": [a, b]}, claim=claim)


class _Builder:
    """Recursive constructions on vertex subsets of one host graph."""

    def __init__(self, g: Graph):
        self.g = g
        self._scat: dict[int, tuple] = {}

    # -- helpers on subsets -------------------------------------------------

    def scat(self, within: int) -> tuple:
        """(value, witness in host ids or None) for g[within]."""
        hit = self._scat.get(within)
        if hit is None:
            h, ids = induced(self.g, within)
            cert = scattering(h)
            wit = None if cert.witness is None else lift_mask(cert.witness, ids)
            hit = (cert.value, wit)
            self._scat[within] = hit
        return hit

    def min_elem(self, within: int, s: int, prefer: bool) -> tuple[int, int]:
        h, ids = induced(self.g, within)
        index = {old: new for new, old in enumerate(ids)}
        x, cut = minimal_element(h, as_mask(index[v] for v in iter_bits(s)), prefer_s_neighbor=prefer)
        return ids[x], lift_mask(cut, ids)

    def is_clique(self, within: int) -> bool:
        return all(self.g.adj[v] & within == within & ~(1 << v) for v in iter_bits(within))

    def comps(self, within: int) -> list[int]:
        return components(self.g, self.g.vertices & ~within)

    def edge(self, a: int, b: int, claim: str) -> None:
        if not self.g.has_edge(a, b):
            raise _missing(a, b, claim)

    # -- s <= 0 --------------------------------------------------------------

    def ham_cycle(self, within: int) -> list[int]:
        if within.bit_count() < 3:
            raise MalformedInput("a cycle needs at least three vertices")
        if self.is_clique(within):
            return members(within)
        value, wit = self.scat(within)
        if value > 0:
            raise HypothesisViolation("scattering-structure", "cycle requested with s > 0",
                                      witness={"set": members(wit), "value": value})
        if value == 0:
            x, _ = self.min_elem(within, wit, prefer=False)
            self._check_complete(x, within & ~wit, "minimal element complete to G-S")
            paths = self.cover(within & ~(1 << x), wit & ~(1 << x), None)
            if len(paths) != 1:
                raise HypothesisViolation("scattering-structure", "deleting a minimal element did not give one path",
                                          witness={"paths": paths})
            p = paths[0]
            self.edge(x, p[0], "cycle closure")
            self.edge(x, p[-1], "cycle closure")
            return p + [x]
        u = lowest(within)
        v = lowest(self.g.adj[u] & within)
        return self.ham_connected(within, u, v)

    def path_from(self, within: int, start: int | None) -> list[int]:
        """Hamiltonian path of g[within] (s <= 0) starting at start."""
        if start is None:
            start = lowest(within)
        if within.bit_count() == 1:
            return [start]
        if within.bit_count() == 2:
            other = lowest(within & ~(1 << start))
            self.edge(start, other, "two-vertex component")
            return [start, other]
        cyc = self.ham_cycle(within)
        i = cyc.index(start)
        return cyc[i:] + cyc[:i]

    def ham_connected(self, within: int, u: int, v: int) -> list[int]:
        """Hamiltonian (u, v)-path when s(g[within]) < 0."""
        g = self.g
        if self.is_clique(within):
            return [u] + members(within & ~(1 << u) & ~(1 << v)) + [v]
        rest = within & ~(1 << u)
        if rest == 1 << v:
            self.edge(u, v, "two vertices")
            return [u, v]
        nbrs = g.adj[u] & rest
        if self.is_clique(rest):
            cand = nbrs & ~(1 << v)
            if not cand:
                raise _missing(u, lowest(rest & ~(1 << v)), "neighbour of u in G-u")
            w = lowest(cand)
            return [u, w] + members(rest & ~(1 << w) & ~(1 << v)) + [v]
        value, wit = self.scat(rest)
        if value < 0:
            cand = nbrs & ~(1 << v)
            if not cand:
                raise _missing(u, v, "u has a second neighbour")
            return [u] + self.ham_connected(rest, lowest(cand), v)
        if value > 0:
            raise HypothesisViolation("scattering-structure", "deleting u raised s above 0",
                                      witness={"set": members(wit), "value": value})
        h, ids = induced(g, rest)
        parts = complete_bipartition(h)
        if parts is not None and parts[0].bit_count() == parts[1].bit_count():
            side_a, side_b = (lift_mask(p, ids) for p in parts)
            other = side_b if side_a >> v & 1 else side_a
            cand = nbrs & other
            if not cand:
                raise _missing(u, lowest(other), "neighbour across the bipartition")
            return [u] + self.bipartite_path(side_a, side_b, lowest(cand), v)
        if wit >> v & 1:
            cand = nbrs & ~wit
        else:
            cand = nbrs & ~(1 << v)
        if not cand:
            raise _missing(u, v, "suitable neighbour of u")
        return [u] + self.wrt(rest, wit, lowest(cand), v)

    def bipartite_path(self, side_a: int, side_b: int, a: int, b: int) -> list[int]:
        """(a, b)-path in a balanced complete bipartite graph, a and b on opposite sides."""
        if side_b >> a & 1:
            side_a, side_b = side_b, side_a
        xs = [a] + members(side_a & ~(1 << a))
        ys = members(side_b & ~(1 << b)) + [b]
        out = []
        for p, q in zip(xs, ys):
            out += [p, q]
        return out

    def _check_complete(self, x: int, target: int, claim: str) -> None:
        gap = target & ~self.g.adj[x] & ~(1 << x)
        if gap:
            raise _missing(x, lowest(gap), claim)

    # -- s >= 1 --------------------------------------------------------------

    def cover(self, within: int, s: int, v1: int | None) -> list[list[int]]:
        """max{1, s} paths covering g[within], ends outside s, v1 (not in s) an end."""
        parts = self.comps(within)
        if len(parts) >= 2:
            out = []
            for comp in parts:
                local = s & comp
                anchor = v1 if v1 is not None and comp >> v1 & 1 else None
                if local:
                    paths = self.cover(comp, local, anchor)
                else:
                    value, wit = self.scat(comp)
                    if value != NEG_INF and value > 0:
                        raise HypothesisViolation(
                            "scattering-structure", "component outside the scattering set has s > 0",
                            witness={"component": members(comp), "set": members(wit)}, claim="scattering-lemma(2)")
                    paths = [self.path_from(comp, anchor)]
                if anchor is not None:
                    out = paths + out
                else:
                    out.extend(paths)
            return out
        if not s:
            raise HypothesisViolation("scattering-structure", "connected piece without scattering vertices",
                                      witness={"piece": members(within)})
        c = len(self.comps(within & ~s))
        if c - s.bit_count() < 1:
            raise HypothesisViolation("scattering-structure", "scattering value below 1 in cover",
                                      witness={"set": members(s), "components": c})
        x, _ = self.min_elem(within, s, prefer=False)
        self._check_complete(x, within & ~s, "minimal element complete to G-S")
        paths = self.cover(within & ~(1 << x), s & ~(1 << x), v1)
        if len(paths) < 2:
            raise HypothesisViolation("scattering-structure", "too few paths to link", witness={"paths": paths})
        first, second = paths[0], paths[1]
        if v1 is not None and first[-1] == v1 and len(first) > 1:
            first = first[::-1]
        self.edge(first[-1], x, "link through minimal element")
        if not self.g.has_edge(x, second[0]):
            second = second[::-1]
        self.edge(x, second[0], "link through minimal element")
        return [first + [x] + second] + paths[2:]

    # -- relative Hamiltonian-connectedness (s = 0) ----------------------------

    def wrt(self, within: int, s: int, u: int, v: int) -> list[int]:
        if u == v:
            raise MalformedInput("endpoints must differ")
        if s >> u & 1:
            if s >> v & 1:
                raise HypothesisViolation("scattering-structure", "both endpoints in the scattering set",
                                          witness={"u": u, "v": v})
            return self.wrt(within, s, v, u)[::-1]
        g = self.g
        if within.bit_count() == 4:
            for order in permutations(members(within & ~(1 << u) & ~(1 << v))):
                cand = [u, *order, v]
                if is_path(g, cand):
                    return cand
            raise HypothesisViolation("missing-adjacency", "four-vertex base case has no path",
                                      witness={"u": u, "v": v}, claim="base-case")
        x, _ = self.min_elem(within, s, prefer=True)
        outside = within & ~s
        self._check_complete(x, outside, "minimal element complete to G-S")
        sub = within & ~(1 << x)
        sub_s = s & ~(1 << x)
        paths = self.cover(sub, sub_s, u)
        if len(paths) != 1 or u not in (paths[0][0], paths[0][-1]):
            raise HypothesisViolation("scattering-structure", "G-x is not covered by one path ending at u",
                                      witness={"paths": paths})
        p = paths[0] if paths[0][0] == u else paths[0][::-1]
        w = p[-1]
        comp_of = {}
        for idx, comp in enumerate(self.comps(outside)):
            for y in iter_bits(comp):
                comp_of[y] = idx
        if w == v:
            return self._insert(p, x, s, comp_of)
        if v == x:
            self.edge(w, x, "endpoint adjacent to x")
            return p + [x]
        i = p.index(v)
        v1 = p[i - 1]
        tail = p[i:][::-1]
        if not sub_s >> v1 & 1 or g.has_edge(x, v1):
            self.edge(v1, x, "predecessor of v adjacent to x")
            self.edge(x, w, "x adjacent to far endpoint")
            return p[:i] + [x] + tail
        # v1 is then a minimal element as well, hence complete to G - S
        self.edge(v1, w, "rerouted predecessor adjacent to far endpoint")
        return self._insert(p[:i] + tail, x, s, comp_of)

    def _insert(self, p: list[int], x: int, s: int, comp_of: dict) -> list[int]:
        g = self.g
        for i in range(len(p) - 1):
            a, b = p[i], p[i + 1]
            if a in comp_of and b in comp_of and comp_of[a] == comp_of[b]:
                self.edge(x, a, "insert between component neighbours")
                self.edge(x, b, "insert between component neighbours")
                return p[:i + 1] + [x] + p[i + 1:]
        for i, y in enumerate(p):
            if not (s >> y & 1) or not g.has_edge(x, y):
                continue
            for j in (i - 1, i + 1):
                if 0 <= j < len(p) and p[j] in comp_of:
                    z = p[j]
                    self.edge(x, z, "insert next to an S-neighbour")
                    lo = min(i, j)
                    return p[:lo + 1] + [x] + p[lo + 1:]
        raise HypothesisViolation("missing-adjacency", f"no insertion point for {x}",
                                  witness={"vertex": x, "path": p}, claim="insertion")


def _certificate(g: Graph) -> ScatteringCertificate:
    return scattering(g)


def jung_ham_path(g: Graph) -> list[int]:
    _require_p4_free(g)
    if g.n == 0:
        raise MalformedInput("empty graph")
    cert = _certificate(g)
    if cert.value != NEG_INF and cert.value > 1:
        raise Infeasible(f"s(G) = {cert.value} > 1", cert)
    b = _Builder(g)
    if cert.value != NEG_INF and cert.value == 1:
        path = b.cover(g.vertices, cert.witness, None)[0]
    else:
        path = b.path_from(g.vertices, None)
    assert len(path) == g.n and is_path(g, path)
    return path


def jung_ham_cycle(g: Graph) -> list[int]:
    _require_p4_free(g)
    if g.n < 3:
        raise MalformedInput("a Hamiltonian cycle needs at least three vertices")
    cert = _certificate(g)
    if cert.value != NEG_INF and cert.value > 0:
        raise Infeasible(f"s(G) = {cert.value} > 0", cert)
    cyc = _Builder(g).ham_cycle(g.vertices)
    assert len(cyc) == g.n and is_path(g, cyc) and g.has_edge(cyc[0], cyc[-1])
    return cyc


def jung_ham_connected(g: Graph, u: int, v: int) -> list[int]:
    _require_p4_free(g)
    if u == v or not (0 <= u < g.n and 0 <= v < g.n):
        raise MalformedInput("need two distinct vertices of the graph")
    cert = _certificate(g)
    if cert.value != NEG_INF and cert.value >= 0:
        raise Infeasible(f"s(G) = {cert.value} >= 0; no uniform guarantee", cert)
    path = _Builder(g).ham_connected(g.vertices, u, v)
    assert len(path) == g.n and is_path(g, path) and path[0] == u and path[-1] == v
    return path


def jung_path_cover(g: Graph, v1: int | None = None, v2: int | None = None) -> PathCoverResult:
    _require_p4_free(g)
    if g.n == 0:
        raise MalformedInput("empty graph")
    if v1 is not None and v2 is not None and v1 == v2:
        raise MalformedInput("v1 and v2 must differ")
    cert = _certificate(g)
    s = cert.value
    wit = cert.witness or 0
    b = _Builder(g)
    honored = {}
    if s != NEG_INF and s >= 1:
        anchor = v1 if v1 is not None and not wit >> v1 & 1 else None
        paths = b.cover(g.vertices, wit, anchor)
    elif s != NEG_INF and s == 0:
        paths = [b.path_from(g.vertices, v1)]
    else:
        if v1 is not None and v2 is not None:
            paths = [b.ham_connected(g.vertices, v1, v2)]
        else:
            paths = [b.path_from(g.vertices, v1)]
    ends = {p[0] for p in paths} | {p[-1] for p in paths}
    if v1 is not None:
        honored["v1_endvertex"] = v1 in ends
    if v2 is not None:
        honored["v2_endvertex"] = v2 in ends
        if v1 is not None:
            honored["v1_v2_path"] = len(paths) == 1 and {paths[0][0], paths[0][-1]} == {v1, v2}
    expected = 1 if s == NEG_INF or s <= 1 else s
    assert len(paths) == expected
    return PathCoverResult(paths, s, members(wit), honored)


def ham_connected_wrt(g: Graph, s, u: int, v: int) -> list[int]:
    """Hamiltonian (u, v)-path for s(G) = 0 with at most one of u, v in s."""
    _require_p4_free(g)
    s = as_mask(s)
    if u == v or not (0 <= u < g.n and 0 <= v < g.n):
        raise MalformedInput("need two distinct vertices of the graph")
    cert = _certificate(g)
    if cert.value == NEG_INF or cert.value != 0:
        raise HypothesisViolation("scattering-structure", f"s(G) = {cert.value}, expected 0",
                                  witness={"value": str(cert.value)})
    comps = len(components(g, s))
    if comps < 2 or comps - s.bit_count() != 0 or s.bit_count() != cert.witness.bit_count():
        raise HypothesisViolation("scattering-structure", "s is not a maximum scattering set",
                                  witness={"set": members(s)})
    parts = complete_bipartition(g)
    if parts is not None and parts[0].bit_count() == parts[1].bit_count():
        raise HypothesisViolation("scattering-structure", "graph is balanced complete bipartite",
                                  witness={"sides": [members(parts[0]), members(parts[1])]})
    if s >> u & 1 and s >> v & 1:
        raise HypothesisViolation("scattering-structure", "both endpoints lie in s",
                                  witness={"u": u, "v": v})
    path = _Builder(g).wrt(g.vertices, s, u, v)
    if not (len(path) == g.n and is_path(g, path) and path[0] == u and path[-1] == v):
        raise HypothesisViolation("missing-adjacency", "construction produced an invalid path",
                                  witness={"path": path})
    return path


def maximum_scattering_sets(g: Graph) -> list[int]:
    """All scattering sets of maximum cardinality (exhaustive; small graphs)."""
    cert = scattering(g)
    if cert.witness is None:
        return []
    size = cert.witness.bit_count()
    out = []
    for combo in combinations(range(g.n), size):
        m = as_mask(combo)
        c = len(components(g, m))
        if c >= 2 and c - size == cert.value:
            out.append(m)
    return out
