"""Cycle construction: covering cycles, insertion steps, and the top-level
Hamiltonian cycle driver for tough (P4 + P1)-free graphs.

Every step records what it did in a transcript (a list of dicts) so that a
caller can see which route produced the final cycle.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import networkx as nx

from .errors import HypothesisViolation, Infeasible, InstanceTooLarge, MalformedInput, SearchExhausted
from .freeness import complete_bipartition, find_induced_p4, find_induced_p4_union_p1
from .graph import (Graph, as_mask, components, first_bad_edge, induced, is_cycle, is_path, iter_bits,
                    lift_mask, lowest, members, popcount)
from .metrics import (DEFAULT_CAP, INF, NEG_INF, is_minimal_cutset, minimal_cutset_within, minimal_element,
                      parse_rational, require_t_tough_wrt, scattering, toughness)
from .path_covers import (component_ham_path, insert_into_sequence, merge_within,
                          s_matched_basic_cover, single_component_cover)

CYCLE_BUDGET = int(os.environ.get("TOUGHHAM_CYCLE_BUDGET", "10000000"))


class _Budget:
    def __init__(self, limit: int, what: str):
        self.left = limit
        self.used = 0
        self.what = what

    def tick(self) -> None:
        self.used += 1
        if self.used > self.left:
            raise SearchExhausted(f"{self.what} exceeded its node budget", {"nodes": self.used})


def _forced_masks(g: Graph, edges) -> list[int]:
    forced = [0] * g.n
    for a, b in edges:
        if not g.has_edge(a, b):
            raise MalformedInput("prescribed edge is not an edge of the graph", witness={"edge": [a, b]})
        forced[a] |= 1 << b
        forced[b] |= 1 << a
    if any(popcount(m) > 2 for m in forced):
        raise MalformedInput("prescribed edges do not form a linear forest")
    seen = 0
    for v in range(g.n):
        # a cycle among the prescribed edges shows up as a component without an end
        if forced[v] and not seen >> v & 1:
            comp, stack, ends = 0, [v], 0
            while stack:
                x = stack.pop()
                if comp >> x & 1:
                    continue
                comp |= 1 << x
                ends += popcount(forced[x]) == 1
                stack.extend(iter_bits(forced[x] & ~comp))
            seen |= comp
            if ends == 0:
                raise MalformedInput("prescribed edges contain a cycle")
    return forced


def _deep_enough(n: int) -> None:
    if sys.getrecursionlimit() < 4 * n + 200:
        sys.setrecursionlimit(4 * n + 200)


def _reach(g: Graph, start: int, within: int) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & within & ~seen
        seen |= frontier
    return seen


def ham_cycle_through_forest(g: Graph, forest=(), budget: int = CYCLE_BUDGET) -> list[int]:
    """Hamiltonian cycle of g using every edge of the linear forest `forest`.

    Depth-first search: prescribed edges are followed as soon as one of
    their ends is reached, and the unvisited part must stay connected with
    at least two usable neighbours per vertex.  Raises Infeasible when the
    search space is exhausted and SearchExhausted when the budget runs out.
    """
    n = g.n
    if n < 3:
        raise Infeasible("fewer than three vertices", {"exhaustive": True})
    forced = _forced_masks(g, forest)
    full = g.vertices
    ends = [v for v in range(n) if popcount(forced[v]) == 1]
    start = ends[0] if ends else min(range(n), key=lambda v: (g.degree(v), v))
    clock = _Budget(budget, "Hamiltonian cycle search")
    order = [start]
    _deep_enough(n)

    def viable(cur: int, visited: int) -> bool:
        rest = full & ~visited
        if not rest:
            return True
        ports = rest | (1 << cur) | (1 << start)
        for w in iter_bits(rest):
            if popcount(g.adj[w] & ports) < 2:
                return False
        if not g.adj[start] & rest:
            return False
        return _reach(g, cur, rest | (1 << cur)) & rest == rest

    def step(cur: int, visited: int) -> bool:
        clock.tick()
        if visited == full:
            return g.has_edge(cur, start) and not (forced[start] & ~visited)
        pending = forced[cur] & ~visited
        if pending:
            cands = [next(iter_bits(pending))]
        else:
            cands = [w for w in iter_bits(g.adj[cur] & ~visited)
                     if not forced[w] & visited and popcount(forced[w]) < 2]
            rest = full & ~visited
            cands.sort(key=lambda w: (popcount(g.adj[w] & rest), w))
        for w in cands:
            seen = visited | (1 << w)
            if not viable(w, seen):
                continue
            order.append(w)
            if step(w, seen):
                return True
            order.pop()
        return False

    if step(start, 1 << start):
        return list(order)
    raise Infeasible("no Hamiltonian cycle through the prescribed edges",
                     {"exhaustive": True, "nodes": clock.used})


def cycle_through_edges(g: Graph, edges, budget: int = CYCLE_BUDGET) -> list[int]:
    """A cycle of g (any length) that uses every edge in `edges`."""
    edges = [tuple(e) for e in edges]
    forced = _forced_masks(g, edges)
    need = as_mask(v for e in edges for v in e)
    clock = _Budget(budget, "cycle search")
    if not edges:
        for a in range(g.n):
            for b, c in combinations(iter_bits(g.adj[a]), 2):
                if g.has_edge(b, c):
                    return [a, b, c]
        # a shortest cycle through the lowest vertex that lies on one
        for a in range(g.n):
            for b in iter_bits(g.adj[a]):
                back = _shortest(g, b, a, g.vertices, skip=(b, a))
                if back is not None:
                    return [a] + back[:-1]
        raise Infeasible("the graph is a forest", {"exhaustive": True})
    ends = [v for v in iter_bits(need) if popcount(forced[v]) == 1]
    start = ends[0]
    full = g.vertices
    order = [start]
    _deep_enough(g.n)

    def distances(visited: int, targets: int) -> dict:
        free = full & ~visited
        dist, frontier, d = {}, targets & free, 0
        seen = frontier
        while frontier:
            for v in iter_bits(frontier):
                dist[v] = d
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & free & ~seen
            seen |= frontier
            d += 1
        return dist

    def step(cur: int, visited: int) -> bool:
        clock.tick()
        pending = forced[cur] & ~visited
        if not pending and not need & ~visited:
            if len(order) >= 3 and g.has_edge(cur, start):
                return True
        if pending:
            cands = [next(iter_bits(pending))]
        else:
            todo = need & ~visited
            cands = [w for w in iter_bits(g.adj[cur] & ~visited)
                     if not forced[w] & visited and popcount(forced[w]) < 2]
            if todo:
                reach = _reach(g, cur, (full & ~visited) | (1 << cur))
                if todo & ~reach or not (g.adj[start] & reach & ~visited):
                    return False
                dist = distances(visited, todo)
            else:
                dist = distances(visited, g.adj[start])
            cands = [w for w in cands if w in dist]
            cands.sort(key=lambda w: (dist[w], w))
        for w in cands:
            order.append(w)
            if step(w, visited | (1 << w)):
                return True
            order.pop()
        return False

    if step(start, 1 << start):
        return list(order)
    raise Infeasible("no cycle through the prescribed edges", {"exhaustive": True, "nodes": clock.used})


def _shortest(g: Graph, a: int, b: int, within: int, skip=None) -> list[int] | None:
    """Shortest (a, b)-path inside `within`; `skip` is an edge not to use first."""
    prev = {a: None}
    frontier = [a]
    while frontier:
        nxt = []
        for v in frontier:
            for w in iter_bits(g.adj[v] & within):
                if w in prev or (skip is not None and (v, w) == skip):
                    continue
                prev[w] = v
                if w == b:
                    out = [b]
                    while prev[out[-1]] is not None:
                        out.append(prev[out[-1]])
                    return out[::-1]
                nxt.append(w)
        frontier = nxt
    return None


# ---------------------------------------------------------------------------
# the auxiliary graph on S-ends


@dataclass
class AuxEndpointGraph:
    """Graph on the 2k S-ends of a cover: vertex 2i is paths[i][0], 2i + 1 is paths[i][-1].

    Two ends of different paths are adjacent when one of them sees the
    partner of the other in g; each path contributes the edge (2i, 2i + 1).
    """

    paths: list
    graph: Graph

    @classmethod
    def build(cls, g: Graph, paths) -> "AuxEndpointGraph":
        paths = [tuple(p) for p in paths]
        ends, partner = cls._tables(paths)
        edges = [(2 * i, 2 * i + 1) for i in range(len(paths))]
        for a, b in combinations(range(len(ends)), 2):
            if a // 2 != b // 2 and (g.has_edge(ends[a], partner[b]) or g.has_edge(ends[b], partner[a])):
                edges.append((a, b))
        return cls(paths, Graph.from_edges(len(ends), edges))

    @staticmethod
    def _tables(paths):
        ends, partner = [], []
        for p in paths:
            ends += [p[0], p[-1]]
            partner += [p[1], p[-2]]
        return ends, partner

    @property
    def k(self) -> int:
        return len(self.paths)

    def matching(self) -> list[tuple[int, int]]:
        return [(2 * i, 2 * i + 1) for i in range(self.k)]

    def end(self, a: int) -> int:
        p = self.paths[a // 2]
        return p[0] if a % 2 == 0 else p[-1]

    def degree_defect(self):
        """None when delta >= 2k - 3 and every degree-(2k - 3) vertex misses
        exactly the two ends of one path; otherwise the offending vertex."""
        k = self.k
        for a in range(2 * k):
            deg = self.graph.degree(a)
            if deg < 2 * k - 3:
                return a
            if deg == 2 * k - 3:
                miss = self.graph.vertices & ~self.graph.adj[a] & ~(1 << a)
                if not _is_pair(miss):
                    return a
        return None

    def translate(self, g: Graph, order: list[int]) -> tuple[list[int], list[int]]:
        """Turn a cycle of this graph through all 2k ends into (cycle, path) of g."""
        ends, partner = self._tables(self.paths)
        m = len(order)
        shift = next(i for i in range(m) if order[i] // 2 == order[(i + 1) % m] // 2
                     and order[i] != order[(i + 1) % m])
        order = order[shift:] + order[:shift]
        blocks = []
        for j in range(0, m, 2):
            a = order[j]
            p = self.paths[a // 2]
            blocks.append(p if a % 2 == 0 else p[::-1])
        k = len(blocks)
        keep_exit = []
        for j in range(k):
            q, nxt = blocks[j], blocks[(j + 1) % k]
            if g.has_edge(q[-1], nxt[1]):
                keep_exit.append(True)
            elif g.has_edge(nxt[0], q[-2]):
                keep_exit.append(False)
            else:
                raise HypothesisViolation("missing-adjacency", "auxiliary edge has no edge of g behind it",
                                          witness={"ends": [q[-1], nxt[0]]}, claim="aux-translation")

        def piece(j: int, head: bool, tail: bool) -> list[int]:
            q = blocks[j]
            return ([q[0]] if head else []) + list(q[1:-1]) + ([q[-1]] if tail else [])

        cycle, path = [], []
        for j in range(k):
            head = not keep_exit[j - 1]
            cycle += piece(j, head, keep_exit[j])
            path += piece(j, head or j == 0, keep_exit[j] or j == k - 1)
        return cycle, path


def _is_pair(mask: int) -> bool:
    lo = (mask & -mask).bit_length() - 1
    return lo % 2 == 0 and mask == 3 << lo


def _aux_cycle_k4(aux: AuxEndpointGraph) -> list[int] | None:
    """Explicit order for k = 4 when a 4-vertex cut leaves two path edges."""
    h = aux.graph
    for cut in combinations(range(8), 4):
        w = as_mask(cut)
        parts = components(h, w)
        pairs = [p for p in parts if _is_pair(p)]
        if len(parts) != 2 or len(pairs) != 2:
            continue
        inside = [i for i in range(4) if w >> (2 * i) & 1 and w >> (2 * i + 1) & 1]
        if len(inside) != 2:
            continue
        outside = [min(iter_bits(p)) // 2 for p in pairs]
        lineup = [inside[0], outside[0], inside[1], outside[1]]
        for flips in product((0, 1), repeat=4):
            order = []
            for i, f in zip(lineup, flips):
                order += [2 * i + 1, 2 * i] if f else [2 * i, 2 * i + 1]
            if is_cycle(h, order):
                return order
    return None


# ---------------------------------------------------------------------------
# a cycle through every vertex outside a cutset


@dataclass
class CoveringResult:
    cycle: list[int]
    path: list[int]
    transcript: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"cycle": self.cycle, "path": self.path, "transcript": self.transcript}


@dataclass
class _Block:
    d: int
    w: int = 0
    z: int | None = None
    sides: tuple | None = None
    used: bool = False

    def spare(self) -> int | None:
        return self.z if self.z is not None and not self.used else None


def _block(g: Graph, d: int, with_z: bool) -> _Block:
    h, ids = induced(g, d)
    cert = scattering(h)
    blk = _Block(d)
    if cert.value == NEG_INF or cert.value < 0:
        return blk
    parts = complete_bipartition(h)
    if parts is not None and popcount(parts[0]) == popcount(parts[1]):
        blk.sides = tuple(lift_mask(p, ids) for p in parts)
        return blk
    if with_z:
        blk.w = lift_mask(cert.witness, ids)
        z_local, _ = minimal_element(h, cert.witness)
        blk.z = ids[z_local]
    return blk


def _tough_enough(g: Graph, s: int, t, check: str, cap: int, claim: str) -> None:
    if check == "never" or (check == "auto" and g.n > cap):
        return
    try:
        require_t_tough_wrt(g, s, t, cap, allow_connected=True)
    except InstanceTooLarge:
        if check == "always":
            raise
    except HypothesisViolation as exc:
        exc.claim = exc.claim or claim
        raise


def _oriented(p):
    return (tuple(p), tuple(p)[::-1])


def _fit(g: Graph, seq, blk: _Block, closed: bool) -> list[int]:
    z = blk.spare()
    if z is None:
        return list(seq)
    out = insert_into_sequence(g, seq, blk.d, blk.w, z, closed)
    if out is None:
        raise HypothesisViolation("missing-adjacency", "no insertion point for a minimal element",
                                  witness={"z": z, "sequence": list(seq)}, claim="inserting")
    return list(out)


def _ends_complete(g: Graph, path, blocks: list[_Block], home: int) -> None:
    for x in (path[0], path[-1]):
        for j, blk in enumerate(blocks):
            if j != home and blk.d & ~g.adj[x]:
                miss = min(iter_bits(blk.d & ~g.adj[x]))
                raise HypothesisViolation("missing-adjacency", "S-end of a split component is not complete",
                                          witness={"pair": [x, miss]}, claim="H-min-degree0")


def _link(g: Graph, qa, qb, z: int) -> tuple:
    for pa in _oriented(qa):
        for pb in _oriented(qb):
            if g.has_edge(z, pa[-2]) and g.has_edge(z, pb[1]):
                return pa[:-1] + (z,) + pb[1:]
    raise HypothesisViolation("missing-adjacency", "minimal element misses the partners it should link",
                              witness={"z": z, "paths": [list(qa), list(qb)]}, claim="linking")


def _valid_pair(g: Graph, s: int, cycle, path) -> bool:
    rest = g.vertices & ~s
    return (len(cycle) >= 3 and is_cycle(g, cycle) and as_mask(cycle) & rest == rest
            and is_path(g, path) and as_mask(path) & rest == rest
            and s >> path[0] & 1 and s >> path[-1] & 1)


def cycle_covering_complement(g: Graph, s, check_toughness: str = "auto",
                              cap: int = DEFAULT_CAP) -> CoveringResult:
    """A cycle and an S-matched path of g, each through every vertex of g - s.

    s must be a minimal cutset and g must be (P4 + P1)-free.  With
    check_toughness "auto", 9/2-toughness relative to s is brute-checked when
    g is small enough.
    """
    s = as_mask(s)
    if not is_minimal_cutset(g, s):
        raise MalformedInput("s is not a minimal cutset", witness={"s": members(s)})
    wit = find_induced_p4_union_p1(g)
    if wit is not None:
        raise MalformedInput("graph contains an induced P4+P1", witness=wit.to_dict())
    _tough_enough(g, s, Fraction(9, 2), check_toughness, cap, "covering-cycle")
    parts = components(g, s)
    blocks = [_block(g, d, len(parts) <= 3) for d in parts]
    zmask = as_mask(b.z for b in blocks if b.z is not None)
    log = [{"step": "components", "count": len(parts), "removed": members(zmask)}]

    keep = g.vertices & ~zmask
    gstar, ids = induced(g, keep)
    back = {v: i for i, v in enumerate(ids)}
    inner = s_matched_basic_cover(gstar, as_mask(back[v] for v in iter_bits(s)), check_toughness, cap)
    paths = [tuple(ids[v] for v in p) for p in inner.paths]
    for blk in blocks:
        paths = merge_within(g, paths, blk.d, 1)
    for i, blk in enumerate(blocks):
        mine = [p for p in paths if as_mask(p) & blk.d]
        if len(mine) > 2:
            raise HypothesisViolation("scattering-structure", "component meets three paths after merging",
                                      witness={"component": members(blk.d)}, claim="H-min-degree0")
        if len(mine) == 2:
            for p in mine:
                _ends_complete(g, p, blocks, i)
            if len(parts) <= 3:
                if blk.z is None:
                    raise HypothesisViolation("scattering-structure",
                                              "split component has no minimal element to link through",
                                              witness={"component": members(blk.d)}, claim="H-min-degree0")
                linked = _link(g, mine[0], mine[1], blk.z)
                blk.used = True
                paths = [p for p in paths if p not in mine] + [linked]
                log.append({"step": "link", "component": i, "through": blk.z})
    paths.sort()
    aux = AuxEndpointGraph.build(g, paths)
    k = aux.k
    log.append({"step": "cover", "paths": [list(p) for p in paths], "k": k})
    bad = aux.degree_defect()
    if bad is not None:
        raise HypothesisViolation("degree-threshold", "auxiliary graph degree below 2k - 3",
                                  witness={"end": aux.end(bad), "degree": aux.graph.degree(bad), "k": k},
                                  claim="H-min-degree")
    order = None
    if k >= 4:
        conn = nx.node_connectivity(_nx(aux.graph))
        route = {"step": "aux-route", "k": k, "connectivity": conn}
        if k == 4 and conn < 5:
            order = _aux_cycle_k4(aux)
            route["route"] = "k4-cutset"
        if order is None:
            try:
                order = cycle_through_edges(aux.graph, aux.matching())
            except Infeasible:
                raise HypothesisViolation("degree-threshold", "no cycle through the path edges",
                                          witness={"k": k, "connectivity": conn},
                                          claim="cycle-through-ind-edges") from None
            route.setdefault("route", "aux-cycle")
        log.append(route)
    else:
        if k != len(parts):
            raise HypothesisViolation("scattering-structure", "k differs from the number of components",
                                      witness={"k": k, "components": len(parts)}, claim="Q-property")
        labels = None
        if k == 3:
            labels = _defect_labels(aux)
            if not labels:
                order = _aux_cycle_or_fail(aux, "three-components")
        elif any(b.used for b in blocks):
            order = _aux_cycle_or_fail(aux, "Q-property")
        if order is not None:
            log.append({"step": "aux-route", "k": k, "route": "aux-cycle"})
    if order is not None:
        cycle, path = aux.translate(g, order)
        for blk in blocks:
            cycle = _fit(g, cycle, blk, True)
            path = _fit(g, path, blk, False)
    else:
        home = [next(i for i, b in enumerate(blocks) if as_mask(p) & b.d) for p in paths]
        ordered = [blocks[h] for h in home]
        if k == 3:
            cycle, path, how = _three_components(g, paths, ordered, labels)
        else:
            cycle, path, how = _two_components(g, paths, ordered)
        log.append({"step": "aux-route", "k": k, "route": how})
    if not _valid_pair(g, s, cycle, path):
        raise RuntimeError("covering construction produced an invalid cycle or path")
    return CoveringResult(list(cycle), list(path), log)


def _nx(h: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(h.n))
    out.add_edges_from((a, b) for a in range(h.n) for b in iter_bits(h.adj[a]) if a < b)
    return out


def _ham_to(g: Graph, blk: _Block, seg, w: int) -> list[int]:
    """Path from w to seg[-1] through all of blk.d (and seg's off-block vertices)."""
    seg = list(seg)
    z = blk.spare()
    if w == seg[0] and z is None:
        return seg
    if z is None:
        return component_ham_path(g, blk.d, w, seg[-1])
    if w == z:
        out = [z] + seg
    elif w == seg[0]:
        out = insert_into_sequence(g, seg, blk.d, blk.w, z)
    else:
        if w not in seg or w == seg[-1]:
            raise MalformedInput("start vertex must be an inner vertex of the segment")
        i = seg.index(w)
        head, tail = seg[i::-1], seg[i + 1:]
        if g.has_edge(z, tail[0]):
            out = head + [z] + tail
        else:
            out = insert_into_sequence(g, head + tail, blk.d, blk.w, z)
    if out is None or first_bad_edge(g, out, False) is not None:
        raise HypothesisViolation("missing-adjacency", "rerouted segment is not a path",
                                  witness={"start": w, "segment": seg}, claim="case-construction")
    return list(out)


def _opposite(blk: _Block, a: int, b: int) -> bool:
    if blk.sides is None:
        return True
    return bool(blk.sides[0] >> a & 1) != bool(blk.sides[0] >> b & 1)


def _attempts(tries):
    """First successful (cycle, path, how) among the generated attempts."""
    first = None
    for attempt in tries:
        try:
            got = attempt()
        except (HypothesisViolation, MalformedInput, Infeasible) as exc:
            first = first or exc
            continue
        if got is not None:
            return got
    if isinstance(first, HypothesisViolation):
        raise first
    raise HypothesisViolation("missing-adjacency", "no case construction applies",
                              witness={"detail": str(first) if first else ""}, claim="case-construction")


def _aux_cycle_or_fail(aux: AuxEndpointGraph, claim: str) -> list[int]:
    try:
        return cycle_through_edges(aux.graph, aux.matching())
    except Infeasible:
        raise HypothesisViolation("degree-threshold", "no cycle through the path edges in the auxiliary graph",
                                  witness={"k": aux.k}, claim=claim) from None


def _defect_labels(aux: AuxEndpointGraph) -> list[tuple[int, int, int]]:
    """For k = 3: labellings (i, fi, j) where end 2i + fi misses both ends of
    path j in aux while the other end of path i does too.

    An empty list means the auxiliary graph already has the wanted cycle:
    either delta >= 4, or the partner end sees path j.
    """
    h = aux.graph
    if min(h.degree(a) for a in range(6)) >= 4:
        return []
    out = []
    for a in range(6):
        i, fi = divmod(a, 2)
        for j in range(3):
            if j != i and not h.adj[a] & (3 << (2 * j)):
                if h.adj[a ^ 1] & (3 << (2 * j)):
                    return []
                out.append((i, fi, j))
    return out


def _three_components(g: Graph, paths, blocks, labels):
    def make(i, fi, j, m, w2, rev2, rev3):
        def run():
            q1 = paths[i] if fi == 0 else paths[i][::-1]
            q2 = paths[j][::-1] if rev2 else paths[j]
            q3 = paths[m][::-1] if rev3 else paths[m]
            b1, b2, b3 = blocks[i], blocks[j], blocks[m]
            r2 = _ham_to(g, b2, q2[1:-1], w2)
            body = [q1[0]] + list(q1[1:-1]) + [q1[-1]] + r2 + [q2[-1]] + list(q3[1:-1])
            cycle, path = body, body + [q3[-1]]
            for b in (b1, b3):
                cycle = _fit(g, cycle, b, True)
                path = _fit(g, path, b, False)
            if is_cycle(g, cycle) and is_path(g, path):
                return cycle, path, "three-components"
            return None
        return run

    def tries():
        for i, fi, j in labels:
            m = 3 - i - j
            y1 = paths[i][-1] if fi == 0 else paths[i][0]
            b2 = blocks[j]
            ends2 = (paths[j][1], paths[j][-2])
            spare = b2.spare()
            cands = sorted(iter_bits(g.adj[y1] & b2.d),
                           key=lambda w: (w not in ends2, w != spare, w))
            for w2 in cands:
                for rev2, rev3 in product((False, True), repeat=2):
                    yield make(i, fi, j, m, w2, rev2, rev3)

    return _attempts(tries())


def _two_components(g: Graph, paths, blocks):
    def main(q1, q2, b1, b2, w1, w2):
        def run():
            r2 = _ham_to(g, b2, q2[1:-1], w2)
            r1 = _ham_to(g, b1, q1[1:-1], w1)
            path = _fit(g, [q1[0]] + list(q1[1:-1]) + [q1[-1]] + r2 + [q2[-1]], b1, False)
            cycle = r1 + [q1[-1]] + r2 + [q2[-1]]
            if is_cycle(g, cycle) and is_path(g, path):
                return cycle, path, "two-components"
            return None
        return run

    def bipartite(q1, q2, b1, b2, w, w_back):
        # the second component is a K_{m,m} that y1 reaches only on v2's side
        def run():
            path = [q1[-1]] + list(q1[-2:0:-1]) + [q1[0]] + component_ham_path(g, b2.d, w, q2[-2]) + [q2[-1]]
            cycle = [q1[0]] + list(q1[1:-1]) + [q1[-1]] + component_ham_path(g, b2.d, w_back, w)
            path = _fit(g, path, b1, False)
            cycle = _fit(g, cycle, b1, True)
            if is_cycle(g, cycle) and is_path(g, path):
                return cycle, path, "two-components-bipartite"
            return None
        return run

    def reverse_join(q1, q2, b1, b2):
        # y1 sees v2 and x1 sees u2: run through the second path backwards
        def run():
            r2 = list(q2[-2:0:-1])
            path = [q1[0]] + list(q1[1:-1]) + [q1[-1]] + r2 + [q2[0]]
            cycle = [q1[0]] + list(q1[1:-1]) + [q1[-1]] + r2
            for b in (b1, b2):
                path = _fit(g, path, b, False)
                cycle = _fit(g, cycle, b, True)
            if is_cycle(g, cycle) and is_path(g, path):
                return cycle, path, "two-components-reversed"
            return None
        return run

    def labellings():
        for first, f1, f2 in product((0, 1), repeat=3):
            i, j = (0, 1) if first == 0 else (1, 0)
            q1 = paths[i][::-1] if f1 else paths[i]
            q2 = paths[j][::-1] if f2 else paths[j]
            yield q1, q2, blocks[i], blocks[j]

    def rank(blk, q, w):
        return (w != blk.spare(), w != q[1], w)

    def tries():
        for q1, q2, b1, b2 in labellings():
            v1, v2 = q1[-2], q2[-2]
            c2 = [w for w in iter_bits(g.adj[q1[-1]] & b2.d) if w != v2 and _opposite(b2, w, v2)]
            c1 = [w for w in iter_bits(g.adj[q2[-1]] & b1.d) if w != v1 and _opposite(b1, w, v1)]
            c2.sort(key=lambda w: rank(b2, q2, w))
            c1.sort(key=lambda w: rank(b1, q1, w))
            for w2, w1 in product(c2, c1):
                yield main(q1, q2, b1, b2, w1, w2)
        for q1, q2, b1, b2 in labellings():
            if g.has_edge(q1[-1], q2[-2]) and g.has_edge(q1[0], q2[1]):
                yield reverse_join(q1, q2, b1, b2)
        for q1, q2, b1, b2 in labellings():
            if b2.sides is None:
                continue
            v2 = q2[-2]
            for w in iter_bits(g.adj[q1[0]] & b2.d):
                if not _opposite(b2, w, v2):
                    continue
                for w_back in iter_bits(g.adj[q1[-1]] & b2.d):
                    if _opposite(b2, w_back, w):
                        yield bipartite(q1, q2, b1, b2, w, w_back)

    return _attempts(tries())


# ---------------------------------------------------------------------------
# growing cycles


@dataclass
class HamiltonianCertificate:
    cycle: list[int]
    transcript: list[dict] = field(default_factory=list)

    def verify(self, g: Graph) -> bool:
        return len(self.cycle) == g.n and g.n >= 3 and is_cycle(g, self.cycle)

    def to_dict(self) -> dict:
        return {"cycle": self.cycle, "transcript": self.transcript}


def _frac(t) -> Fraction:
    t = parse_rational(t)
    if not isinstance(t, Fraction) or t <= 0:
        raise MalformedInput("t must be a positive rational", witness={"t": str(t)})
    return t


def _share(n: int, t: Fraction, times: int = 1) -> Fraction:
    """times * n / (t + 1)."""
    return Fraction(times * n) / (t + 1)


def _require_cycle(g: Graph, c) -> list[int]:
    c = list(c)
    if len(c) < 3 or not is_cycle(g, c):
        raise MalformedInput("not a cycle of the graph", witness={"cycle": c})
    return c


def _independent_violation(g: Graph, w: int, t: Fraction) -> HypothesisViolation:
    size = popcount(w)
    return HypothesisViolation(
        "toughness", "independent set too large for the toughness bound",
        witness={"independent_set": members(w), "cutset": members(g.vertices & ~w),
                 "components": size, "ratio": str(Fraction(g.n - size, size)), "t": str(t)})


def extend_cycle_insert(g: Graph, c, h, t) -> list[int]:
    """Grow cycle c by vertices of the connected set h (disjoint from c).

    Needs |N(h) on c| > n/(t+1) - 1.  Uses consecutive neighbours first, then
    a crossing pair of successors; if neither exists the successors plus one
    vertex of h form an independent set too large for t-toughness.
    """
    c = _require_cycle(g, c)
    h = as_mask(h)
    t = _frac(t)
    on_c = as_mask(c)
    if not h or h & on_c or _reach(g, lowest(h), h) != h:
        raise MalformedInput("h must be a nonempty connected set off the cycle", witness={"h": members(h)})
    seen = 0
    for v in iter_bits(h):
        seen |= g.adj[v]
    hits = [i for i, v in enumerate(c) if seen >> v & 1]
    k, m = len(hits), len(c)
    bound = _share(g.n, t) - 1
    if not k > bound:
        raise MalformedInput("too few neighbours on the cycle",
                             witness={"neighbours": k, "needs_more_than": str(bound)})

    def anchor(v: int) -> int:
        return lowest(g.adj[v] & h)

    def through(a: int, b: int) -> list[int]:
        return [a] if a == b else _shortest(g, a, b, h)

    if k >= 2:
        for idx, i in enumerate(hits):
            j = hits[(idx + 1) % k]
            if j == (i + 1) % m:
                ring = c[j:] + c[:j]  # v_{i+1} ... v_i
                return ring + through(anchor(c[i]), anchor(c[j]))
        for a, b in combinations(range(k), 2):
            i, j = hits[a], hits[b]
            if g.has_edge(c[(i + 1) % m], c[(j + 1) % m]):
                fwd = [c[(j + 1 + r) % m] for r in range((i - j - 1) % m + 1)]  # v_j^+ ... v_i
                back = [c[(j - r) % m] for r in range((j - i) % m)]  # v_j ... v_i^+
                return fwd + through(anchor(c[i]), anchor(c[j])) + back
    x = lowest(h)
    w = (1 << x) | as_mask(c[(i + 1) % m] for i in hits)
    for a in iter_bits(w):
        if g.adj[a] & w:
            raise RuntimeError("successor set is not independent")
    raise _independent_violation(g, w, t)



def _chain_failure(g: Graph, s: int, s0: list[int], t: Fraction):
    allowed = g.vertices & ~s
    bound = _share(g.n, t) - 1
    for x in s0:
        deg = popcount(g.adj[x] & allowed)
        if not deg > bound:
            return {"vertex": x, "degree": deg, "needs_more_than": str(bound)}
        allowed |= 1 << x
    return None


def cycle_with_ordered_insertions(g: Graph, s, s0, t, check_toughness: str = "auto",
                                  cap: int = DEFAULT_CAP, log: list | None = None) -> list[int]:
    """A cycle through g - s and every vertex of s0, inserted in the given order."""
    s = as_mask(s)
    s0 = list(s0)
    t = _frac(t)
    if len(set(s0)) != len(s0) or as_mask(s0) & ~s:
        raise MalformedInput("s0 must list distinct vertices of s", witness={"s0": s0})
    if len(components(g, s)) < 2:
        raise MalformedInput("s is not a cutset", witness={"s": members(s)})
    bad = _chain_failure(g, s, s0, t)
    if bad is not None:
        raise MalformedInput("ordered degree condition fails", witness=bad)
    core = minimal_cutset_within(g, s)
    base = cycle_covering_complement(g, core, check_toughness, cap)
    cycle = base.cycle
    if log is not None:
        log.append({"step": "covering-cycle", "cutset": members(core), "length": len(cycle),
                    "route": base.transcript[-1].get("route")})
    for y in s0:
        if y in cycle:
            continue
        cycle = extend_cycle_insert(g, cycle, 1 << y, t)
        if log is not None:
            log.append({"step": "insert", "vertex": y, "length": len(cycle)})
    return cycle


def _as_hamiltonian(g: Graph, cycle, log: list) -> HamiltonianCertificate:
    cert = HamiltonianCertificate(list(cycle), log)
    if not cert.verify(g):
        raise RuntimeError("construction did not close a Hamiltonian cycle")
    return cert


def _check_tough(g: Graph, t, check: str, cap: int) -> None:
    if check == "never":
        return
    try:
        cert = toughness(g, cap)
    except InstanceTooLarge:
        if check == "always":
            raise
        return
    if cert.value != INF and cert.value < t:
        raise HypothesisViolation("toughness", "graph is less tough than required",
                                  witness={"cutset": members(cert.witness), "components": cert.components,
                                           "ratio": str(cert.value), "t": str(t)})


def _separator_core(g: Graph, s: int, a: int, b: int) -> int:
    """Shrink s to a minimal set still separating a from b."""
    changed = True
    while changed:
        changed = False
        for x in iter_bits(s):
            trial = s & ~(1 << x)
            if not _reach(g, a, g.vertices & ~trial) >> b & 1:
                s, changed = trial, True
                break
    return s


def two_large_components(g: Graph, s, t, check_toughness: str = "auto", cap: int = DEFAULT_CAP,
                         log: list | None = None) -> HamiltonianCertificate:
    """Hamiltonian cycle when g - s has a component of order >= 2n/(t+1) and
    the other components together also reach 2n/(t+1)."""
    s = as_mask(s)
    t = _frac(t)
    log = [] if log is None else log
    wit = find_induced_p4_union_p1(g)
    if wit is not None:
        raise MalformedInput("graph contains an induced P4+P1", witness=wit.to_dict())
    parts = components(g, s)
    need = _share(g.n, t, 2)
    if len(parts) < 2:
        raise MalformedInput("s is not a cutset", witness={"s": members(s)})
    big = max(parts, key=lambda p: (popcount(p), -lowest(p)))
    if popcount(big) < need or popcount(g.vertices & ~s & ~big) < need:
        raise MalformedInput("component orders miss 2n/(t+1)",
                             witness={"largest": popcount(big), "others": popcount(g.vertices & ~s & ~big),
                                      "needs": str(need)})
    _check_tough(g, Fraction(9, 2), check_toughness, cap)
    anchor = lowest(big)
    moved = True
    while moved:
        moved = False
        parts = components(g, s)
        d1 = next(p for p in parts if p >> anchor & 1)
        others = g.vertices & ~s & ~d1
        for x in iter_bits(s):
            if not g.adj[x] & d1 or not g.adj[x] & others:
                s &= ~(1 << x)
                moved = True
                break
    parts = components(g, s)
    d1 = next(p for p in parts if p >> anchor & 1)
    log.append({"step": "two-large", "cutset": members(s), "components": len(parts)})
    if len(parts) >= 3:
        for x in iter_bits(s):
            if d1 & ~g.adj[x]:
                for p in parts:
                    if p != d1 and p & ~g.adj[x]:
                        miss = lowest(p & ~g.adj[x])
                        raise HypothesisViolation("missing-adjacency", "S-vertex not complete to the small side",
                                                  witness={"pair": [x, miss]}, claim="S-vertex-adjacency")
        cycle = cycle_with_ordered_insertions(g, s, members(s), t, "never", cap, log)
        log.append({"step": "two-large-case", "case": 1})
        return _as_hamiltonian(g, cycle, log)
    d2 = next(p for p in parts if p != d1)
    s = _separator_core(g, s, anchor, lowest(d2))
    parts = components(g, s)
    d1 = next(p for p in parts if p >> anchor & 1)
    sides = g.vertices & ~s
    one = _share(g.n, t)
    s0 = [x for x in iter_bits(s) if popcount(g.adj[x] & sides) < one]
    if not s0:
        cycle = cycle_with_ordered_insertions(g, s, members(s), t, "never", cap, log)
        log.append({"step": "two-large-case", "case": 2, "low": []})
        return _as_hamiltonian(g, cycle, log)
    for x, y in combinations(s0, 2):
        nx_, ny = g.adj[x] & d1, g.adj[y] & d1
        if nx_ & ~ny and ny & ~nx_:
            raise HypothesisViolation("missing-adjacency", "low-degree S-vertices have crossing neighbourhoods",
                                      witness={"pair": [x, y]}, claim="S0-vertex-adjacency")
    top = max(s0, key=lambda x: (popcount(g.adj[x] & d1), -x))
    near = g.adj[top] & d1
    star = (s & ~as_mask(s0)) | near
    order = members(near) + members(s & ~as_mask(s0))
    log.append({"step": "two-large-case", "case": 2, "low": s0, "recut": members(star)})
    try:
        cycle = cycle_with_ordered_insertions(g, star, order, t, "never", cap, log)
    except MalformedInput as exc:
        raise HypothesisViolation("degree-threshold", f"re-cut does not meet the insertion chain: {exc}",
                                  witness=exc.witness if isinstance(exc.witness, dict) else {},
                                  claim="S0-vertex-adjacency") from exc
    return _as_hamiltonian(g, cycle, log)


def grow_to_hamiltonian(g: Graph, c, t, check_toughness: str = "auto", cap: int = DEFAULT_CAP,
                        log: list | None = None) -> HamiltonianCertificate:
    """Extend c until Hamiltonian, handing over to two_large_components if it stalls."""
    c = _require_cycle(g, c)
    t = _frac(t)
    log = [] if log is None else log
    three = _share(g.n, t, 3)
    if len(c) < three:
        raise MalformedInput("cycle shorter than 3n/(t+1)", witness={"length": len(c), "needs": str(three)})
    low = [x for x in iter_bits(g.vertices & ~as_mask(c)) if g.degree(x) < three]
    if low:
        raise MalformedInput("outside vertex of degree below 3n/(t+1)",
                             witness={"vertex": low[0], "degree": g.degree(low[0]), "needs": str(three)})
    bound = _share(g.n, t) - 1
    while len(c) < g.n:
        outside = components(g, as_mask(c))
        for hpart in outside:
            seen = 0
            for v in iter_bits(hpart):
                seen |= g.adj[v]
            if popcount(seen & as_mask(c)) > bound:
                c = extend_cycle_insert(g, c, hpart, t)
                log.append({"step": "extend", "piece": members(hpart), "length": len(c)})
                break
        else:
            hpart = outside[0]
            seen = 0
            for v in iter_bits(hpart):
                seen |= g.adj[v]
            cut = seen & as_mask(c)
            log.append({"step": "stalled", "piece": members(hpart), "cutset": members(cut)})
            try:
                return two_large_components(g, cut, t, check_toughness, cap, log)
            except MalformedInput as exc:
                raise HypothesisViolation("degree-threshold", f"stalled cycle does not split evenly: {exc}",
                                          witness=exc.witness if isinstance(exc.witness, dict) else {},
                                          claim="larger-component") from exc
    return _as_hamiltonian(g, c, log)


# ---------------------------------------------------------------------------
# the top-level driver


def _minimum_cutset(g: Graph) -> int | None:
    """Smallest vertex set whose removal disconnects g (None for complete g)."""
    if len(components(g)) >= 2:
        return 0
    verts = list(range(g.n))
    for size in range(1, g.n - 1):
        for combo in combinations(verts, size):
            w = as_mask(combo)
            if len(components(g, w)) >= 2:
                return w
    return None


def _independence(h: Graph) -> int:
    """A maximum independent set of h, as a mask."""
    comp = nx.complement(_nx(h))
    clique, _ = nx.max_weight_clique(comp, weight=None)
    return as_mask(clique)


def _certify(g: Graph, t: Fraction, certificate, assume_tough: bool, cap: int) -> dict:
    if certificate is not None:
        if not certificate.verify(g):
            raise MalformedInput("toughness certificate does not match the graph")
        value, source = certificate.value, "certificate"
    elif assume_tough:
        return {"step": "toughness", "source": "assumed", "t": str(t)}
    else:
        try:
            cert = toughness(g, cap)
        except InstanceTooLarge as exc:
            raise MalformedInput("toughness is neither certified nor small enough to compute",
                                 witness={"n": g.n}) from exc
        value, source, certificate = cert.value, "computed", cert
    if value != INF and value < t:
        raise HypothesisViolation("toughness", "graph is less tough than required",
                                  witness={"cutset": members(certificate.witness),
                                           "components": certificate.components,
                                           "ratio": str(value), "t": str(t)})
    return {"step": "toughness", "source": source, "value": str(value), "t": str(t)}


def main_hamiltonian(g: Graph, t=23, certificate=None, assume_tough: bool = False,
                     cap: int = DEFAULT_CAP) -> HamiltonianCertificate:
    """Hamiltonian cycle of a t-tough (P4 + P1)-free graph on n >= 3 vertices.

    Toughness comes from `certificate` (a ToughnessCertificate), from
    `assume_tough` (recorded as such), or from a brute-force computation
    when the graph is small enough.
    """
    t = _frac(t)
    n = g.n
    if n < 3:
        raise MalformedInput("need at least three vertices", witness={"n": n})
    wit = find_induced_p4_union_p1(g)
    if wit is not None:
        raise MalformedInput("graph contains an induced P4+P1", witness=wit.to_dict())
    if g.is_complete():
        return _as_hamiltonian(g, list(range(n)), [{"step": "complete"}])
    log = [_certify(g, t, certificate, assume_tough, cap)]
    sub_check = "never" if t >= Fraction(9, 2) else "auto"
    if min(g.degree(v) for v in range(n)) < 2 * t:
        v = min(range(n), key=g.degree)
        raise HypothesisViolation("degree-threshold", "minimum degree below 2t",
                                  witness={"vertex": v, "degree": g.degree(v), "needs": str(2 * t)},
                                  claim="min-degree")
    s = as_mask(v for v in range(n) if 4 * g.degree(v) >= n)
    rest = g.vertices & ~s
    log.append({"step": "split", "high": popcount(s), "low": members(rest)})
    p4 = find_induced_p4(g, rest)
    if p4 is not None:
        raise HypothesisViolation("degree-threshold", "low-degree part contains an induced P4",
                                  witness=p4.to_dict(), claim="no-p4")
    if not rest:
        cycle = ham_cycle_through_forest(g)
        log.append({"step": "route", "route": "empty-T"})
        return _as_hamiltonian(g, cycle, log)
    three = _share(n, t, 3)
    if popcount(rest) >= three:
        return _large_low_part(g, s, rest, t, sub_check, cap, log)
    return _small_low_part(g, s, rest, t, sub_check, cap, log)


def _large_low_part(g, s, rest, t, check, cap, log) -> HamiltonianCertificate:
    low, ids = induced(g, rest)
    try:
        inner = [ids[v] for v in ham_cycle_through_forest(low)]
        log.append({"step": "route", "route": "low-part-hamiltonian"})
        return grow_to_hamiltonian(g, inner, t, check, cap, log)
    except Infeasible:
        pass
    cut = _minimum_cutset(low)
    if cut is None or 2 * popcount(cut) >= low.n:
        raise HypothesisViolation("degree-threshold", "low part has no small cutset",
                                  witness={"low": members(rest)}, claim="dirac")
    u = lift_mask(cut, ids)
    log.append({"step": "route", "route": "low-part-cutset", "cutset": members(u)})
    cycle = cycle_with_ordered_insertions(g, s | u, members(u), t, check, cap, log)
    return grow_to_hamiltonian(g, cycle, t, check, cap, log)


def _small_low_part(g, s, rest, t, check, cap, log) -> HamiltonianCertificate:
    n = g.n
    low, ids = induced(g, rest)
    value = scattering(low).value
    if value == NEG_INF or value <= 0:
        cover = single_component_cover(g, s, check, cap)
    else:
        cover = s_matched_basic_cover(g, s, check, cap)
        if len(cover.paths) > _share(n, t):
            raise HypothesisViolation("degree-threshold", "more paths than n/(t+1)",
                                      witness={"paths": len(cover.paths), "bound": str(_share(n, t))},
                                      claim="c(Q) bound")
    paths = [tuple(p) for p in cover.paths]
    k = len(paths)
    if any(s >> v & 1 for p in paths for v in p[1:-1]):
        raise HypothesisViolation("scattering-structure", "cover path runs through the high-degree set",
                                  witness={"paths": [list(p) for p in paths]}, claim="path-partner-system1")
    log.append({"step": "cover", "paths": [list(p) for p in paths], "k": k})
    high, hids = induced(g, s)
    back = {v: i for i, v in enumerate(hids)}
    ties = [(back[p[0]], back[p[-1]]) for p in paths]
    adj = list(high.adj)
    for a, b in ties:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    h = Graph(high.n, adj)
    alpha = popcount(_independence(h))
    if alpha > _share(n, t):
        raise _independent_violation(g, lift_mask(_independence(h), hids), t)
    conn = nx.node_connectivity(_nx(h))
    roomy = Fraction(n, 4) - popcount(rest) - k - _share(n, t) >= _share(n, t, 2)
    want = k + alpha if roomy else k + 1
    log.append({"step": "aux-high", "alpha": alpha, "connectivity": conn, "needs": want,
                "branch": "forest" if roomy else "cycle"})
    if conn < want:
        cut = lift_mask(as_mask(nx.minimum_node_cut(_nx(h))), hids)
        log.append({"step": "route", "route": "recut", "cutset": members(rest | cut)})
        try:
            return two_large_components(g, rest | cut, t, check, cap, log)
        except MalformedInput as exc:
            raise HypothesisViolation("degree-threshold", f"re-cut misses the component orders: {exc}",
                                      witness=exc.witness if isinstance(exc.witness, dict) else {},
                                      claim="main-connectivity") from exc
    try:
        found = ham_cycle_through_forest(h, ties) if roomy else cycle_through_edges(h, ties)
    except Infeasible:
        raise HypothesisViolation("degree-threshold", "no cycle through the tie edges",
                                  witness={"connectivity": conn, "alpha": alpha},
                                  claim="Hcycle-through-ind-edges" if roomy else "cycle-through-ind-edges") from None
    cycle = _expand(found, hids, paths)
    if roomy:
        log.append({"step": "route", "route": "forest-cycle"})
        return _as_hamiltonian(g, cycle, log)
    log.append({"step": "route", "route": "tie-cycle", "length": len(cycle)})
    if len(cycle) < _share(n, t, 3):
        raise HypothesisViolation("degree-threshold", "tie cycle shorter than 3n/(t+1)",
                                  witness={"length": len(cycle)}, claim="larger-component")
    return grow_to_hamiltonian(g, cycle, t, check, cap, log)


def _expand(found: list[int], hids: list[int], paths) -> list[int]:
    """Replace each tie edge x_i y_i of a cycle in the high part by the cover path."""
    by_end = {}
    for p in paths:
        by_end[(p[0], p[-1])] = p
        by_end[(p[-1], p[0])] = p[::-1]
    ring = [hids[v] for v in found]
    out = []
    m = len(ring)
    i = 0
    # rotate so that no tie edge wraps around the end
    while (ring[-1], ring[0]) in by_end:
        ring = ring[1:] + ring[:1]
    while i < m:
        a = ring[i]
        b = ring[i + 1] if i + 1 < m else None
        if b is not None and (a, b) in by_end:
            out += list(by_end[(a, b)])
            i += 2
        else:
            out.append(a)
            i += 1
    return out
