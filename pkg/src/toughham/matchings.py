"""Bipartite matchings, König covers, good star-matchings and generalized
K_{1,r}-matchings between a cutset S and the components of G - S.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import Infeasible, InstanceTooLarge, MalformedInput, SearchExhausted
from .graph import Graph, as_mask, components, induced, iter_bits, lift_mask, lowest, members
from .metrics import NEG_INF, ratio_below, scattering, wrt_violation

DEFAULT_BUDGET = int(os.environ.get("TOUGHHAM_MATCHING_BUDGET", "1000000"))


# ---------------------------------------------------------------------------
# plain bipartite matching


def _try_augment(g: Graph, l: int, rights: int, match_l: dict, match_r: dict, seen: set) -> bool:
    for x in iter_bits(g.adj[l] & rights):
        if x in seen:
            continue
        seen.add(x)
        other = match_r.get(x)
        if other is None or _try_augment(g, other, rights, match_l, match_r, seen):
            match_l[l] = x
            match_r[x] = l
            return True
    return False


def _augment(g: Graph, lefts: int, rights: int, match_l: dict, match_r: dict,
             target: int | None = None) -> None:
    """Grow the matching by augmenting paths; covered vertices stay covered."""
    for l in iter_bits(lefts):
        if target is not None and len(match_l) >= target:
            return
        if l not in match_l:
            _try_augment(g, l, rights, match_l, match_r, set())


def max_bipartite_matching(g: Graph, left, right) -> list[tuple[int, int]]:
    """Maximum matching of the left-right edges, as (left, right) pairs."""
    left, right = as_mask(left), as_mask(right)
    if left & right:
        raise MalformedInput("left and right must be disjoint")
    match_l: dict = {}
    match_r: dict = {}
    _augment(g, left, right, match_l, match_r)
    return sorted(match_l.items())


def _konig(g: Graph, left: int, right: int, match_l: dict, match_r: dict) -> int:
    frontier = [l for l in iter_bits(left) if l not in match_l]
    reach_l = set(frontier)
    reach_r = set()
    while frontier:
        nxt = []
        for l in frontier:
            for x in iter_bits(g.adj[l] & right):
                if x in reach_r:
                    continue
                reach_r.add(x)
                partner = match_r.get(x)
                if partner is not None and partner not in reach_l:
                    reach_l.add(partner)
                    nxt.append(partner)
        frontier = nxt
    cover = as_mask(reach_r)
    for l in iter_bits(left):
        if l not in reach_l:
            cover |= 1 << l
    return cover


def min_vertex_cover(g: Graph, left, right) -> int:
    left, right = as_mask(left), as_mask(right)
    match_l: dict = {}
    match_r: dict = {}
    _augment(g, left, right, match_l, match_r)
    return _konig(g, left, right, match_l, match_r)


# ---------------------------------------------------------------------------
# good star-matchings


@dataclass
class StarMatching:
    """Vertex-disjoint stars (center, leaves); `centers_in` says which side
    holds the centers: "component" (leaves in S) or "cutset"."""
    stars: list
    centers_in: str = "component"

    @classmethod
    def from_edges(cls, edges, centers_in: str = "component") -> "StarMatching":
        grouped: dict[int, list[int]] = {}
        for a, b in edges:
            center, leaf = (a, b) if centers_in == "component" else (b, a)
            grouped.setdefault(center, []).append(leaf)
        return cls([(c, tuple(sorted(ls))) for c, ls in sorted(grouped.items())], centers_in)

    def edges(self) -> list[tuple[int, int]]:
        if self.centers_in == "component":
            return [(c, x) for c, leaves in self.stars for x in leaves]
        return [(x, c) for c, leaves in self.stars for x in leaves]

    def is_valid(self, g: Graph) -> bool:
        seen = 0
        for c, leaves in self.stars:
            if not leaves:
                return False
            for v in (c, *leaves):
                if seen >> v & 1:
                    return False
                seen |= 1 << v
            if any(not g.has_edge(c, x) for x in leaves):
                return False
        return True


@dataclass
class GoodMatchingCertificate:
    """Edges (d, x) with d in the component and x a partner from S."""
    edges: list
    r: int
    component: int
    cut: int | None = None
    stars: dict = field(default_factory=dict)

    @property
    def partners(self) -> int:
        return as_mask(x for _, x in self.edges)

    @property
    def star_matching(self) -> StarMatching:
        return StarMatching.from_edges(self.edges)

    def to_dict(self) -> dict:
        return {"r": self.r, "component": members(self.component),
                "cut": None if self.cut is None else members(self.cut),
                "edges": [list(e) for e in self.edges]}


def component_cut(g: Graph, d: int) -> int | None:
    """Canonical W with c(D - W) >= |W|: the scattering witness when s(D) >= 0."""
    h, ids = induced(g, d)
    cert = scattering(h)
    if cert.value == NEG_INF or cert.value < 0:
        return None
    return lift_mask(cert.witness, ids)


def _furthermore_applies(g: Graph, d: int, w: int) -> bool:
    rest = d & ~w
    parts = components(g, g.vertices & ~rest)
    if len(parts) != w.bit_count():
        return False
    if any(p & (p - 1) for p in parts):
        return False
    return all(not g.adj[v] & w for v in iter_bits(w))


def check_good_star_matching(g: Graph, s, d, r: int, edges, cut="auto") -> tuple[bool, str]:
    """Recheck edge count, disjoint star shape and coverage from scratch. Returns (ok, reason)."""
    s, d = as_mask(s), as_mask(d)
    edges = [tuple(e) for e in edges]
    if cut == "auto":
        cut = component_cut(g, d)
    elif cut is not None:
        cut = as_mask(cut)
    partners = [x for _, x in edges]
    if len(set(partners)) != len(partners):
        return False, "a partner is used twice"
    for dv, x in edges:
        if not (d >> dv & 1) or not (s >> x & 1) or not g.has_edge(dv, x):
            return False, f"edge {dv}-{x} is not a D-S edge of the graph"
    if len(edges) != r:
        return False, "edge count: wrong number of edges"
    size = d.bit_count()
    load: dict[int, int] = {}
    for dv, _ in edges:
        load[dv] = load.get(dv, 0) + 1
    if size >= r:
        if any(v > 1 for v in load.values()):
            return False, "shape: not a matching"
    else:
        lo, hi = r // size, -(-r // size)
        if len(load) != size or any(not lo <= v <= hi for v in load.values()):
            return False, "shape: star sizes out of range"
    if cut is not None and size > r:
        covered = as_mask(load)
        if (covered & d & ~cut).bit_count() < r // 2:
            return False, "coverage: too few covered vertices outside W"
        if _furthermore_applies(g, d, cut) and not covered & cut:
            return False, "coverage: no covered vertex of W"
    return True, "ok"


def _stars_of(edges) -> dict:
    stars: dict[int, list[int]] = {}
    for dv, x in edges:
        stars.setdefault(dv, []).append(x)
    return {k: sorted(v) for k, v in sorted(stars.items())}


def _cover_witness(g: Graph, lefts: int, rights: int, reason: str):
    match_l: dict = {}
    match_r: dict = {}
    _augment(g, lefts, rights, match_l, match_r)
    cover = _konig(g, lefts, rights, match_l, match_r)
    return Infeasible(reason, {"cover": members(cover), "matching": len(match_l)})


def _exchange_into(g: Graph, d: int, rights: int, match_l: dict, match_r: dict,
                   want: int, need: int, keep: int, keep_min: int) -> bool:
    """Shift coverage toward `want` until it holds `need` vertices, never
    dropping coverage of `keep` below keep_min; size is preserved."""
    while (as_mask(match_l) & want).bit_count() < need:
        starts = [b for b in iter_bits(want & d) if b not in match_l]
        parent: dict[int, tuple] = {}
        queue = list(starts)
        for b in starts:
            parent[b] = None
        done = False
        while queue and not done:
            cur = queue.pop(0)
            for x in iter_bits(g.adj[cur] & rights):
                holder = match_r.get(x)
                if holder is None:
                    continue
                if holder in parent:
                    continue
                parent[holder] = (cur, x)
                kept = (as_mask(match_l) & keep).bit_count()
                if keep >> holder & 1 and kept > keep_min or not (want | keep) >> holder & 1:
                    # uncover holder, cover the start of the chain
                    node = holder
                    while parent[node] is not None:
                        prev, via = parent[node]
                        del match_l[node]
                        match_l[prev] = via
                        match_r[via] = prev
                        node = prev
                    done = True
                    break
                queue.append(holder)
        if not done:
            return False
    return True


def good_star_matching(g: Graph, s, d, r: int, require_vertex: int | None = None,
                       forbidden=0) -> GoodMatchingCertificate:
    """A good star-matching w.r.t. r between component d and N(d) in s."""
    s, d, forbidden = as_mask(s), as_mask(d), as_mask(forbidden)
    if r < 1:
        raise MalformedInput("r must be positive")
    parts = components(g, s)
    if d not in parts:
        raise MalformedInput("d is not a component of g - s", witness={"d": members(d)})
    nbrs = 0
    for v in iter_bits(d):
        nbrs |= g.adj[v]
    avail = nbrs & s & ~forbidden
    if require_vertex is not None and not avail >> require_vertex & 1:
        raise MalformedInput("required vertex is not an available neighbour of d")
    size = d.bit_count()
    cut = component_cut(g, d)
    match_l: dict = {}
    match_r: dict = {}
    if size > r and cut is not None and cut.bit_count() > -(-r // 2):
        # start from a matching into D - W so that at least r//2 of it survives
        _augment(g, d & ~cut, avail, match_l, match_r, target=r // 2)
        if len(match_l) < r // 2:
            raise _cover_witness(g, d & ~cut, avail, "coverage: matching into D-W too small")
    _augment(g, d, avail, match_l, match_r, target=min(size, r))
    if len(match_l) < min(size, r):
        raise _cover_witness(g, d, avail, "matching smaller than min(|D|, r)")
    if size > r and cut is not None:
        if (as_mask(match_l) & d & ~cut).bit_count() < r // 2:
            ok = _exchange_into(g, d, avail, match_l, match_r, d & ~cut, r // 2, cut, 0)
            if not ok:
                raise _cover_witness(g, d & ~cut, avail, "coverage: cannot cover r//2 vertices outside W")
        if _furthermore_applies(g, d, cut) and not as_mask(match_l) & cut:
            ok = _exchange_into(g, d, avail, match_l, match_r, cut, 1, d & ~cut, r // 2)
            if not ok:
                raise _cover_witness(g, cut, avail, "coverage: cannot cover a vertex of W")
    edges = sorted(match_l.items())
    if size < r:
        edges = _grow_stars(g, d, avail, edges, r)
    cert = GoodMatchingCertificate(edges, r, d, cut, _stars_of(edges))
    if require_vertex is not None and not cert.partners >> require_vertex & 1:
        cert = _cover_required(g, d, cert, require_vertex)
    ok, why = check_good_star_matching(g, s, d, r, cert.edges, cut)
    assert ok, why
    return cert


def _grow_stars(g: Graph, d: int, avail: int, edges: list, r: int) -> list:
    """Add leaves so the |D| stars have sizes floor/ceil of r/|D|."""
    size = d.bit_count()
    lo, extra = divmod(r, size)
    used = as_mask(x for _, x in edges)
    verts = members(d)
    # greedy, ascending ids; the first `extra` centres get the larger stars
    out = list(edges)
    free = avail & ~used
    ok = True
    for i, v in enumerate(verts):
        want = lo + (1 if i < extra else 0) - 1
        cand = members(g.adj[v] & free)[:want]
        if len(cand) < want:
            ok = False
            break
        for x in cand:
            out.append((v, x))
            free &= ~(1 << x)
    if ok:
        return sorted(out)
    # exact fallback: duplicate each centre and match the copies
    for big in combinations(verts, extra):
        quota = {v: lo + (1 if v in big else 0) for v in verts}
        got = _quota_matching(g, quota, avail)
        if got is not None:
            return sorted(got)
    cover = _star_obstruction(g, d, avail, r)
    raise Infeasible("no star-matching with the required star sizes",
                     {"cover": members(cover), "component": verts, "available": members(avail)})


def _quota_matching(g: Graph, quota: dict, avail: int):
    copies = [v for v, q in quota.items() for _ in range(q)]
    owner: dict[int, int] = {}

    def attempt(i: int, seen: set) -> bool:
        v = copies[i]
        for x in iter_bits(g.adj[v] & avail):
            if x in seen:
                continue
            seen.add(x)
            if x not in owner or attempt(owner[x], seen):
                owner[x] = i
                return True
        return False

    for i in range(len(copies)):
        if not attempt(i, set()):
            return None
    return [(copies[i], x) for x, i in owner.items()]


def _cover_required(g: Graph, d: int, cert: GoodMatchingCertificate, x: int) -> GoodMatchingCertificate:
    edges = list(cert.edges)
    covered = as_mask(dv for dv, _ in edges)
    inside = g.adj[x] & d & covered
    if inside:
        y = lowest(inside)
        idx = next(i for i, (dv, _) in enumerate(edges) if dv == y)
        edges[idx] = (y, x)
    else:
        outside = g.adj[x] & d & ~covered
        if not outside:
            raise MalformedInput("required vertex has no neighbour in d")
        y = lowest(outside)
        idx = 0
        if cert.cut is not None:
            side = cert.cut if cert.cut >> y & 1 else d & ~cert.cut
            idx = next((i for i, (dv, _) in enumerate(edges) if side >> dv & 1), 0)
        edges[idx] = (y, x)
    edges.sort()
    return GoodMatchingCertificate(edges, cert.r, d, cert.cut, _stars_of(edges))


def has_good_star_matching(g: Graph, s: int, d: int, r: int, partners: int) -> GoodMatchingCertificate | None:
    try:
        cert = good_star_matching(g, s, d, r, forbidden=s & ~partners)
    except Infeasible:
        return None
    return cert


# ---------------------------------------------------------------------------
# generalized K_{1,r}-matchings


@dataclass
class GeneralizedMatching:
    r: int
    components: list
    partners: list
    certificates: list

    def to_dict(self) -> dict:
        return {"r": self.r,
                "assignment": [{"component": members(c), "partners": members(p),
                                "edges": [list(e) for e in cert.edges]}
                               for c, p, cert in zip(self.components, self.partners, self.certificates)]}


def check_generalized_matching(g: Graph, s, gm: GeneralizedMatching) -> tuple[bool, str]:
    s = as_mask(s)
    parts = components(g, s)
    if sorted(gm.components) != sorted(parts):
        return False, "components do not match g - s"
    used = 0
    for comp, partners, cert in zip(gm.components, gm.partners, gm.certificates):
        if partners.bit_count() != gm.r:
            return False, "partner set has the wrong size"
        if partners & used:
            return False, "partner sets overlap"
        used |= partners
        if cert.partners != partners:
            return False, "certificate uses other partners"
        ok, why = check_good_star_matching(g, s, comp, gm.r, cert.edges)
        if not ok:
            return False, f"matching: {why}"
    return True, "ok"


class _Search:
    def __init__(self, g: Graph, s: int, r: int, budget: int):
        self.g, self.s, self.r, self.budget = g, s, r, budget
        self.parts = components(g, s)
        self.nodes = 0
        self.failed: set = set()
        self.cache: dict = {}
        self.nbr = []
        for comp in self.parts:
            m = 0
            for v in iter_bits(comp):
                m |= g.adj[v]
            self.nbr.append(m & s)

    def tick(self, partial):
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchExhausted("generalized matching search exceeded its node budget", partial)

    def hyperedge(self, i: int, subset: int):
        key = (i, subset)
        if key not in self.cache:
            self.cache[key] = has_good_star_matching(self.g, self.s, self.parts[i], self.r, subset)
        return self.cache[key]

    def candidates(self, i: int, used: int):
        avail = self.nbr[i] & ~used
        try:
            first = good_star_matching(self.g, self.s, self.parts[i], self.r, forbidden=self.s & ~avail)
            yield first.partners, first
            seen = first.partners
        except Infeasible:
            seen = None
        for combo in combinations(members(avail), self.r):
            sub = as_mask(combo)
            if sub == seen:
                continue
            self.tick(None)
            cert = self.hyperedge(i, sub)
            if cert is not None:
                yield sub, cert

    def solve(self, order: list[int], k: int, used: int, acc: list):
        if k == len(order):
            return list(acc)
        key = (k, used)
        if key in self.failed:
            return None
        i = order[k]
        for sub, cert in self.candidates(i, used):
            self.tick(list(acc))
            acc.append((i, sub, cert))
            found = self.solve(order, k + 1, used | sub, acc)
            if found is not None:
                return found
            acc.pop()
        self.failed.add(key)
        return None

    def all_hyperedges(self, i: int) -> list[int]:
        out = []
        for combo in combinations(members(self.nbr[i]), self.r):
            sub = as_mask(combo)
            self.tick(None)
            if self.hyperedge(i, sub) is not None:
                out.append(sub)
        return out


def _max_hypermatching(search: _Search, edges: list[list[int]]) -> dict[int, int]:
    """Maximum matching in the bipartite hypergraph by exhaustive search."""
    best: dict[int, int] = {}
    ell = len(edges)

    def rec(i: int, used: int, cur: dict):
        nonlocal best
        if len(cur) + (ell - i) <= len(best):
            return
        if i == ell:
            best = dict(cur)
            return
        for sub in edges[i]:
            if not sub & used:
                search.tick(None)
                cur[i] = sub
                rec(i + 1, used | sub, cur)
                del cur[i]
        rec(i + 1, used, cur)

    rec(0, 0, {})
    return best


def _proof_witness(search: _Search) -> dict:
    """The cutset T + union of Q_i from the contrapositive argument."""
    g, r = search.g, search.r
    edges = [search.all_hyperedges(i) for i in range(len(search.parts))]
    match = _max_hypermatching(search, edges)
    owner = {}
    for i, sub in match.items():
        for x in iter_bits(sub):
            owner[x] = i
    start = next(i for i in range(len(search.parts)) if i not in match)
    reach_d = {start}
    reach_s = 0
    frontier = [start]
    while frontier:
        nxt = []
        for i in frontier:
            for sub in edges[i]:
                if match.get(i) == sub:
                    continue
                for x in iter_bits(sub & ~reach_s):
                    reach_s |= 1 << x
                    j = owner.get(x)
                    if j is not None and j not in reach_d:
                        reach_d.add(j)
                        nxt.append(j)
        frontier = nxt
    cut = reach_s
    for i in sorted(reach_d):
        comp = search.parts[i]
        # partners outside T, so D_i - Q_i really is cut off once T is removed
        free = search.nbr[i] & ~reach_s
        q = _component_obstruction(g, comp, free, r)
        cut |= q
    return {"cutset": cut, "reached_components": sorted(reach_d), "T": members(reach_s)}


def _component_obstruction(g: Graph, comp: int, free: int, r: int) -> int:
    """A set Q_i whose removal separates part of comp from the free partners."""
    size = comp.bit_count()
    match_l: dict = {}
    match_r: dict = {}
    _augment(g, comp, free, match_l, match_r)
    if len(match_l) < min(size, r):
        return _konig(g, comp, free, match_l, match_r)
    cut = component_cut(g, comp)
    if size >= r and cut is not None:
        sub_l: dict = {}
        sub_r: dict = {}
        rest = comp & ~cut
        _augment(g, rest, free, sub_l, sub_r)
        q = _konig(g, rest, free, sub_l, sub_r)
        return q | cut
    return _star_obstruction(g, comp, free, r)


def _star_obstruction(g: Graph, comp: int, free: int, r: int) -> int:
    # |D| < r: König on the duplicated graph, pulled back to original vertices
    lo, extra = divmod(r, comp.bit_count())
    verts = members(comp)
    best = None
    for big in combinations(verts, extra):
        quota = {v: lo + (1 if v in big else 0) for v in verts}
        cover = _quota_cover(g, quota, free)
        if best is None or cover.bit_count() < best.bit_count():
            best = cover
    return best


def _quota_cover(g: Graph, quota: dict, free: int) -> int:
    # a vertex of D joins the cover only if every copy of it is covered
    copies = [v for v, q in quota.items() for _ in range(q)]
    owner: dict[int, int] = {}

    def attempt(i: int, seen: set) -> bool:
        for x in iter_bits(g.adj[copies[i]] & free):
            if x in seen:
                continue
            seen.add(x)
            if x not in owner or attempt(owner[x], seen):
                owner[x] = i
                return True
        return False

    for i in range(len(copies)):
        attempt(i, set())
    matched = set(owner.values())
    reach_c = {i for i in range(len(copies)) if i not in matched}
    reach_x = set()
    frontier = list(reach_c)
    while frontier:
        nxt = []
        for i in frontier:
            for x in iter_bits(g.adj[copies[i]] & free):
                if x not in reach_x:
                    reach_x.add(x)
                    j = owner.get(x)
                    if j is not None and j not in reach_c:
                        reach_c.add(j)
                        nxt.append(j)
        frontier = nxt
    cover = as_mask(reach_x)
    for v in quota:
        idx = [i for i, c in enumerate(copies) if c == v]
        if all(i not in reach_c for i in idx):
            cover |= 1 << v
    return cover


def generalized_k1r_matching(g: Graph, s, r: int, budget: int = DEFAULT_BUDGET) -> GeneralizedMatching:
    """Disjoint r-sets of partners, one per component of g - s, each carrying
    a good star-matching. Raises Infeasible with a cutset certificate."""
    s = as_mask(s)
    if r < 1:
        raise MalformedInput("r must be positive")
    parts = components(g, s)
    if len(parts) < 2:
        raise MalformedInput("s is not a cutset", witness={"s": members(s)})
    search = _Search(g, s, r, budget)
    for i, nb in enumerate(search.nbr):
        if nb.bit_count() < r:
            raise Infeasible("a component has fewer than r neighbours in s",
                             {"cutset": members(nb), "component": members(parts[i]),
                              "source": "pigeonhole"})
    # scarcest components first; ties by canonical order
    order = sorted(range(len(parts)), key=lambda i: (search.nbr[i].bit_count(), i))
    found = search.solve(order, 0, 0, [])
    if found is None:
        wit = _proof_witness(search)
        cut = wit["cutset"]
        source = "hall-argument"
        if not witness_violates(g, s, cut, 2 * r):
            hit = _enumerated_violation(g, s, 2 * r)
            if hit is not None:
                cut, source = hit, "enumeration"
            else:
                source = "uncertified"
        c = len(components(g, cut)) if cut else 0
        raise Infeasible("no generalized K_{1,r}-matching",
                         {"cutset": members(cut), "components": c,
                          "ratio": str(Fraction(cut.bit_count(), c)) if c else None,
                          "reached_components": wit["reached_components"], "source": source})
    found.sort()
    return GeneralizedMatching(r, [parts[i] for i, _, _ in found], [sub for _, sub, _ in found],
                               [cert for _, _, cert in found])


def _enumerated_violation(g: Graph, s: int, t) -> int | None:
    try:
        hit = wrt_violation(g, s, t)
    except InstanceTooLarge:
        return None
    return None if hit is None else hit[0]


def witness_violates(g: Graph, s, cutset, t) -> bool:
    """Does `cutset` break t-toughness relative to s?"""
    s, cutset = as_mask(s), as_mask(cutset)
    parts = components(g, s)
    if any(p & ~cutset == 0 for p in parts):
        return False
    c = len(components(g, cutset))
    return c >= 2 and ratio_below(cutset.bit_count(), c, t)
