"""S-matched path-covers of G - S: paths whose two ends lie in S and whose
interiors sweep out the components of G - S.

A cover path is stored as a vertex tuple. Its S-vertices may appear inside
(after merges), but never two in a row; its segments are the maximal runs
of non-S vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .cograph_ham import ham_connected_wrt, jung_ham_connected, maximum_scattering_sets
from .errors import HypothesisViolation, Infeasible, InstanceTooLarge, MalformedInput
from .freeness import complete_bipartition, find_induced_p4, find_induced_p4_union_p1
from .graph import (Graph, as_mask, components, first_bad_edge, induced, iter_bits, lift_mask,
                    lowest, members)
from .matchings import generalized_k1r_matching
from .metrics import (DEFAULT_CAP, NEG_INF, is_minimal_cutset, is_minimal_element,
                      minimal_cutset_within, minimal_element, require_t_tough_wrt, scattering)


@dataclass
class SMatchedPathCover:
    paths: list
    s: int
    basic: bool = False
    # the maximum scattering set used per component, keyed by component mask
    scattering_sets: dict = field(default_factory=dict)

    def segments(self) -> list[list[tuple]]:
        out = []
        for p in self.paths:
            runs, cur = [], []
            for v in p:
                if self.s >> v & 1:
                    if cur:
                        runs.append(tuple(cur))
                    cur = []
                else:
                    cur.append(v)
            out.append(runs)
        return out

    def partners(self, i: int) -> tuple[int, int]:
        p = self.paths[i]
        return p[1], p[-2]

    def to_dict(self) -> dict:
        return {"paths": [list(p) for p in self.paths], "basic": self.basic}


# ---------------------------------------------------------------------------
# validation


def remark_separation(g: Graph, cover: SMatchedPathCover) -> tuple | None:
    """First pair of paths whose partner sets are joined by an edge."""
    ends = [as_mask(cover.partners(i)) for i in range(len(cover.paths))]
    for i, j in combinations(range(len(ends)), 2):
        for a in iter_bits(ends[i]):
            if g.adj[a] & ends[j]:
                return i, j, a, lowest(g.adj[a] & ends[j])
    return None


def _basic_shape(g: Graph, d: int, segs: list[tuple]) -> bool:
    h, ids = induced(g, d)
    cert = scattering(h)
    value = cert.value
    want = 1 if value == NEG_INF or value <= 1 else value
    if len(segs) != want:
        return False
    sets = [as_mask(s) for s in segs]
    if value == NEG_INF or value <= 0:
        return len(segs) == 1 and sets[0] == d
    for w_local in maximum_scattering_sets(h):
        w = lift_mask(w_local, ids)
        parts = components(g, g.vertices & ~(d & ~w))
        main = [k for k, m in enumerate(sets) if m & w]
        if len(main) != 1:
            continue
        rest = [sets[k] for k in range(len(sets)) if k != main[0]]
        if any(m not in parts for m in rest):
            continue
        inside = [p for p in parts if p & sets[main[0]]]
        if len(inside) == w.bit_count() + 1 and all(p & ~sets[main[0]] == 0 for p in inside):
            return True
    return False


def validate_cover(g: Graph, s, cover: SMatchedPathCover, host=None, basic: bool | None = None,
                   remark: bool = True) -> tuple[bool, str]:
    """Recompute every cover invariant. Returns (ok, reason)."""
    s = as_mask(s)
    host = g.vertices & ~s if host is None else as_mask(host)
    basic = cover.basic if basic is None else basic
    seen = 0
    for p in cover.paths:
        if len(p) < 3:
            return False, f"path {p} is too short"
        if first_bad_edge(g, p, False) is not None:
            return False, f"path {p} uses a non-edge {first_bad_edge(g, p, False)}"
        if not (s >> p[0] & 1 and s >> p[-1] & 1):
            return False, f"path {p} does not end in S"
        for a, b in zip(p, p[1:]):
            if s >> a & 1 and s >> b & 1:
                return False, f"S-vertices {a},{b} adjacent on a path"
        m = as_mask(p)
        if m & seen or len(set(p)) != len(p):
            return False, "paths are not vertex-disjoint"
        seen |= m
    if seen & ~s != host:
        return False, "cover does not match the target vertex set"
    if basic:
        segs = cover.segments()
        for d in components(g, g.vertices & ~host):
            mine = [seg for runs in segs for seg in runs if as_mask(seg) & d]
            if any(as_mask(seg) & ~d for seg in mine):
                return False, "a segment crosses two components"
            if not _basic_shape(g, d, mine):
                return False, f"component {members(d)} is not covered in basic shape"
        if remark and len(cover.paths) >= 2:
            bad = remark_separation(g, cover)
            if bad is not None:
                return False, f"separation fails between paths {bad[0]} and {bad[1]}"
    return True, "ok"


def _ensure(g: Graph, cover: SMatchedPathCover, host: int, basic: bool, claim: str) -> SMatchedPathCover:
    ok, why = validate_cover(g, cover.s, cover, host, basic)
    if not ok:
        raise HypothesisViolation("scattering-structure", f"{claim}: {why}",
                                  witness={"paths": [list(p) for p in cover.paths]}, claim=claim)
    return cover


def _missing(a: int, b: int, claim: str):
    return HypothesisViolation("missing-adjacency", f"{a} and {b} should be adjacent ({claim})",
                               witness={"pair": [a, b]}, claim=claim)


def _check_path(g: Graph, p, claim: str):
    bad = first_bad_edge(g, p, False)
    if bad is not None:
        raise _missing(bad[0], bad[1], claim)
    return tuple(p)


# ---------------------------------------------------------------------------
# links


def _oriented(q):
    return [tuple(q), tuple(reversed(q))]


def check_linkable(g: Graph, q1, q2) -> tuple | None:
    """The link of two S-matched paths, or None when they are not linkable."""
    q1, q2 = tuple(q1), tuple(q2)
    x1, u1, v1, y1 = q1[0], q1[1], q1[-2], q1[-1]
    x2, u2, v2, y2 = q2[0], q2[1], q2[-2], q2[-1]
    adj = g.has_edge
    first = (adj(y1, u2) or adj(x2, v1)) and (adj(y2, u1) or adj(x1, v2))
    second = (adj(x1, u2) or adj(x2, u1)) and (adj(y2, v1) or adj(y1, v2))
    if first:
        if adj(y1, u2):
            return q1 + q2[1:]
        return q1[:-1] + q2
    if second:
        rev2 = q2[::-1]
        if adj(x1, u2):
            return rev2[:-1] + q1
        return rev2 + q1[1:]
    return None


def link_through(g: Graph, p, z: int, q) -> tuple:
    """Join p and q by the off-path vertex z, in the order p, z, q."""
    return _check_path(g, tuple(p) + (z,) + tuple(q), "link through a connector")


# ---------------------------------------------------------------------------
# fitting a minimal element back in


def _comp_index(g: Graph, d: int, w: int) -> dict:
    idx = {}
    for k, p in enumerate(components(g, g.vertices & ~(d & ~w))):
        for v in iter_bits(p):
            idx[v] = k
    return idx


def insert_minimal(g: Graph, s, d, z: int, cover: SMatchedPathCover, w=None) -> SMatchedPathCover:
    """Turn an S-matched basic cover of d - z into an S-matched cover of d."""
    s, d = as_mask(s), as_mask(d)
    h, ids = induced(g, d)
    local = {v: i for i, v in enumerate(ids)}
    if w is None:
        cert = scattering(h)
        if cert.value == NEG_INF or cert.value < 0:
            raise MalformedInput("needs s(d) >= 0")
        w = lift_mask(cert.witness, ids)
    w = as_mask(w)
    if not w >> z & 1:
        raise MalformedInput("z must lie in the scattering set")
    w_local = as_mask(local[v] for v in iter_bits(w))
    if not is_minimal_element(h, w_local, local[z]):
        raise MalformedInput("z is not a minimal element of the scattering set")
    paths = [tuple(p) for p in cover.paths]
    if any(z in p for p in paths):
        raise MalformedInput("z already lies on the cover")
    if len(paths) >= 2:
        q1, q2 = paths[0], paths[1]
        for a in (q1[-2], q2[1]):
            if not g.has_edge(z, a):
                raise _missing(z, a, "minimal element sees every partner")
        merged = _check_path(g, q1[:-1] + (z,) + q2[1:], "link through z")
        return SMatchedPathCover([merged] + paths[2:], s, cover.basic)
    q = list(paths[0])
    out = insert_into_sequence(g, q, d, w, z)
    if out is not None:
        return SMatchedPathCover([_check_path(g, out, "insert in a block")], s)
    _no_insertion(g, d, w, z, q)


def _no_insertion(g: Graph, d: int, w: int, z: int, seq):
    if any(p & (p - 1) for p in components(g, g.vertices & ~(d & ~w))) or _w_edges(g, w):
        raise HypothesisViolation("missing-adjacency", "no insertion point for the minimal element",
                                  witness={"z": z, "sequence": list(seq)}, claim="inserting")
    raise HypothesisViolation("scattering-structure",
                              "d - W has only trivial components and W is independent",
                              witness={"W": members(w)}, claim="inserting")


def insert_into_sequence(g: Graph, seq, d, w, z: int, closed: bool = False) -> tuple | None:
    """Place the minimal element z of w next to vertices of d inside seq.

    Only positions whose two neighbours both lie in d are used, so the
    d-block of a path or cycle absorbs z and nothing else moves.  Returns
    None when neither the block rule nor a W-edge gives a position.
    """
    d, w = as_mask(d), as_mask(w)
    q = list(seq)
    if closed:
        start = next((i for i, v in enumerate(q) if not d >> v & 1), None)
        if start is None:
            return None
        q = q[start:] + q[:start]
    comp = _comp_index(g, d, w)
    for i in range(len(q) - 1):
        a, b = q[i], q[i + 1]
        if a in comp and b in comp and comp[a] == comp[b]:
            if g.has_edge(z, a) and g.has_edge(z, b):
                return tuple(q[:i + 1] + [z] + q[i + 1:])
    for z1, z2 in _w_edges(g, w):
        for a, b in ((z1, z2), (z2, z1)):
            got = _insert_via_edge(g, d, w, q, z, a, b)
            if got is not None:
                return got
    return None


def _w_edges(g: Graph, w: int) -> list[tuple[int, int]]:
    return [(a, b) for a in iter_bits(w) for b in iter_bits(g.adj[a] & w) if a < b]


def _touching(g: Graph, d: int, w: int, x: int) -> set:
    return {k for k, p in enumerate(components(g, g.vertices & ~(d & ~w))) if g.adj[x] & p}


def _insert_via_edge(g: Graph, d: int, w: int, q: list, z: int, z1: int, z2: int):
    """Place z via the W-edge z1z2, z2 being the vertex whose side we use."""
    if z == z1:
        base = q
        mover = z1
    elif z == z2:
        return None
    else:
        if z1 not in q or z2 not in q:
            return None
        if not _touching(g, d, w, z2) <= _touching(g, d, w, z1):
            return None
        base = [z if v == z1 else v for v in q]
        i = base.index(z)
        if i == 0 or i == len(base) - 1 or not (g.has_edge(z, base[i - 1]) and g.has_edge(z, base[i + 1])):
            return None
        mover = z1
    if z2 not in base:
        return None
    i = base.index(z2)
    for j in (i + 1, i):
        # insert between base[j-1] and base[j], one of which is z2
        if j <= 0 or j >= len(base):
            continue
        a, b = base[j - 1], base[j]
        if not (d >> a & 1 and d >> b & 1):
            continue
        if g.has_edge(mover, a) and g.has_edge(mover, b):
            out = tuple(base[:j] + [mover] + base[j:])
            if first_bad_edge(g, out, False) is None:
                return out
    return None


# ---------------------------------------------------------------------------
# helpers on components


def _lift_path(path, ids) -> list[int]:
    return [ids[v] for v in path]


def _bipartite_path(g: Graph, a_side: int, b_side: int, a: int, b: int) -> list[int]:
    rest_a = [v for v in iter_bits(a_side) if v != a]
    rest_b = [v for v in iter_bits(b_side) if v != b]
    out = [a]
    for x, y in zip(rest_b, rest_a):
        out += [x, y]
    out.append(b)
    return out


def component_ham_path(g: Graph, d: int, u: int, v: int) -> list[int]:
    """Hamiltonian (u, v)-path of the component d, when its structure allows."""
    if u == v:
        if d != 1 << u:
            raise MalformedInput("u = v only for a trivial component")
        return [u]
    h, ids = induced(g, d)
    local = {x: i for i, x in enumerate(ids)}
    cert = scattering(h)
    if cert.value == NEG_INF or cert.value < 0:
        return _lift_path(jung_ham_connected(h, local[u], local[v]), ids)
    if cert.value > 0:
        raise HypothesisViolation("scattering-structure", "component has positive scattering number",
                                  witness={"component": members(d), "value": str(cert.value)})
    parts = complete_bipartition(h)
    if parts is not None and parts[0].bit_count() == parts[1].bit_count():
        a_side, b_side = (lift_mask(p, ids) for p in parts)
        if a_side >> v & 1:
            a_side, b_side = b_side, a_side
        if not (a_side >> u & 1 and b_side >> v & 1):
            raise HypothesisViolation("scattering-structure", "endpoints on one side of K_{m,m}",
                                      witness={"u": u, "v": v})
        return _bipartite_path(g, a_side, b_side, u, v)
    return _lift_path(ham_connected_wrt(h, cert.witness, local[u], local[v]), ids)


def _scattering_sets(g: Graph, parts: list[int]) -> list[int]:
    out = []
    for d in parts:
        h, ids = induced(g, d)
        cert = scattering(h)
        out.append(lift_mask(cert.witness, ids) if cert.value != NEG_INF and cert.value >= 1 else 0)
    return out


def _check_structure(g: Graph, s: int) -> None:
    wit = find_induced_p4_union_p1(g)
    if wit is not None:
        raise MalformedInput("graph contains an induced P4+P1", witness=wit.to_dict())
    wit = find_induced_p4(g, g.vertices & ~s)
    if wit is not None:
        raise MalformedInput("g - s contains an induced P4", witness=wit.to_dict())


def _check_tough(g: Graph, s: int, t, check: str, cap: int) -> None:
    if check == "never" or (check == "auto" and g.n > cap):
        return
    try:
        require_t_tough_wrt(g, s, t, cap, allow_connected=True)
    except InstanceTooLarge:
        if check == "always":
            raise


# ---------------------------------------------------------------------------
# the covers


def _basic(g: Graph, s: int) -> list[tuple]:
    parts = components(g, s)
    sets = _scattering_sets(g, parts)
    if not any(sets):
        try:
            gm = generalized_k1r_matching(g, s, 2)
        except Infeasible as exc:
            raise HypothesisViolation("toughness-wrt", "no generalized K_{1,2}-matching",
                                      witness=exc.certificate, claim="path-partner-system1") from exc
        out = []
        for d, cert in zip(gm.components, gm.certificates):
            if d & (d - 1) == 0:
                u = v = lowest(d)
                x, y = sorted(p for _, p in cert.edges)
            else:
                (u, x), (v, y) = cert.edges
            out.append(tuple([x] + component_ham_path(g, d, u, v) + [y]))
        return out
    k1 = next(i for i, w in enumerate(sets) if w)
    d1, s1 = parts[k1], sets[k1]
    h, ids = induced(g, d1)
    s1_local = as_mask(ids.index(v) for v in iter_bits(s1))
    s11 = lift_mask(minimal_cutset_within(h, s1_local), ids)
    sub = _basic(g, s | s11)
    inner = s | s11
    mine = [i for i, p in enumerate(sub) if as_mask(p[1:-1]) & ~inner & d1]
    rest1 = s1 & ~s11
    if rest1:
        first = next((i for i in mine if as_mask(sub[i]) & rest1), mine[0])
    else:
        first = mine[0]
    p = s11.bit_count()
    others = [i for i in mine if i != first]
    holding = [i for i in others if (1 << sub[i][0] | 1 << sub[i][-1]) & s11]
    pick = holding + [i for i in others if i not in holding]
    pick = sorted(pick[:p]) if len(holding) <= p else None
    if pick is None or len(pick) < p:
        raise HypothesisViolation("scattering-structure", "too few paths to absorb the minimal cutset",
                                  witness={"paths": len(mine), "needed": p + 1}, claim="path-partner-system1")
    chosen = [first] + pick
    with_s = [i for i in chosen if (1 << sub[i][0] | 1 << sub[i][-1]) & s]
    if len(with_s) < 2:
        raise HypothesisViolation("scattering-structure", "fewer than two paths keep an S-partner",
                                  witness={"paths": [list(sub[i]) for i in chosen]},
                                  claim="path-partner-system1")
    i, j = with_s[0], with_s[1]
    qi = sub[i] if s >> sub[i][0] & 1 else sub[i][::-1]
    qj = sub[j] if s >> sub[j][-1] & 1 else sub[j][::-1]
    pieces = [qi[:-1]]
    pieces += [sub[m][1:-1] for m in chosen if m not in (i, j)]
    pieces.append(qj[1:])
    connectors = members(s11)
    merged = list(pieces[0])
    for c, piece in zip(connectors, pieces[1:]):
        merged += [c] + list(piece)
    merged = _check_path(g, merged, "relink through the minimal cutset")
    out = [merged] + [q for m, q in enumerate(sub) if m not in chosen]
    return out


def _canonical(paths: list) -> list[tuple]:
    out = []
    for p in paths:
        p = tuple(p)
        out.append(p if p[1] <= p[-2] else p[::-1])
    return sorted(out, key=lambda p: min(p[1:-1]))


def s_matched_basic_cover(g: Graph, s, check_toughness: str = "auto",
                          cap: int = DEFAULT_CAP) -> SMatchedPathCover:
    """Basic S-matched cover of g - s with exactly s(g - s) paths.

    check_toughness: "auto" brute-checks 4-toughness relative to s when the
    graph is small enough, "always" insists, "never" skips.
    """
    s = as_mask(s)
    rest = g.vertices & ~s
    if not rest:
        raise MalformedInput("g - s is empty")
    h, _ = induced(g, rest)
    cert = scattering(h)
    if cert.value == NEG_INF or cert.value < 1:
        raise MalformedInput("s(g - s) < 1; use single_component_cover",
                             witness={"value": str(cert.value)})
    _check_structure(g, s)
    _check_tough(g, s, 4, check_toughness, cap)
    paths = _canonical(_basic(g, s))
    cover = SMatchedPathCover(paths, s, True)
    if len(paths) != cert.value:
        raise HypothesisViolation("scattering-structure", "wrong number of paths",
                                  witness={"paths": len(paths), "expected": str(cert.value)})
    return _ensure(g, cover, rest, True, "path-partner-system1")


def _anchors(g: Graph, s: int, rest: int, u_side: int | None = None, v_side: int | None = None):
    su = rest if u_side is None else u_side
    sv = rest if v_side is None else v_side
    if rest & (rest - 1) == 0:
        u = lowest(rest)
        nb = members(g.adj[u] & s)
        if len(nb) < 2:
            return None
        return nb[0], nb[1], u, u
    best = None
    for x in iter_bits(s):
        for y in iter_bits(s):
            if x == y:
                continue
            for u in iter_bits(g.adj[x] & su):
                for v in iter_bits(g.adj[y] & sv & ~(1 << u)):
                    best = (x, y, u, v)
                    return best
    return best


def single_component_cover(g: Graph, s, check_toughness: str = "auto",
                           cap: int = DEFAULT_CAP) -> SMatchedPathCover:
    """One S-matched path through all of g - s when s(g - s) <= 0."""
    s = as_mask(s)
    rest = g.vertices & ~s
    if not rest:
        raise MalformedInput("g - s is empty")
    h, ids = induced(g, rest)
    cert = scattering(h)
    if cert.value != NEG_INF and cert.value > 0:
        raise MalformedInput("s(g - s) > 0; use s_matched_basic_cover",
                             witness={"value": str(cert.value)})
    _check_structure(g, s)
    _check_tough(g, s, 4.5, check_toughness, cap)
    if cert.value == NEG_INF or cert.value < 0:
        anc = _anchors(g, s, rest)
        if anc is None:
            raise HypothesisViolation("degree-threshold", "no two S-anchors for g - s",
                                      witness={"rest": members(rest)})
        x, y, u, v = anc
        path = [x] + component_ham_path(g, rest, u, v) + [y]
        cover = SMatchedPathCover([tuple(path)], s)
        return _ensure(g, cover, rest, False, "path-partner-system1")
    parts = complete_bipartition(h)
    if parts is not None and parts[0].bit_count() == parts[1].bit_count():
        side_u, side_v = (lift_mask(p, ids) for p in parts)
        anc = _anchors(g, s, rest, side_u, side_v)
        if anc is None:
            raise HypothesisViolation("degree-threshold", "no cross-side anchors for K_{m,m}",
                                      witness={"sides": [members(side_u), members(side_v)]})
        x, y, u, v = anc
        path = [x] + _bipartite_path(g, side_u, side_v, u, v) + [y]
        return _ensure(g, SMatchedPathCover([tuple(path)], s), rest, False, "path-partner-system1")
    w_local = cert.witness
    z_local, _ = minimal_element(h, w_local)
    z = ids[z_local]
    w = lift_mask(w_local, ids)
    keep = g.vertices & ~(1 << z)
    g2, ids2 = induced(g, keep)
    back = {v: i for i, v in enumerate(ids2)}
    s2 = as_mask(back[v] for v in iter_bits(s))
    inner = s_matched_basic_cover(g2, s2, check_toughness="never")
    lifted = SMatchedPathCover([tuple(ids2[v] for v in p) for p in inner.paths], s, True)
    out = insert_minimal(g, s, rest, z, lifted, w)
    return _ensure(g, out, rest, False, "inserting")


def bounded_components_cover(g: Graph, s, check_toughness: str = "auto",
                             cap: int = DEFAULT_CAP) -> SMatchedPathCover:
    """Basic cover in which each component D meets at most
    min(max(1, s(D)), 2) paths, by merging along S-partner edges."""
    s = as_mask(s)
    if not is_minimal_cutset(g, s):
        raise MalformedInput("s is not a minimal cutset", witness={"s": members(s)})
    cover = s_matched_basic_cover(g, s, check_toughness, cap)
    paths = list(cover.paths)
    for d in components(g, s):
        paths = merge_within(g, paths, d, 2)
        mine = [i for i, p in enumerate(paths) if as_mask(p) & d]
        if len(mine) > 2:
            raise HypothesisViolation("scattering-structure",
                                      "no S-partner edge among paths of one component",
                                      witness={"component": members(d), "paths": mine[:3]},
                                      claim="path-partner-system2")
    out = SMatchedPathCover(_canonical(paths), s, True)
    out = _ensure(g, out, g.vertices & ~s, True, "path-partner-system2")
    for d in components(g, s):
        h, _ = induced(g, d)
        val = scattering(h).value
        bound = min(max(1, 1 if val == NEG_INF else val), 2)
        if sum(1 for p in out.paths if as_mask(p) & d) > bound:
            raise HypothesisViolation("scattering-structure", "component bound exceeded",
                                      witness={"component": members(d)}, claim="path-partner-system2")
    return out


def merge_within(g: Graph, paths, d, limit: int) -> list[tuple]:
    """Merge paths meeting d along S-end/partner edges while more than limit remain."""
    d = as_mask(d)
    paths = [tuple(p) for p in paths]
    while True:
        mine = [i for i, p in enumerate(paths) if as_mask(p) & d]
        if len(mine) <= limit:
            return paths
        merged = _merge_once(g, paths, mine)
        if merged is None:
            return paths
        a, b, new = merged
        paths = [p for k, p in enumerate(paths) if k not in (a, b)] + [new]


def _merge_once(g: Graph, paths: list, mine: list[int]):
    for i, j in combinations(mine, 2):
        for qi in _oriented(paths[i]):
            for qj in _oriented(paths[j]):
                # qi's last S-end next to qj's first partner
                if g.has_edge(qi[-1], qj[1]):
                    return i, j, qi + qj[1:]
    return None
