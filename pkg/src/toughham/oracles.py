"""Independent brute-force oracles.

Nothing here calls the constructive modules: Hamiltonicity is decided by
subset dynamic programming, toughness and scattering by plain enumeration of
every vertex subset, and induced P4s by checking every 4-set.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from .errors import InstanceTooLarge
from .graph import Graph

ORACLE_CAP = int(os.environ.get("TOUGHHAM_ORACLE_CAP", "20"))


@dataclass
class OracleResult:
    query: str
    answer: object
    witness: object = None
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.answer)


def _check_cap(g: Graph, cap: int) -> None:
    if g.n > cap:
        raise InstanceTooLarge(f"oracle limited to {cap} vertices, got {g.n}", size=g.n, cap=cap)


def _reach_table(g: Graph, starts: int) -> list[int]:
    """table[mask] = set of vertices that can end a path covering exactly mask."""
    n = g.n
    adj = g.adj
    table = [0] * (1 << n)
    for v in range(n):
        if starts >> v & 1:
            table[1 << v] = 1 << v
    for mask in range(1, 1 << n):
        ends = table[mask]
        while ends:
            low = ends & -ends
            last = low.bit_length() - 1
            ends ^= low
            ext = adj[last] & ~mask
            while ext:
                wb = ext & -ext
                ext ^= wb
                table[mask | wb] |= wb
    return table


def _unwind(g: Graph, table: list[int], mask: int, last: int) -> list[int]:
    path = [last]
    while mask & (mask - 1):
        prev_mask = mask & ~(1 << last)
        cands = table[prev_mask] & g.adj[last]
        last = (cands & -cands).bit_length() - 1
        path.append(last)
        mask = prev_mask
    path.reverse()
    return path


def oracle_ham_path(g: Graph, u: int | None = None, v: int | None = None,
                    cap: int = ORACLE_CAP) -> OracleResult:
    """Hamiltonian path, optionally with fixed start u and/or end v."""
    _check_cap(g, cap)
    if g.n == 0:
        return OracleResult("ham_path", False)
    if g.n == 1:
        ok = (u in (None, 0)) and (v in (None, 0))
        return OracleResult("ham_path", ok, [0] if ok else None)
    if u is None and v is not None:
        u, v = v, None
        flipped = True
    else:
        flipped = False
    starts = g.vertices if u is None else 1 << u
    table = _reach_table(g, starts)
    full = g.vertices
    ends = table[full]
    if v is not None:
        ends &= 1 << v
        ends &= ~(1 << u) if u is not None else ~0
    if not ends:
        return OracleResult("ham_path", False)
    last = (ends & -ends).bit_length() - 1
    path = _unwind(g, table, full, last)
    if flipped:
        path.reverse()
    return OracleResult("ham_path", True, path)


def oracle_ham_cycle(g: Graph, cap: int = ORACLE_CAP) -> OracleResult:
    _check_cap(g, cap)
    if g.n < 3:
        return OracleResult("ham_cycle", False)
    table = _reach_table(g, 1)
    ends = table[g.vertices] & g.adj[0]
    if not ends:
        return OracleResult("ham_cycle", False)
    last = (ends & -ends).bit_length() - 1
    return OracleResult("ham_cycle", True, _unwind(g, table, g.vertices, last))


def oracle_ham_connected(g: Graph, cap: int = ORACLE_CAP) -> OracleResult:
    """True iff every pair u != v is joined by a Hamiltonian path."""
    _check_cap(g, cap)
    if g.n == 1:
        return OracleResult("ham_connected", True)
    full = g.vertices
    for u in range(g.n):
        ends = _reach_table(g, 1 << u)[full]
        missing = full & ~ends & ~(1 << u)
        if missing:
            v = (missing & -missing).bit_length() - 1
            return OracleResult("ham_connected", False, (u, v))
    return OracleResult("ham_connected", True)


def oracle_pair_table(g: Graph, cap: int = ORACLE_CAP) -> dict[int, int]:
    """u -> set of v such that a Hamiltonian (u, v)-path exists."""
    _check_cap(g, cap)
    full = g.vertices
    return {u: _reach_table(g, 1 << u)[full] & ~(1 << u) for u in range(g.n)}


def _components_plain(g: Graph, keep: set[int]) -> int:
    seen: set[int] = set()
    count = 0
    for start in sorted(keep):
        if start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            for y in range(g.n):
                if y in keep and y not in seen and g.has_edge(x, y):
                    seen.add(y)
                    stack.append(y)
    return count


def _all_cutsets(g: Graph):
    verts = list(range(g.n))
    for size in range(g.n + 1):
        for combo in combinations(verts, size):
            keep = set(verts) - set(combo)
            c = _components_plain(g, keep)
            if c >= 2:
                yield set(combo), c


def oracle_toughness(g: Graph, cap: int = 12) -> OracleResult:
    """min |S|/c(G-S) over all cutsets; None stands for infinity."""
    _check_cap(g, cap)
    best = None
    arg = None
    for s, c in _all_cutsets(g):
        r = Fraction(len(s), c)
        if best is None or r < best:
            best, arg = r, s
    return OracleResult("toughness", best, arg)


def oracle_scattering(g: Graph, cap: int = 12) -> OracleResult:
    """max c(G-S)-|S| over all cutsets (None for complete graphs).

    extra["max_size"] is the largest cardinality of an optimal set.
    """
    _check_cap(g, cap)
    best = None
    sets: list[set[int]] = []
    for s, c in _all_cutsets(g):
        val = c - len(s)
        if best is None or val > best:
            best, sets = val, [s]
        elif val == best:
            sets.append(s)
    big = max((len(s) for s in sets), default=None)
    witness = min((sorted(s) for s in sets if len(s) == big), default=None)
    return OracleResult("scattering", best, witness, {"max_size": big, "optimal_sets": sets})


def oracle_t_tough_wrt(g: Graph, s: set[int], t: Fraction, cap: int = 16) -> OracleResult:
    """Plain enumeration of the relative-toughness condition."""
    _check_cap(g, cap)
    keep_all = set(range(g.n)) - set(s)
    parts = []
    seen: set[int] = set()
    for v in sorted(keep_all):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in keep_all:
                if y not in comp and g.has_edge(x, y):
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        parts.append(comp)
    t = Fraction(t)
    for w, c in _all_cutsets(g):
        if any(p <= w for p in parts):
            continue
        if Fraction(len(w), c) < t:
            return OracleResult("t_tough_wrt", False, sorted(w), {"components": c})
    return OracleResult("t_tough_wrt", True)


def oracle_induced_p4(g: Graph):
    """Every 4-set checked in every order; returns a tuple or None."""
    for quad in combinations(range(g.n), 4):
        for a, b, c, d in permutations(quad):
            if a > d:
                continue
            e = g.has_edge
            if e(a, b) and e(b, c) and e(c, d) and not e(a, c) and not e(a, d) and not e(b, d):
                return (a, b, c, d)
    return None


def oracle_induced_p4_union_p1(g: Graph):
    for quint in combinations(range(g.n), 5):
        for e in quint:
            rest = [v for v in quint if v != e]
            if any(g.has_edge(e, v) for v in rest):
                continue
            for a, b, c, d in permutations(rest):
                h = g.has_edge
                if h(a, b) and h(b, c) and h(c, d) and not h(a, c) and not h(a, d) and not h(b, d):
                    return (a, b, c, d, e)
    return None
