"""Exact toughness, scattering number, toughness relative to a cutset, and
minimal cutsets / minimal elements.

All ratios are exact fractions; the two infinities are sentinels that order
correctly against ints and Fractions.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import HypothesisViolation, InstanceTooLarge, MalformedInput
from .freeness import Cotree, cotree
from .graph import Graph, as_mask, components, induced, iter_bits, lift_mask, members

DEFAULT_CAP = int(os.environ.get("TOUGHHAM_ENUM_CAP", "24"))


class _Infinite:
    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def _key(self, other):
        if isinstance(other, _Infinite):
            return other.sign
        return 0

    def __lt__(self, other):
        return self.sign < self._key(other)

    def __le__(self, other):
        return self.sign <= self._key(other)

    def __gt__(self, other):
        return self.sign > self._key(other)

    def __ge__(self, other):
        return self.sign >= self._key(other)

    def __eq__(self, other):
        return isinstance(other, _Infinite) and other.sign == self.sign

    def __hash__(self):
        return hash(("inf", self.sign))

    def __neg__(self):
        return NEG_INF if self.sign > 0 else INF

    def __repr__(self):
        return "inf" if self.sign > 0 else "-inf"

    __str__ = __repr__


INF = _Infinite(1)
NEG_INF = _Infinite(-1)


def parse_rational(text) -> Fraction | _Infinite:
    """Parse "23", "9/2", "4.5" or "inf" exactly."""
    if isinstance(text, (_Infinite, Fraction)):
        return text
    if isinstance(text, int):
        return Fraction(text)
    raw = str(text).strip().lower()
    if raw in ("inf", "+inf", "infinity"):
        return INF
    try:
        value = Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"not a rational number: {text!r}") from exc
    if value < 0:
        raise MalformedInput(f"negative rational not allowed: {text!r}")
    return value


def format_rational(value) -> str:
    if isinstance(value, _Infinite):
        return str(value)
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def lex_less(a: int, b: int) -> bool:
    """a < b in lexicographic order of sorted members (equal sizes assumed)."""
    diff = a ^ b
    return bool(diff) and bool(a & diff & -diff)


@dataclass(frozen=True)
class ToughnessCertificate:
    value: object  # Fraction or INF
    witness: int | None
    components: int = 0

    def verify(self, g: Graph) -> bool:
        if self.witness is None:
            return self.value == INF and g.is_complete()
        c = len(components(g, self.witness))
        return c >= 2 and Fraction(self.witness.bit_count(), c) == self.value


@dataclass(frozen=True)
class ScatteringCertificate:
    value: object  # int or NEG_INF
    witness: int | None
    components: int = 0

    def verify(self, g: Graph) -> bool:
        if self.witness is None:
            return self.value == NEG_INF and g.is_complete()
        c = len(components(g, self.witness))
        return c >= 2 and c - self.witness.bit_count() == self.value


# ---------------------------------------------------------------------------
# cotree profile: for every k, the largest number of components obtainable by
# deleting exactly k vertices, together with the lexicographically smallest
# deletion set achieving it.


def _profile(node: Cotree) -> list[tuple[int, int]]:
    if node.kind == "leaf":
        return [(1, 0), (0, 1 << node.vertex)]
    kids = [_profile(ch) for ch in node.children]
    if node.kind == "union":
        acc = kids[0]
        for other in kids[1:]:
            merged: list[tuple[int, int] | None] = [None] * (len(acc) + len(other) - 1)
            for i, (ca, ma) in enumerate(acc):
                for j, (cb, mb) in enumerate(other):
                    cand = (ca + cb, ma | mb)
                    cur = merged[i + j]
                    if cur is None or cand[0] > cur[0] or (cand[0] == cur[0] and lex_less(cand[1], cur[1])):
                        merged[i + j] = cand
            acc = merged
        return acc
    leaf_masks = [as_mask(ch.leaves()) for ch in node.children]
    whole = 0
    for m in leaf_masks:
        whole |= m
    order = members(whole)
    size = len(order)
    out = []
    prefix = 0
    for k in range(size):
        out.append((1, prefix))
        prefix |= 1 << order[k]
    out.append((0, whole))
    for part, prof in zip(leaf_masks, kids):
        rest = whole & ~part
        base = rest.bit_count()
        for kk in range(len(prof) - 1):
            c, m = prof[kk]
            cand = (c, rest | m)
            cur = out[base + kk]
            if cand[0] > cur[0] or (cand[0] == cur[0] and lex_less(cand[1], cur[1])):
                out[base + kk] = cand
    return out


def _cograph_profile(g: Graph):
    tree = cotree(g)
    if isinstance(tree, Cotree):
        return _profile(tree)
    return None


# ---------------------------------------------------------------------------
# brute-force kernel


def _count_components(adj, rest: int) -> int:
    c = 0
    while rest:
        frontier = rest & -rest
        seen = frontier
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            frontier = nxt & rest & ~seen
            seen |= frontier
        rest &= ~seen
        c += 1
    return c


def _reduced(g: Graph, cap: int) -> tuple[int, list[int]]:
    forced = g.universal_vertices()
    free = members(g.vertices & ~forced)
    if len(free) > cap:
        raise InstanceTooLarge(
            f"{len(free)} vertices remain after universal-vertex reduction (cap {cap})",
            size=len(free), cap=cap)
    return forced, free


def toughness(g: Graph, cap: int = DEFAULT_CAP, use_cotree: bool = True) -> ToughnessCertificate:
    if g.is_complete():
        return ToughnessCertificate(INF, None)
    prof = _cograph_profile(g) if use_cotree else None
    if prof is not None:
        best = None
        for k, (c, m) in enumerate(prof):
            if c >= 2:
                ratio = Fraction(k, c)
                if best is None or ratio < best[0]:
                    best = (ratio, m, c)
        return ToughnessCertificate(best[0], best[1], best[2])
    forced, free = _reduced(g, cap)
    n = g.n
    adj = g.adj
    full = g.vertices
    best = None
    base = forced.bit_count()
    for extra in range(len(free) + 1):
        k = base + extra
        if k == 0:
            c = _count_components(adj, full)
            if c >= 2:
                return ToughnessCertificate(Fraction(0), 0, c)
            continue
        # the best conceivable ratio at this size is k/(n-k)
        if best is not None and n - k > 0 and Fraction(k, n - k) >= best[0]:
            break
        if n - k < 2:
            break
        for combo in combinations(free, extra):
            s = forced
            for v in combo:
                s |= 1 << v
            c = _count_components(adj, full & ~s)
            if c >= 2:
                ratio = Fraction(k, c)
                if best is None or ratio < best[0]:
                    best = (ratio, s, c)
    return ToughnessCertificate(best[0], best[1], best[2])


def scattering(g: Graph, cap: int = DEFAULT_CAP, use_cotree: bool = True) -> ScatteringCertificate:
    """s(g) with a maximum-cardinality, then lexicographically smallest, witness."""
    if g.is_complete():
        return ScatteringCertificate(NEG_INF, None)
    prof = _cograph_profile(g) if use_cotree else None
    if prof is not None:
        best = None
        for k, (c, m) in enumerate(prof):
            if c >= 2:
                val = c - k
                if best is None or val >= best[0]:
                    best = (val, m, c)
        return ScatteringCertificate(best[0], best[1], best[2])
    forced, free = _reduced(g, cap)
    n = g.n
    adj = g.adj
    full = g.vertices
    best = None
    base = forced.bit_count()
    for extra in range(len(free) + 1):
        k = base + extra
        if n - k < 2:
            break
        if best is not None and n - 2 * k < best[0]:
            break
        for combo in combinations(free, extra):
            s = forced
            for v in combo:
                s |= 1 << v
            c = _count_components(adj, full & ~s)
            if c < 2:
                continue
            val = c - k
            if best is None or val > best[0] or (val == best[0] and k > best[1].bit_count()):
                best = (val, s, c)
    return ScatteringCertificate(best[0], best[1], best[2])


def scattering_number(g: Graph, cap: int = DEFAULT_CAP):
    return scattering(g, cap).value


def ratio_below(w_size: int, comps: int, t) -> bool:
    """|W| / comps < t, exactly."""
    if isinstance(t, _Infinite):
        return t.sign > 0
    t = Fraction(t)
    return w_size * t.denominator < t.numerator * comps


def wrt_violation(g: Graph, s, t, cap: int = DEFAULT_CAP,
                  allow_connected: bool = False) -> tuple[int, int] | None:
    """First cutset W (size, then lex order) breaking t-toughness relative to s.

    W ranges over cutsets that leave part of every component of g - s.
    Returns (W, c(g - W)) or None.
    """
    s = as_mask(s)
    parts = components(g, s)
    if len(parts) < 2 and not (allow_connected and parts):
        raise MalformedInput("s is not a cutset", witness={"s": members(s)})
    t = parse_rational(t)
    forced, free = _reduced(g, cap)
    for p in parts:
        if p & ~forced == 0:
            # every cutset would swallow this component
            return None
    n = g.n
    adj = g.adj
    full = g.vertices
    base = forced.bit_count()
    for extra in range(len(free) + 1):
        k = base + extra
        if n - k < 2:
            break
        if not ratio_below(k, n - k, t):
            break
        for combo in combinations(free, extra):
            w = forced
            for v in combo:
                w |= 1 << v
            if any(p & ~w == 0 for p in parts):
                continue
            c = _count_components(adj, full & ~w)
            if c >= 2 and ratio_below(k, c, t):
                return w, c
    return None


def toughness_wrt(g: Graph, s, cap: int = DEFAULT_CAP) -> ToughnessCertificate:
    """Smallest |W|/c(g - W) over cutsets W leaving part of every component of g - s.

    INF (witness None) when no such cutset exists.
    """
    s = as_mask(s)
    parts = components(g, s)
    if len(parts) < 2:
        raise MalformedInput("s is not a cutset", witness={"s": members(s)})
    forced, free = _reduced(g, cap)
    if any(p & ~forced == 0 for p in parts):
        return ToughnessCertificate(INF, None)
    n = g.n
    adj = g.adj
    full = g.vertices
    base = forced.bit_count()
    best = None
    for extra in range(len(free) + 1):
        k = base + extra
        if n - k < 2:
            break
        if best is not None and n - k > 0 and Fraction(k, n - k) >= best[0]:
            break
        for combo in combinations(free, extra):
            w = forced
            for v in combo:
                w |= 1 << v
            if any(p & ~w == 0 for p in parts):
                continue
            c = _count_components(adj, full & ~w)
            if c >= 2 and (best is None or Fraction(k, c) < best[0]):
                best = (Fraction(k, c), w, c)
    if best is None:
        return ToughnessCertificate(INF, None)
    return ToughnessCertificate(*best)


def is_t_tough_wrt(g: Graph, s, t, cap: int = DEFAULT_CAP, allow_connected: bool = False) -> bool:
    """allow_connected also accepts an s with g - s connected (and nonempty)."""
    return wrt_violation(g, s, t, cap, allow_connected) is None


def require_t_tough_wrt(g: Graph, s, t, cap: int = DEFAULT_CAP, allow_connected: bool = False) -> None:
    found = wrt_violation(g, s, t, cap, allow_connected)
    if found is not None:
        w, c = found
        raise HypothesisViolation(
            "toughness-wrt",
            f"cutset of size {w.bit_count()} leaves {c} components, ratio below {format_rational(parse_rational(t))}",
            witness={"cutset": members(w), "components": c,
                     "ratio": format_rational(Fraction(w.bit_count(), c))})


def is_minimal_cutset(g: Graph, s) -> bool:
    """Inclusion-minimal: every member touches every component of g - s."""
    s = as_mask(s)
    parts = components(g, s)
    if len(parts) < 2:
        return False
    return all(all(g.adj[x] & p for p in parts) for x in iter_bits(s))


def minimal_cutset_within(g: Graph, s) -> int:
    s = as_mask(s)
    if len(components(g, s)) < 2:
        raise MalformedInput("s is not a cutset", witness={"s": members(s)})
    changed = True
    while changed:
        changed = False
        for v in members(s):
            smaller = s & ~(1 << v)
            if len(components(g, smaller)) >= 2:
                s = smaller
                changed = True
    return s


def _minimal_cutset_through(g: Graph, s: int, x: int, exhaustive_limit: int) -> int | None:
    """An inclusion-minimal cutset inside s that contains x, if one exists."""
    others = members(s & ~(1 << x))
    if len(others) <= exhaustive_limit:
        for size in range(len(others) + 1):
            for combo in combinations(others, size):
                cand = (1 << x) | as_mask(combo)
                if is_minimal_cutset(g, cand):
                    return cand
        return None
    for order in (others, others[::-1]):
        cur = s
        changed = True
        while changed:
            changed = False
            for v in order:
                if cur >> v & 1 and len(components(g, cur & ~(1 << v))) >= 2:
                    cur &= ~(1 << v)
                    changed = True
        if cur >> x & 1 and is_minimal_cutset(g, cur):
            return cur
    return None


def minimal_element(g: Graph, s, prefer_s_neighbor: bool = False,
                    exhaustive_limit: int = 14) -> tuple[int, int]:
    """(x, M): x in s lies in the minimal cutset M contained in s."""
    s = as_mask(s)
    if len(components(g, s)) < 2:
        raise MalformedInput("s is not a cutset", witness={"s": members(s)})
    order = members(s)
    if prefer_s_neighbor:
        order = [x for x in order if g.adj[x] & s] + [x for x in order if not g.adj[x] & s]
    fallback = minimal_cutset_within(g, s)
    for x in order:
        if fallback >> x & 1 and not prefer_s_neighbor:
            # ascending order: a smaller x would already have been found
            return x, fallback
        found = _minimal_cutset_through(g, s, x, exhaustive_limit)
        if found is not None:
            return x, found
    x = min(iter_bits(fallback))
    return x, fallback


def is_minimal_element(g: Graph, s, x: int, exhaustive_limit: int = 14) -> bool:
    s = as_mask(s)
    return bool(s >> x & 1) and _minimal_cutset_through(g, s, x, exhaustive_limit) is not None


def _subsets(items: list[int], limit: int, rng: random.Random, samples: int):
    if len(items) <= limit:
        for size in range(len(items) + 1):
            for combo in combinations(items, size):
                yield as_mask(combo)
    else:
        yield 0
        yield as_mask(items)
        for _ in range(samples):
            yield as_mask(v for v in items if rng.random() < 0.5)


def assert_scattering_lemma(g: Graph, s, cap: int = DEFAULT_CAP, exhaustive_limit: int = 12,
                            samples: int = 256, seed: int = 0) -> bool:
    """Check the three structural properties of a maximum scattering set s."""
    s = as_mask(s)
    parts = components(g, s)
    if len(parts) < 2:
        raise MalformedInput("s is not a cutset", witness={"s": members(s)})
    rng = random.Random(seed)
    items = members(s)
    # (1) every nonempty proper subset touches more components than its size
    for sub in _subsets(items, exhaustive_limit, rng, samples):
        if sub == 0 or sub == s:
            continue
        touched = [p for p in parts if any(g.adj[x] & p for x in iter_bits(sub))]
        if len(touched) < sub.bit_count() + 1:
            raise HypothesisViolation(
                "scattering-structure", "subset of the scattering set touches too few components",
                witness={"subset": members(sub), "touched": [members(p) for p in touched]}, claim="part-1")
    # (2) components have non-positive scattering number
    for p in parts:
        h, ids = induced(g, p)
        cert = scattering(h, cap)
        if cert.value != NEG_INF and cert.value > 0:
            raise HypothesisViolation(
                "scattering-structure", "a component has positive scattering number",
                witness={"component": members(p), "set": members(lift_mask(cert.witness, ids)),
                         "value": cert.value}, claim="part-2")
    # (3) only claimed for cographs
    if isinstance(cotree(g), Cotree):
        base_value = len(parts)
        for sub in _subsets(items, exhaustive_limit, rng, samples):
            h, ids = induced(g, g.vertices & ~sub)
            cert = scattering(h, cap)
            rest = s & ~sub
            expected = base_value - rest.bit_count()
            got_size = cert.witness.bit_count() if cert.witness is not None else None
            if cert.value != expected or got_size != rest.bit_count():
                raise HypothesisViolation(
                    "scattering-structure", "remaining set is not a maximum scattering set after deletion",
                    witness={"deleted": members(sub), "value": str(cert.value), "expected": expected},
                    claim="part-3")
    return True
