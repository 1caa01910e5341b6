"""Regenerate tests/data/fixtures.json.

Every stored instance had its hypotheses checked by exhaustive enumeration
when it was written; the tests check them again before use.

    python3 tests/data/build_fixtures.py
"""

from __future__ import annotations

import json
import random
import time
from fractions import Fraction
from pathlib import Path

from toughham.freeness import find_induced_p4, is_p4_union_p1_free
from toughham.generators import attached_instance, clique_join, clique_join_graph
from toughham.graph import Graph, complete_graph, induced, members, union_all
from toughham.metrics import NEG_INF, is_minimal_cutset, is_t_tough_wrt, scattering

OUT = Path(__file__).with_name("fixtures.json")


def _record(g: Graph, s: int, **extra) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges()], "s": members(s), **extra}


def _scat(g: Graph, s: int):
    h, _ = induced(g, g.vertices & ~s)
    return scattering(h).value


def wrt_fixtures(rng: random.Random, count: int) -> list[dict]:
    out = []
    ts = [Fraction(4), Fraction(9, 2), Fraction(5)]
    while len(out) < count:
        t = ts[len(out) % 3]
        ell = rng.choice([2, 2, 2, 3]) if t == 4 else 2
        ssz = int(t * ell) + rng.randint(0, 2)
        pieces = [rng.randint(1, 3) for _ in range(ell)]
        g, s = attached_instance(ssz, pieces, rng, p_inside=rng.choice([1.0, 0.6]),
                                 p_cross=rng.choice([1.0, 0.9, 0.8]))
        if g.n > 16 or len(members(g.vertices & ~s)) == 0:
            continue
        try:
            if not is_t_tough_wrt(g, s, t):
                continue
        except Exception:
            continue
        out.append(_record(g, s, t=str(t)))
    return out


def cover_fixtures(rng: random.Random, count: int) -> list[dict]:
    out = []
    while len(out) < count:
        ell = rng.choice([2, 2, 3])
        ssz = 4 * ell + rng.randint(0, 3)
        pieces = [rng.randint(1, 4) for _ in range(ell)]
        g, s = attached_instance(ssz, pieces, rng, p_inside=rng.choice([1.0, 0.7]),
                                 p_cross=rng.choice([1.0, 1.0, 0.9]))
        if g.n > 18 or not is_p4_union_p1_free(g):
            continue
        if find_induced_p4(g, g.vertices & ~s) is not None:
            continue
        val = _scat(g, s)
        if val == NEG_INF or val < 1 or not is_minimal_cutset(g, s):
            continue
        if not is_t_tough_wrt(g, s, 4):
            continue
        out.append(_record(g, s, scattering=val))
    return out


def _thin(g: Graph, s: int, rng: random.Random) -> Graph:
    """Drop some S-to-component edges at two S-vertices."""
    few = set(rng.sample(members(s), 2))
    keep = [e for e in g.edges()
            if not ((e[0] in few) != (e[1] in few) and (s >> e[0] & 1) != (s >> e[1] & 1)
                    and rng.random() < 0.5)]
    return Graph.from_edges(g.n, keep)


def _full_cross(g: Graph, s: int) -> bool:
    return all(g.adj[x] | s == g.vertices for x in members(s))


def covering_fixtures(rng: random.Random, count: int) -> list[dict]:
    out = [_record(clique_join(9, [1, 1]), (1 << 9) - 1, name="K9+2K1"),
           _record(clique_join_graph(12, union_all([complete_graph(2)] * 2)), (1 << 12) - 1,
                   name="K12+2K2")]
    shapes = [2] * 60 + [3] * 30 + [4] * 8
    for i, ell in enumerate(shapes):
        plain_ok = i % 8 == 0
        while True:
            ssz = int(4.5 * ell) + rng.randint(0, 3)
            pieces = [rng.randint(1, 3 if ell > 2 else 4) for _ in range(ell)]
            if ell == 2:
                g, s = attached_instance(ssz, pieces, rng, p_inside=rng.choice([1.0, 0.7]),
                                         p_cross=rng.choice([1.0, 0.9, 0.8]))
                if g.n > 17:
                    continue
            else:
                g, s = attached_instance(ssz, pieces, rng)
                g = _thin(g, s, rng)
            if _full_cross(g, s) and not plain_ok:
                continue
            if not is_p4_union_p1_free(g) or not is_minimal_cutset(g, s):
                continue
            try:
                if not is_t_tough_wrt(g, s, Fraction(9, 2)):
                    continue
            except Exception:
                continue
            out.append(_record(g, s, ell=ell))
            break
    return out[:count]


def main() -> None:
    rng = random.Random(20261014)
    data = {}
    for name, build, count in (("wrt", wrt_fixtures, 200), ("covers", cover_fixtures, 200),
                               ("covering", covering_fixtures, 100)):
        started = time.time()
        data[name] = build(rng, count)
        print(name, len(data[name]), f"{time.time() - started:.1f}s")
    OUT.write_text(json.dumps(data, separators=(",", ":")))


if __name__ == "__main__":
    main()
