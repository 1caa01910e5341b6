from fractions import Fraction
from itertools import combinations, permutations

import pytest

from toughham.errors import InstanceTooLarge, MalformedInput
from toughham.freeness import Cotree
from toughham.generators import FamilySpec, clique_join, enumerate_cographs, generate, relabel
from toughham.graph import Graph, complete_bipartite, cycle_graph
from toughham.oracles import (oracle_ham_connected, oracle_ham_cycle, oracle_ham_path,
                              oracle_induced_p4, oracle_toughness)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def test_ham_oracles():
    assert oracle_ham_cycle(cycle_graph(5))
    k23 = complete_bipartite(2, 3)
    assert not oracle_ham_cycle(k23) and oracle_ham_path(k23)
    assert not oracle_ham_cycle(petersen())
    assert not oracle_ham_connected(cycle_graph(5))


def test_oracle_cap():
    with pytest.raises(InstanceTooLarge):
        oracle_ham_cycle(cycle_graph(30))


def canonical(n, edges):
    return min(tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in edges))
               for p in permutations(range(n)))


def test_cograph_counts():
    assert len(list(enumerate_cographs(1))) == 1
    assert len(list(enumerate_cographs(2))) == 2
    pairs = list(combinations(range(4), 2))
    classes = set()
    for bits in range(1 << len(pairs)):
        edges = [e for k, e in enumerate(pairs) if bits >> k & 1]
        if not oracle_induced_p4(Graph.from_edges(4, edges)):
            classes.add(canonical(4, edges))
    produced = {canonical(4, g.edges()) for g in enumerate_cographs(4)}
    assert produced == classes and len(classes) == 10


def test_enumeration_has_no_duplicates():
    for n in range(1, 6):
        seen = [canonical(n, g.edges()) for g in enumerate_cographs(n)]
        assert len(seen) == len(set(seen))


def test_generated_clique_join_toughness():
    made = generate(FamilySpec("clique-join", {"s": 46, "parts": [1, 1]}))
    assert made.toughness.value == 23 and made.graph.n == 48
    assert isinstance(made.tree, Cotree)
    made = generate(FamilySpec("clique-join", {"s": 9, "parts": [12, 12]}))
    assert made.toughness.value == Fraction(9, 2)


def test_join_formula_against_brute_force():
    for s in range(1, 5):
        for parts in ([1, 1], [2, 1], [1, 1, 1], [2, 3], [3, 1, 1]):
            g = clique_join(s, parts)
            if g.n > 12:
                continue
            assert oracle_toughness(g).answer == Fraction(s, len(parts))


def test_random_cograph_is_reproducible():
    a = generate(FamilySpec("random-cograph", {"n": 10}, seed=7))
    b = generate(FamilySpec("random-cograph", {"n": 10}, seed=7))
    assert a.graph == b.graph and a.tree.evaluate(10) == a.graph


def test_unknown_family():
    with pytest.raises(MalformedInput):
        generate(FamilySpec("petersen"))


def test_relabel_preserves_structure():
    g = cycle_graph(5)
    h = relabel(g, [2, 4, 1, 0, 3])
    assert h.num_edges() == 5 and all(h.degree(v) == 2 for v in range(5))
