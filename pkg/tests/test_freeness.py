from itertools import combinations

from toughham.freeness import (COMPLETE, P4, PARTIAL, cotree, completion_profile,
                               find_induced_p4, find_induced_p4_union_p1, is_p4_union_p1_free)
from toughham.generators import enumerate_cographs
from toughham.graph import (Graph, complete_bipartite, complete_graph, cycle_graph, disjoint_union,
                            join, path_graph)
from toughham.oracles import oracle_induced_p4, oracle_induced_p4_union_p1


def test_p4_witnesses():
    w = find_induced_p4(path_graph(4))
    assert w.vertices == (0, 1, 2, 3) and w.pattern == P4
    assert find_induced_p4(cycle_graph(4)) is None
    w = find_induced_p4(cycle_graph(5))
    assert w is not None and w.verify(cycle_graph(5))


def test_p4_union_p1():
    g = disjoint_union(path_graph(4), complete_graph(1))
    w = find_induced_p4_union_p1(g)
    assert w is not None and w.verify(g)
    p5 = path_graph(5)
    assert find_induced_p4_union_p1(p5) is None
    assert find_induced_p4(p5) is not None
    assert is_p4_union_p1_free(join(complete_graph(1), path_graph(4)))


def test_p5_has_no_p4_plus_p1_by_exhaustion():
    p5 = path_graph(5)
    assert not oracle_induced_p4_union_p1(p5)


def test_cotree_examples():
    assert str(cotree(complete_graph(3))) == "join(0, 1, 2)"
    two_k2 = disjoint_union(complete_graph(2), complete_graph(2))
    assert str(cotree(two_k2)) == "union(join(0, 1), join(2, 3))"
    w = cotree(path_graph(4))
    assert w.vertices == (0, 1, 2, 3)


def test_cotree_round_trip_on_all_small_cographs():
    for n in range(1, 7):
        for g in enumerate_cographs(n):
            tree = cotree(g)
            assert tree.is_canonical()
            assert tree.evaluate(g.n) == g


def test_witness_agrees_with_oracle_on_random_graphs(rng):
    for _ in range(150):
        n = rng.randint(4, 8)
        g = Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < 0.5])
        assert (find_induced_p4(g) is None) == (not oracle_induced_p4(g))
        assert (find_induced_p4_union_p1(g) is None) == (not oracle_induced_p4_union_p1(g))


def test_completion_profile():
    k23 = complete_bipartite(2, 3)
    for x in (0, 1):
        assert [st for _, st in completion_profile(k23, {0, 1}, x)] == [COMPLETE] * 3
    assert [st for _, st in completion_profile(path_graph(3), {1}, 1)] == [COMPLETE] * 2
    assert [st for _, st in completion_profile(path_graph(5), {2}, 2)] == [PARTIAL] * 2
