import pytest

from toughham.graph import (Graph, as_mask, complete_bipartite, complete_graph, components,
                            cycle_graph, disjoint_union, empty_graph, first_bad_edge, induced,
                            is_cycle, is_path, join, members, neighbors_in, path_graph)


def k4_minus_01():
    return complete_graph(4).with_edge_removed(0, 1)


def test_components_of_p3_without_middle():
    assert components(path_graph(3), {1}) == [as_mask({0}), as_mask({2})]


def test_complete_graph_is_one_component():
    assert components(complete_graph(4)) == [0b1111]


def test_k4_minus_edge_leaves_two_singletons():
    assert components(k4_minus_01(), {2, 3}) == [1, 2]


def test_induced_subgraphs():
    h, ids = induced(complete_graph(4), {0, 1, 2})
    assert h == complete_graph(3) and ids == [0, 1, 2]
    h, _ = induced(cycle_graph(5), {0, 1, 2, 3})
    assert h == path_graph(4)
    k23 = complete_bipartite(2, 3)
    h, ids = induced(k23, {2, 3, 4})
    assert h == empty_graph(3) and ids == [2, 3, 4]


def test_join_and_union():
    k1 = complete_graph(1)
    assert join(k1, k1) == complete_graph(2)
    two_k2 = disjoint_union(complete_graph(2), complete_graph(2))
    assert sorted(two_k2.edges()) == [(0, 1), (2, 3)]
    c4 = join(empty_graph(2), empty_graph(2))
    assert c4 == complete_bipartite(2, 2)
    assert all(c4.degree(v) == 2 for v in range(4))


def test_neighbors_in():
    assert neighbors_in(complete_graph(4), 0, {1, 2}) == as_mask({1, 2})
    assert neighbors_in(path_graph(3), 0, {2}) == 0
    assert neighbors_in(k4_minus_01(), 0, {1, 2, 3}) == as_mask({2, 3})


@pytest.mark.parametrize("adj", [[0b10, 0b00], [0b1, 0b0], [0b100, 0b0]])
def test_rejects_bad_adjacency(adj):
    with pytest.raises(ValueError):
        Graph(2, adj)


def test_from_edges_rejects_loops_and_range():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])


def test_walk_checks():
    g = cycle_graph(5)
    assert is_cycle(g, [0, 1, 2, 3, 4])
    assert is_path(g, [4, 0, 1])
    assert not is_cycle(g, [0, 2, 1, 3, 4])
    assert first_bad_edge(g, [0, 2, 1, 3, 4], closed=True) == (0, 2)
    assert first_bad_edge(g, [0, 1, 2], closed=False) is None


def test_members_round_trip():
    assert members(as_mask([5, 1, 3])) == [1, 3, 5]
