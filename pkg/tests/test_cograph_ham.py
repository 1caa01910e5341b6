import pytest

from toughham.cograph_ham import (ham_connected_wrt, jung_ham_connected, jung_ham_cycle,
                                  jung_ham_path, jung_path_cover, maximum_scattering_sets)
from toughham.errors import HypothesisViolation, Infeasible, MalformedInput
from toughham.generators import enumerate_cographs
from toughham.graph import (complete_bipartite, complete_graph, disjoint_union, empty_graph,
                            is_hamiltonian_cycle, is_hamiltonian_path, join, path_graph)
from toughham.metrics import scattering
from toughham.oracles import oracle_pair_table


def k4_minus_edge():
    return complete_graph(4).with_edge_removed(0, 1)


def test_paths():
    assert jung_ham_path(path_graph(3)) == [0, 1, 2]
    k23 = complete_bipartite(2, 3)
    p = jung_ham_path(k23)
    assert is_hamiltonian_path(k23, p) and p[0] in (2, 3, 4) and p[-1] in (2, 3, 4)


def test_path_infeasible_for_three_isolated_vertices():
    with pytest.raises(Infeasible) as info:
        jung_ham_path(empty_graph(3))
    assert info.value.certificate.value == 3 and info.value.certificate.witness == 0


def test_cycles():
    assert jung_ham_cycle(complete_graph(3)) == [0, 1, 2]
    k33 = complete_bipartite(3, 3)
    assert is_hamiltonian_cycle(k33, jung_ham_cycle(k33))
    with pytest.raises(Infeasible) as info:
        jung_ham_cycle(complete_bipartite(2, 3))
    assert info.value.certificate.witness == 0b11 and info.value.certificate.value == 1


def test_connected():
    assert jung_ham_connected(complete_graph(4), 0, 3) == [0, 1, 2, 3]
    with pytest.raises(Infeasible):
        jung_ham_connected(k4_minus_edge(), 0, 1)
    apex_2k2 = join(complete_graph(1), disjoint_union(complete_graph(2), complete_graph(2)))
    with pytest.raises(Infeasible):
        jung_ham_connected(apex_2k2, 1, 3)


def test_rejects_p4():
    with pytest.raises(MalformedInput):
        jung_ham_path(path_graph(4))


def test_path_covers():
    res = jung_path_cover(path_graph(3), v1=0)
    assert res.paths == [[0, 1, 2]] and res.honored["v1_endvertex"]
    two_k2 = disjoint_union(complete_graph(2), complete_graph(2))
    assert len(jung_path_cover(two_k2).paths) == 2
    res = jung_path_cover(complete_graph(4), v1=1, v2=2)
    assert len(res.paths) == 1 and {res.paths[0][0], res.paths[0][-1]} == {1, 2}


def test_wrt_smallest_case():
    g = k4_minus_edge()
    p = ham_connected_wrt(g, {2, 3}, 0, 2)
    assert is_hamiltonian_path(g, p) and (p[0], p[-1]) == (0, 2)


def test_wrt_k33_plus_edge_every_valid_pair():
    g = complete_bipartite(3, 3).with_edge_added(0, 1)
    table = oracle_pair_table(g)
    for s in maximum_scattering_sets(g):
        for u in range(6):
            for v in range(6):
                if u == v or (s >> u & 1 and s >> v & 1):
                    continue
                assert table[u] >> v & 1
                p = ham_connected_wrt(g, s, u, v)
                assert is_hamiltonian_path(g, p) and (p[0], p[-1]) == (u, v)


def test_wrt_rejects_both_ends_in_s():
    g = k4_minus_edge()
    with pytest.raises(HypothesisViolation):
        ham_connected_wrt(g, {2, 3}, 2, 3)


def test_small_cographs_paths_cycles():
    for n in range(1, 7):
        for g in enumerate_cographs(n):
            value = scattering(g).value
            if value <= 1:
                assert is_hamiltonian_path(g, jung_ham_path(g))
            if n >= 3 and value <= 0:
                assert is_hamiltonian_cycle(g, jung_ham_cycle(g))
