from itertools import combinations

import pytest

from conftest import DRAWN_D1, DRAWN_D2, DRAWN_D3, DRAWN_STARS, DRAWN_S, DRAWN_W, drawn_graph
from toughham.errors import Infeasible, MalformedInput
from toughham.generators import clique_join
from toughham.graph import Graph, as_mask, complete_bipartite, components, cycle_graph, members
from toughham.matchings import (StarMatching, check_generalized_matching, check_good_star_matching,
                                component_cut, generalized_k1r_matching, good_star_matching,
                                max_bipartite_matching, min_vertex_cover, witness_violates)


def star(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def test_matching_sizes():
    assert len(max_bipartite_matching(complete_bipartite(2, 3), {0, 1}, {2, 3, 4})) == 2
    assert len(max_bipartite_matching(cycle_graph(6), {0, 2, 4}, {1, 3, 5})) == 3
    assert len(max_bipartite_matching(star(4), {0}, {1, 2, 3, 4})) == 1


def test_vertex_covers():
    assert min_vertex_cover(complete_bipartite(2, 3), {0, 1}, {2, 3, 4}) == 0b11
    nk2 = Graph.from_edges(8, [(0, 1), (2, 3), (4, 5), (6, 7)])
    cover = min_vertex_cover(nk2, {0, 2, 4, 6}, {1, 3, 5, 7})
    assert cover.bit_count() == 4 and all(cover & as_mask(e) for e in nk2.edges())
    assert min_vertex_cover(star(4), {1, 2, 3, 4}, {0}) == 1


def test_drawn_component_cut():
    g = drawn_graph()
    assert component_cut(g, as_mask(DRAWN_D3)) == as_mask(DRAWN_W)


@pytest.mark.parametrize("name,comp", [("D1", DRAWN_D1), ("D2", DRAWN_D2), ("D3", DRAWN_D3)])
def test_drawn_matchings_are_good(name, comp):
    g = drawn_graph()
    ok, why = check_good_star_matching(g, DRAWN_S, comp, 4, DRAWN_STARS[name])
    assert ok, why


def test_d3_covers_two_vertices_outside_w():
    covered = {d for d, _ in DRAWN_STARS["D3"]}
    assert len(covered - set(DRAWN_W)) == 2


def test_k2_component_gets_two_double_stars():
    g = drawn_graph()
    cert = good_star_matching(g, as_mask(DRAWN_S), as_mask(DRAWN_D1), 4)
    sm = cert.star_matching
    assert sm.is_valid(g)
    assert sorted(len(leaves) for _, leaves in sm.stars) == [2, 2]
    assert check_good_star_matching(g, DRAWN_S, DRAWN_D1, 4, cert.edges)[0]


def test_single_vertex_with_one_partner_is_infeasible():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3), (0, 2)])
    with pytest.raises(Infeasible):
        good_star_matching(g, {1, 2}, {3}, 2)


def test_bad_matchings_rejected():
    g = drawn_graph()
    drawn = DRAWN_STARS["D3"]
    assert not check_good_star_matching(g, DRAWN_S, DRAWN_D3, 4, drawn[:3])[0]
    assert not check_good_star_matching(g, DRAWN_S, DRAWN_D3, 4, drawn[:3] + [(17, 11)])[0]


def test_generalized_on_k9_two_k1():
    g = clique_join(9, [1, 1])
    gm = generalized_k1r_matching(g, range(9), 2)
    assert [p.bit_count() for p in gm.partners] == [2, 2]
    assert not gm.partners[0] & gm.partners[1]
    assert check_generalized_matching(g, range(9), gm)[0]


def test_generalized_on_drawn_graph():
    g = drawn_graph()
    gm = generalized_k1r_matching(g, DRAWN_S, 4)
    assert check_generalized_matching(g, DRAWN_S, gm)[0]
    drawn = {name: as_mask(x for _, x in edges) for name, edges in DRAWN_STARS.items()}
    by_comp = dict(zip(gm.components, gm.partners))
    assert by_comp[as_mask(DRAWN_D1)] == drawn["D1"]
    assert by_comp[as_mask(DRAWN_D2)] == drawn["D2"]
    assert by_comp[as_mask(DRAWN_D3)] == drawn["D3"]


def test_pigeonhole_infeasible():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (0, 3), (1, 3)])
    with pytest.raises(Infeasible) as info:
        generalized_k1r_matching(g, {0, 1}, 3)
    assert info.value.certificate["source"] == "pigeonhole"


def test_infeasible_witness_breaks_toughness(rng):
    seen = 0
    for _ in range(300):
        n = rng.randint(5, 10)
        g = Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < 0.45])
        s = as_mask(v for v in range(n) if rng.random() < 0.4)
        if len(members(s)) < 2 or len(components(g, s)) < 2:
            continue
        try:
            generalized_k1r_matching(g, s, 1)
        except Infeasible as exc:
            cert = exc.certificate
            if cert["source"] in ("hall-argument", "enumeration"):
                assert witness_violates(g, s, cert["cutset"], 2)
                seen += 1
    assert seen > 0


def test_star_matching_validation():
    g = star(4)
    sm = StarMatching.from_edges([(0, 1), (0, 2)])
    assert sm.is_valid(g) and sm.edges() == [(0, 1), (0, 2)]
    assert not StarMatching([(0, (1,)), (2, (0,))]).is_valid(g)


def test_rejects_bad_r():
    with pytest.raises(MalformedInput):
        generalized_k1r_matching(clique_join(9, [1, 1]), range(9), 0)
