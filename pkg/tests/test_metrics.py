from fractions import Fraction
from itertools import combinations

import pytest

from toughham.errors import HypothesisViolation, InstanceTooLarge, MalformedInput
from toughham.generators import clique_join, enumerate_cographs, random_cograph
from toughham.graph import (Graph, as_mask, complete_bipartite, complete_graph, count_components,
                            cycle_graph, path_graph)
from toughham.metrics import (INF, NEG_INF, assert_scattering_lemma, format_rational,
                              is_minimal_cutset, is_t_tough_wrt, minimal_cutset_within,
                              minimal_element, parse_rational, require_t_tough_wrt, scattering,
                              toughness, toughness_wrt, wrt_violation)
from toughham.oracles import oracle_scattering, oracle_t_tough_wrt, oracle_toughness


def k4_minus_edge():
    return complete_graph(4).with_edge_removed(0, 1)


def random_graph(rng, n, p=0.5):
    return Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def test_rationals():
    assert parse_rational("9/2") == Fraction(9, 2)
    assert parse_rational("4.5") == Fraction(9, 2)
    assert parse_rational("inf") is INF
    assert format_rational(Fraction(46, 2)) == "23"
    assert INF > Fraction(10 ** 9) and NEG_INF < -5
    with pytest.raises(MalformedInput):
        parse_rational("two")


def test_toughness_examples():
    assert toughness(complete_graph(4)).value is INF
    c5 = toughness(cycle_graph(5), use_cotree=False)
    assert c5.value == 1 and c5.witness.bit_count() == 2 and c5.verify(cycle_graph(5))
    k23 = toughness(complete_bipartite(2, 3))
    assert k23.value == Fraction(2, 3) and k23.witness == 0b11


def test_toughness_cap():
    rng = __import__("random").Random(3)
    g = random_graph(rng, 30, 0.5)
    with pytest.raises(InstanceTooLarge):
        toughness(g, use_cotree=False)


def test_scattering_examples():
    cert = scattering(k4_minus_edge())
    assert cert.value == 0 and cert.witness == as_mask({2, 3})
    cert = scattering(path_graph(3))
    assert cert.value == 1 and cert.witness == 0b010
    cert = scattering(complete_bipartite(3, 3))
    assert cert.value == 0 and cert.witness in (0b000111, 0b111000)
    assert scattering(complete_graph(5)).value is NEG_INF


def test_wrt_examples():
    g = clique_join(9, [1, 1])
    assert is_t_tough_wrt(g, range(9), Fraction(9, 2))
    assert not is_t_tough_wrt(g, range(9), 5)
    w, c = wrt_violation(cycle_graph(6), {0, 3}, 2)
    assert Fraction(w.bit_count(), c) == 1
    with pytest.raises(HypothesisViolation) as info:
        require_t_tough_wrt(cycle_graph(6), {0, 3}, 2)
    assert info.value.kind == "toughness-wrt"
    with pytest.raises(MalformedInput):
        is_t_tough_wrt(complete_graph(5), {0, 1}, 1)


def test_toughness_wrt_value():
    g = clique_join(9, [1, 1])
    assert toughness_wrt(g, range(9)).value == Fraction(9, 2)
    cert = toughness_wrt(cycle_graph(6), {0, 3})
    assert cert.value == 1
    assert count_components(cycle_graph(6), cert.witness) == cert.components


def test_minimal_cutsets():
    with pytest.raises(MalformedInput):
        minimal_cutset_within(path_graph(3), {0, 1})
    assert minimal_cutset_within(path_graph(4), {1, 2}) == 0b0100
    assert minimal_cutset_within(complete_bipartite(2, 3), {0, 1, 2}) == 0b011
    assert minimal_cutset_within(cycle_graph(4), {0, 2}) == 0b101


def test_minimal_elements():
    assert minimal_element(path_graph(3), {1})[0] == 1
    assert minimal_element(path_graph(5), {1, 3})[0] == 1
    assert minimal_element(complete_bipartite(2, 3), {0, 1})[0] == 0


def test_scattering_lemma_examples():
    assert assert_scattering_lemma(complete_bipartite(3, 3), {0, 1, 2})
    assert assert_scattering_lemma(path_graph(3), {1})
    assert assert_scattering_lemma(k4_minus_edge(), {2, 3})


def test_is_minimal_cutset():
    assert is_minimal_cutset(path_graph(3), {1})
    assert not is_minimal_cutset(path_graph(3), {0, 1})


def test_values_against_oracle(rng):
    for _ in range(120):
        g = random_graph(rng, rng.randint(2, 9), rng.choice([0.3, 0.5, 0.7]))
        want = oracle_toughness(g).answer
        got = toughness(g).value
        assert got is INF if want is None else got == want
        want = oracle_scattering(g).answer
        got = scattering(g).value
        assert got is NEG_INF if want is None else got == want


def test_cotree_route_matches_enumeration(rng):
    for _ in range(80):
        g = random_cograph(rng.randint(2, 11), rng)
        assert toughness(g) == toughness(g, use_cotree=False)
        assert scattering(g) == scattering(g, use_cotree=False)


def test_all_small_cographs_cotree(rng):
    for g in enumerate_cographs(6):
        assert toughness(g) == toughness(g, use_cotree=False)


def test_wrt_against_oracle(rng):
    checked = 0
    for _ in range(200):
        g = random_graph(rng, rng.randint(4, 10), 0.6)
        s = as_mask(v for v in range(g.n) if rng.random() < 0.4)
        if count_components(g, s) < 2:
            continue
        t = rng.choice([Fraction(1), Fraction(3, 2), Fraction(2)])
        assert is_t_tough_wrt(g, s, t) == bool(oracle_t_tough_wrt(g, set(range(g.n)) & {
            v for v in range(g.n) if s >> v & 1}, t))
        checked += 1
    assert checked > 30
