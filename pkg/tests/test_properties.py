"""Randomised invariants, driven by hypothesis."""

import random
from fractions import Fraction
from itertools import combinations

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from toughham.cograph_ham import jung_ham_connected, jung_ham_cycle, jung_ham_path
from toughham.cycles import cycle_through_edges, extend_cycle_insert, main_hamiltonian
from toughham.errors import HypothesisViolation, Infeasible, MalformedInput
from toughham.freeness import (COMPLETE, PARTIAL, Cotree, completion_profile, cotree,
                               find_induced_p4, is_p4_union_p1_free)
from toughham.generators import attached_instance, clique_join, random_cograph
from toughham.graph import (Graph, as_mask, complete_graph, components, induced, is_cycle,
                            is_hamiltonian_cycle, is_hamiltonian_path, iter_bits, join, disjoint_union)
from toughham.graphio import format_graph, parse_graph
from toughham.matchings import (check_good_star_matching, generalized_k1r_matching,
                                good_star_matching, max_bipartite_matching, min_vertex_cover,
                                check_generalized_matching)
from toughham.metrics import INF, NEG_INF, is_t_tough_wrt, scattering, toughness
from toughham.oracles import (oracle_ham_connected, oracle_ham_cycle, oracle_ham_path,
                              oracle_scattering, oracle_toughness)

SETTINGS = settings(max_examples=120, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, lo=0, hi=9):
    n = draw(st.integers(lo, hi))
    pairs = list(combinations(range(n), 2))
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, b in zip(pairs, bits) if b])


@st.composite
def cographs(draw, lo=1, hi=12):
    n = draw(st.integers(lo, hi))
    seed = draw(st.integers(0, 10 ** 6))
    return random_cograph(n, random.Random(seed), draw(st.sampled_from([0.3, 0.5, 0.7])))


def subset(draw, n):
    return as_mask(v for v in range(n) if draw(st.booleans()))


@SETTINGS
@given(graphs())
def test_components_partition(g):
    parts = components(g)
    total = 0
    for p in parts:
        assert not total & p
        total |= p
    assert total == g.vertices and sum(p.bit_count() for p in parts) == g.n


@SETTINGS
@given(graphs())
def test_induced_on_everything_is_identity(g):
    h, ids = induced(g, g.vertices)
    assert h == g and ids == list(range(g.n))


@SETTINGS
@given(graphs(hi=5), graphs(hi=5), graphs(hi=4))
def test_join_union_algebra(a, b, c):
    assert join(a, b).num_edges() == a.num_edges() + b.num_edges() + a.n * b.n
    assert join(join(a, b), c) == join(a, join(b, c))
    assert disjoint_union(disjoint_union(a, b), c) == disjoint_union(a, disjoint_union(b, c))


@SETTINGS
@given(graphs(lo=1, hi=7))
def test_p4_free_iff_cotree(g):
    found = find_induced_p4(g)
    tree = cotree(g)
    assert (found is None) == isinstance(tree, Cotree)
    if found is not None:
        assert found.verify(g)
    else:
        assert tree.evaluate(g.n) == g and tree.is_canonical()


@SETTINGS
@given(cographs(hi=10), st.data())
def test_p4_cut_completeness(g, data):
    s = subset(data.draw, g.n)
    parts = components(g, s)
    assume(len(parts) >= 2)
    assume(all(sum(1 for p in parts if g.adj[x] & p) >= 2 for x in iter_bits(s)))
    for x in iter_bits(s):
        assert all(status != PARTIAL for _, status in completion_profile(g, s, x))


@SETTINGS
@given(graphs(lo=5, hi=8), st.data())
def test_p4_union_p1_cut_completeness(g, data):
    assume(is_p4_union_p1_free(g))
    s = subset(data.draw, g.n)
    parts = components(g, s)
    assume(len(parts) >= 2)
    comp_of = {v: p for p in parts for v in iter_bits(p)}
    rest = g.vertices & ~s
    for x in iter_bits(s):
        for y in iter_bits(g.adj[x] & rest):
            for z in iter_bits(rest & ~g.adj[x] & ~g.adj[y] & ~(1 << y)):
                if not any(p != comp_of[y] and p != comp_of[z] and g.adj[x] & p for p in parts):
                    continue
                for p, status in completion_profile(g, s, x):
                    if p != comp_of[z] and g.adj[x] & p:
                        assert status == COMPLETE


@SETTINGS
@given(graphs(hi=9))
def test_metrics_match_enumeration(g):
    want = oracle_toughness(g).answer
    got = toughness(g, use_cotree=False)
    assert (got.value is INF) if want is None else got.value == want
    assert got.verify(g)
    want = oracle_scattering(g).answer
    got = scattering(g, use_cotree=False).value
    assert (got is NEG_INF) if want is None else got == want


@SETTINGS
@given(st.integers(1, 4), graphs(lo=1, hi=6))
def test_universal_reduction_sound(s, h):
    g = join(complete_graph(s), h)
    want = oracle_toughness(g).answer
    got = toughness(g, use_cotree=False).value
    assert (got is INF) if want is None else got == want


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.lists(st.integers(1, 4), min_size=2, max_size=4))
def test_join_formula(s, parts):
    g = clique_join(s, parts)
    assume(g.n - s <= 16)
    assert toughness(g, use_cotree=False).value == Fraction(s, len(parts))


@SETTINGS
@given(st.integers(1, 8), st.integers(1, 8), st.data())
def test_konig(a, b, data):
    edges = [(i, a + j) for i in range(a) for j in range(b) if data.draw(st.booleans())]
    g = Graph.from_edges(a + b, edges)
    left, right = range(a), range(a, a + b)
    m = max_bipartite_matching(g, left, right)
    cover = min_vertex_cover(g, left, right)
    assert len(m) == cover.bit_count()
    assert all(cover & as_mask(e) for e in g.edges())


@SETTINGS
@given(graphs(lo=4, hi=10), st.data())
def test_good_star_matchings_revalidate(g, data):
    s = subset(data.draw, g.n)
    parts = components(g, s)
    assume(len(parts) >= 2)
    d = parts[data.draw(st.integers(0, len(parts) - 1))]
    r = data.draw(st.integers(1, 4))
    try:
        cert = good_star_matching(g, s, d, r)
    except Infeasible:
        return
    assert check_good_star_matching(g, s, d, r, cert.edges)[0]


def test_generalized_matching_completeness():
    rng = random.Random(99)
    ts = [Fraction(2), Fraction(5, 2), Fraction(3), Fraction(4)]
    found = 0
    while found < 60:
        t = ts[found % 4]
        ell = rng.randint(2, 3)
        pieces = [rng.randint(1, 3) for _ in range(ell)]
        g, s = attached_instance(int(t * ell) + rng.randint(0, 2), pieces, rng,
                                 p_inside=0.5, p_cross=rng.choice([0.6, 0.8, 1.0]))
        if g.n > 14 or len(components(g, s)) < 2 or not is_t_tough_wrt(g, s, t):
            continue
        found += 1
        gm = generalized_k1r_matching(g, s, int(t // 2))
        assert check_generalized_matching(g, s, gm)[0]


@SETTINGS
@given(graphs(lo=4, hi=10), st.sampled_from([1, 2, 3]))
def test_extend_grows_or_proves(g, t):
    try:
        c = cycle_through_edges(g, [])
    except Infeasible:
        return
    outside = components(g, as_mask(c))
    assume(outside)
    h = outside[0]
    try:
        out = extend_cycle_insert(g, c, h, t)
    except MalformedInput:
        return
    except HypothesisViolation as exc:
        ind = exc.witness["independent_set"]
        assert all(not g.has_edge(a, b) for a, b in combinations(ind, 2))
        return
    assert is_cycle(g, out) and set(c) < set(out)


@SETTINGS
@given(cographs(hi=12))
def test_cograph_operations_match_oracle(g):
    try:
        p = jung_ham_path(g)
        assert is_hamiltonian_path(g, p)
    except Infeasible:
        assert not oracle_ham_path(g)
    if g.n >= 3:
        try:
            assert is_hamiltonian_cycle(g, jung_ham_cycle(g))
        except Infeasible:
            assert not oracle_ham_cycle(g)
    if g.n >= 2:
        try:
            p = jung_ham_connected(g, 0, g.n - 1)
            assert is_hamiltonian_path(g, p) and (p[0], p[-1]) == (0, g.n - 1)
        except Infeasible:
            assert not oracle_ham_connected(g) or scattering(g).value >= 0


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 30), st.lists(st.integers(1, 5), min_size=2, max_size=5))
def test_main_is_deterministic(s, parts):
    g = clique_join(s, parts)
    t = Fraction(s, len(parts))
    assume(t >= 1)
    try:
        first = main_hamiltonian(g, t)
    except HypothesisViolation:
        return
    assert first.verify(g)
    assert main_hamiltonian(g, t).cycle == first.cycle


@SETTINGS
@given(graphs())
def test_graph_file_round_trip(g):
    assert parse_graph(format_graph(g)) == g
