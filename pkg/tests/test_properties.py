import math
import random
from itertools import combinations, permutations, product

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elusive.board import GREEN, RED, Board
from elusive.errors import UnsupportedSemantics
from elusive.properties import (
    BIPARTITE,
    CONNECTED,
    NO_ISOLATED,
    NONEMPTY,
    TRIVIAL,
    DecisionStatus,
    FiniteUniverse,
    LimitRedFill,
    PropertyId,
    components,
    contains_cycle,
    cycle_of_length_exists,
    decide,
    decide_by_completions,
    decide_sets,
    diameter_at_most,
    girth,
    girth_at_most,
    holds,
    independent_edges,
    max_degree_at_least,
    max_matching,
    max_matching_size,
    odd_cycle_exists,
    shortest_path_len,
)

IN, OUT, UND = DecisionStatus.DECIDED_IN, DecisionStatus.DECIDED_OUT, DecisionStatus.UNDECIDED

TRIANGLE = [(0, 1), (1, 2), (0, 2)]
C4 = [(0, 1), (1, 2), (2, 3), (0, 3)]
C5 = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]


def graphs(max_v=7, max_e=10):
    return st.lists(
        st.tuples(st.integers(0, max_v - 1), st.integers(0, max_v - 1)).filter(lambda t: t[0] != t[1]).map(lambda t: tuple(sorted(t))),
        max_size=max_e,
        unique=True,
    )


# -- utilities --------------------------------------------------------------------


def test_components_examples():
    norm = lambda parts: sorted(sorted(p) for p in parts)  # noqa: E731
    assert norm(components([(0, 1)], {0, 1, 2})) == [[0, 1], [2]]
    assert norm(components([], {0})) == [[0]]
    assert norm(components([(0, 1), (1, 2), (3, 4)], range(5))) == [[0, 1, 2], [3, 4]]


def test_odd_cycle_examples():
    found, w = odd_cycle_exists(TRIANGLE)
    assert found and len(w) == 3
    assert odd_cycle_exists(C4) == (False, None)
    both = C5 + [(10, 11), (11, 12), (12, 13), (10, 13)]
    found, w = odd_cycle_exists(both)
    assert found and len(w) == 5


def _two_colorable(edges):
    verts = sorted({v for e in edges for v in e})
    for bits in product([0, 1], repeat=len(verts)):
        side = dict(zip(verts, bits))
        if all(side[u] != side[v] for u, v in edges):
            return True
    return False


@settings(max_examples=150)
@given(graphs(max_v=9, max_e=12))
def test_odd_cycle_against_two_coloring(edges):
    found, w = odd_cycle_exists(edges)
    assert found == (not _two_colorable(edges))
    if found:
        es = set(edges)
        assert len(w) % 2 == 1 and len(set(w)) == len(w)
        assert all(tuple(sorted((w[i], w[(i + 1) % len(w)]))) in es for i in range(len(w)))


def _brute_matching(edges):
    for r in range(len(edges), 0, -1):
        for sub in combinations(edges, r):
            vs = [v for e in sub for v in e]
            if len(vs) == len(set(vs)):
                return r
    return 0


def test_matching_examples():
    assert max_matching_size(TRIANGLE) == 1
    assert max_matching_size([(0, 1), (1, 2), (2, 3)]) == 2
    assert max_matching_size([]) == 0


def test_matching_brute_force_all_small_graphs():
    # every graph with <= 8 edges on 6 vertices would be too many; sample densely instead
    rng = random.Random(7)
    pool = list(combinations(range(7), 2))
    for _ in range(3000):
        edges = rng.sample(pool, rng.randint(0, 8))
        assert max_matching_size(edges) == _brute_matching(edges)


@settings(max_examples=200)
@given(graphs(max_v=12, max_e=25))
def test_matching_is_valid_and_maximum(edges):
    m = max_matching(edges)
    vs = [v for e in m for v in e]
    assert len(vs) == len(set(vs)) and set(m) <= set(edges)
    G = nx.Graph(edges)
    assert len(m) == len(nx.max_weight_matching(G, maxcardinality=True))


def test_shortest_path_examples():
    assert shortest_path_len([(0, 1), (1, 2)], 0, 2) == 2
    assert shortest_path_len([], 0, 1) == math.inf
    assert shortest_path_len(C5, 0, 2) == 2
    assert shortest_path_len([], 3, 3) == 0


@settings(max_examples=100)
@given(graphs(max_v=8, max_e=14), st.integers(0, 7), st.integers(0, 7))
def test_shortest_path_against_networkx(edges, a, b):
    G = nx.Graph(edges)
    G.add_nodes_from([a, b])
    want = nx.shortest_path_length(G, a, b) if nx.has_path(G, a, b) else math.inf
    assert shortest_path_len(edges, a, b) == want


def test_cycle_length_examples():
    assert cycle_of_length_exists(C4, 4)
    assert not cycle_of_length_exists(C4, 3)
    assert cycle_of_length_exists(list(combinations(range(4), 2)), 3)


def _brute_cycle(edges, k):
    es = set(edges)
    verts = sorted({v for e in edges for v in e})
    for combo in combinations(verts, k):
        for perm in permutations(combo[1:]):
            cyc = (combo[0], *perm)
            if all(tuple(sorted((cyc[i], cyc[(i + 1) % k]))) in es for i in range(k)):
                return True
    return False


@settings(max_examples=120)
@given(graphs(max_v=7, max_e=11), st.integers(3, 6))
def test_cycle_search_against_brute_force(edges, k):
    assert cycle_of_length_exists(edges, k) == _brute_cycle(edges, k)


@settings(max_examples=80)
@given(graphs(max_v=7, max_e=11))
def test_girth_against_brute_force(edges):
    want = next((k for k in range(3, 8) if _brute_cycle(edges, k)), math.inf)
    assert girth(edges) == want


# -- PropertyId ----------------------------------------------------------------------


def test_property_parse_and_ranges():
    assert PropertyId.parse("cycle:4") == contains_cycle(4)
    assert str(independent_edges(2)) == "indep:2"
    for bad in ("cycle:2", "indep:0", "diameter:0", "nope"):
        with pytest.raises(ValueError):
            PropertyId.parse(bad)


# -- decide ---------------------------------------------------------------------------


def test_decide_examples():
    b = Board()
    for e in TRIANGLE:
        b.play(e, GREEN)
    assert decide(contains_cycle(3), b) is IN
    assert decide(contains_cycle(3), Board()) is UND
    r = Board(window=3)
    for e in TRIANGLE:
        r.play(e, RED)
    assert decide(contains_cycle(3), r, FiniteUniverse(3)) is OUT


def test_connected_never_decided_at_finite_turns():
    rng = random.Random(3)
    b = Board()
    for _ in range(200):
        u, v = sorted(rng.sample(range(25), 2))
        if b.is_white((u, v)):
            b.play((u, v), rng.choice([GREEN, RED]))
        assert decide(CONNECTED, b) is UND
        assert decide(NO_ISOLATED, b) is UND
    # the module's own component search: window minus red is connected
    white_green = [e for e in combinations(range(b.window), 2) if b.color_of(e) is not RED]
    assert len(components(white_green, range(b.window))) == 1


def test_infinite_tail_rules():
    b = Board()
    assert decide(TRIVIAL, b) is IN
    assert decide(NONEMPTY, b) is UND
    b.play((0, 1), RED)
    assert decide(diameter_at_most(1), b) is OUT
    assert decide(diameter_at_most(2), b) is UND
    for e in TRIANGLE[1:]:
        b.play(e, GREEN)
    assert decide(BIPARTITE, b) is UND
    b.play((2, 3), GREEN)
    b.play((1, 3), GREEN)
    assert decide(BIPARTITE, b) is OUT
    assert decide(max_degree_at_least(4), b) is UND
    b.play((2, 4), GREEN)
    assert decide(max_degree_at_least(4), b) is IN


def test_unsupported_semantics():
    b = Board()
    b.play((0, 5), GREEN)
    with pytest.raises(UnsupportedSemantics):
        decide(CONNECTED, b, FiniteUniverse(4))
    with pytest.raises(UnsupportedSemantics):
        decide(CONNECTED, b, "bogus")


def test_limit_red_fill():
    b = Board()
    b.play((0, 1), GREEN)
    p = independent_edges(2)
    assert decide(p, b, LimitRedFill(frozenset({(0, 2)}))) is OUT
    assert decide(p, b, LimitRedFill(frozenset({(2, 3)}))) is UND


ALL_FINITE = [
    CONNECTED,
    BIPARTITE,
    NO_ISOLATED,
    NONEMPTY,
    TRIVIAL,
    contains_cycle(3),
    contains_cycle(4),
    girth_at_most(4),
    diameter_at_most(1),
    diameter_at_most(2),
    max_degree_at_least(2),
    max_degree_at_least(3),
    independent_edges(2),
]


@pytest.mark.parametrize("p", ALL_FINITE, ids=str)
def test_decide_matches_completion_oracle(p):
    rng = random.Random(hash(str(p)) % 1000)
    for _ in range(60):
        n = rng.randint(2, 5)
        pool = list(combinations(range(n), 2))
        b = Board(window=n, finite=True)
        for e in rng.sample(pool, rng.randint(0, len(pool))):
            if len([x for x in pool if b.is_white(x)]) <= 10 and rng.random() < 0.3:
                break
            b.play(e, rng.choice([GREEN, RED]))
        white = [e for e in pool if b.is_white(e)]
        if len(white) > 10:
            continue
        want = decide_by_completions(p, b.green_edges(), white, n)
        assert decide(p, b, FiniteUniverse(n)) is want


def test_decide_sets_bipartite_antimonotone():
    assert decide_sets(BIPARTITE, TRIANGLE, [], 3) is OUT
    assert decide_sets(BIPARTITE, [(0, 1)], [(1, 2)], 3) is IN
    assert decide_sets(BIPARTITE, [(0, 1), (1, 2)], [(0, 2)], 3) is UND


def test_holds_on_naturals():
    assert not holds(CONNECTED, [(0, 1)])
    assert not holds(NO_ISOLATED, [(0, 1)])
    assert holds(CONNECTED, [(0, 1)], 2)
    assert holds(diameter_at_most(2), [(0, 1), (0, 2)], 3)
    assert not holds(diameter_at_most(1), [(0, 1), (0, 2)], 3)
