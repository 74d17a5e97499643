import json
import random
from itertools import combinations, product

import networkx as nx
import pytest

from elusive.board import GREEN, RED, Board, pair
from elusive.errors import HorizonExhausted, MalformedTranscript
from elusive.s0 import (
    A,
    FREE,
    ISOMORPHIC,
    NON_ISOMORPHIC,
    P0,
    Q0,
    X0,
    ColoredGraph,
    Role,
    S0Hider,
    automorphism_count,
    balanced_bits,
    flip_subcase,
    graph_isomorphic,
    parity_coloring,
    parse_role_pair,
    reduction_map,
    rigidity_check,
    role_of,
    role_pair_name,
    s0_consistent_truncation,
    template_edge,
    template_graph,
    vertex_of,
)

a = A


def p(i):
    return P0 + i


def q(j):
    return Q0 + j


def x(i):
    return X0 + i


# -- roles ---------------------------------------------------------------------------


def test_role_numbering():
    assert [vertex_of(Role("a", 0)), vertex_of(Role("p", 0)), vertex_of(Role("q", 5)), vertex_of(Role("x", 4))] == [0, 1, 12, 17]
    assert role_of(13) == Role("x", 0)
    assert parse_role_pair("x3p2") == (p(2), x(3))
    assert role_pair_name(parse_role_pair("x0x1")) in ("x0x1", "x0-x1")


# -- parity ---------------------------------------------------------------------------


@pytest.mark.parametrize("s, want", [("0101", 0), ("1000", 1), ("1", 1), ("", 0)])
def test_parity_examples(s, want):
    assert parity_coloring(s) == want


def test_parity_flips_under_single_bit_change():
    for n in range(1, 13):
        for bits in product([0, 1], repeat=n):
            base = parity_coloring(bits)
            for i in range(n):
                other = list(bits)
                other[i] ^= 1
                assert parity_coloring(other) != base


def test_parity_classes_dense_in_every_cylinder():
    rng = random.Random(0)
    for _ in range(300):
        fixed = dict(zip(rng.sample(range(12), rng.randint(0, 6)), (rng.randint(0, 1) for _ in range(6))))
        free = [i for i in range(12) if i not in fixed]
        seen = set()
        for bits in product([0, 1], repeat=len(free)):
            s = [0] * 12
            for i, b in fixed.items():
                s[i] = b
            for i, b in zip(free, bits):
                s[i] = b
            seen.add(parity_coloring(s))
            if len(seen) == 2:
                break
        assert seen == {0, 1}


# -- template ------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "u, v, want",
    [
        (a, p(0), GREEN),
        (p(2), q(1), RED),
        (x(3), a, FREE),
        (q(0), q(4), RED),
        (p(1), p(4), GREEN),
        (p(1), q(2), GREEN),
        (p(2), q(2), RED),
        (a, q(3), RED),
        (p(5), x(7), GREEN),
        (q(2), x(0), RED),
        (x(4), x(5), GREEN),
        (x(4), x(6), RED),
        (q(0), q(2), FREE),
        (q(3), q(5), FREE),
    ],
)
def test_template_edge_examples(u, v, want):
    assert template_edge(u, v) == want
    assert template_edge(v, u) == want


def test_template_truncation_at_ten():
    g = template_graph(10)
    red_deg = {v: 0 for v in range(g.n)}
    for (u, v), c in g.colors.items():
        if c is RED:
            red_deg[u] += 1
            red_deg[v] += 1
    assert [red_deg[p(i)] for i in range(6)] == [1, 2, 3, 4, 5, 6]
    for i, j in product(range(6), repeat=2):
        assert (g.color(p(i), q(j)) is GREEN) == (i < j)
    xs = sorted(e for e in g.green_edges() if min(e) >= X0)
    assert xs == [(x(i), x(i + 1)) for i in range(9)]


def test_template_automorphism_group_trivial():
    assert automorphism_count(template_graph(10)) == 1


# -- truncation checks ------------------------------------------------------------------


def test_truncation_template_passes():
    g = template_graph(10, "1010101010")
    rep = s0_consistent_truncation(g)
    assert rep.passed, rep.failures
    assert rep.to_dict()["verdict"] == "consistent-with-S0 at horizon m"


def test_truncation_green_in_both_blocks_fails_j():
    g = template_graph(10, "1010101010")
    g.set(q(0), q(1), GREEN)
    g.set(q(3), q(4), GREEN)
    rep = s0_consistent_truncation(g)
    assert set(rep.failures) == {"j"}


def test_truncation_broken_path_fails_f():
    g = template_graph(10, "1010101010")
    g.set(x(2), x(3), RED)
    rep = s0_consistent_truncation(g)
    assert "f" in rep.failures and not rep.passed


def test_truncation_detects_missing_and_ladder():
    g = template_graph(10)
    del g.colors[pair(p(0), p(1))]
    assert "total" in s0_consistent_truncation(g).failures
    h = template_graph(10)
    h.set(p(0), q(0), GREEN)
    assert {"b", "d"} <= set(s0_consistent_truncation(h).failures)


def test_truncation_degree_threshold():
    g = template_graph(9, "000000001")
    assert "a" in s0_consistent_truncation(g).failures
    assert "a" not in s0_consistent_truncation(g, threshold=1).failures


# -- isomorphism and rigidity -----------------------------------------------------------


def test_isomorphism_examples():
    c5 = nx.cycle_graph(5)
    relabeled = nx.relabel_nodes(c5, {0: 3, 1: 0, 2: 4, 3: 1, 4: 2})
    assert graph_isomorphic(c5, relabeled)
    assert not graph_isomorphic(c5, nx.path_graph(5))
    assert graph_isomorphic((5, list(c5.edges())), c5)


def test_template_vs_permuted_template():
    t = template_graph(10)
    perm = list(range(t.n))
    random.Random(3).shuffle(perm)
    G = nx.relabel_nodes(t.to_nx(), dict(enumerate(perm)))
    assert graph_isomorphic(t, G)


@pytest.mark.parametrize("flip, subcase", [("x0x1", 1), ("x0x2", 2), ("x3p2", 3), ("x3q1", 4)])
def test_rigidity_subcases(flip, subcase):
    res = rigidity_check(10, flip)
    assert res.verdict == NON_ISOMORPHIC
    assert res.subcase == subcase == flip_subcase(parse_role_pair(flip))
    assert res.compensation is not None


def test_rigidity_identity_and_errors():
    assert rigidity_check(10).verdict == ISOMORPHIC
    with pytest.raises(ValueError):
        rigidity_check(10, "x3a")
    with pytest.raises(ValueError):
        rigidity_check(6, "x0x1")
    with pytest.raises(ValueError):
        rigidity_check(10, "x12x13")


# -- reduction ---------------------------------------------------------------------------


def test_reduction_single_bit():
    g = reduction_map("1")
    assert g.color(a, x(0)) is GREEN
    assert g.color(q(0), q(1)) is GREEN and g.color(q(3), q(4)) is RED


def test_reduction_pass_iff_parity_one():
    for n in range(1, 11):
        for bits in product("01", repeat=n):
            s = "".join(bits)
            rep = s0_consistent_truncation(reduction_map(s), threshold=0)
            assert rep.passed == (parity_coloring(s) == 1), s


# -- graph JSON -------------------------------------------------------------------------


def test_graph_json_round_trip():
    g = template_graph(8)
    text = g.to_json()
    back = ColoredGraph.from_json(text)
    assert back.to_json() == text and back.colors == g.colors
    d = json.loads(text)
    assert d["m"] == 8 and {"e", "c"} == set(d["edges"][0])


@pytest.mark.parametrize("text", ["nope", '{"edges": []}', '{"m": 8, "edges": [{"e": [0, 0], "c": "green"}]}', '{"m": 8, "edges": [{"e": [0, 1], "c": "blue"}]}'])
def test_graph_json_malformed(text):
    with pytest.raises(MalformedTranscript):
        ColoredGraph.from_json(text)


# -- hider ---------------------------------------------------------------------------------


def _reply(h, b, e):
    c = h.respond(b, pair(*e))
    b.play(pair(*e), c)
    h.after_play(b)
    return c


def test_s0_hider_q_edges_and_trigger():
    h = S0Hider(horizon=10)
    b = Board()
    assert _reply(h, b, (q(0), q(1))) is RED
    assert _reply(h, b, (q(0), q(2))) is RED
    assert h.trigger is None
    assert _reply(h, b, (q(1), q(2))) is GREEN
    assert h.trigger == (2, 0)
    assert parity_coloring(h.h) == 1
    assert _reply(h, b, (q(3), q(4))) is RED
    assert all(c.ok for c in h.checks(b))


def test_s0_hider_reselect_respects_colored_x_edges():
    h = S0Hider(horizon=4, g="1100")  # parity 0
    b = Board()
    assert _reply(h, b, (a, x(0))) is GREEN
    assert _reply(h, b, (a, x(3))) is RED
    for e in [(q(3), q(4)), (q(3), q(5)), (q(4), q(5))]:
        _reply(h, b, e)
    assert h.trigger[1] == 1 and parity_coloring(h.h) == 0
    for e in [(q(0), q(1)), (q(0), q(2)), (q(1), q(2))]:
        _reply(h, b, e)
    h2 = S0Hider(horizon=4, g="1100")
    b2 = Board()
    _reply(h2, b2, (a, x(0)))
    _reply(h2, b2, (a, x(3)))
    for e in [(q(0), q(1)), (q(0), q(2)), (q(1), q(2))]:
        _reply(h2, b2, e)
    assert parity_coloring(h2.h) == 1
    assert h2.h[0] == 1 and h2.h[3] == 0


def test_s0_hider_template_replies_and_horizon():
    h = S0Hider(horizon=6)
    b = Board()
    for u, v in [(a, p(0)), (p(2), q(1)), (x(1), x(2)), (p(0), x(5))]:
        assert _reply(h, b, (u, v)) == template_edge(u, v)
    with pytest.raises(HorizonExhausted):
        h.respond(b, (a, x(6)))


def test_s0_hider_limit_certificate():
    h = S0Hider(horizon=8)
    b = Board()
    for u, v in combinations(range(0, 10), 2):
        _reply(h, b, (u, v))
    checks = h.limit_certificate(b)
    assert all(c.ok for c in checks), checks
    assert s0_consistent_truncation(h.completion(b)).passed


def test_balanced_bits():
    assert balanced_bits(5) == [1, 0, 1, 0, 1]
