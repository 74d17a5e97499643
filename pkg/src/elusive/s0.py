"""The separating property S0 at finite scale: template, hider, truncated checks, rigidity, reduction.

Roles are numbered a=0, p_i=1+i, q_j=7+j, x_i=13+i.  A truncation of size m
keeps a, P, Q and x_0..x_{m-1}.  The coloring f on bit sequences is replaced
by support parity, which flips whenever a single bit flips.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

import networkx as nx

from .board import GREEN, RED, Board, Color, Pair, pair
from .errors import HorizonExhausted, MalformedTranscript
from .hider import Check, HiderStrategy

A = 0
P0 = 1
Q0 = 7
X0 = 13
N_FIXED = 13

FREE = "free"


class Role(NamedTuple):
    kind: str  # "a", "p", "q" or "x"
    index: int = 0

    @property
    def vertex(self) -> int:
        return vertex_of(self)

    def __str__(self):
        return "a" if self.kind == "a" else f"{self.kind}{self.index}"


def vertex_of(r) -> int:
    if isinstance(r, int):
        return r
    if isinstance(r, str):
        r = parse_role(r)
    kind, i = r
    if kind == "a":
        return A
    if kind == "p" and 0 <= i < 6:
        return P0 + i
    if kind == "q" and 0 <= i < 6:
        return Q0 + i
    if kind == "x" and i >= 0:
        return X0 + i
    raise ValueError(f"bad role {r!r}")


def role_of(v: int) -> Role:
    if v < 0:
        raise ValueError("vertex ids are non-negative")
    if v == A:
        return Role("a")
    if v < Q0:
        return Role("p", v - P0)
    if v < X0:
        return Role("q", v - Q0)
    return Role("x", v - X0)


def parse_role(text: str) -> Role:
    text = text.strip().lower()
    if text == "a":
        return Role("a")
    if len(text) >= 2 and text[0] in "pqx" and text[1:].isdigit():
        r = Role(text[0], int(text[1:]))
        vertex_of(r)
        return r
    raise ValueError(f"bad role {text!r}")


def parse_role_pair(text: str) -> Pair:
    """'x0x1', 'x3p2', 'a-q4' -> vertex pair."""
    t = text.strip().lower().replace("-", "").replace(",", "").replace(" ", "")
    for cut in range(1, len(t)):
        try:
            u, v = vertex_of(parse_role(t[:cut])), vertex_of(parse_role(t[cut:]))
        except ValueError:
            continue
        if u != v:
            return pair(u, v)
    raise ValueError(f"bad role pair {text!r}")


def role_pair_name(e: Pair) -> str:
    return "".join(str(role_of(v)) for v in e)


# -- parity surrogate ------------------------------------------------------------


def parity_coloring(s) -> int:
    """Support parity of a bit string (str of 0/1 or a sequence of ints)."""
    if isinstance(s, str):
        s = [int(c) for c in s]
    if any(b not in (0, 1) for b in s):
        raise ValueError("bits must be 0 or 1")
    return sum(s) % 2


def _bits(s) -> list[int]:
    if isinstance(s, str):
        s = s.strip()
        if not s or any(c not in "01" for c in s):
            raise ValueError(f"bad bit string {s!r}")
        return [int(c) for c in s]
    return [int(b) for b in s]


def balanced_bits(m: int) -> list[int]:
    return [1 - i % 2 for i in range(m)]


# -- template --------------------------------------------------------------------


def template_edge(u, v):
    """GREEN, RED, or FREE for the pair of roles (ids or Role values)."""
    u, v = vertex_of(u), vertex_of(v)
    if u == v:
        raise ValueError("loops are not edges")
    ru, rv = sorted((role_of(u), role_of(v)))  # order: a < p < q < x
    ku, kv = ru.kind, rv.kind
    if ku == "a":
        if kv == "p":
            return GREEN
        if kv == "q":
            return RED
        return FREE
    if ku == "p":
        if kv == "p" or kv == "x":
            return GREEN
        return GREEN if ru.index < rv.index else RED
    if ku == "q":
        if kv == "q":
            return FREE if (ru.index < 3) == (rv.index < 3) else RED
        return RED
    return GREEN if abs(ru.index - rv.index) == 1 else RED


def is_free(e: Pair) -> bool:
    return template_edge(*e) == FREE


def q_block(e: Pair):
    """0 or 1 if e lies inside Q_0 or Q_1, else None."""
    ru, rv = role_of(e[0]), role_of(e[1])
    if ru.kind == rv.kind == "q" and (ru.index < 3) == (rv.index < 3):
        return 0 if ru.index < 3 else 1
    return None


def x_index_at_a(e: Pair):
    """i if e is x_i a, else None."""
    u, v = e
    if u == A and v >= X0:
        return v - X0
    return None


# -- colored truncations -----------------------------------------------------------


@dataclass
class ColoredGraph:
    """A coloring of pairs on a, P, Q, x_0..x_{m-1}."""

    m: int
    colors: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return N_FIXED + self.m

    def pairs(self):
        return combinations(range(self.n), 2)

    def green_edges(self) -> list:
        return sorted(e for e, c in self.colors.items() if c is GREEN)

    def color(self, u, v):
        return self.colors.get(pair(vertex_of(u), vertex_of(v)))

    def set(self, u, v, c) -> "ColoredGraph":
        self.colors[pair(vertex_of(u), vertex_of(v))] = Color(c)
        return self

    def copy(self) -> "ColoredGraph":
        return ColoredGraph(self.m, dict(self.colors))

    def g_bits(self) -> list:
        return [1 if self.colors.get((A, X0 + i)) is GREEN else 0 for i in range(self.m)]

    def to_nx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.green_edges())
        return G

    def to_dict(self) -> dict:
        return {"m": self.m, "edges": [{"e": list(e), "c": self.colors[e].value} for e in sorted(self.colors)]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d) -> "ColoredGraph":
        try:
            m = int(d["m"])
            if m < 1:
                raise ValueError("m must be >= 1")
            g = cls(m)
            for item in d["edges"]:
                u, v = item["e"]
                if not (0 <= u < g.n and 0 <= v < g.n) or u == v:
                    raise ValueError(f"pair {u}-{v} outside the truncation")
                e = pair(int(u), int(v))
                if e in g.colors:
                    raise ValueError(f"pair {u}-{v} listed twice")
                g.colors[e] = Color(item["c"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedTranscript(f"bad graph JSON: {exc}") from exc
        return g

    @classmethod
    def from_json(cls, text: str) -> "ColoredGraph":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedTranscript(f"bad graph JSON: {exc}") from exc
        return cls.from_dict(d)


def template_graph(m: int, g=None, q_green=()) -> ColoredGraph:
    """Template coloring truncated at m; x_i a follows g, [Q]^2 red except blocks listed in q_green."""
    g = balanced_bits(m) if g is None else _bits(g)
    if len(g) != m:
        raise ValueError("g must have length m")
    out = ColoredGraph(m)
    for e in out.pairs():
        t = template_edge(*e)
        if t != FREE:
            out.colors[e] = t
        elif (i := x_index_at_a(e)) is not None:
            out.colors[e] = GREEN if g[i] else RED
        else:
            out.colors[e] = GREEN if q_block(e) in q_green else RED
    return out


# -- truncated consistency -----------------------------------------------------------


def default_threshold(m: int) -> int:
    return math.ceil(m / 3)


@dataclass
class TruncationReport:
    m: int
    threshold: int
    failures: dict = field(default_factory=dict)  # property letter -> witness

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "verdict": "consistent-with-S0 at horizon m" if self.passed else "inconsistent",
            "passed": self.passed,
            "m": self.m,
            "threshold": self.threshold,
            "failures": {k: _plain(v) for k, v in sorted(self.failures.items())},
        }


def _plain(w):
    if isinstance(w, (list, tuple)):
        return [_plain(x) for x in w]
    return w


def s0_consistent_truncation(g: ColoredGraph, threshold: int | None = None) -> TruncationReport:
    """Check the truncated forms of properties (a)-(j) on a total coloring with fixed role numbering.

    Infinite degree at a becomes ``>= threshold`` green and red a-X edges;
    f becomes parity of the m bits read off the x_i a edges.
    """
    m, n = g.m, g.n
    t = default_threshold(m) if threshold is None else threshold
    rep = TruncationReport(m, t)
    fail = rep.failures
    missing = [e for e in g.pairs() if e not in g.colors]
    if missing:
        fail["total"] = missing[:5]
        return rep
    c = g.colors
    green = lambda u, v: c[pair(u, v)] is GREEN  # noqa: E731
    red_deg = [0] * n
    for (u, v), col in c.items():
        if col is RED:
            red_deg[u] += 1
            red_deg[v] += 1
    P = range(P0, P0 + 6)
    Q = range(Q0, Q0 + 6)
    X = range(X0, n)

    # (a) and (i): green and red edges at a, toward X
    ga = sum(green(A, x) for x in X)
    if ga < t or m - ga < t:
        fail["a"] = [ga, m - ga]
    # (b) red-degree ladder; Q must not look like P.  The red degree of a and
    # of each x_i is infinite in the limit, so truncation cannot test them here.
    ladder = [red_deg[p] for p in P]
    small = [q for q in Q if red_deg[q] <= 6]
    if ladder != [1, 2, 3, 4, 5, 6] or small:
        fail["b"] = [ladder, small]
    # (c)
    bad = [(u, v) for u in [A, *P] for v in P if u < v and not green(u, v)]
    if bad:
        fail["c"] = bad
    # (d) Q is exactly the set of non-P vertices missing a green edge to P; p_i q_j green iff i < j
    lacking = [v for v in range(n) if v not in P and not all(green(p, v) for p in P)]
    bad = [(p, q) for p in P for q in Q if green(p, q) != (p - P0 < q - Q0)]
    if lacking != list(Q) or bad:
        fail["d"] = [lacking, bad]
    # (e)
    bad = [(A, q) for q in Q if green(A, q)]
    bad += [(u, v) for u in Q[:3] for v in Q[3:] if green(u, v)]
    if bad:
        fail["e"] = bad
    # (f) the green X edges are exactly the path x_0 x_1 ... x_{m-1}
    bad = [(u, v) for u, v in combinations(X, 2) if green(u, v) != (v - u == 1)]
    if bad:
        fail["f"] = bad
    # (g), (h)
    bad = [(p, x) for p in P for x in X if not green(p, x)]
    if bad:
        fail["g"] = bad
    bad = [(q, x) for q in Q for x in X if green(q, x)]
    if bad:
        fail["h"] = bad
    # (j)
    f = parity_coloring(g.g_bits())
    block = Q[:3] if f == 0 else Q[3:]
    bad = [(u, v) for u, v in combinations(block, 2) if green(u, v)]
    if bad:
        fail["j"] = [f, bad]
    return rep


# -- isomorphism -------------------------------------------------------------------------


def _as_nx(g) -> nx.Graph:
    if isinstance(g, ColoredGraph):
        return g.to_nx()
    if isinstance(g, nx.Graph):
        return g
    n, edges = g
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges)
    return G


def graph_isomorphic(g1, g2) -> bool:
    """Isomorphism of green graphs (red = non-edge).  Accepts ColoredGraph, networkx graphs or (n, edges)."""
    return nx.is_isomorphic(_as_nx(g1), _as_nx(g2))


def automorphisms(g, limit: int | None = None) -> list[dict]:
    G = _as_nx(g)
    out = []
    for phi in nx.algorithms.isomorphism.GraphMatcher(G, G).isomorphisms_iter():
        out.append(phi)
        if limit is not None and len(out) >= limit:
            break
    return out


def automorphism_count(g, limit: int | None = None) -> int:
    return len(automorphisms(g, limit))


# -- rigidity -----------------------------------------------------------------------------

ISOMORPHIC = "Isomorphic"
NON_ISOMORPHIC = "NonIsomorphic"


def flip_subcase(e: Pair):
    """Which case of the rigidity argument a non-free X edge falls under (1-4), else None."""
    ru, rv = sorted((role_of(e[0]), role_of(e[1])))
    if rv.kind != "x":
        return None
    if ru.kind == "x":
        return 1 if abs(ru.index - rv.index) == 1 else 2
    return {"p": 3, "q": 4}.get(ru.kind)


@dataclass
class RigidityResult:
    verdict: str
    flip: Pair | None
    subcase: int | None
    compensation: Pair | None
    m: int

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "m": self.m,
            "flip": role_pair_name(self.flip) if self.flip else None,
            "subcase": self.subcase,
            "compensation": role_pair_name(self.compensation) if self.compensation else None,
        }


def flipped(base: ColoredGraph, e: Pair, compensate: bool = True):
    """Copy of base with e recolored; optionally toggle a free x_j a edge the other way so edge counts match."""
    out = base.copy()
    old = out.colors[e]
    out.colors[e] = RED if old is GREEN else GREEN
    comp = None
    if compensate:
        want = old  # a free edge currently of the new color switches back to old
        for j in reversed(range(base.m)):
            f = (A, X0 + j)
            if f != e and out.colors[f] is not want:
                out.colors[f] = want
                comp = f
                break
    return out, comp


def rigidity_check(m: int, flip=None, g=None, compensate: bool = True) -> RigidityResult:
    """Compare the truncated template G' with the variant G'' that disagrees with it on one template edge."""
    if m < 8:
        raise ValueError("m must be >= 8")
    base = template_graph(m, g)
    if flip is None:
        return RigidityResult(ISOMORPHIC if graph_isomorphic(base, base) else NON_ISOMORPHIC, None, None, None, m)
    e = parse_role_pair(flip) if isinstance(flip, str) else pair(*map(vertex_of, flip))
    if max(e) >= base.n:
        raise ValueError(f"{role_pair_name(e)} lies outside the truncation m={m}")
    if is_free(e):
        raise ValueError(f"{role_pair_name(e)} is a free edge, not a template edge")
    other, comp = flipped(base, e, compensate)
    verdict = ISOMORPHIC if graph_isomorphic(base, other) else NON_ISOMORPHIC
    return RigidityResult(verdict, e, flip_subcase(e), comp, m)


# -- reduction map -----------------------------------------------------------------------------


def reduction_map(s) -> ColoredGraph:
    """phi(s): x_i a green iff s_i = 1, [Q_i]^2 colored green iff i = 0, template elsewhere."""
    bits = _bits(s)
    if not bits:
        raise ValueError("empty bit string")
    return template_graph(len(bits), bits, q_green=(0,))


# -- Hider ---------------------------------------------------------------------------------------


class S0Hider(HiderStrategy):
    """Template replies; x_i a by g; red inside Q until the last edge of a block, then green and switch to h."""

    def __init__(self, horizon: int = 64, g=None, seed: int | None = None):
        if horizon < 2:
            raise ValueError("horizon must be >= 2")
        self.horizon = horizon
        self.id = f"s0:{horizon}"
        if g is not None:
            self.g = _bits(g)
            if len(self.g) != horizon:
                raise ValueError("g must have length horizon")
        elif seed is not None:
            rng = random.Random(seed)
            self.g = [rng.randint(0, 1) for _ in range(horizon)]
        else:
            self.g = balanced_bits(horizon)
        self.h = list(self.g)
        self.trigger = None  # (turn, k)
        self.constrained: set[int] = set()
        self._checked = 0

    @property
    def sequence(self) -> list[int]:
        return self.h

    def _x_index(self, e):
        i = x_index_at_a(e)
        if i is not None and i >= self.horizon:
            raise HorizonExhausted(f"x{i}a lies beyond the horizon {self.horizon}")
        return i

    def respond(self, b: Board, e):
        e = pair(*e)
        t = template_edge(*e)
        if t != FREE:
            return t
        i = self._x_index(e)
        if i is not None:
            self.constrained.add(i)
            return GREEN if self.h[i] else RED
        k = q_block(e)
        if self.trigger is None and self._last_white_in_block(b, e, k):
            self.trigger = (b.turn, k)
            self._reselect(1 - k)
            return GREEN
        return RED

    @staticmethod
    def _last_white_in_block(b, e, k):
        block = [Q0 + j for j in range(3 * k, 3 * k + 3)]
        return all(not b.is_white(f) for f in combinations(block, 2) if f != e)

    def _reselect(self, target: int) -> None:
        if parity_coloring(self.h) == target:
            return
        free = [i for i in range(self.horizon) if i not in self.constrained]
        if not free:
            raise HorizonExhausted("every coordinate below the horizon is already fixed")
        self.h[free[-1]] ^= 1

    def checks(self, b: Board):
        out = []
        bad = []
        q_green = []
        for turn, (e, c) in enumerate(b.history[self._checked:], self._checked):
            t = template_edge(*e)
            if t != FREE:
                if c is not t:
                    bad.append((turn, e))
            elif (i := x_index_at_a(e)) is not None:
                if c is not (GREEN if self.h[i] else RED):
                    bad.append((turn, e))
            elif c is GREEN:
                q_green.append(turn)
        self._checked = len(b.history)
        out.append(Check("replies follow the template and the current sequence", not bad, bad or None))
        trig_turn = self.trigger[0] if self.trigger else None
        stray = [t for t in q_green if t != trig_turn]
        out.append(Check("only the trigger edge inside Q is green", not stray, stray or None))
        if self.trigger is not None:
            k = self.trigger[1]
            ok = parity_coloring(self.h) == 1 - k
            out.append(Check("sequence parity is 1-k after the trigger", ok, None if ok else [k, self.h]))
            stale = [i for i in self.constrained if b.color_of((A, X0 + i)) is not (GREEN if self.h[i] else RED)]
            out.append(Check("colored x_i a edges agree with the sequence", not stale, stale or None))
        return out

    def completion(self, b: Board, m: int | None = None) -> ColoredGraph:
        """Color white edges as in the hider's argument: Q red, x_i a by the sequence, template elsewhere."""
        m = m or self.horizon
        out = template_graph(m, self.h[:m])
        for (u, v), c in b.colors.items():
            if v < out.n:
                out.colors[(u, v)] = c
        return out

    def limit_certificate(self, b: Board):
        m = self.horizon
        if b.window > N_FIXED + m:
            return [Check("play stayed inside the horizon", False, b.window)]
        base = self.completion(b)
        rep = s0_consistent_truncation(base)
        out = [Check("completion consistent with S0", rep.passed, None if rep.passed else rep.to_dict()["failures"])]
        white = [e for e in base.pairs() if b.is_white(e)]
        target = parity_coloring(self.h)
        pick = next((e for e in white if q_block(e) == target), None)
        if pick is None:
            pick = next((e for e in white if x_index_at_a(e) is not None), None)
        if pick is None:
            pick = next((e for e in white if not is_free(e)), None)
        if pick is None:
            out.append(Check("no white pair inside the horizon", True))
            return out
        alt = base.copy()
        alt.colors[pick] = RED if alt.colors[pick] is GREEN else GREEN
        bad = s0_consistent_truncation(alt)
        out.append(Check("one recolored white edge breaks S0", not bad.passed, role_pair_name(pick)))
        return out
