"""The three finite bipartiteness subgames and the hand-written Hider policies for them.

Role vertices: n=0, k=1, l=2, x=3, y=4.  The subgame with s extra red edges at
n uses {n,x,y}, {n,k,x,y} or {n,k,l,x,y}.  Hider policies are functions
``respond(history, edge) -> Color`` where ``history`` lists the subgame moves.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from ..board import GREEN, RED, WHITE, pair
from ..properties import components, odd_cycle_exists
from .core import FiniteGameSpec

N, K, L, X, Y = range(5)
ROLE_NAMES = {N: "n", K: "k", L: "l", X: "x", Y: "y"}

VERTICES = {0: (N, X, Y), 1: (N, K, X, Y), 2: (N, K, L, X, Y)}

# letters of the two larger subgames
TAU1_LETTERS = {"A": (N, K), "B": (N, X), "C": (N, Y), "D": (K, X), "E": (K, Y), "F": (X, Y)}
TAU2_LETTERS = {
    "A": (K, L), "B": (N, K), "C": (N, L), "D": (K, X), "E": (K, Y),
    "F": (L, X), "G": (L, Y), "H": (N, X), "I": (N, Y), "J": (X, Y),
}


def _invert(d):
    return {pair(*v): k for k, v in d.items()}


TAU1_OF = _invert(TAU1_LETTERS)
TAU2_OF = _invert(TAU2_LETTERS)


class _Analysis:
    """Cached structural facts about green / green-white masks of one universe."""

    def __init__(self, universe):
        self.universe = universe

        @lru_cache(maxsize=None)
        def edges(mask):
            return tuple(e for i, e in enumerate(universe) if mask >> i & 1)

        @lru_cache(maxsize=None)
        def bipartite(mask):
            return not odd_cycle_exists(edges(mask))[0]

        @lru_cache(maxsize=None)
        def sides(mask):
            """(connected, covered vertices, side map) of the green graph."""
            es = edges(mask)
            verts = sorted({v for e in es for v in e})
            if not verts or len(components(es, verts)) != 1:
                return False, frozenset(verts), None
            side = {verts[0]: 0}
            frontier = [verts[0]]
            while frontier:
                v = frontier.pop()
                for a, b in es:
                    w = b if a == v else a if b == v else None
                    if w is not None and w not in side:
                        side[w] = 1 - side[v]
                        frontier.append(w)
            return True, frozenset(verts), side

        self.edges, self.bipartite, self.sides = edges, bipartite, sides


_ANALYSES: dict = {}


def _analysis(universe) -> _Analysis:
    key = tuple(universe)
    if key not in _ANALYSES:
        _ANALYSES[key] = _Analysis(universe)
    return _ANALYSES[key]


def _conditions(spec):
    an = _analysis(spec.universe)
    full = spec.full_mask

    def cond_I(g, r):
        return not an.bipartite(g)

    def cond_II(g, r):
        return an.bipartite(full & ~r)

    def covered_core(g):
        if not g or not an.bipartite(g):
            return None
        connected, verts, side = an.sides(g)
        if not connected or N not in verts:
            return None
        return verts, side

    def white_inside(g, r, verts):
        white = full & ~(g | r)
        return [e for i, e in enumerate(spec.universe) if white >> i & 1 and e[0] in verts and e[1] in verts]

    def cond_III(g, r):
        core = covered_core(g)
        return core is not None and not white_inside(g, r, core[0])

    def blacksquare(g, r):
        core = covered_core(g)
        if core is None:
            return False
        verts, side = core
        return all(side[u] == side[v] for u, v in white_inside(g, r, verts))

    return cond_I, cond_II, cond_III, blacksquare


def make_bipartite_subgame(s: int) -> FiniteGameSpec:
    """Subgame G_s*: xy green, plus nx red (s >= 1) and ny red (s = 2)."""
    if s not in VERTICES:
        raise ValueError("s must be 0, 1 or 2")
    universe = [pair(u, v) for u, v in combinations(VERTICES[s], 2)]
    initial = {pair(X, Y): GREEN}
    if s >= 1:
        initial[pair(N, X)] = RED
    if s == 2:
        initial[pair(N, Y)] = RED
    spec = FiniteGameSpec(universe, initial, terminal=lambda g, r: False, hider_wins=lambda g, r: False, name=f"g{s}")
    cond_I, cond_II, cond_III, blacksquare = _conditions(spec)
    spec.terminal = lambda g, r: cond_I(g, r) or cond_II(g, r) or cond_III(g, r)
    spec.hider_wins = lambda g, r: cond_III(g, r) and not cond_I(g, r)
    spec.blacksquare = blacksquare
    spec.conditions = (cond_I, cond_II, cond_III)
    return spec


def guarded(spec: FiniteGameSpec, inner):
    """Answer red once the blacksquare endgame condition holds, else defer to ``inner``."""

    def respond(history, e):
        g, r = spec.masks_after(history)
        if spec.blacksquare(g, r):
            return RED
        return inner(history, e)

    return respond


def _green_connected(colors: dict, a: int, b: int) -> bool:
    es = [e for e, c in colors.items() if c is GREEN]
    for comp in components(es, {a, b} | {v for e in es for v in e}):
        if a in comp:
            return b in comp
    return False


# -- tau_0 ---------------------------------------------------------------


def tau0_raw(history, e):
    return GREEN if not history else RED


# -- tau_1 ---------------------------------------------------------------


def tau1_raw(history, e):
    col = {L_: WHITE for L_ in TAU1_LETTERS}
    col["B"], col["F"] = RED, GREEN
    first = TAU1_OF[pair(*history[0][0])] if history else TAU1_OF[pair(*e)]
    for pe, c in history:
        col[TAU1_OF[pair(*pe)]] = c
    P = TAU1_OF[pair(*e)]
    if not history:
        return RED if P == "D" else GREEN
    if first == "A":
        if P == "E":
            return GREEN
        if P in ("C", "D"):
            other = "D" if P == "C" else "C"
            return GREEN if col[other] is not WHITE else RED
        return RED
    if first == "D":
        roles = {TAU1_LETTERS[k]: c for k, c in col.items()}
        return RED if _green_connected(roles, N, Y) else GREEN
    if first == "E":
        if P in ("A", "C"):
            other = "C" if P == "A" else "A"
            return GREEN if col[other] is WHITE else RED
        return RED
    return RED  # first == "C": blacksquare already holds


# -- tau_2 (the 21-case table) ---------------------------------------------

_ID = {c: c for c in "ABCDEFGHIJ"}
_KL = dict(_ID, B="C", C="B", D="F", F="D", E="G", G="E")
_XY = dict(_ID, D="E", E="D", F="G", G="F", H="I", I="H")


def _compose(p, q):
    return {c: p[q[c]] for c in _ID}


_BOTH = _compose(_KL, _XY)
_PAIRS = {"D": "G", "G": "D", "E": "F", "F": "E"}


class _Tau2:
    def __init__(self):
        self.col = {c: WHITE for c in _ID}
        self.col["J"] = GREEN
        self.col["H"] = self.col["I"] = RED
        self.mode = "default"
        self.sig = _ID
        self.fired = False

    def cc(self, canon: str):
        """Color of the edge that plays the role of ``canon`` after symmetry."""
        return self.col[self.sig[canon]]

    def last_of_pair(self, canon: str) -> bool:
        return canon in _PAIRS and self.cc(_PAIRS[canon]) is not WHITE

    def reply(self, real: str):
        """Reply to ``real`` and advance the case state (colors not yet updated)."""
        m = self.mode
        if m == "default":
            if real in _PAIRS and self.col[_PAIRS[real]] is not WHITE:
                self.sig = {"D": _ID, "G": _BOTH, "F": _KL, "E": _XY}[real]
                self.mode = "1"
                return GREEN
            if real in ("B", "C"):
                self.sig = _ID if real == "B" else _KL
                d, e = self.cc("D"), self.cc("E")
                if d is WHITE and e is WHITE:
                    self.mode = "2.1"
                elif d is WHITE or e is WHITE:
                    if d is WHITE:
                        self.sig = _compose(_XY, self.sig)
                    self.mode = "2.2"
                else:
                    self.mode = "2.3"
                return GREEN
            if real == "A":
                self.mode = "3"
                return GREEN
            return RED
        P = self.sig[real]
        go = self._go
        if m == "1":
            return go({"A": ("1.1", GREEN), "B": ("done", GREEN), "C": ("1.3", GREEN)}, P)
        if m == "1.1":
            return go({"B": ("done", GREEN), "C": ("done", GREEN)}, P)
        if m == "1.3":
            if P == "B":
                if self.cc("F") is RED:
                    return go({"B": ("done", GREEN)}, P)
                return go({"B": ("1.3.2", RED)}, P)
            return go({"A": ("done", GREEN)}, P)
        if m == "1.3.2":
            return go({"A": ("done", GREEN), "F": ("done", GREEN)}, P)
        if m == "2.1":
            return go({"D": ("done", GREEN), "E": ("done", GREEN)}, P)
        if m == "2.2":
            return go(
                {"A": ("2.2.1", GREEN), "C": ("2.2.2", RED), "E": ("done", GREEN), "F": ("2.2.4", RED), "G": ("2.2.5", GREEN)},
                P,
            )
        if m == "2.2.1":
            if P == "G" or (P in ("E", "F") and self.last_of_pair(P)):
                return go({P: ("done", GREEN)}, P)
            return RED
        if m == "2.2.2":
            return go({"A": ("2.2.1", GREEN), "E": ("done", GREEN), "F": ("connect", RED), "G": ("first_AE", GREEN)}, P)
        if m == "connect":
            es = [TAU2_LETTERS[c] for c, col in self.col.items() if col is GREEN]
            verts = {v for e in es for v in e}
            return RED if len(components(es, verts)) == 1 else GREEN
        if m == "first_AE":
            return self._first_of(P, ("A", "E"))
        if m == "2.2.4":
            return go({"A": ("first_EG", GREEN), "C": ("connect", RED), "E": ("done", GREEN), "G": ("A_or_last_CE", GREEN)}, P)
        if m == "first_EG":
            return self._first_of(P, ("E", "G"))
        if m == "A_or_last_CE":
            if P == "A" or (P in ("C", "E") and self.cc("E" if P == "C" else "C") is not WHITE):
                return go({P: ("done", GREEN)}, P)
            return RED
        if m == "2.2.5":
            return go({"A": ("done", GREEN), "C": ("first_AE", RED), "E": ("first_AC", RED), "F": ("A_or_last_CE", RED)}, P)
        if m == "first_AC":
            return self._first_of(P, ("A", "C"))
        if m == "2.3":
            for group in (("A", "C"), ("F", "G")):
                if P in group:
                    other = group[1] if P == group[0] else group[0]
                    return GREEN if self.cc(other) is WHITE else RED
            return RED
        if m == "3":
            if P in ("B", "C"):
                return GREEN if self.cc("C" if P == "B" else "B") is WHITE else RED
            if P in _PAIRS and not self.fired and self.last_of_pair(P):
                self.fired = True
                return GREEN
            return RED
        return RED  # done: the blacksquare guard takes over

    def _go(self, table, P):
        if P in table:
            self.mode, c = table[P]
            return c
        return RED

    def _first_of(self, P, group):
        if P in group:
            self.mode = "done"
            return GREEN
        return RED


def tau2_raw(history, e):
    """Hand policy for G_2*, replaying the case analysis over the move history."""
    st = _Tau2()
    for pe, c in history:
        letter = TAU2_OF[pair(*pe)]
        st.reply(letter)
        st.col[letter] = c
    return st.reply(TAU2_OF[pair(*e)])


_RAW = {0: tau0_raw, 1: tau1_raw, 2: tau2_raw}
_SPECS: dict = {}


def subgame(s: int) -> FiniteGameSpec:
    if s not in _SPECS:
        _SPECS[s] = make_bipartite_subgame(s)
    return _SPECS[s]


def hand_policy(s: int):
    """tau_s wrapped with the blacksquare endgame (answer red once it holds)."""
    return guarded(subgame(s), _RAW[s])


def appendix_policy():
    return hand_policy(2)
