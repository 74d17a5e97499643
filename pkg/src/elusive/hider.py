"""Hider strategies for the infinite game, each with the invariant checks its correctness argument relies on.

Every strategy exposes ``respond(board, edge)`` (called before the edge is
played; the reply is assumed to be played), an optional ``after_play(board)``
hook, ``monitor(board)`` returning a :class:`MonitorReport`, and
``limit_certificate(board)`` describing why the current stage would still be a
Hider win if it never ended.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .board import GREEN, RED, Board, Color, Pair, iter_bits, low_mask, pair
from .properties import (
    BIPARTITE,
    CONNECTED,
    DecisionStatus,
    contains_cycle,
    cycle_of_length_exists,
    decide_sets,
    diameter_at_most,
    girth,
    girth_at_most,
    max_degree_at_least,
)
from .solver.bipartite import K, L, N, X, Y, hand_policy, subgame
from .solver.core import policy_from_table, solve


@dataclass
class Check:
    name: str
    ok: bool
    witness: object = None

    def to_dict(self) -> dict:
        d = {"check": self.name, "ok": self.ok}
        if self.witness is not None:
            d["witness"] = _jsonable(self.witness)
        return d


def _jsonable(x):
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(i) for i in items]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, Color):
        return x.value
    return x


@dataclass
class MonitorReport:
    turn: int
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def to_dict(self) -> dict:
        return {"turn": self.turn, "checks": [c.to_dict() for c in self.checks]}


class HiderStrategy:
    id = "hider"
    prop = None  # PropertyId the strategy defends

    def respond(self, board: Board, e: Pair) -> Color:
        raise NotImplementedError

    def after_play(self, board: Board) -> None:
        pass

    def checks(self, board: Board) -> list:
        return []

    def monitor(self, board: Board) -> MonitorReport:
        return MonitorReport(board.turn, self.checks(board))

    def limit_certificate(self, board: Board) -> list:
        return []


def green_degree_cap(board: Board) -> int:
    return max((board.degree(v, GREEN) for v in range(board.window)), default=0)


# -- minimal-edge strategies -------------------------------------------------


class KCycleHider(HiderStrategy):
    """Per stage: guard uv = least white edge, green exactly on a path u, u0..u_{k-3}, v."""

    def __init__(self, k: int, girth_mode: bool = False):
        if k < 3:
            raise ValueError("k must be >= 3")
        self.k = k
        self.girth_mode = girth_mode
        self.id = f"{'girth' if girth_mode else 'k-cycle'}:{k}"
        self.prop = girth_at_most(k) if girth_mode else contains_cycle(k)
        self.guard = None
        self.path: list[int] = []
        self.path_edges: set = set()
        self.stage = -1
        self._cycle_cache = (-1, None)

    def _ensure_stage(self, b: Board) -> None:
        if self.guard is not None:
            return
        self.guard = b.min_white_edge()
        u, v = self.guard
        self.path = [u, *b.fresh_vertices(self.k - 2, exclude=self.guard), v]
        self.path_edges = {pair(a, c) for a, c in zip(self.path, self.path[1:])}
        self.stage += 1

    def respond(self, b, e):
        e = pair(*e)
        self._ensure_stage(b)
        if e == self.guard:
            self.guard = None
            return RED
        return GREEN if e in self.path_edges else RED

    def after_play(self, b):
        if self.guard is not None and not b.is_white(self.guard):
            self.guard = None
        self._ensure_stage(b)

    def _bad_cycle(self, b):
        if self._cycle_cache[0] != b.green_count:
            green = b.green_edges()
            if self.girth_mode:
                bad = girth(green) <= self.k
            else:
                bad = cycle_of_length_exists(green, self.k)
            self._cycle_cache = (b.green_count, bad)
        return self._cycle_cache[1]

    def checks(self, b):
        name = f"no green cycle of length {'<=' if self.girth_mode else '=='} {self.k}"
        out = [Check(name, not self._bad_cycle(b), None if not self._bad_cycle(b) else b.green_edges())]
        if self.guard is not None:
            cycle = self.path_edges | {self.guard}
            red = [e for e in cycle if b.color_of(e) is RED]
            out.append(Check("reserved cycle has no red edge", not red, red or None))
            out.append(Check("guard is white", b.is_white(self.guard), None if b.is_white(self.guard) else self.guard))
        return out

    def limit_certificate(self, b):
        if self.guard is None:
            return [Check("stage boundary", True)]
        green = set(b.green_edges()) | self.path_edges
        status = decide_sets(self.prop, green, [self.guard], None)
        return [Check("undecided if the guard stays white", status is DecisionStatus.UNDECIDED, status.value)]


class DiameterHider(HiderStrategy):
    """Per stage: guard xy, fresh z_0..z_{d-2} and w; green on the four stage families."""

    def __init__(self, d: int):
        if d < 2:
            raise ValueError("d must be >= 2")
        self.d = d
        self.id = f"diameter:{d}"
        self.prop = diameter_at_most(d)
        self.guard = None
        self.stage = -1
        self._claims_cache = (None, None)

    def _ensure_stage(self, b):
        if self.guard is not None:
            return
        self.guard = b.min_white_edge()
        self.x, self.y = self.guard
        fresh = b.fresh_vertices(self.d, exclude=self.guard)
        self.z, self.w = fresh[:-1], fresh[-1]
        self.special = {self.x, self.y, self.w, *self.z}
        self.chain = {pair(self.y, self.z[0]), pair(self.z[0], self.w)}
        self.chain |= {pair(a, c) for a, c in zip(self.z, self.z[1:])}
        self.stage += 1

    def stage_green(self, e: Pair) -> bool:
        u, v = e
        if e in self.chain:
            return True
        su, sv = u in self.special, v in self.special
        if not su and not sv:
            return True
        if su and sv:
            return False
        s = u if su else v
        return s in (self.x, self.y, self.w)

    def respond(self, b, e):
        e = pair(*e)
        self._ensure_stage(b)
        if e == self.guard:
            self.guard = None
            return RED
        return GREEN if self.stage_green(e) else RED

    def after_play(self, b):
        if self.guard is not None and not b.is_white(self.guard):
            self.guard = None
        self._ensure_stage(b)

    def _limit_adjacency(self, b):
        """Green plus the white edges this stage would answer green, on window + one tail vertex."""
        V = b.window + 1
        full = low_mask(V)
        smask = sum(1 << v for v in self.special)
        amask = full & ~smask
        fam = []
        for v in range(V):
            if v == self.x:
                m = amask
            elif v == self.y:
                m = amask | 1 << self.z[0]
            elif v == self.w:
                m = amask | 1 << self.z[0]
            elif v in self.special:
                m = 0
                for a, c in self.chain:
                    if v in (a, c):
                        m |= 1 << (c if a == v else a)
            else:
                m = (amask | 1 << self.w | 1 << self.x | 1 << self.y) & ~(1 << v)
            if v < b.window:
                white = full & ~(b.green_adj(v) | b.red_adj(v) | 1 << v)
                m = b.green_adj(v) | (m & white)
            fam.append(m)
        return fam

    def _claims(self, b):
        adj = self._limit_adjacency(b)
        key = (self.stage, tuple(adj))
        if self._claims_cache[0] == key:
            return self._claims_cache[1]
        V = len(adj)
        x, y = self.guard
        # claim 1: every pair within distance d, guard included as a white edge
        rows = np.array([[m >> j & 1 for j in range(V)] for m in adj], dtype=np.int64)
        rows[x, y] = rows[y, x] = 1
        step = rows + np.eye(V, dtype=np.int64)
        reach = step.copy()
        for _ in range(self.d - 1):
            reach = np.minimum(reach @ step, 1)
        far = np.argwhere(reach == 0)
        c1 = Check(f"limit green-white distances <= {self.d}", len(far) == 0, [int(v) for v in far[0]] if len(far) else None)
        # claim 2: no green path of length <= d from x to z_{d-2} (guard excluded)
        target = self.z[-1]
        seen = frontier = 1 << x
        for _ in range(self.d):
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            frontier = nxt & ~seen
            seen |= nxt
        c2 = Check(f"no limit green path of length <= {self.d} from x to z_{self.d - 2}", not seen >> target & 1)
        result = [c1, c2]
        self._claims_cache = (key, result)
        return result

    def checks(self, b):
        if self.guard is None:
            return []
        return self._claims(b)

    def limit_certificate(self, b):
        if self.guard is None:
            return [Check("stage boundary", True)]
        return self._claims(b)


# -- stage strategies --------------------------------------------------------


class DegreeHider(HiderStrategy):
    """Green exactly on a-pivot edges with deg_G(a) < d-1, pivot = least unsaturated vertex."""

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("d must be >= 1")
        self.d = d
        self.id = f"degree:{d}"
        self.prop = max_degree_at_least(d)
        self._cursor = 0
        self.pivot = 0
        self.stage = 0
        self.stage_start = 0
        self._deg_cursor = 0
        self._deg_ok = True
        self._deg_witness = None

    def _saturated(self, b, v):
        return b.degree(v, GREEN) >= self.d - 1

    def _find_pivot(self, b):
        while self._cursor < b.window and self._saturated(b, self._cursor):
            self._cursor += 1
        return self._cursor

    def respond(self, b, e):
        e = pair(*e)
        if self.d == 1:
            return RED
        p = self._find_pivot(b)
        if p in e:
            a = e[0] if e[1] == p else e[1]
            if not self._saturated(b, a):
                return GREEN
        return RED

    def after_play(self, b):
        if self.d == 1:
            return
        p = self._find_pivot(b)
        if p != self.pivot:
            self.pivot, self.stage, self.stage_start = p, self.stage + 1, b.turn

    def checks(self, b):
        if b.turn < self._deg_cursor:
            self._deg_cursor, self._deg_ok = 0, True
        for e, c in b.history[self._deg_cursor :]:
            if c is GREEN and self._deg_ok:
                for v in e:
                    if b.degree(v, GREEN) > self.d - 1:
                        self._deg_ok, self._deg_witness = False, v
        self._deg_cursor = b.turn
        out = [Check(f"max green degree <= {self.d - 1}", self._deg_ok, self._deg_witness)]
        if self.d == 1:
            return out
        true_min = next((v for v in range(b.window) if not self._saturated(b, v)), b.window)
        out.append(Check("pivot is the least unsaturated vertex", true_min == self.pivot, [true_min, self.pivot]))
        bad = [
            a
            for a in iter_bits(b.red_adj(self.pivot))
            if b.turn_of[pair(a, self.pivot)] >= self.stage_start and not self._saturated(b, a)
        ]
        out.append(Check("stage reds at the pivot go to saturated vertices", not bad, bad or None))
        return out

    def limit_certificate(self, b):
        ok = green_degree_cap(b) <= self.d - 1
        return [Check("no green vertex of degree d; pivot keeps infinite white degree", ok)]


class SensitiveHider(HiderStrategy):
    """Green exactly on the edges of a witness graph."""

    WITNESSES = {"path": lambda e: e[1] == e[0] + 1}

    def __init__(self, witness: str | Callable = "path"):
        if isinstance(witness, str):
            if witness not in self.WITNESSES:
                raise ValueError(f"unknown witness {witness!r}")
            self.id = f"sensitive:{witness}"
            witness = self.WITNESSES[witness]
        else:
            self.id = "sensitive:custom"
        self.witness = witness
        self._cursor = 0
        self._bad = None

    def respond(self, b, e):
        return GREEN if self.witness(pair(*e)) else RED

    def checks(self, b):
        if b.turn < self._cursor:
            self._cursor, self._bad = 0, None
        for e, c in b.history[self._cursor :]:
            if self._bad is None and (c is GREEN) != bool(self.witness(e)):
                self._bad = e
        self._cursor = b.turn
        return [Check("green = witness on played edges", self._bad is None, self._bad)]


class ConnectedHider(HiderStrategy):
    """Answer green on nk iff red would leave no increasing green-white path from 0 to k."""

    id = "connected"
    prop = CONNECTED

    def __init__(self):
        self._reach_key = None
        self._reach = 0
        self._green_key = -1
        self._green_checks: list = []

    def reach(self, b: Board) -> int:
        """Vertices of the window reachable from 0 by an increasing green-white path."""
        key = (b.red_count, b.window)
        if key != self._reach_key:
            reach = 1
            for v in range(1, b.window):
                if (low_mask(v) & ~b.red_adj(v)) & reach:
                    reach |= 1 << v
            self._reach_key, self._reach = key, reach
        return self._reach

    def respond(self, b, e):
        n, k = pair(*e)
        reach = self.reach(b) & low_mask(k)
        if k > b.window:
            reach |= low_mask(k) & ~low_mask(b.window)
        alive = reach & ~b.red_adj(k) & ~(1 << n)
        return RED if alive else GREEN

    def checks(self, b):
        reach = self.reach(b)
        missing = low_mask(b.window) & ~reach
        out = [Check("good path to every vertex", not missing, next(iter_bits(missing), None))]
        if self._green_key != b.green_count:
            self._green_key = b.green_count
            self._green_checks = self._forest_checks(b)
        return out + self._green_checks

    def _forest_checks(self, b):
        bad2 = next((v for v in range(b.window) if (b.green_adj(v) & low_mask(v)).bit_count() > 1), None)
        # components of the green graph as bitmasks
        comp_of: dict[int, int] = {}
        for v in iter_bits(b.green_covered_mask):
            if v in comp_of:
                continue
            seen = frontier = 1 << v
            while frontier:
                nxt = 0
                for u in iter_bits(frontier):
                    nxt |= b.green_adj(u)
                frontier = nxt & ~seen
                seen |= nxt
            for u in iter_bits(seen):
                comp_of[u] = seen
        bad3 = None
        for v, comp in comp_of.items():
            inside = b.white_adj(v) & comp
            if inside:
                bad3 = pair(v, next(iter_bits(inside)))
                break
        return [
            Check("green down-degree <= 1", bad2 is None, bad2),
            Check("no white edge inside a green component", bad3 is None, bad3),
        ]

    def limit_certificate(self, b):
        return self.checks(b)


# -- bipartiteness -------------------------------------------------------------


def green_sides(b: Board, verts_mask: int):
    """2-colour the green graph on ``verts_mask``; returns (side0 mask, side1 mask, ok, connected)."""
    side = [0, 0]
    ok = True
    remaining = verts_mask
    comps = 0
    while remaining:
        root = (remaining & -remaining).bit_length() - 1
        comps += 1
        layer, parity, seen = 1 << root, 0, 1 << root
        while layer:
            side[parity] |= layer
            nxt = 0
            for v in iter_bits(layer):
                nxt |= b.green_adj(v)
            if nxt & side[parity] or nxt & layer:
                ok = False
            layer = nxt & ~seen
            seen |= nxt
            parity ^= 1
        remaining &= ~seen
    if side[0] & side[1]:
        ok = False
    return side[0], side[1], ok, comps <= 1


def stage_conditions(b: Board, n: int) -> Check:
    """(1) green core connected + bipartite, (2) fully colored, (3) covers 0..n-1."""
    gc = b.green_covered_mask
    missing = low_mask(n) & ~gc
    if missing:
        return Check("stage entry conditions", False, {"uncovered": next(iter_bits(missing))})
    s0, s1, bip, conn = green_sides(b, gc)
    if not (bip and conn):
        return Check("stage entry conditions", False, {"bipartite": bip, "connected": conn})
    for v in iter_bits(gc):
        white = gc & b.white_adj(v)
        if white:
            return Check("stage entry conditions", False, {"white": pair(v, next(iter_bits(white)))})
    return Check("stage entry conditions", True)


class _BipStage:
    def __init__(self, hider, b: Board, start_turn: int):
        gc = b.green_covered_mask
        self.start_turn = start_turn
        self.n = (~gc & (gc + 1)).bit_length() - 1
        s0, s1, _, _ = green_sides(b, gc)
        redn = b.red_adj(self.n)
        full0, full1 = (s0 & ~redn) == 0, (s1 & ~redn) == 0
        self.s = int(full0) + int(full1)
        if self.s == 1 and full1:
            s0, s1 = s1, s0
        self.parts = {X: s0, Y: s1}
        extra = b.fresh_vertices(self.s, exclude=[self.n])
        self.singles = {self.n: N}
        for v, role in zip(extra, (K, L)):
            self.singles[v] = role
        self.vertex_of = {role: v for v, role in self.singles.items()}
        self.spec = subgame(self.s)
        self.policy = hider.policy_for(self.s)
        self.history: list = []

    def role_of(self, v):
        if v in self.singles:
            return ("single", self.singles[v])
        for role, mask in self.parts.items():
            if mask >> v & 1:
                return ("part", role)
        return None

    def classify(self, b, e):
        u, v = e
        ru, rv = self.role_of(u), self.role_of(v)
        if ru is None or rv is None or (ru[0] == "part" and rv[0] == "part"):
            return None
        if ru[0] == "single" and rv[0] == "single":
            return pair(ru[1], rv[1]), True
        single, part = (u, rv[1]) if ru[0] == "single" else (v, ru[1])
        last = (self.parts[part] & b.white_adj(single)).bit_count() == 1
        return pair(self.singles[single], part), last

    def star_masks(self, b):
        """The abstract position p* as (green, red) masks of the subgame."""
        g = r = 0
        for i, (a, c) in enumerate(self.spec.universe):
            bit = 1 << i
            if (a, c) == (X, Y):
                g |= bit
                continue
            va = self.vertex_of[a]
            if c in (X, Y):
                part = self.parts[c]
                if b.green_adj(va) & part:
                    g |= bit
                elif part & ~b.red_adj(va) == 0:
                    r |= bit
            else:
                col = b.color_of(pair(va, self.vertex_of[c]))
                if col is GREEN:
                    g |= bit
                elif col is RED:
                    r |= bit
        return g, r


class BipartiteHider(HiderStrategy):
    """Stage strategy: embed each stage into one of three finite subgames and follow its policy there."""

    id = "bipartite"
    prop = BIPARTITE

    def __init__(self, tau2: str = "appendix"):
        if tau2 not in ("appendix", "solver"):
            raise ValueError("tau2 must be 'appendix' or 'solver'")
        self.tau2 = tau2
        self.stage: _BipStage | None = None
        self.stages: list = []  # (start turn, n, s)
        self._synced = -1
        self._checked_stages = 0
        self._bip_cursor = 0
        self._uf: dict = {}
        self._bip_bad = None

    def policy_for(self, s):
        if s == 2 and self.tau2 == "solver":
            spec = subgame(2)
            return policy_from_table(spec, solve(spec).policy)
        return hand_policy(s)

    def _sync(self, b):
        if b.turn == 0 or self._synced == b.turn:
            return
        self._synced = b.turn
        if self.stage is not None:
            n = self.stage.n
            if not b.green_covered_mask >> n & 1 or not stage_conditions(b, n + 1).ok:
                return
        self.stage = _BipStage(self, b, b.turn)
        self.stages.append((b.turn, self.stage.n, self.stage.s))

    def respond(self, b, e):
        e = pair(*e)
        if b.turn == 0:
            return GREEN
        self._sync(b)
        st = self.stage
        hit = st.classify(b, e)
        if hit is None or not hit[1]:
            return RED
        role_edge = hit[0]
        c = st.policy(list(st.history), role_edge)
        st.history.append((role_edge, c))
        return c

    def after_play(self, b):
        self._sync(b)

    def _parity_find(self, v):
        uf = self._uf
        path = []
        par = 0
        while uf.setdefault(v, (v, 0))[0] != v:
            path.append(v)
            p, bit = uf[v]
            par ^= bit
            v = p
        return v, par

    def checks(self, b):
        out = []
        if b.turn < self._bip_cursor:
            self._bip_cursor, self._uf, self._bip_bad = 0, {}, None
        for e, c in b.history[self._bip_cursor :]:
            if c is GREEN and self._bip_bad is None:
                (ru, pu), (rv, pv) = self._parity_find(e[0]), self._parity_find(e[1])
                if ru == rv:
                    if pu == pv:
                        self._bip_bad = e
                else:
                    self._uf[rv] = (ru, pu ^ pv ^ 1)
        self._bip_cursor = b.turn
        out.append(Check("green graph bipartite", self._bip_bad is None, self._bip_bad))
        while self._checked_stages < len(self.stages):
            turn, n, s = self.stages[self._checked_stages]
            self._checked_stages += 1
            prefix = b if turn == b.turn else _prefix_board(b, turn)
            c = stage_conditions(prefix, n)
            out.append(Check(f"stage entry conditions (turn {turn}, n={n})", c.ok, c.witness))
        st = self.stage
        if st is not None:
            star = st.star_masks(b)
            mine = st.spec.masks_after(st.history)
            out.append(Check("abstract position matches the subgame history", star == mine, None if star == mine else [star, mine]))
        return out

    def limit_certificate(self, b):
        st = self.stage
        if st is None:
            return [Check("before the first stage", True)]
        g, r = st.star_masks(b)
        cond_I, cond_II, cond_III = st.spec.conditions
        if cond_III(g, r):
            return [Check("subgame won; stage about to end", True)]
        return [
            Check("no green odd cycle in the subgame", not cond_I(g, r)),
            Check("a green-white odd cycle survives in the subgame", not cond_II(g, r)),
        ]


def _prefix_board(b: Board, turn: int) -> Board:
    nb = Board(window_cap=b.window_cap)
    for e, c in b.history[:turn]:
        nb.play(e, c)
    return nb


def monitor(strategy, b: Board) -> MonitorReport:
    """Run a strategy's checks at ``b``.

    ``strategy`` may be a strategy instance that produced ``b`` or an id
    string; for an id, a fresh instance is replayed along ``b``'s history and
    a replay mismatch is reported as a failed check.
    """
    if isinstance(strategy, HiderStrategy):
        return strategy.monitor(b)
    from .arena import make_hider

    h = make_hider(strategy)
    nb = Board(window_cap=b.window_cap)
    mismatch = None
    for e, c in b.history:
        reply = h.respond(nb, e)
        if reply is not c and mismatch is None:
            mismatch = (e, c)
        nb.play(e, c)
        h.after_play(nb)
    report = h.monitor(nb)
    report.checks.insert(0, Check("board follows the strategy", mismatch is None, mismatch))
    return report
