"""Seeker strategies, forcing verdicts, and the Hider adversaries used to exercise them.

The phased strategies are written as generators: each ``yield`` hands an
edge to the game, and when the generator resumes the reply is on the board.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import count

from .board import GREEN, RED, Board, Color, Pair, canonical_index, iter_bits, low_mask, pair, pair_of
from .errors import ScriptEdgeNotWhite
from .hider import Check, HiderStrategy
from .properties import (
    NO_ISOLATED,
    DecisionStatus,
    LimitRedFill,
    decide,
    independent_edges,
    max_matching,
    max_matching_size,
)

ON_TRACK = "on_track"
TRAP_ENTERED = "trap_entered"
REFUTED = "refuted"
DECIDED = "decided"


@dataclass
class ForcingVerdict:
    kind: str = ON_TRACK
    trap: str | None = None
    witness: object = None

    def to_dict(self) -> dict:
        from .hider import _jsonable

        d = {"kind": self.kind}
        if self.trap is not None:
            d["trap"] = self.trap
        if self.witness is not None:
            d["witness"] = _jsonable(self.witness)
        return d


class SeekerStrategy:
    id = "seeker"
    prop = None

    def __init__(self):
        self.verdict = ForcingVerdict()
        self.checkpoints: list[Check] = []

    def next(self, board: Board) -> Pair | None:
        raise NotImplementedError

    def after_play(self, board: Board) -> None:
        pass

    def finalize(self, board: Board) -> ForcingVerdict:
        return self.verdict


def classify_edge(b: Board, e: Pair, k: int) -> str:
    """'relevant' iff adding ``e`` to the green graph creates k independent edges."""
    return "relevant" if max_matching_size(b.green_edges() + [pair(*e)]) >= k else "irrelevant"


def canonical_white(b: Board, start: int = 0, skip=()):
    """White edges in canonical order from index ``start`` (lazy, infinite)."""
    skip = set(skip)
    for i in count(start):
        e = pair_of(i)
        if e not in skip and b.is_white(e):
            yield e


# -- simple seekers -------------------------------------------------------------


class OneWhiteSeeker(SeekerStrategy):
    """Play every edge in canonical order except ``e``."""

    def __init__(self, e: Pair):
        super().__init__()
        self.e = pair(*e)
        self.id = f"one-white:{self.e[0]}-{self.e[1]}"
        self._cursor = 0

    def next(self, b):
        while True:
            cand = pair_of(self._cursor)
            if cand != self.e and b.is_white(cand):
                return cand
            self._cursor += 1


class RandomSeeker(SeekerStrategy):
    """Uniform white edge inside a soft window that widens as it fills up."""

    def __init__(self, seed: int):
        super().__init__()
        self.seed = seed
        self.id = f"random:{seed}"
        self.rng = random.Random(seed)
        self.S = 2

    def next(self, b):
        self.S = max(self.S, b.window, 2)
        while len(b.colors) * 2 > self.S * (self.S - 1) // 2:
            self.S += 1
        rng = self.rng
        for _ in range(64):
            v = rng.randrange(1, self.S)
            u = rng.randrange(v)
            if b.is_white((u, v)):
                return (u, v)
        white = [(u, v) for v in range(1, self.S) for u in range(v) if b.is_white((u, v))]
        if not white:
            self.S += 1
            return (self.S - 2, self.S - 1)
        return rng.choice(white)


class ScriptSeeker(SeekerStrategy):
    """Play a fixed move list; ``None`` once it runs out."""

    def __init__(self, moves, name: str = "script"):
        super().__init__()
        self.moves = [pair(*m) for m in moves]
        self.id = name
        self.i = 0

    def next(self, b):
        if self.i >= len(self.moves):
            return None
        e = self.moves[self.i]
        if not b.is_white(e):
            raise ScriptEdgeNotWhite(f"scripted move {self.i} {e} is already {b.color_of(e).value}")
        self.i += 1
        return e


# -- generator plumbing ---------------------------------------------------------


class _PlanSeeker(SeekerStrategy):
    def __init__(self):
        super().__init__()
        self.b: Board | None = None
        self._plan = None
        self._pending = None
        self._awaiting = False

    def _switch(self, plan):
        """Replace the running plan (used when a trap fires)."""
        self._plan = plan
        self._fresh = True

    def _advance(self):
        if self._fresh:
            self._fresh = False
            return next(self._plan)
        return self._plan.send(None)

    def next(self, b):
        self.b = b
        if self._plan is None:
            self._plan, self._fresh = self._main(), True
        if self._awaiting:
            self.after_play(b)
        e = self._pending if self._pending is not None else self._step()
        self._pending = None
        self._awaiting = True
        return e

    def after_play(self, b):
        if not self._awaiting:
            return
        self.b = b
        self._awaiting = False
        self._pending = self._step()

    def _step(self):
        self._before_step()
        try:
            return self._advance()
        except StopIteration:
            self._plan, self._fresh = self._enumerate(), True
            return self._advance()

    def _before_step(self):
        pass

    def _enumerate(self, skip=()):
        i = 0
        skip = {pair(*e) for e in skip}
        while True:
            e = pair_of(i)
            if e not in skip and self.b.is_white(e):
                yield e
            else:
                i += 1

    def green(self, e) -> bool:
        return self.b.color_of(pair(*e)) is GREEN


# -- k independent edges ------------------------------------------------------------


class IndependentEdgesSeeker(_PlanSeeker):
    """Force Hider to keep extending the green graph while capping green degrees at 2k-2."""

    WITHHELD = (0, 2)

    def __init__(self, k: int):
        super().__init__()
        if k < 2:
            raise ValueError("k must be >= 2")
        self.k = k
        self.id = f"indep:{k}"
        self.prop = independent_edges(k)
        self.pending_trap = ("all-red", {self.WITHHELD})
        self.rounds: list = []  # (turn, green count, max green degree)
        self._match_key = -1
        self._match = []
        self._trapped = False

    def matching(self):
        if self._match_key != self.b.green_count:
            self._match_key = self.b.green_count
            self._match = max_matching(self.b.green_edges())
        return self._match

    def _before_step(self):
        b, k = self.b, self.k
        if self.verdict.kind in (DECIDED, REFUTED):
            return
        m = self.matching()
        if len(m) >= k:
            self.verdict = ForcingVerdict(DECIDED, "matching", m[:k])
            return
        if self._trapped:
            return
        heavy = next((v for v in iter_bits(b.green_covered_mask) if b.degree(v, GREEN) >= 2 * k - 1), None)
        if heavy is not None:
            star = next(e for e in (pair(heavy, u) for u in count() if u != heavy) if b.is_white(e))
            self._trapped = True
            self.pending_trap = ("degree", {star})
            self.verdict = ForcingVerdict(TRAP_ENTERED, "degree", {"vertex": heavy, "withheld": star})
            self._switch(self._enumerate(skip={star}))

    def _max_deg(self):
        b = self.b
        return max((b.degree(v, GREEN) for v in iter_bits(b.green_covered_mask)), default=0)

    def _main(self):
        # phase 1: enumerate everything but one edge until the first green reply
        first = None
        for e in self._enumerate(skip={self.WITHHELD}):
            yield e
            if self.green(e):
                first = e
                break
        x = first[1]
        while True:
            new = yield from self._round(x)
            self.pending_trap = None
            gcount = self.b.green_count
            md = self._max_deg()
            prev = self.rounds[-1][1] if self.rounds else 1
            self.rounds.append((self.b.turn, gcount, md))
            self.checkpoints.append(Check("green edge count grows", gcount > prev, [prev, gcount]))
            if not self._trapped:
                self.checkpoints.append(Check(f"max green degree <= {2 * self.k - 2}", md <= 2 * self.k - 2, md))
            if gcount >= 4 * self.k * self.k:
                self.checkpoints.append(
                    Check("4k^2 green edges give k independent edges", len(self.matching()) >= self.k, gcount)
                )
            x = new

    def _round(self, x):
        """One extension round from a degree-1 vertex ``x``; returns the next degree-1 vertex."""
        b = self.b
        if b.degree(x, GREEN) != 1:
            x = next((v for v in iter_bits(b.green_covered_mask) if b.degree(v, GREEN) == 1), None)
            if x is None:
                self.verdict = ForcingVerdict(REFUTED, "no degree-1 vertex", b.green_edges())
                return (yield from self._enumerate())
        y = next(iter_bits(b.green_adj(x)))
        U = b.green_covered_mask
        others = U & ~(1 << y) & ~(1 << x)
        if others & b.white_adj(x):
            # play every white edge inside U - {x}
            inner = U & ~(1 << x)
            for v in iter_bits(inner):
                for u in iter_bits(inner & low_mask(v)):
                    if b.is_white((u, v)):
                        yield (u, v)
            # then the relevant white edges x-a
            while True:
                rel = next(
                    (pair(x, a) for a in iter_bits(others & b.white_adj(x)) if classify_edge(b, pair(x, a), self.k) == "relevant"),
                    None,
                )
                if rel is None:
                    break
                yield rel
                if self.green(rel):
                    return (yield from self._enumerate())
            I = [pair(x, a) for a in iter_bits(others & b.white_adj(x))]
            if I:
                if max_matching_size(b.green_edges() + I) >= self.k:
                    self.verdict = ForcingVerdict(REFUTED, "irrelevant set is relevant", I)
                self.pending_trap = ("extension", set(I))
                for i in count():
                    e = pair_of(i)
                    if U >> e[0] & 1 and U >> e[1] & 1 or not b.is_white(e):
                        continue
                    yield e
                    if self.green(e):
                        return e[1] if not U >> e[1] & 1 else e[0]
        # every x-a with a in U - {y} is red: apply the forcing claim to an edge at y
        star = next(e for e in (pair(y, u) for u in count() if u != y) if b.is_white(e))
        self.pending_trap = ("claim1", {star})
        for i in count():
            e = pair_of(i)
            if e == star or not b.is_white(e):
                continue
            yield e
            if self.green(e) and not (U >> e[0] & 1 and U >> e[1] & 1):
                return e[1] if not U >> e[1] & 1 else e[0]

    def finalize(self, b):
        self.b = b
        self._before_step()
        if self.verdict.kind in (DECIDED, REFUTED):
            return self.verdict
        if self.pending_trap is None:
            return self.verdict
        name, withheld = self.pending_trap
        white = {e for e in withheld if b.is_white(e)}
        status = decide(self.prop, b, LimitRedFill(frozenset(white)))
        if status is DecisionStatus.UNDECIDED:
            self.verdict = ForcingVerdict(REFUTED, name, {"withheld": sorted(white)})
        else:
            self.verdict = ForcingVerdict(TRAP_ENTERED, name, {"withheld": sorted(white), "limit": status.value})
        return self.verdict


# -- no isolated vertex -----------------------------------------------------------


def observation_edge(b: Board):
    """A white edge whose endpoints are both green-covered, if any."""
    gc = b.green_covered_mask
    for v in iter_bits(gc):
        w = b.white_adj(v) & gc & low_mask(v)
        if w:
            return pair(next(iter_bits(w)), v)
    return None


def claim_position(b: Board, x: int) -> bool:
    """x uncovered by green, every x-a (a green-covered) red, every other uncovered vertex has a white edge into the green cover."""
    gc = b.green_covered_mask
    if not gc or gc >> x & 1:
        return False
    if gc & ~b.red_adj(x):
        return False
    for v in range(b.window):
        if v != x and not gc >> v & 1 and not b.white_adj(v) & gc:
            return False
    return True


class NoIsolatedSeeker(_PlanSeeker):
    """Build a growing green star at x0 while isolating a vertex y, never touching z beyond yz."""

    id = "no-isolated"
    prop = NO_ISOLATED

    def __init__(self):
        super().__init__()
        self.xs: list[int] = []
        self.y = self.z = None
        self.m = None
        self.trap_state = None

    def _expect(self, e, want: Color):
        """After the reply to ``e``: if it deviates, enter the matching trap and return the trap plan."""
        b = self.b
        got = b.color_of(e)
        if got is want:
            return None
        if got is GREEN:
            return self._observation_trap()
        x = next(v for v in e if not b.green_covered_mask >> v & 1)
        return self._claim_trap(x)

    def _observation_trap(self):
        w = observation_edge(self.b)
        if w is None:
            self.verdict = ForcingVerdict(REFUTED, "observation", self.b.green_edges())
            return self._enumerate()
        self.verdict = ForcingVerdict(TRAP_ENTERED, "observation", w)
        self.trap_state = ("observation", w)
        return self._enumerate(skip={w})

    def _claim_trap(self, x):
        b = self.b
        if not claim_position(b, x):
            self.verdict = ForcingVerdict(REFUTED, "claim", x)
            return self._enumerate()
        self.verdict = ForcingVerdict(TRAP_ENTERED, "claim", x)
        self.trap_state = ("claim", x)
        return self._claim_plan(x, b.green_covered_mask)

    def _claim_plan(self, x, U):
        for v in count():
            if v == x or U >> v & 1:
                continue
            e = pair(x, v)
            if not self.b.is_white(e):
                continue
            yield e
            if self.green(e):
                yield from self._observation_trap()
                return

    def _main(self):
        b = self.b
        # opening: edges at x0 = 0 until the first green reply
        for j in count(1):
            yield (0, j)
            if self.green((0, j)):
                break
        m = self.m = j
        xs = list(range(m + 1))
        for i in range(1, m):
            for j in range(i + 1, m + 1):
                e = pair(xs[i], xs[j])
                yield e
                trap = self._expect(e, GREEN if j == m else RED)
                if trap is not None:
                    yield from trap
                    return
        xs[0], xs[m] = xs[m], xs[0]
        self.xs = xs
        self.y, self.z = b.fresh_vertices(2)
        y = self.y
        for e in [pair(y, self.z)] + [pair(y, xs[i]) for i in range(m)]:
            yield e
            trap = self._expect(e, RED)
            if trap is not None:
                yield from trap
                return
        taken = set(xs) | {y, self.z}
        rest = (v for v in count() if v not in taken)
        while True:
            top = len(xs) - 1
            new = next(rest)
            xs.append(new)
            for j in range(top, -1, -1):
                e = pair(new, xs[j])
                yield e
                trap = self._expect(e, GREEN if j == 0 else RED)
                if trap is not None:
                    yield from trap
                    return
            e = pair(y, xs[top])
            yield e
            trap = self._expect(e, RED)
            if trap is not None:
                yield from trap
                return
            self._structure_check()

    def _structure_check(self):
        b, xs, y, z = self.b, self.xs, self.y, self.z
        star = {pair(xs[0], v) for v in xs[1:]}
        green = set(b.green_edges())
        self.checkpoints.append(Check("green edges form the star at x0", green == star, sorted(green ^ star) or None))
        y_green = b.green_adj(y)
        self.checkpoints.append(Check("every played edge at y is red", not y_green, list(iter_bits(y_green)) or None))
        z_touch = (b.green_adj(z) | b.red_adj(z)) & ~(1 << y)
        self.checkpoints.append(Check("z only touched by yz", not z_touch, list(iter_bits(z_touch)) or None))

    def finalize(self, b):
        self.b = b
        if self.verdict.kind != ON_TRACK:
            kind, arg = self.trap_state if self.trap_state else (None, None)
            if kind == "observation":
                u, v = arg
                gc = b.green_covered_mask
                if not (b.is_white(arg) and gc >> u & 1 and gc >> v & 1):
                    self.verdict = ForcingVerdict(REFUTED, "observation", arg)
            elif kind == "claim":
                if b.green_adj(arg):
                    self.verdict = ForcingVerdict(REFUTED, "claim", arg)
            return self.verdict
        if self.m is None and b.degree(0, GREEN) == 0:
            return ForcingVerdict(TRAP_ENTERED, "isolated-x0", 0)
        return self.verdict


# -- Hider adversaries for the Seeker strategies ---------------------------------------


class RandomHider(HiderStrategy):
    def __init__(self, seed: int, p_green: float = 0.5):
        self.id = f"random:{seed}"
        self.rng = random.Random(seed)
        self.p = p_green

    def respond(self, b, e):
        return GREEN if self.rng.random() < self.p else RED


class IndependentCompliantHider(HiderStrategy):
    """Greedy: green iff the green graph keeps matching number < k and degrees <= 2k-2."""

    def __init__(self, k: int):
        self.k = k
        self.id = f"indep-compliant:{k}"
        self.prop = independent_edges(k)

    def respond(self, b, e):
        u, v = pair(*e)
        cap = 2 * self.k - 2
        if b.degree(u, GREEN) + 1 > cap or b.degree(v, GREEN) + 1 > cap:
            return RED
        return GREEN if max_matching_size(b.green_edges() + [(u, v)]) < self.k else RED


class IsolatedCompliantHider(HiderStrategy):
    """Green on the M-th opening edge; later green iff red would hand Seeker the claim and green does not hand him the observation."""

    def __init__(self, M: int = 3):
        if M < 1:
            raise ValueError("M must be >= 1")
        self.M = M
        self.id = f"isolated-compliant:{M}"
        self.prop = NO_ISOLATED

    def respond(self, b, e):
        e = pair(*e)
        if b.green_count == 0:
            return GREEN if e == (0, self.M) else RED
        red = b.copy()
        red.play(e, RED)
        if not any(claim_position(red, v) for v in e):
            return RED
        green = b.copy()
        green.play(e, GREEN)
        return RED if observation_edge(green) is not None else GREEN
