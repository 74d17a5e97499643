"""Exact minimax over finite 3-color Seeker/Hider games.

Positions are pairs of bitmasks ``(green, red)`` over the universe's edge
indices; move order is forgotten, so the game tree collapses to a DAG.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from ..board import GREEN, RED, WHITE, Color, Pair, canonical_index, pair
from ..errors import UniverseTooLarge

MAX_UNIVERSE = 15

Predicate = Callable[[int, int], bool]  # (green mask, red mask) -> bool


@dataclass
class FiniteGameSpec:
    universe: list  # Pairs, canonical order
    initial: dict  # Pair -> Color (missing means white)
    terminal: Predicate
    hider_wins: Predicate
    name: str = "game"

    def __post_init__(self):
        self.universe = sorted({pair(*e) for e in self.universe}, key=canonical_index)
        self.index = {e: i for i, e in enumerate(self.universe)}
        for e in self.initial:
            if pair(*e) not in self.index:
                raise ValueError(f"initial coloring mentions {e} outside the universe")

    @property
    def full_mask(self) -> int:
        return (1 << len(self.universe)) - 1

    def initial_masks(self) -> tuple[int, int]:
        g = r = 0
        for e, c in self.initial.items():
            c = Color(c)
            if c is GREEN:
                g |= 1 << self.index[pair(*e)]
            elif c is RED:
                r |= 1 << self.index[pair(*e)]
        return g, r

    def masks_after(self, history) -> tuple[int, int]:
        g, r = self.initial_masks()
        for e, c in history:
            bit = 1 << self.index[pair(*e)]
            if Color(c) is GREEN:
                g |= bit
            else:
                r |= bit
        return g, r

    def coloring(self, g: int, r: int) -> dict:
        out = {}
        for i, e in enumerate(self.universe):
            out[e] = GREEN if g >> i & 1 else RED if r >> i & 1 else WHITE
        return out


@dataclass
class GameValue:
    winner: str  # "hider" or "seeker"
    policy: dict = field(default_factory=dict)
    positions_explored: int = 0

    def to_dict(self) -> dict:
        return {"winner": self.winner, "positions_explored": self.positions_explored}


def solve(spec: FiniteGameSpec, order_seed: int | None = None) -> GameValue:
    """Memoized minimax.

    The winning policy is keyed by position ``(green, red)``: for a Hider win it
    maps each white edge to a reply color, for a Seeker win it names the edge to
    play.  Ties go to the lowest edge index and Green before Red; with
    ``order_seed`` the move order is shuffled instead (for self-consistency checks).
    """
    n = len(spec.universe)
    if n > MAX_UNIVERSE:
        raise UniverseTooLarge(f"{n} edges exceeds the limit of {MAX_UNIVERSE}")
    full = spec.full_mask
    moves = list(range(n))
    replies = [GREEN, RED]
    rng = random.Random(order_seed) if order_seed is not None else None
    if rng:
        rng.shuffle(moves)
    memo: dict[tuple[int, int], bool] = {}
    terminal, hider_wins = spec.terminal, spec.hider_wins

    def value(g: int, r: int) -> bool:
        """True iff Hider wins from here with Seeker to move."""
        key = (g, r)
        hit = memo.get(key)
        if hit is not None:
            return hit
        white = full & ~(g | r)
        if terminal(g, r) or not white:
            res = hider_wins(g, r)
        else:
            res = True
            for i in moves:
                bit = 1 << i
                if not white & bit:
                    continue
                order = replies if rng is None else rng.sample(replies, 2)
                if not any(value(g | bit, r) if c is GREEN else value(g, r | bit) for c in order):
                    res = False
                    break
        memo[key] = res
        return res

    g0, r0 = spec.initial_masks()
    hider = value(g0, r0)
    policy = _extract_policy(spec, g0, r0, hider, memo, value)
    return GameValue("hider" if hider else "seeker", policy, len(memo))


def _extract_policy(spec, g0, r0, hider, memo, value) -> dict:
    full = spec.full_mask
    policy: dict = {}
    stack = [(g0, r0)]
    while stack:
        g, r = stack.pop()
        if (g, r) in policy:
            continue
        white = full & ~(g | r)
        if spec.terminal(g, r) or not white:
            continue
        if hider:
            answer = {}
            for i in range(len(spec.universe)):
                bit = 1 << i
                if not white & bit:
                    continue
                c = GREEN if value(g | bit, r) else RED
                answer[spec.universe[i]] = c
                stack.append((g | bit, r) if c is GREEN else (g, r | bit))
            policy[(g, r)] = answer
        else:
            for i in range(len(spec.universe)):
                bit = 1 << i
                if white & bit and not value(g | bit, r) and not value(g, r | bit):
                    policy[(g, r)] = spec.universe[i]
                    stack.extend([(g | bit, r), (g, r | bit)])
                    break
    return policy


def policy_from_table(spec: FiniteGameSpec, table: dict):
    """Turn a solved Hider table into a ``respond(history, edge)`` callable."""

    def respond(history, e):
        g, r = spec.masks_after(history)
        return table[(g, r)][pair(*e)]

    return respond


@dataclass
class Verification:
    passed: bool
    terminals: int = 0
    counterexample: list | None = None
    weakened: int = 0  # terminals differing from the first blacksquare position by white->red only

    def to_dict(self) -> dict:
        d = {"passed": self.passed, "terminals": self.terminals, "weakened_matches": self.weakened}
        if self.counterexample is not None:
            d["counterexample"] = [{"e": list(e), "c": Color(c).value} for e, c in self.counterexample]
        return d


def verify_policy(spec: FiniteGameSpec, respond, milestone: Predicate | None = None) -> Verification:
    """Play ``respond`` against every Seeker move sequence; pass iff Hider wins every line.

    ``respond(history, edge)`` gets the subgame history as a list of
    ``(Pair, Color)``.  If ``milestone`` is given, terminals that differ from the
    first milestone position on their line are counted as weakened matches.
    """
    full = spec.full_mask
    g0, r0 = spec.initial_masks()
    stats = Verification(True)
    history: list = []

    def walk(g: int, r: int, mark) -> bool:
        if mark is None and milestone is not None and milestone(g, r):
            mark = (g, r)
        white = full & ~(g | r)
        if spec.terminal(g, r) or not white:
            stats.terminals += 1
            if not spec.hider_wins(g, r):
                stats.passed = False
                stats.counterexample = list(history)
                return False
            if mark is not None and mark != (g, r):
                stats.weakened += 1
            return True
        for i, e in enumerate(spec.universe):
            bit = 1 << i
            if not white & bit:
                continue
            c = Color(respond(list(history), e))
            if c is WHITE:
                raise ValueError("policy answered white")
            history.append((e, c))
            ok = walk(g | bit, r, mark) if c is GREEN else walk(g, r | bit, mark)
            history.pop()
            if not ok:
                return False
        return True

    walk(g0, r0, None)
    return stats
