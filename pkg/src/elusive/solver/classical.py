"""Classical (finite) elusiveness: Seeker must decide the property before every pair is queried."""

from __future__ import annotations

from itertools import combinations

from ..board import pair
from ..properties import DecisionStatus, PropertyId, decide_sets
from .core import MAX_UNIVERSE, FiniteGameSpec, GameValue, solve
from ..errors import UniverseTooLarge


def classical_game(p: PropertyId, n: int) -> FiniteGameSpec:
    universe = [pair(u, v) for u, v in combinations(range(n), 2)]
    if len(universe) > MAX_UNIVERSE:
        raise UniverseTooLarge(f"K_{n} has {len(universe)} edges")
    spec = FiniteGameSpec(universe, {}, terminal=None, hider_wins=None, name=f"classical-{p}-{n}")
    full = spec.full_mask
    cache: dict = {}

    def decided(g, r):
        key = (g, r)
        if key not in cache:
            green = [e for i, e in enumerate(spec.universe) if g >> i & 1]
            white = [e for i, e in enumerate(spec.universe) if not (g | r) >> i & 1]
            cache[key] = decide_sets(p, green, white, n) is not DecisionStatus.UNDECIDED
        return cache[key]

    spec.terminal = lambda g, r: (g | r) == full or decided(g, r)
    # Hider wins iff the property only becomes decided once every pair is colored
    spec.hider_wins = lambda g, r: (g | r) == full
    return spec


def classical_elusiveness(p: PropertyId, n: int, order_seed: int | None = None) -> tuple[str, GameValue]:
    value = solve(classical_game(p, n), order_seed=order_seed)
    return ("Elusive" if value.winner == "hider" else "NotElusive"), value
