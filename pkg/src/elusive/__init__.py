"""Seeker/Hider edge-query games on graphs over the natural numbers."""

from .board import GREEN, RED, WHITE, Board, Color, Transcript, canonical_index, pair, pair_of, play
from .errors import GameError
from .properties import (
    INFINITE_TAIL,
    DecisionStatus,
    FiniteUniverse,
    LimitRedFill,
    PropertyId,
    decide,
    holds,
    max_matching_size,
)

__version__ = "0.1.0"

__all__ = [
    "Board",
    "Color",
    "DecisionStatus",
    "FiniteUniverse",
    "GREEN",
    "GameError",
    "INFINITE_TAIL",
    "LimitRedFill",
    "PropertyId",
    "RED",
    "Transcript",
    "WHITE",
    "canonical_index",
    "decide",
    "holds",
    "max_matching_size",
    "pair",
    "pair_of",
    "play",
]
