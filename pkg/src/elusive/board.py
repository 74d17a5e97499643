"""Game positions: partial 3-colorings of the complete graph on an initial segment of N.

The board only materializes edges among the first ``window`` vertices; every
edge touching a vertex at or beyond the window is white.  Adjacency is kept as
one integer bitmask per vertex and color, so most graph queries are a handful
of big-int operations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

from .errors import (
    EdgeAlreadyColored,
    MalformedTranscript,
    NoWhiteEdge,
    WhiteForbidden,
    WindowCapExceeded,
)

DEFAULT_WINDOW_CAP = 4096

Pair = tuple  # canonical (u, v) with u < v


class Color(str, Enum):
    GREEN = "green"
    RED = "red"
    WHITE = "white"


GREEN = Color.GREEN
RED = Color.RED
WHITE = Color.WHITE


def pair(u: int, v: int) -> Pair:
    """Canonical form of the edge {u, v}."""
    if u == v:
        raise ValueError(f"loop edge {{{u},{v}}}")
    if u < 0 or v < 0:
        raise ValueError(f"negative vertex in {{{u},{v}}}")
    return (u, v) if u < v else (v, u)


def canonical_index(p: Pair) -> int:
    """Position of ``p`` in the (max, min)-lexicographic enumeration of pairs."""
    u, v = p
    return v * (v - 1) // 2 + u


def pair_of(i: int) -> Pair:
    if i < 0:
        raise ValueError("edge index must be non-negative")
    v = (1 + math.isqrt(1 + 8 * i)) // 2
    while v * (v - 1) // 2 > i:
        v -= 1
    while (v + 1) * v // 2 <= i:
        v += 1
    return (i - v * (v - 1) // 2, v)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def low_mask(n: int) -> int:
    """Bitmask of the vertices 0..n-1."""
    return (1 << n) - 1


class Board:
    """Mutable game position.

    ``play`` mutates in place; use :func:`play` or :meth:`copy` when a
    value-semantic step is wanted.
    """

    def __init__(self, window: int = 0, window_cap: int = DEFAULT_WINDOW_CAP, finite: bool = False):
        if window > window_cap:
            raise WindowCapExceeded(f"window {window} exceeds cap {window_cap}")
        self.window_cap = window_cap
        self.window = window
        self.finite = finite
        self.colors: dict[Pair, Color] = {}
        self.history: list[tuple[Pair, Color]] = []
        self.turn_of: dict[Pair, int] = {}
        self._green = [0] * window
        self._red = [0] * window
        self._green_count = 0
        self._green_covered = 0
        self._covered = 0
        self._white_cursor = 0

    # -- bookkeeping -------------------------------------------------------

    @property
    def turn(self) -> int:
        return len(self.history)

    @property
    def green_count(self) -> int:
        return self._green_count

    @property
    def red_count(self) -> int:
        return len(self.history) - self._green_count

    def grow(self, size: int) -> None:
        if size <= self.window:
            return
        if size > self.window_cap:
            raise WindowCapExceeded(f"window {size} exceeds cap {self.window_cap}")
        if self.finite:
            raise WindowCapExceeded("finite-universe boards cannot grow")
        extra = size - self.window
        self._green.extend([0] * extra)
        self._red.extend([0] * extra)
        self.window = size

    def copy(self) -> "Board":
        b = Board.__new__(Board)
        b.window_cap = self.window_cap
        b.window = self.window
        b.finite = self.finite
        b.colors = dict(self.colors)
        b.history = list(self.history)
        b.turn_of = dict(self.turn_of)
        b._green = list(self._green)
        b._red = list(self._red)
        b._green_count = self._green_count
        b._green_covered = self._green_covered
        b._covered = self._covered
        b._white_cursor = self._white_cursor
        return b

    def __eq__(self, other) -> bool:
        if not isinstance(other, Board):
            return NotImplemented
        return (
            self.window == other.window
            and self.window_cap == other.window_cap
            and self.finite == other.finite
            and self.colors == other.colors
            and self.history == other.history
        )

    def __repr__(self) -> str:
        return f"Board(window={self.window}, turn={self.turn}, green={self.green_count}, red={self.red_count})"

    # -- moves ---------------------------------------------------------------

    def color_of(self, e: Pair) -> Color:
        return self.colors.get(e, WHITE)

    def is_white(self, e: Pair) -> bool:
        return e not in self.colors

    def play(self, e: Pair, c: Color) -> None:
        u, v = pair(*e)
        c = Color(c)
        if c is WHITE:
            raise WhiteForbidden(f"edge {u}-{v} must be colored green or red")
        if (u, v) in self.colors:
            raise EdgeAlreadyColored(f"edge {u}-{v} is already {self.colors[(u, v)].value}")
        if v >= self.window:
            self.grow(v + 1)
        self.colors[(u, v)] = c
        self.turn_of[(u, v)] = len(self.history)
        self.history.append(((u, v), c))
        bu, bv = 1 << u, 1 << v
        if c is GREEN:
            self._green[u] |= bv
            self._green[v] |= bu
            self._green_count += 1
            self._green_covered |= bu | bv
        else:
            self._red[u] |= bv
            self._red[v] |= bu
        self._covered |= bu | bv

    # -- adjacency -------------------------------------------------------

    def green_adj(self, v: int) -> int:
        return self._green[v] if v < self.window else 0

    def red_adj(self, v: int) -> int:
        return self._red[v] if v < self.window else 0

    def white_adj(self, v: int) -> int:
        """White neighbours of ``v`` inside the window."""
        full = low_mask(self.window)
        if v >= self.window:
            return full
        return full & ~(self._green[v] | self._red[v] | (1 << v))

    def degree(self, v: int, c: Color) -> int:
        c = Color(c)
        if c is GREEN:
            return self.green_adj(v).bit_count()
        if c is RED:
            return self.red_adj(v).bit_count()
        return self.white_adj(v).bit_count()

    @property
    def green_covered_mask(self) -> int:
        """Vertices incident to at least one green edge."""
        return self._green_covered

    @property
    def covered_mask(self) -> int:
        """Vertices incident to at least one colored edge."""
        return self._covered

    def green_edges(self) -> list[Pair]:
        return [e for e, c in self.history if c is GREEN]

    def red_edges(self) -> list[Pair]:
        return [e for e, c in self.history if c is RED]

    def white_edges(self) -> Iterator[Pair]:
        """White edges inside the window, in canonical order."""
        for v in range(1, self.window):
            colored = self._green[v] | self._red[v]
            for u in range(v):
                if not colored >> u & 1:
                    yield (u, v)

    # -- strategy helpers ------------------------------------------------

    def fresh_vertices(self, n: int, exclude: Iterable[int] = ()) -> list[int]:
        """The ``n`` least vertices touched by no colored edge, growing the window if needed."""
        if n < 0:
            raise ValueError("n must be non-negative")
        skip = set(exclude)
        out: list[int] = []
        v = 0
        while len(out) < n:
            if v not in skip and not self._covered >> v & 1:
                out.append(v)
            v += 1
        if out and out[-1] >= self.window:
            if out[-1] >= self.window_cap or self.finite:
                raise WindowCapExceeded(
                    f"need vertex {out[-1]} but window is capped at {self.window if self.finite else self.window_cap}"
                )
            self.grow(out[-1] + 1)
        return out

    def min_white_edge(self) -> Pair:
        """The white edge with the least canonical index."""
        i = self._white_cursor
        while True:
            e = pair_of(i)
            if e not in self.colors:
                break
            i += 1
        self._white_cursor = i
        if self.finite and e[1] >= self.window:
            raise NoWhiteEdge("every edge of the finite universe is colored")
        return e

    def to_transcript(self, meta: dict | None = None) -> "Transcript":
        moves = [(t, e, c) for t, (e, c) in enumerate(self.history)]
        return Transcript(window_cap=self.window_cap, moves=moves, final_window=self.window, meta=dict(meta or {}))


def play(board: Board, e: Pair, c: Color) -> Board:
    """Value-semantic move: returns a new board, ``board`` is untouched."""
    nb = board.copy()
    nb.play(e, c)
    return nb


@dataclass
class Transcript:
    window_cap: int
    moves: list = field(default_factory=list)  # (turn, Pair, Color)
    final_window: int = 0
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "window_cap": self.window_cap,
            "moves": [{"t": t, "e": [e[0], e[1]], "c": Color(c).value} for t, e, c in self.moves],
            "final_window": self.final_window,
        }
        if self.meta:
            d["meta"] = self.meta
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "Transcript":
        try:
            moves = []
            for m in d["moves"]:
                u, v = m["e"]
                if not (isinstance(u, int) and isinstance(v, int)) or u >= v or u < 0:
                    raise MalformedTranscript(f"non-canonical edge {m['e']}")
                c = Color(m["c"])
                if c is WHITE:
                    raise MalformedTranscript("transcript move colored white")
                moves.append((int(m["t"]), (u, v), c))
            return cls(
                window_cap=int(d["window_cap"]),
                moves=moves,
                final_window=int(d["final_window"]),
                meta=dict(d.get("meta", {})),
            )
        except MalformedTranscript:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedTranscript(f"bad transcript: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedTranscript(f"invalid JSON: {exc}") from exc
        return cls.from_dict(d)

    def replay(self) -> Board:
        """Rebuild the final board by playing every move on an empty board."""
        b = Board(window_cap=self.window_cap)
        for i, (t, e, c) in enumerate(self.moves):
            if t != i:
                raise MalformedTranscript(f"move {i} carries turn number {t}")
            try:
                b.play(e, c)
            except EdgeAlreadyColored as exc:
                raise MalformedTranscript(f"duplicate edge at turn {t}: {e}") from exc
            except WindowCapExceeded as exc:
                raise MalformedTranscript(str(exc)) from exc
        if self.final_window < b.window:
            raise MalformedTranscript("final_window smaller than the played edges require")
        b.grow(self.final_window)
        return b
