"""Match runner, replay, interactive play, and the strategy-id registry."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from .board import DEFAULT_WINDOW_CAP, GREEN, RED, Board, Color, Transcript, pair
from .errors import GameError, MalformedTranscript
from .hider import (
    BipartiteHider,
    Check,
    ConnectedHider,
    DegreeHider,
    DiameterHider,
    HiderStrategy,
    KCycleHider,
    SensitiveHider,
)
from .properties import INFINITE_TAIL, DecisionStatus, PropertyId, decide
from .seeker import (
    DECIDED,
    REFUTED,
    IndependentCompliantHider,
    IndependentEdgesSeeker,
    IsolatedCompliantHider,
    NoIsolatedSeeker,
    OneWhiteSeeker,
    RandomHider,
    RandomSeeker,
    ScriptSeeker,
    SeekerStrategy,
)

log = logging.getLogger(__name__)

ALL_INVARIANTS_HELD = "all_invariants_held"
VIOLATION = "violation"
SEEKER_TRAP = "seeker_trap"
SEEKER_DECIDED = "seeker_decided"
ERROR = "error"


# -- registry ---------------------------------------------------------------------


def _arg(text: str):
    tag, _, arg = text.partition(":")
    return tag, arg


def make_hider(text: str) -> HiderStrategy:
    tag, arg = _arg(text)
    try:
        if tag == "k-cycle":
            return KCycleHider(int(arg))
        if tag == "girth":
            return KCycleHider(int(arg), girth_mode=True)
        if tag == "connected" and not arg:
            return ConnectedHider()
        if tag == "bipartite":
            return BipartiteHider(arg or "appendix")
        if tag == "degree":
            return DegreeHider(int(arg))
        if tag == "diameter":
            return DiameterHider(int(arg))
        if tag == "sensitive":
            return SensitiveHider(arg or "path")
        if tag == "s0":
            from .s0 import S0Hider

            return S0Hider(horizon=int(arg) if arg else 64)
        if tag == "indep-compliant":
            return IndependentCompliantHider(int(arg))
        if tag == "isolated-compliant":
            return IsolatedCompliantHider(int(arg) if arg else 3)
        if tag == "random":
            return RandomHider(int(arg))
    except ValueError as exc:
        raise ValueError(f"bad hider id {text!r}: {exc}") from exc
    raise ValueError(f"unknown hider id {text!r}")


def make_seeker(text: str, seed: int | None = None) -> SeekerStrategy:
    tag, arg = _arg(text)
    try:
        if tag == "indep":
            return IndependentEdgesSeeker(int(arg))
        if tag == "no-isolated" and not arg:
            return NoIsolatedSeeker()
        if tag == "one-white":
            u, v = arg.split("-")
            return OneWhiteSeeker(pair(int(u), int(v)))
        if tag == "random":
            return RandomSeeker(int(arg) if arg else (seed or 0))
        if tag == "script":
            with open(arg) as fh:
                data = json.load(fh)
            moves = data["moves"] if isinstance(data, dict) else data
            moves = [m["e"] if isinstance(m, dict) else m for m in moves]
            return ScriptSeeker(moves, name=text)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        raise ValueError(f"bad seeker id {text!r}: {exc}") from exc
    raise ValueError(f"unknown seeker id {text!r}")


# -- matches -------------------------------------------------------------------------


@dataclass
class MatchConfig:
    turns: int = 2000
    window_cap: int = DEFAULT_WINDOW_CAP
    seed: int | None = None
    monitors: object = "all"  # "all", "none", or a list of check-name prefixes
    prop: PropertyId | None = None
    semantics: object = INFINITE_TAIL

    def __post_init__(self):
        if self.turns < 1:
            raise ValueError("turns must be >= 1")


@dataclass
class MatchResult:
    transcript: Transcript
    statuses: list = field(default_factory=list)
    reports: list = field(default_factory=list)  # failing monitor reports only
    checks_run: int = 0
    verdict: dict = field(default_factory=dict)
    certificate: list = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.verdict.get("kind") in (ALL_INVARIANTS_HELD, SEEKER_TRAP, SEEKER_DECIDED) and self.error is None

    def to_dict(self) -> dict:
        d = {
            "verdict": self.verdict,
            "turns_played": len(self.transcript.moves),
            "checks_run": self.checks_run,
            "final_status": self.statuses[-1].value if self.statuses else None,
            "certificate": [c.to_dict() for c in self.certificate],
        }
        if self.reports:
            d["failed_reports"] = [r.to_dict() for r in self.reports]
        if self.error:
            d["error"] = self.error
        return d


def _wanted(checks, monitors):
    if monitors == "all":
        return checks
    if monitors == "none" or not monitors:
        return []
    return [c for c in checks if any(c.name.startswith(m) for m in monitors)]


def run_match(seeker: SeekerStrategy, hider: HiderStrategy, cfg: MatchConfig | None = None) -> MatchResult:
    """Play up to ``cfg.turns`` turns, checking decisions, monitors and seeker verdicts after every move."""
    cfg = cfg or MatchConfig()
    b = Board(window_cap=cfg.window_cap)
    prop = cfg.prop or getattr(hider, "prop", None) or getattr(seeker, "prop", None)
    meta = {"hider": hider.id, "seeker": seeker.id, "turns": cfg.turns}
    if cfg.seed is not None:
        meta["seed"] = cfg.seed
    result = MatchResult(Transcript(cfg.window_cap))
    cache_key, status, decided_at = None, None, None
    monitoring = cfg.monitors != "none"
    seen_checkpoints = 0
    verdict = None

    def violation(turn, check: Check):
        return {"kind": VIOLATION, "turn": turn, "check": check.name, "witness": check.to_dict().get("witness")}

    try:
        for t in range(cfg.turns):
            e = seeker.next(b)
            if e is None:
                break
            c = Color(hider.respond(b, e))
            b.play(e, c)
            hider.after_play(b)
            seeker.after_play(b)
            if prop is not None:
                key = (b.green_count, b.red_count > 0) if cfg.semantics is INFINITE_TAIL else b.turn
                if key != cache_key:
                    cache_key, new = key, decide(prop, b, cfg.semantics)
                    if decided_at is not None and new is not status:
                        verdict = violation(t, Check("decide antitone", False, [status.value, new.value]))
                        break
                    status = new
                    if status is not DecisionStatus.UNDECIDED and decided_at is None:
                        decided_at = t
                result.statuses.append(status)
            if monitoring:
                rep = hider.monitor(b)
                rep.checks = _wanted(rep.checks, cfg.monitors)
                result.checks_run += len(rep.checks)
                if not rep.ok:
                    result.reports.append(rep)
                    verdict = violation(t, rep.failures()[0])
                    break
                new_cp = seeker.checkpoints[seen_checkpoints:]
                seen_checkpoints = len(seeker.checkpoints)
                result.checks_run += len(new_cp)
                bad = next((cp for cp in new_cp if not cp.ok), None)
                if bad is not None:
                    verdict = violation(t, bad)
                    break
            sv = seeker.verdict
            if sv.kind == REFUTED:
                verdict = {"kind": VIOLATION, "turn": t, "check": "seeker forcing claim", "witness": sv.to_dict()}
                break
            if sv.kind == DECIDED:
                verdict = {"kind": SEEKER_DECIDED, "turn": t, "seeker": sv.to_dict()}
                break
        if verdict is None:
            sv = seeker.finalize(b)
            if sv.kind == REFUTED:
                verdict = {"kind": VIOLATION, "turn": b.turn, "check": "seeker forcing claim", "witness": sv.to_dict()}
            elif monitoring:
                cert = _wanted(hider.limit_certificate(b), cfg.monitors)
                result.certificate = cert
                bad = next((c for c in cert if not c.ok), None)
                if bad is not None:
                    verdict = violation(b.turn, bad)
            if verdict is None:
                if sv.kind == DECIDED:
                    verdict = {"kind": SEEKER_DECIDED, "turn": b.turn, "seeker": sv.to_dict()}
                elif sv.kind != "on_track":
                    verdict = {"kind": SEEKER_TRAP, "seeker": sv.to_dict()}
                else:
                    verdict = {"kind": ALL_INVARIANTS_HELD}
    except GameError as exc:
        result.error = f"{type(exc).__name__}: {exc}"
        verdict = {"kind": ERROR, "turn": b.turn, "error": result.error}
    result.verdict = verdict
    result.transcript = b.to_transcript(meta)
    return result


def replay(t: Transcript, monitors="all") -> tuple[Board, MatchResult | None]:
    """Rebuild the board; if the transcript names its strategies, re-run the hider and its monitors too."""
    board = t.replay()
    hider_id = t.meta.get("hider")
    if not hider_id:
        return board, None
    hider = make_hider(hider_id)
    seeker_id = t.meta.get("seeker", "script")
    moves = [e for _, e, _ in t.moves]
    try:
        seeker = _Following(make_seeker(seeker_id, seed=t.meta.get("seed")), moves)
    except ValueError:
        seeker = ScriptSeeker(moves, name=seeker_id)
    result = run_match(seeker, _Checked(hider, t), MatchConfig(turns=max(1, len(t.moves)), window_cap=t.window_cap, monitors=monitors, seed=t.meta.get("seed")))
    result.transcript.meta = dict(t.meta)
    return board, result


class _Following(SeekerStrategy):
    """Re-run a named seeker and insist it proposes the recorded moves."""

    def __init__(self, inner, moves):
        self.inner, self.moves = inner, moves
        self.id, self.prop = inner.id, inner.prop

    def next(self, b):
        if b.turn >= len(self.moves):
            return None
        e = self.inner.next(b)
        if e != self.moves[b.turn]:
            raise MalformedTranscript(f"turn {b.turn}: seeker plays {e}, transcript says {self.moves[b.turn]}")
        return e

    def after_play(self, b):
        self.inner.after_play(b)

    def finalize(self, b):
        return self.inner.finalize(b)

    @property
    def verdict(self):
        return self.inner.verdict

    @property
    def checkpoints(self):
        return self.inner.checkpoints


class _Checked(HiderStrategy):
    """Replay the recorded replies and flag the first one the strategy would not give."""

    def __init__(self, inner, t: Transcript):
        self.inner, self.t = inner, t
        self.id, self.prop = inner.id, inner.prop
        self.mismatch = None

    def respond(self, b, e):
        c = Color(self.inner.respond(b, e))
        want = self.t.moves[b.turn][2]
        if c is not want and self.mismatch is None:
            self.mismatch = [b.turn, list(e), c.value, want.value]
        return want

    def after_play(self, b):
        self.inner.after_play(b)

    def monitor(self, b):
        rep = self.inner.monitor(b)
        if self.mismatch is not None:
            rep.checks.insert(0, Check("board follows the strategy", False, self.mismatch))
        return rep

    def limit_certificate(self, b):
        return self.inner.limit_certificate(b)


# -- interactive ---------------------------------------------------------------------


def _parse_edge(text: str):
    parts = text.replace(",", " ").replace("-", " ").split()
    if len(parts) != 2:
        raise ValueError("enter two vertex numbers, e.g. '0 1'")
    return pair(int(parts[0]), int(parts[1]))


def interactive_play(prop: PropertyId, side: str = "seeker", opponent: str = "connected", input_fn=input, output_fn=print, max_turns: int | None = None) -> Board:
    """Text game: a human plays ``side`` against a shipped strategy.  'q' quits."""
    b = Board()
    if side == "seeker":
        hider = make_hider(opponent)
        seeker = None
    elif side == "hider":
        seeker = make_seeker(opponent)
        hider = None
    else:
        raise ValueError("side must be 'seeker' or 'hider'")
    output_fn(f"property: {prop}; you are {side}; opponent: {opponent}")
    pending = None
    while max_turns is None or b.turn < max_turns:
        if seeker is None:
            text = input_fn(f"turn {b.turn} edge> ").strip()
            if text.lower() in ("q", "quit", "exit"):
                break
            try:
                e = _parse_edge(text)
            except ValueError as exc:
                output_fn(f"rejected: {exc}")
                continue
            if not b.is_white(e):
                output_fn(f"rejected: {e[0]}-{e[1]} is already {b.color_of(e).value}")
                continue
            c = hider.respond(b, e)
            b.play(e, c)
            hider.after_play(b)
            output_fn(f"{e[0]}-{e[1]}: {Color(c).value}")
        else:
            # keep the proposed edge across retries so the seeker is asked only once
            if pending is None:
                pending = seeker.next(b)
                if pending is None:
                    break
            e = pending
            text = input_fn(f"turn {b.turn} Seeker plays {e[0]}-{e[1]}; color [g/r]> ").strip().lower()
            if text in ("q", "quit", "exit"):
                break
            if text not in ("g", "green", "r", "red"):
                output_fn("rejected: answer g or r")
                continue
            b.play(e, GREEN if text[0] == "g" else RED)
            pending = None
            seeker.after_play(b)
        output_fn(f"status: {decide(prop, b).value}")
    output_fn(f"final: {b.green_count} green, {b.red_count} red, status {decide(prop, b).value}")
    return b
