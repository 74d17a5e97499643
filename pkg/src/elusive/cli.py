"""Command-line entry point.  JSON goes to stdout, logs to stderr.

Exit codes: 0 all checks passed, 1 violation or counterexample, 2 usage or resource error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import s0
from .arena import ERROR, MatchConfig, interactive_play, make_hider, make_seeker, replay, run_match
from .board import Transcript
from .errors import GameError, HorizonExhausted, UniverseTooLarge, WindowCapExceeded
from .properties import PropertyId
from .solver import appendix_policy, classical_elusiveness, hand_policy, policy_from_table, solve, subgame, verify_policy

log = logging.getLogger("elusive")

OK, FOUND, USAGE = 0, 1, 2


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def _monitors(text: str):
    if text in ("all", "none"):
        return text
    return [m.strip() for m in text.split(",") if m.strip()]


def _match_exit(result) -> int:
    if result.verdict.get("kind") == ERROR:
        return USAGE
    return OK if result.ok else FOUND


def cmd_simulate(args) -> int:
    hider = make_hider(args.hider)
    seeker = make_seeker(args.seeker, seed=args.seed)
    cfg = MatchConfig(turns=args.turns, window_cap=args.window_cap, seed=args.seed, monitors=_monitors(args.monitors))
    if args.property:
        cfg.prop = PropertyId.parse(args.property)
    t0 = time.perf_counter()
    result = run_match(seeker, hider, cfg)
    log.info("%s vs %s: %s in %.3fs", args.seeker, args.hider, result.verdict.get("kind"), time.perf_counter() - t0)
    if args.transcript:
        with open(args.transcript, "w") as fh:
            fh.write(result.transcript.to_json())
    _emit(result.to_dict())
    return _match_exit(result)


_SUBGAMES = {"g0": 0, "g1": 1, "g2": 2}


def cmd_solve(args) -> int:
    spec = subgame(_SUBGAMES[args.subgame])
    t0 = time.perf_counter()
    value = solve(spec, order_seed=args.order_seed)
    elapsed = time.perf_counter() - t0
    out = {"subgame": args.subgame, "edges": len(spec.universe), **value.to_dict(), "seconds": round(elapsed, 4)}
    if args.verify and value.winner == "hider":
        out["policy_check"] = verify_policy(spec, policy_from_table(spec, value.policy)).to_dict()
    _emit(out)
    return OK if value.winner == "hider" else FOUND


def cmd_verify_appendix(args) -> int:
    respond = appendix_policy() if args.subgame == "g2" else hand_policy(_SUBGAMES[args.subgame])
    spec = subgame(_SUBGAMES[args.subgame])
    t0 = time.perf_counter()
    ver = verify_policy(spec, respond, milestone=spec.blacksquare)
    out = {"subgame": args.subgame, **ver.to_dict(), "seconds": round(time.perf_counter() - t0, 4)}
    _emit(out)
    return OK if ver.passed else FOUND


def cmd_classical(args) -> int:
    prop = PropertyId.parse(args.property)
    t0 = time.perf_counter()
    verdict, value = classical_elusiveness(prop, args.n, order_seed=args.order_seed)
    _emit({"property": str(prop), "n": args.n, "verdict": verdict, **value.to_dict(), "seconds": round(time.perf_counter() - t0, 4)})
    return OK


def cmd_s0(args) -> int:
    if args.s0_cmd == "rigidity":
        t0 = time.perf_counter()
        res = s0.rigidity_check(args.m, args.flip, compensate=not args.no_compensate)
        _emit({**res.to_dict(), "seconds": round(time.perf_counter() - t0, 4)})
        return OK if (res.verdict == s0.NON_ISOMORPHIC) == (res.flip is not None) else FOUND
    if args.s0_cmd == "check":
        with open(args.input) as fh:
            g = s0.ColoredGraph.from_json(fh.read())
        rep = s0.s0_consistent_truncation(g, args.threshold)
        _emit(rep.to_dict())
        return OK if rep.passed else FOUND
    if args.s0_cmd == "reduce":
        g = s0.reduction_map(args.bits)
        rep = s0.s0_consistent_truncation(g, threshold=0)
        parity = s0.parity_coloring(args.bits)
        out = {"bits": args.bits, "parity": parity, "check": rep.to_dict()}
        if args.graph:
            out["graph"] = g.to_dict()
        _emit(out)
        return OK if rep.passed == (parity == 1) else FOUND
    raise ValueError("missing s0 subcommand")


def cmd_replay(args) -> int:
    with open(args.file) as fh:
        t = Transcript.from_json(fh.read())
    board, result = replay(t, monitors=_monitors(args.monitors))
    out = {"turns": board.turn, "green": board.green_count, "red": board.red_count, "window": board.window}
    if result is None:
        _emit(out)
        return OK
    out["match"] = result.to_dict()
    _emit(out)
    return _match_exit(result)


def cmd_play(args) -> int:
    prop = PropertyId.parse(args.property) if args.property else None
    if args.side == "seeker":
        opponent = args.hider or "connected"
        prop = prop or make_hider(opponent).prop
    else:
        opponent = args.seeker or "no-isolated"
        prop = prop or make_seeker(opponent).prop
    if prop is None:
        raise ValueError("this opponent has no property; pass --property")

    def ask(prompt):
        sys.stderr.write(prompt)
        sys.stderr.flush()
        line = sys.stdin.readline()
        if not line:
            return "q"
        return line

    board = interactive_play(prop, args.side, opponent, input_fn=ask, output_fn=lambda s: print(s, file=sys.stderr), max_turns=args.max_turns)
    _emit(board.to_transcript({"opponent": opponent, "side": args.side}).to_dict())
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="elusive", description="Seeker/Hider edge-query games on graphs.")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("simulate", help="run one match")
    p.add_argument("--hider", required=True)
    p.add_argument("--seeker", required=True)
    p.add_argument("--turns", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--monitors", default="all", help="all, none, or comma-separated check-name prefixes")
    p.add_argument("--window-cap", type=int, default=MatchConfig.window_cap)
    p.add_argument("--property", help="property to decide each turn (defaults to the hider's)")
    p.add_argument("--transcript", help="write the transcript JSON here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("solve", help="solve a finite bipartite subgame")
    p.add_argument("--subgame", choices=sorted(_SUBGAMES), required=True)
    p.add_argument("--order-seed", type=int)
    p.add_argument("--verify", action="store_true", help="also verify the extracted policy")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify-appendix", help="check the hand policy against every seeker line")
    p.add_argument("--subgame", choices=sorted(_SUBGAMES), default="g2")
    p.set_defaults(func=cmd_verify_appendix)

    p = sub.add_parser("classical", help="finite elusiveness on K_n")
    p.add_argument("--property", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order-seed", type=int)
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("s0", help="the separating property at finite scale")
    s = p.add_subparsers(dest="s0_cmd", required=True)
    q = s.add_parser("rigidity")
    q.add_argument("--m", type=int, default=10)
    q.add_argument("--flip", help="role pair such as x0x1 or x3p2; omit to compare the template with itself")
    q.add_argument("--no-compensate", action="store_true", help="do not rebalance the edge count with a free edge")
    q = s.add_parser("check")
    q.add_argument("--input", required=True)
    q.add_argument("--threshold", type=int)
    q = s.add_parser("reduce")
    q.add_argument("--bits", required=True)
    q.add_argument("--graph", action="store_true", help="include the colored graph")
    p.set_defaults(func=cmd_s0)

    p = sub.add_parser("replay", help="rebuild a transcript and re-run its monitors")
    p.add_argument("file")
    p.add_argument("--monitors", default="all")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("play", help="interactive text game")
    p.add_argument("--side", choices=["seeker", "hider"], default="seeker")
    p.add_argument("--hider", help="opponent when you are the seeker")
    p.add_argument("--seeker", help="opponent when you are the hider")
    p.add_argument("--property")
    p.add_argument("--max-turns", type=int)
    p.set_defaults(func=cmd_play)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError, GameError) as exc:
        if isinstance(exc, (WindowCapExceeded, HorizonExhausted, UniverseTooLarge)):
            log.error("resource limit: %s", exc)
        else:
            log.error("%s", exc)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
