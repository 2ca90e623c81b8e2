"""Command line: replay, solve, play, simulate, analyze.

Exit status: 0 success, 1 validation failure, 2 usage error, 3 contradictory input.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Callable, Sequence

from .analysis import DEFAULT_BUDGET, BudgetExceeded, Report, compare_strategies, pattern_informativeness, tournament
from .game import (
    ConfigError,
    GameConfig,
    InconsistentHistory,
    Transcript,
    TranscriptError,
    format_code,
    format_row,
    format_transcript,
    is_legal_feedback,
    parse_code,
    parse_feedback,
    parse_transcript,
    score,
)
from .oracles import STRATEGIES, POLICIES, count_consistent, run_strategy
from .reasoner import COMPARATORS, HybridSolver

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_CONTRADICTION = 0, 1, 2, 3
DEFAULT_MAX_ROWS = 12


def _config(args: argparse.Namespace, max_rows: int | None = None) -> GameConfig:
    return GameConfig.with_colors(args.positions, args.colors, args.max_rows or max_rows)


def cmd_replay(args, out) -> int:
    config = _config(args)
    try:
        transcript = parse_transcript(Path(args.path).read_text(encoding="utf-8"), config)
    except (OSError, TranscriptError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if transcript.secret is None:
        print("error: transcript has no 'secret:' line, nothing to check against", file=sys.stderr)
        return EXIT_USAGE
    passed = 0
    for i, row in enumerate(transcript, 1):
        expected = score(row.guess, transcript.secret)
        ok = expected == row.feedback
        passed += ok
        verdict = "PASS" if ok else f"FAIL (expected {expected})"
        glyphs = f"  {row.feedback.pins()}" if args.pins else ""
        out(f"row {i}: {format_row(row)}  {verdict}{glyphs}".rstrip())
    out(f"{passed}/{len(transcript)} PASS")
    return EXIT_OK if passed == len(transcript) else EXIT_INVALID


def cmd_solve(args, out) -> int:
    config = _config(args)
    secret = parse_code(args.secret, config)
    trace = (lambda event, text: out(f"# {event}: {text}")) if args.verbose else None
    transcript = run_strategy(args.strategy, secret, config, args.comparator, trace)
    out(format_transcript(transcript, args.pins).rstrip("\n"))
    return EXIT_OK


def play(strategy: str, config: GameConfig, read: Callable[[str], str | None], out: Callable[[str], None],
         comparator: str = "heuristic", verbose: bool = False, pins: bool = False) -> int:
    """Break a code held by a human who answers each guess with ``<w>W <b>B``.

    ``read`` returns ``None`` at end of input.
    """
    trace = (lambda event, text: out(f"# {event}: {text}")) if verbose else None
    solver = HybridSolver(config, comparator, trace) if strategy == "hybrid" else None
    history = Transcript()
    n = config.positions
    while True:
        if config.max_rows is not None and len(history) >= config.max_rows:
            out(f"out of rows after {len(history)} guesses")
            return EXIT_INVALID
        guess = solver.next_guess() if solver else POLICIES[strategy](history.rows, config)
        out(f"guess {len(history) + 1}: {format_code(guess)}")
        while True:
            line = read("feedback> ")
            if line is None:
                out("aborted: end of input")
                return EXIT_INVALID
            try:
                fb = parse_feedback(line)
            except ValueError as exc:
                out(f"could not read feedback: {exc}")
                continue
            if not is_legal_feedback(fb, n):
                out(f"impossible feedback {fb} for {n} positions, try again")
                continue
            break
        if pins:
            out(f"pins: {fb.pins()}")
        history = history.append(guess, fb)
        if fb.whites == n:
            out(f"solved in {len(history)} guesses: {format_code(guess)}")
            return EXIT_OK
        if count_consistent(history.rows, config) == 0:
            out("feedback history is contradictory")
            return EXIT_CONTRADICTION
        if solver:
            solver.observe(guess, fb)


def cmd_play(args, out) -> int:
    config = _config(args, DEFAULT_MAX_ROWS)

    def read(prompt: str) -> str | None:
        out(prompt)
        line = sys.stdin.readline()
        return line if line else None

    return play(args.strategy, config, read, out, args.comparator, args.verbose, args.pins)


def cmd_simulate(args, out) -> int:
    config = _config(args)
    mode = "exhaustive" if args.exhaustive else "sampled"
    try:
        stats = tournament(args.strategy, config, mode, args.seed, args.n, args.comparator, args.budget)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = Report([stats], {})
    out((report.to_csv() if args.csv else report.to_text()).rstrip("\n"))
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    config = _config(args)
    if args.strategies:
        mode = "exhaustive" if config.size <= args.budget else "sampled"
        report = compare_strategies([config], args.strategies, mode, args.seed, args.n, args.comparator, args.budget)
    else:
        report = Report([], {config: pattern_informativeness(config)})
    out((report.to_csv() if args.csv else report.to_text()).rstrip("\n"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--positions", type=int, default=5, help="pawns per row (default 5)")
    common.add_argument("--colors", type=int, default=8, help="palette size (default 8: B Y R G O P C M)")
    common.add_argument("--max-rows", type=int, default=None, help="row limit in play mode (default 12)")
    common.add_argument("--comparator", choices=COMPARATORS, default="heuristic", help="model ordering")
    common.add_argument("--seed", type=int, default=1)

    parser = argparse.ArgumentParser(prog="hybridmind", description="Hybrid-reasoning Mastermind solver.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("replay", parents=[common], help="re-check every row of a transcript file")
    p.add_argument("path")
    p.add_argument("--pins", action="store_true", help="echo the o/● glyph row")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("solve", parents=[common], help="solve against a known secret")
    p.add_argument("--secret", required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="hybrid")
    p.add_argument("--verbose", action="store_true", help="stream the reasoning trace")
    p.add_argument("--pins", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("play", parents=[common], help="break a code you hold; answer with e.g. '1W 2B'")
    p.add_argument("--strategy", choices=STRATEGIES, default="hybrid")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--pins", action="store_true")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("simulate", parents=[common], help="tournament over many secrets")
    p.add_argument("--strategy", choices=STRATEGIES, default="hybrid")
    p.add_argument("--exhaustive", action="store_true", help="every secret instead of a seeded sample")
    p.add_argument("-n", type=int, default=500, help="sampled games (default 500)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="largest exhaustive run allowed")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", parents=[common], help="opening-pattern informativeness table")
    p.add_argument("--strategies", nargs="*", choices=STRATEGIES, default=None,
                   help="also run tournaments for these strategies")
    p.add_argument("-n", type=int, default=500)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv: Sequence[str] | None = None, out: Callable[[str], None] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = out or (lambda text: print(text, flush=True))
    try:
        _config(args)
    except ConfigError as exc:
        parser.error(str(exc))
    if getattr(args, "n", 1) < 1:
        parser.error("-n must be >= 1")
    try:
        return args.func(args, out)
    except (ConfigError, InconsistentHistory) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
