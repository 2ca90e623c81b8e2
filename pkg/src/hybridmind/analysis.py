"""Opening informativeness tables and strategy tournaments."""

from __future__ import annotations

import csv
import io
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .game import Code, Feedback, GameConfig, enumerate_codes
from .oracles import STRATEGIES, feedback_partition, partition_entropy, run_strategy
from .reasoner import Pattern, format_pattern, pattern_code
from .space import code_space

DEFAULT_BUDGET = 5000


def partitions(n: int, max_parts: int | None = None) -> list[Pattern]:
    """Integer partitions of ``n``, parts descending, in reverse lexicographic order."""
    limit = n if max_parts is None else max_parts
    out: list[Pattern] = []

    def walk(rest: int, cap: int, acc: list[int]) -> None:
        if rest == 0:
            out.append(tuple(acc))
            return
        if len(acc) == limit:
            return
        for part in range(min(rest, cap), 0, -1):
            walk(rest - part, part, acc + [part])

    walk(n, n, [])
    return out


@dataclass(frozen=True)
class PatternStats:
    pattern: Pattern
    guess: Code
    distribution: dict[Feedback, int]
    entropy: float
    expected_remaining: float

    @property
    def label(self) -> str:
        return format_pattern(self.pattern)


def pattern_stats(pattern: Pattern, config: GameConfig) -> PatternStats:
    guess = pattern_code(pattern, config.palette)
    space = code_space(config)
    sizes = feedback_partition(guess, np.ones(len(space), dtype=bool), config)
    width = config.positions + 1
    dist = {Feedback(k // width, k % width): int(v) for k, v in enumerate(sizes) if v}
    total = float(sizes.sum())
    return PatternStats(
        pattern,
        guess,
        dist,
        float(partition_entropy(sizes)),
        float((sizes.astype(np.float64) ** 2).sum() / total),
    )


def pattern_informativeness(config: GameConfig) -> list[PatternStats]:
    """One row per color distribution of N realizable with M colors, most
    informative (highest reply entropy) first."""
    stats = [pattern_stats(p, config) for p in partitions(config.positions, config.colors)]
    return sorted(stats, key=lambda s: -round(s.entropy, 12))


@dataclass(frozen=True)
class TournamentStats:
    strategy: str
    config: GameConfig
    games: int
    mean: float
    max: int
    histogram: dict[int, int] = field(default_factory=dict)

    @property
    def config_label(self) -> str:
        return f"N={self.config.positions} M={self.config.colors}"


class BudgetExceeded(ValueError):
    pass


def tournament_secrets(config: GameConfig, mode: str = "exhaustive", seed: int = 1, n: int = 500,
                       budget: int = DEFAULT_BUDGET) -> list[Code]:
    if mode == "exhaustive":
        if config.size > budget:
            raise BudgetExceeded(
                f"exhaustive play needs {config.size} games, over the budget of {budget}; "
                f"raise the budget to {config.size} or use sampled mode"
            )
        return list(enumerate_codes(config))
    if mode == "sampled":
        rng = random.Random(seed)
        return [tuple(rng.choice(config.palette) for _ in range(config.positions)) for _ in range(n)]
    raise ValueError(f"unknown mode {mode!r}")


def tournament(strategy: str, config: GameConfig, mode: str = "exhaustive", seed: int = 1, n: int = 500,
               comparator: str = "heuristic", budget: int = DEFAULT_BUDGET) -> TournamentStats:
    """Play one game per secret and aggregate guess counts.

    Raises :class:`RuntimeError` if any game ends on a code other than the secret.
    """
    lengths = Counter()
    for secret in tournament_secrets(config, mode, seed, n, budget):
        transcript = run_strategy(strategy, secret, config, comparator)
        if transcript.rows[-1].guess != secret:
            raise RuntimeError(f"{strategy} ended on the wrong code for {secret}")
        lengths[len(transcript)] += 1
    games = sum(lengths.values())
    total = sum(k * v for k, v in lengths.items())
    return TournamentStats(strategy, config, games, total / games, max(lengths), dict(sorted(lengths.items())))


@dataclass
class Report:
    tournaments: list[TournamentStats]
    patterns: dict[GameConfig, list[PatternStats]]

    def two_two_one_is_max(self, config: GameConfig) -> bool | None:
        stats = self.patterns.get(config)
        if not stats or (2, 2, 1) not in [s.pattern for s in stats]:
            return None
        best = max(round(s.entropy, 12) for s in stats)
        return round(next(s.entropy for s in stats if s.pattern == (2, 2, 1)), 12) == best

    def hybrid_not_worse(self, config: GameConfig) -> bool | None:
        by = {t.strategy: t for t in self.tournaments if t.config == config}
        if "hybrid" not in by or "filter" not in by:
            return None
        return by["hybrid"].mean <= by["filter"].mean

    def to_text(self) -> str:
        lines = []
        for config, stats in self.patterns.items():
            lines.append(f"Opening patterns  N={config.positions} M={config.colors}  ({config.size} secrets)")
            lines.append(f"  {'rank':>4}  {'pattern':<10} {'guess':<12} {'entropy':>9} {'E[remaining]':>13} {'replies':>8}")
            for rank, s in enumerate(stats, 1):
                lines.append(
                    f"  {rank:>4}  {s.label:<10} {' '.join(s.guess):<12} {s.entropy:>9.4f} "
                    f"{s.expected_remaining:>13.2f} {len(s.distribution):>8}"
                )
            flag = self.two_two_one_is_max(config)
            if flag is not None:
                lines.append(f"  2/2/1 has maximal entropy: {'yes' if flag else 'no'}")
            lines.append("")
        if self.tournaments:
            lines.append("Tournaments")
            lines.append(f"  {'strategy':<9} {'config':<10} {'games':>6} {'mean':>7} {'max':>4}  histogram")
            for t in self.tournaments:
                hist = " ".join(f"{k}:{v}" for k, v in t.histogram.items())
                lines.append(f"  {t.strategy:<9} {t.config_label:<10} {t.games:>6} {t.mean:>7.4f} {t.max:>4}  {hist}")
            for config in dict.fromkeys(t.config for t in self.tournaments):
                flag = self.hybrid_not_worse(config)
                if flag is not None:
                    lines.append(
                        f"  N={config.positions} M={config.colors}: hybrid mean <= filter mean: {'yes' if flag else 'no'}"
                    )
        return "\n".join(lines).rstrip() + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "name", "positions", "colors", "count", "mean", "max", "entropy", "expected_remaining", "detail"])
        for config, stats in self.patterns.items():
            for s in stats:
                w.writerow(["pattern", s.label, config.positions, config.colors, len(s.distribution), "", "",
                            f"{s.entropy:.6f}", f"{s.expected_remaining:.4f}", " ".join(s.guess)])
        for t in self.tournaments:
            hist = " ".join(f"{k}:{v}" for k, v in t.histogram.items())
            w.writerow(["tournament", t.strategy, t.config.positions, t.config.colors, t.games,
                        f"{t.mean:.4f}", t.max, "", "", hist])
        return buf.getvalue()


def compare_strategies(configs: Iterable[GameConfig], strategies: Sequence[str] = STRATEGIES, mode: str = "exhaustive",
                       seed: int = 1, n: int = 500, comparator: str = "heuristic",
                       budget: int = DEFAULT_BUDGET) -> Report:
    configs = list(configs)
    rows = [tournament(s, c, mode, seed, n, comparator, budget) for c in configs for s in strategies]
    return Report(rows, {c: pattern_informativeness(c) for c in configs})
