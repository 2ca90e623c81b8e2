"""Exhaustive ground truth and baseline codebreakers."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .game import Code, GameConfig, Row, Transcript
from .models import PlaceModel, denotation_mask
from .reasoner import HybridSolver, Propagation, facts_from_codes
from .space import code_space

STRATEGIES = ("hybrid", "filter", "entropy")


def count_consistent(history: Sequence[Row], config: GameConfig) -> int:
    return int(code_space(config).consistent_mask(history).sum())


def forced_facts_bruteforce(pm: PlaceModel, history: Sequence[Row], config: GameConfig) -> Propagation | None:
    """Same contract as :func:`hybridmind.reasoner.propagate`, by scanning
    every code of the configuration."""
    space = code_space(config)
    mask = denotation_mask(pm, config) & space.consistent_mask(history)
    hits = np.flatnonzero(mask)
    if not len(hits):
        return None
    codes = tuple(space.decode(int(k)) for k in hits)
    return Propagation(facts_from_codes(pm, codes, config), len(codes), codes)


def filter_strategy(history: Sequence[Row], config: GameConfig) -> Code:
    """Lexicographically first code consistent with ``history``."""
    space = code_space(config)
    hits = np.flatnonzero(space.consistent_mask(history))
    if not len(hits):
        raise ValueError("no code is consistent with the history")
    return space.decode(int(hits[0]))


def partition_entropy(sizes: np.ndarray) -> np.ndarray:
    """Shannon entropy in bits of each row of partition-size counts."""
    sizes = np.asarray(sizes, dtype=np.float64)
    total = sizes.sum(axis=-1, keepdims=True)
    p = np.divide(sizes, total, out=np.zeros_like(sizes), where=total > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(p), 0.0)
    return terms.sum(axis=-1)


def feedback_partition(guess: Sequence[str], candidates: np.ndarray, config: GameConfig) -> np.ndarray:
    """Counts of each reply (indexed ``whites * (N + 1) + blacks``) over the
    candidate codes selected by the boolean mask ``candidates``."""
    space = code_space(config)
    fb = space.feedback_index(guess)[candidates]
    return np.bincount(fb, minlength=(config.positions + 1) ** 2)


def canonical_guesses(history: Sequence[Row], config: GameConfig) -> np.ndarray:
    """Mask of codes that are palette-first in their orbit under permutations
    of the colors no row has played.

    Such colors are interchangeable, so scoring one code per orbit loses nothing.
    """
    space = code_space(config)
    played = {c for row in history for c in row.guess}
    free = [i for i, c in enumerate(config.palette) if c not in played]
    n = config.positions
    mask = np.ones(len(space), dtype=bool)
    if len(free) < 2:
        return mask
    hit = space.codes[:, :, None] == np.asarray(free, dtype=space.codes.dtype)
    first = np.where(hit.any(axis=1), hit.argmax(axis=1), n)
    for k in range(len(free) - 1):
        mask &= first[:, k] <= first[:, k + 1]
    return mask


def _entropies(candidates: np.ndarray, config: GameConfig, chunk: int = 64,
               guesses: np.ndarray | None = None) -> np.ndarray:
    space = code_space(config)
    n, m = config.positions, config.colors
    width = (n + 1) ** 2
    cand_codes = space.codes[candidates]
    cand_counts = space.counts[candidates]
    s = len(cand_codes)
    rows = np.arange(len(space)) if guesses is None else np.flatnonzero(guesses)
    out = np.full(len(space), -np.inf)
    # keep each block near a few million cells
    chunk = max(1, min(chunk, 4_000_000 // max(1, s * max(n, m))))
    for start in range(0, len(rows), chunk):
        idx = rows[start:start + chunk]
        g = space.codes[idx]
        gc = space.counts[idx]
        whites = (g[:, None, :] == cand_codes[None, :, :]).sum(axis=2)
        common = np.minimum(gc[:, None, :], cand_counts[None, :, :]).sum(axis=2)
        fb = whites * (n + 1) + (common - whites)
        offsets = np.arange(len(g))[:, None] * width
        sizes = np.bincount((fb + offsets).ravel(), minlength=len(g) * width).reshape(len(g), width)
        out[idx] = partition_entropy(sizes)
    return out


@lru_cache(maxsize=256)
def _entropy_pick(history: tuple[Row, ...], config: GameConfig) -> Code:
    space = code_space(config)
    live = space.consistent_mask(history)
    hits = np.flatnonzero(live)
    if not len(hits):
        raise ValueError("no code is consistent with the history")
    if len(hits) == 1:
        return space.decode(int(hits[0]))
    ent = np.round(_entropies(live, config, guesses=canonical_guesses(history, config)), 9)
    best = ent.max()
    ties = np.flatnonzero(ent == best)
    preferred = ties[live[ties]]
    return space.decode(int(preferred[0] if len(preferred) else ties[0]))


def entropy_greedy_strategy(history: Sequence[Row], config: GameConfig) -> Code:
    """Code whose reply partition of the consistent set has maximal entropy.

    Every code is a candidate; ties prefer consistent codes, then palette order.
    """
    return _entropy_pick(tuple(history), config)


Policy = Callable[[Sequence[Row], GameConfig], Code]
POLICIES: dict[str, Policy] = {"filter": filter_strategy, "entropy": entropy_greedy_strategy}


def play_policy(policy: Policy, oracle, config: GameConfig) -> Transcript:
    history = Transcript()
    while True:
        guess = policy(history.rows, config)
        fb = oracle(guess)
        history = history.append(guess, fb)
        if fb[0] == config.positions:
            return history
        if len(history) > config.size:
            raise RuntimeError("strategy exceeded M**N guesses")


def run_strategy(name: str, secret: Sequence[str], config: GameConfig, comparator: str = "heuristic",
                 trace=None) -> Transcript:
    """Play one game with the named strategy against a known secret."""
    from .game import score
    from .reasoner import solve

    secret = config.check(secret)
    oracle = lambda g: score(g, secret)  # noqa: E731
    if name == "hybrid":
        return solve(oracle, config, comparator, trace).with_secret(secret)
    if name not in POLICIES:
        raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGIES)}")
    return play_policy(POLICIES[name], oracle, config).with_secret(secret)


def next_guess(name: str, history: Sequence[Row], config: GameConfig, comparator: str = "heuristic") -> Code:
    """Stateless guess for ``history`` (the hybrid solver is replayed)."""
    if name == "hybrid":
        return HybridSolver.from_history(history, config, comparator).next_guess()
    return POLICIES[name](history, config)
