"""Vectorized view of the whole code space of a configuration."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .game import Code, Feedback, GameConfig, Row


class CodeSpace:
    """All M**N codes as an integer matrix, in lexicographic palette order.

    Row ``k`` of :attr:`codes` is the ``k``-th code of
    :func:`hybridmind.game.enumerate_codes`.
    """

    def __init__(self, config: GameConfig) -> None:
        self.config = config
        n, m = config.positions, config.colors
        # base-M digits, most significant first
        idx = np.arange(m ** n, dtype=np.int64)
        digits = np.empty((m ** n, n), dtype=np.int8)
        for i in range(n - 1, -1, -1):
            digits[:, i] = idx % m
            idx //= m
        self.codes = digits
        self.counts = np.stack([(digits == c).sum(axis=1) for c in range(m)], axis=1).astype(np.int8)
        self.codes.setflags(write=False)
        self.counts.setflags(write=False)
        self._columns = [np.ascontiguousarray(digits[:, i]) for i in range(n)]
        self._color_counts = [np.ascontiguousarray(self.counts[:, c]) for c in range(m)]
        self._feedback_cache: dict[tuple, np.ndarray] = {}

    def __len__(self) -> int:
        return self.codes.shape[0]

    def encode(self, code: Sequence[str]) -> np.ndarray:
        return np.array([self.config.index(c) for c in code], dtype=np.int8)

    def rank(self, code: Sequence[str]) -> int:
        k = 0
        for c in code:
            k = k * self.config.colors + self.config.index(c)
        return k

    def decode(self, k: int) -> Code:
        return tuple(self.config.palette[int(i)] for i in self.codes[k])

    def feedback_index(self, guess: Sequence[str]) -> np.ndarray:
        """``whites * (N + 1) + blacks`` of ``guess`` against every code."""
        key = tuple(guess)
        hit = self._feedback_cache.get(key)
        if hit is not None:
            return hit
        g = self.encode(guess)
        whites = np.zeros(len(self), dtype=np.int16)
        for column, c in zip(self._columns, g):
            whites += column == c
        common = np.zeros(len(self), dtype=np.int16)
        for c, k in zip(*np.unique(g, return_counts=True)):
            common += np.minimum(self._color_counts[c], k)
        out = whites * (self.config.positions + 1) + (common - whites)
        out.setflags(write=False)
        # about 32 MB of cached replies
        if len(self._feedback_cache) * len(self) >= 1 << 24:
            self._feedback_cache.clear()
        self._feedback_cache[key] = out
        return out

    def feedback_code(self, fb: Feedback) -> int:
        return fb.whites * (self.config.positions + 1) + fb.blacks

    def consistent_mask(self, history: Iterable[Row]) -> np.ndarray:
        mask = np.ones(len(self), dtype=bool)
        for row in history:
            mask &= self.feedback_index(row.guess) == self.feedback_code(row.feedback)
        return mask


@lru_cache(maxsize=16)
def code_space(config: GameConfig) -> CodeSpace:
    return CodeSpace(config)
