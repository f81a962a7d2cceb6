"""
Transfer counting over the last ell-1 bits.

A state is the integer value of the last ell-1 bits. Appending bit b to state
a completes the ell-bit window (a << 1) | b, which must have a balanced
weight. Counts are int64 and every step is checked against 2^62, so a step
that would wrap raises instead.
"""
from math import comb
from typing import List

import numpy as np

from ..errors import CountOverflowError
from ..words import ConstraintParams, Word, balanced_mask, popcount
from .base import WordCounter

OVERFLOW_LIMIT = 1 << 62


class TransferCounter(WordCounter):
    def __init__(self, params: ConstraintParams):
        super().__init__(params)
        self.width = params.ell - 1
        self.state_mask = (1 << self.width) - 1
        windows = np.arange(1 << params.ell, dtype=np.int64)
        weights = popcount(windows)
        allowed = windows[(weights >= params.low) & (weights <= params.high)]
        self._sources = allowed >> 1
        self._targets = allowed & self.state_mask

    def _step(self, counts: np.ndarray, length: int) -> np.ndarray:
        nxt = np.zeros_like(counts)
        np.add.at(nxt, self._targets, counts[self._sources])
        if nxt.max() >= OVERFLOW_LIMIT:
            raise CountOverflowError(
                f"counts for {self.params} leave the checked 64-bit range at n={length}", length
            )
        return nxt

    def _extend(self, seeds: np.ndarray, seed_length: int, n: int) -> int:
        """Number of balanced length-n extensions of the balanced words ``seeds``"""
        counts = np.bincount(seeds & self.state_mask, minlength=1 << self.width).astype(np.int64)
        for length in range(seed_length + 1, n + 1):
            counts = self._step(counts, length)
        return sum(counts.tolist())

    def with_prefix(self, n: int, z: Word) -> int:
        self.check_length(n)
        if len(z) > n:
            return 0
        if n < self.params.ell:
            return 1 << (n - len(z))
        seed_length = max(len(z), self.width)
        free = seed_length - len(z)
        seeds = (z.to_int() << free) + np.arange(1 << free, dtype=np.int64)
        seeds = seeds[balanced_mask(seeds, seed_length, self.params)]
        return self._extend(seeds, seed_length, n)

    def with_prefix_weight(self, n: int, s: int, t: int) -> int:
        self.check_length(n)
        self.check_prefix_weight(n, s, t)
        if n < self.params.ell:
            return comb(s, t) << (n - s)
        seed_length = max(s, self.width)
        seeds = np.arange(1 << seed_length, dtype=np.int64)
        keep = popcount(seeds >> (seed_length - s)) == t
        seeds = seeds[keep]
        seeds = seeds[balanced_mask(seeds, seed_length, self.params)]
        return self._extend(seeds, seed_length, n)

    def sequence(self, n_max: int) -> List[int]:
        self.check_length(n_max)
        totals = [1 << n for n in range(min(n_max, self.width) + 1)]
        counts = np.ones(1 << self.width, dtype=np.int64)
        for n in range(self.width + 1, n_max + 1):
            counts = self._step(counts, n)
            totals.append(sum(counts.tolist()))
        self.logger.debug(f"transfer counts for {self.params} up to n={n_max}")
        return totals
