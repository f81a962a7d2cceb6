from typing import Dict

import numpy as np

from ..errors import ParameterError
from ..words import ConstraintParams, Word, balanced_mask, popcount
from .base import WordCounter

BRUTEFORCE_CAP = 24


class ExhaustiveCounter(WordCounter):
    """Counts by checking every word of the requested length"""

    def __init__(self, params: ConstraintParams, cap: int = BRUTEFORCE_CAP):
        super().__init__(params)
        self.cap = cap
        self.max_length = cap
        self._valid: Dict[int, np.ndarray] = {}

    def valid_codes(self, n: int) -> np.ndarray:
        """Balanced words of length n as integers, x_1 in the top bit"""
        self.check_length(n)
        if n > self.cap:
            raise ParameterError(f"exhaustive counting is capped at n={self.cap}, got {n}")
        if n not in self._valid:
            codes = np.arange(1 << n, dtype=np.int64)
            self._valid[n] = codes[balanced_mask(codes, n, self.params)]
            self.logger.debug(f"{self.params}: {self._valid[n].shape[0]} balanced words of length {n}")
        return self._valid[n]

    def total(self, n: int) -> int:
        return int(self.valid_codes(n).shape[0])

    def with_prefix(self, n: int, z: Word) -> int:
        self.check_length(n)
        if len(z) > n:
            return 0
        codes = self.valid_codes(n)
        return int(np.count_nonzero((codes >> (n - len(z))) == z.to_int()))

    def with_prefix_weight(self, n: int, s: int, t: int) -> int:
        self.check_length(n)
        self.check_prefix_weight(n, s, t)
        codes = self.valid_codes(n)
        return int(np.count_nonzero(popcount(codes >> (n - s)) == t))
