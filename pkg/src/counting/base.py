import logging
from abc import ABC, abstractmethod
from typing import List, Optional

from ..errors import ParameterError
from ..words import ConstraintParams, Word


class WordCounter(ABC):
    """Exact counts of (ell, delta)-locally balanced words, optionally prefix-conditioned"""

    # longest word length the backend can count, None for unbounded
    max_length: Optional[int] = None

    def __init__(self, params: ConstraintParams):
        self.params = params
        self.logger = logging.getLogger(__name__)

    @abstractmethod
    def with_prefix(self, n: int, z: Word) -> int:
        """Number of balanced words of length n starting with z"""
        pass

    @abstractmethod
    def with_prefix_weight(self, n: int, s: int, t: int) -> int:
        """Number of balanced words of length n whose first s bits have weight t"""
        pass

    def total(self, n: int) -> int:
        return self.with_prefix(n, Word())

    def sequence(self, n_max: int) -> List[int]:
        """[f_0, f_1, ..., f_{n_max}]"""
        return [self.total(n) for n in range(n_max + 1)]

    @staticmethod
    def check_length(n: int):
        if n < 0:
            raise ParameterError(f"word length must be >= 0, got {n}")

    @staticmethod
    def check_prefix_weight(n: int, s: int, t: int):
        if not 0 <= t <= s <= n:
            raise ParameterError(f"need 0 <= t <= s <= n, got n={n}, s={s}, t={t}")
