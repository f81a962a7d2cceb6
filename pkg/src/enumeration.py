"""
Exact counting of locally balanced words and the (6,1) identities.

f_n is the number of (6,1)-locally balanced words of length n, f_n(z) the
number of them starting with z and f_n(s, t) the number whose first s bits
have weight t. The identities below hold for n >= 6; shorter words carry no
full window and break them, so checks start at ``FIRST_N`` unless told
otherwise.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

from .counting.base import WordCounter
from .counting.exhaustive import ExhaustiveCounter
from .counting.transfer import TransferCounter
from .errors import ParameterError
from .words import ConstraintParams, Word, WordLike, as_word

logger = logging.getLogger(__name__)

SIX_ONE = ConstraintParams(6, 1)
FIRST_N = 6


@lru_cache(maxsize=None)
def transfer_counter(p: ConstraintParams) -> TransferCounter:
    return TransferCounter(p)


@lru_cache(maxsize=4)
def exhaustive_counter(p: ConstraintParams) -> ExhaustiveCounter:
    return ExhaustiveCounter(p)


def make_counter(p: ConstraintParams, method: str = "dp") -> WordCounter:
    if method == "dp":
        return transfer_counter(p)
    if method == "bruteforce":
        return exhaustive_counter(p)
    raise ParameterError(f"unknown counting method {method!r}")


@dataclass(frozen=True)
class CountSequence:
    params: ConstraintParams
    counts: Dict[int, int]

    def __getitem__(self, n: int) -> int:
        return self.counts[n]

    def ratio(self, n: int) -> float:
        return self.counts[n + 1] / self.counts[n]


def count_sequence(p: ConstraintParams, n_max: int, method: str = "dp") -> CountSequence:
    values = make_counter(p, method).sequence(n_max)
    return CountSequence(p, dict(enumerate(values)))


def count_lb(p: ConstraintParams, n: int) -> int:
    return transfer_counter(p).total(n)


def count_lb_bruteforce(p: ConstraintParams, n: int) -> int:
    return exhaustive_counter(p).total(n)


def count_with_prefix(n: int, z: WordLike, p: ConstraintParams = SIX_ONE, method: str = "dp") -> int:
    return make_counter(p, method).with_prefix(n, as_word(z))


def count_with_prefix_weight(n: int, s: int, t: int, p: ConstraintParams = SIX_ONE, method: str = "dp") -> int:
    return make_counter(p, method).with_prefix_weight(n, s, t)


def growth_estimate(p: ConstraintParams, n: int) -> float:
    """f_{n+1} / f_n"""
    if n < p.ell:
        raise ParameterError(f"growth estimate needs n >= ell={p.ell}, got {n}")
    f = transfer_counter(p).sequence(n + 1)
    return f[n + 1] / f[n]


def _band_paths(low: int, high: int, n: int) -> int:
    """n-step +-1 paths from 0 that stay inside [low, high]"""
    if not low <= 0 <= high:
        return 0
    paths = {0: 1}
    for _ in range(n):
        nxt: Dict[int, int] = {}
        for level, count in paths.items():
            for step in (-1, 1):
                if low <= level + step <= high:
                    nxt[level + step] = nxt.get(level + step, 0) + count
        paths = nxt
    return sum(paths.values())


def count_rds_words(delta: int, n: int) -> int:
    """Words of length n whose running digital sum spans at most delta"""
    if delta < 0 or n < 0:
        raise ParameterError(f"need delta >= 0 and n >= 0, got {delta} and {n}")
    # A range of width w <= delta fits in delta-w+1 bands of width delta and delta-w bands of width delta-1.
    wide = sum(_band_paths(a, a + delta, n) for a in range(-delta, 1))
    narrow = sum(_band_paths(a, a + delta - 1, n) for a in range(-delta + 1, 1))
    return wide - narrow


@dataclass(frozen=True)
class IdentityCheck:
    """One side-by-side evaluation; lhs and rhs are None when a term is undefined at n"""
    identity: str
    n: int
    lhs: Optional[int]
    rhs: Optional[int]

    @property
    def passed(self) -> bool:
        return self.lhs is not None and self.lhs == self.rhs

    def to_dict(self) -> Dict:
        return {"n": self.n, "lhs": self.lhs, "rhs": self.rhs, "pass": self.passed}


@dataclass
class VerificationReport:
    checks: List[IdentityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[IdentityCheck]:
        return [check for check in self.checks if not check.passed]

    def identities(self) -> List[str]:
        return list(dict.fromkeys(check.identity for check in self.checks))

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(self.checks + other.checks)

    def to_json(self) -> Dict[str, List[Dict]]:
        out: Dict[str, List[Dict]] = {}
        for check in self.checks:
            out.setdefault(check.identity, []).append(check.to_dict())
        return out


def _check_range(n_max: int, n_min: int) -> range:
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max}")
    return range(max(1, n_min), n_max + 1)


def _six_one_counter(counter: Optional[WordCounter]) -> WordCounter:
    counter = counter or transfer_counter(SIX_ONE)
    if counter.params != SIX_ONE:
        raise ParameterError(f"the identities are stated for {SIX_ONE}, not {counter.params}")
    return counter


def recurrence_rhs(f: List[int], n: int) -> int:
    return f[n + 11] + f[n + 10] + f[n + 9] - f[n + 6] - f[n + 4] - f[n + 3] + f[n]


def verify_recurrence(n_max: int, n_min: int = FIRST_N, perturb: Optional[int] = None,
                      counter: Optional[WordCounter] = None) -> VerificationReport:
    """Check f_{n+12} = f_{n+11} + f_{n+10} + f_{n+9} - f_{n+6} - f_{n+4} - f_{n+3} + f_n.

    Args:
        perturb: add 1 to f_{perturb+12} before checking
    """
    n_range = _check_range(n_max, n_min)
    counter = _six_one_counter(counter)
    f = counter.sequence(n_max + 12)
    if perturb is not None and 0 <= perturb + 12 < len(f):
        f[perturb + 12] += 1
    report = VerificationReport([
        IdentityCheck("recurrence", n, f[n + 12], recurrence_rhs(f, n)) for n in n_range
    ])
    logger.info(f"recurrence checked for n in {n_range.start}..{n_max}: "
                f"{len(report.failures())} failures")
    return report


class _CachedCounts:
    def __init__(self, counter: WordCounter):
        self.counter = counter
        self._prefix: Dict[Tuple[int, str], int] = {}
        self._weight: Dict[Tuple[int, int, int], int] = {}

    def f(self, n: int, prefix: str = "") -> int:
        key = (n, prefix)
        if key not in self._prefix:
            self._prefix[key] = self.counter.with_prefix(n, Word(prefix))
        return self._prefix[key]

    def fw(self, n: int, s: int, t: int) -> int:
        key = (n, s, t)
        if key not in self._weight:
            self._weight[key] = self.counter.with_prefix_weight(n, s, t)
        return self._weight[key]


Identity = Callable[[_CachedCounts, int], Tuple[int, int]]

IDENTITIES: Dict[str, Identity] = {
    "triple_prefixes": lambda c, n: (c.f(n + 3, "000") + c.f(n + 3, "111"), c.f(n)),
    "quad_prefixes": lambda c, n: (c.f(n + 4, "1000") + c.f(n + 4, "0111"), c.f(n)),
    "prefix_weight_partition": lambda c, n: (sum(c.fw(n, 3, t) for t in range(4)), c.f(n)),
    "prefix_110": lambda c, n: (c.f(n + 2, "110"), c.f(n, "0") - c.f(n, "0111")),
    "prefix_001": lambda c, n: (c.f(n + 2, "001"), c.f(n, "1") - c.f(n, "1000")),
    "prefix_0000": lambda c, n: (c.f(n + 4, "0000"), c.f(n, "11")),
    "prefix_1111": lambda c, n: (c.f(n + 4, "1111"), c.f(n, "00")),
    "four_term_difference": lambda c, n: (
        c.f(n + 3) - c.f(n + 2) - c.f(n + 1) - c.f(n),
        -c.f(n + 1, "0000") - c.f(n + 1, "1111") - c.f(n, "000") - c.f(n, "111"),
    ),
    "two_term_difference": lambda c, n: (c.f(n + 3) - c.f(n + 2), c.fw(n + 2, 5, 2) + c.fw(n + 2, 5, 3)),
    "weight_5_2": lambda c, n: (c.fw(n + 2, 5, 2), c.fw(n + 1, 4, 1) + c.fw(n + 1, 4, 2)),
    "weight_5_3": lambda c, n: (c.fw(n + 2, 5, 3), c.fw(n + 1, 4, 3) + c.fw(n + 1, 4, 2)),
    "weight_4_2": lambda c, n: (c.fw(n + 1, 4, 2), c.fw(n, 3, 1) + c.fw(n, 3, 2)),
    "shift6_mixed": lambda c, n: (c.f(n + 6, "110") + c.f(n + 6, "001"), c.f(n + 4) - c.f(n)),
    "shift6_all": lambda c, n: (
        c.f(n + 6, "110") + c.f(n + 6, "001") + c.f(n + 6, "111") + c.f(n + 6, "000"),
        c.f(n + 4) + c.f(n + 3) - c.f(n),
    ),
    "shift9_runs": lambda c, n: (
        c.f(n + 9, "000") + c.f(n + 9, "111"),
        c.f(n + 6, "01") + c.f(n + 6, "10") + c.f(n + 4) + c.f(n + 3) - c.f(n),
    ),
    "shift10_runs": lambda c, n: (
        c.f(n + 10, "0000") + c.f(n + 10, "1111") + c.f(n + 9, "000") + c.f(n + 9, "111"),
        c.f(n + 6) + c.f(n + 4) + c.f(n + 3) - c.f(n),
    ),
}

# largest length offset used by IDENTITIES
MAX_SHIFT = 10


def verify_lemmas(n_max: int, n_min: int = FIRST_N, counter: Optional[WordCounter] = None) -> VerificationReport:
    """Evaluate every entry of IDENTITIES for n in n_min..n_max.

    A term outside 0 <= t <= s <= n makes that check fail with lhs = rhs = None.
    """
    n_range = _check_range(n_max, n_min)
    counter = _six_one_counter(counter)
    if counter.max_length is not None and n_max + MAX_SHIFT > counter.max_length:
        raise ParameterError(
            f"identities up to n={n_max} need words of length {n_max + MAX_SHIFT}, "
            f"the counter stops at {counter.max_length}"
        )
    counts = _CachedCounts(counter)
    report = VerificationReport()
    for name, identity in IDENTITIES.items():
        for n in n_range:
            try:
                lhs, rhs = identity(counts, n)
            except ParameterError as e:
                logger.debug(f"{name} undefined at n={n}: {e}")
                lhs = rhs = None
            report.checks.append(IdentityCheck(name, n, lhs, rhs))
    failures = report.failures()
    if failures:
        for check in failures:
            logger.warning(f"{check.identity} fails at n={check.n}: {check.lhs} != {check.rhs}")
    logger.info(f"{len(IDENTITIES)} identities checked for n in {n_range.start}..{n_max}: {len(failures)} failures")
    return report
