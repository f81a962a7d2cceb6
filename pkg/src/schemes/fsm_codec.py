"""
Six-state transition code: 2k message bits -> 3k + 1 coded bits.

States track the running digital sum level (-1..2); levels 0 and 1 are split
into a + and a - copy so that every state has four outgoing 3-bit labels.
Incoming labels are distinct per state, which lets the decoder walk the
codeword backwards from the final state. The last coded bit selects the sign
of the final state.
"""
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType
from typing import Dict, List, Mapping, NamedTuple, Optional, Tuple, Union

from ..errors import CorruptionError, FramingError, ParameterError, TableError
from ..words import Word, rds, weight
from .base import BlockScheme, StreamEncoder

logger = logging.getLogger(__name__)

INPUTS = ("00", "01", "10", "11")
BAND = (-1, 2)


class Sign(Enum):
    PLUS = "+"
    MINUS = "-"
    NONE = ""


class FsmState(Enum):
    MINUS_ONE = (-1, Sign.NONE)
    ZERO_PLUS = (0, Sign.PLUS)
    ZERO_MINUS = (0, Sign.MINUS)
    ONE_PLUS = (1, Sign.PLUS)
    ONE_MINUS = (1, Sign.MINUS)
    TWO = (2, Sign.NONE)

    @property
    def level(self) -> int:
        return self.value[0]

    @property
    def sign(self) -> Sign:
        return self.value[1]

    @property
    def label(self) -> str:
        return f"{self.level}{self.sign.value}"

    @classmethod
    def from_label(cls, label: str) -> "FsmState":
        normalized = label.strip().replace("−", "-").replace("⁺", "+").replace("⁻", "-")
        for state in cls:
            if state.label == normalized:
                return state
        raise ParameterError(f"unknown FSM state {label!r}")

    def __str__(self) -> str:
        return self.label


INITIAL_STATE = FsmState.ZERO_PLUS
EXPECTED_FINAL_BIT = MappingProxyType({
    FsmState.ZERO_PLUS: 1,
    FsmState.ONE_PLUS: 1,
    FsmState.MINUS_ONE: 1,
    FsmState.ZERO_MINUS: 0,
    FsmState.ONE_MINUS: 0,
    FsmState.TWO: 0,
})


class Transition(NamedTuple):
    output: Word
    target: FsmState


@dataclass(frozen=True, eq=False)
class FsmTable:
    transitions: Mapping[FsmState, Mapping[str, Transition]]
    final_bit: Mapping[FsmState, int] = field(default_factory=lambda: dict(EXPECTED_FINAL_BIT))

    def __post_init__(self):
        frozen = {state: MappingProxyType(dict(row)) for state, row in self.transitions.items()}
        object.__setattr__(self, "transitions", MappingProxyType(frozen))
        object.__setattr__(self, "final_bit", MappingProxyType(dict(self.final_bit)))

    def step(self, state: FsmState, pair: str) -> Transition:
        return self.transitions[state][pair]

    def incoming(self) -> Dict[FsmState, Dict[Word, Tuple[FsmState, str]]]:
        """target -> label -> (predecessor, input); later duplicates overwrite earlier ones"""
        index: Dict[FsmState, Dict[Word, Tuple[FsmState, str]]] = {state: {} for state in FsmState}
        for state, row in self.transitions.items():
            for pair, trans in row.items():
                index[trans.target][trans.output] = (state, pair)
        return index


def _row(*entries: Tuple[str, str]) -> Dict[str, Transition]:
    return {
        pair: Transition(Word(output), FsmState.from_label(target))
        for pair, (output, target) in zip(INPUTS, entries)
    }


@lru_cache(maxsize=None)
def default_table() -> FsmTable:
    return FsmTable({
        FsmState.MINUS_ONE: _row(("110", "0+"), ("110", "0-"), ("101", "0-"), ("111", "2")),
        FsmState.ZERO_PLUS: _row(("101", "1+"), ("110", "1+"), ("011", "1+"), ("100", "-1")),
        FsmState.ZERO_MINUS: _row(("101", "1-"), ("110", "1-"), ("011", "1-"), ("010", "-1")),
        FsmState.ONE_PLUS: _row(("010", "0+"), ("001", "0+"), ("100", "0+"), ("011", "2")),
        FsmState.ONE_MINUS: _row(("010", "0-"), ("001", "0-"), ("100", "0-"), ("101", "2")),
        FsmState.TWO: _row(("000", "-1"), ("010", "1+"), ("001", "1+"), ("001", "1-")),
    })


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def validate_table(t: FsmTable) -> ValidationReport:
    report = ValidationReport()
    labels_into: Dict[FsmState, Dict[Word, List[FsmState]]] = {state: {} for state in FsmState}

    for state in FsmState:
        row = t.transitions.get(state, {})
        if sorted(row) != list(INPUTS):
            report.violations.append(
                f"state {state} has inputs {sorted(row)}, expected {list(INPUTS)}"
            )
        for pair, (output, target) in row.items():
            if len(output) != 3:
                report.violations.append(f"{state}/{pair}: output {output} is not 3 bits")
                continue
            level = state.level
            for bit in output:
                level += 2 * bit - 1
                if not BAND[0] <= level <= BAND[1]:
                    report.violations.append(f"{state}/{pair}: output {output} leaves the band {list(BAND)}")
                    break
            if target.level != state.level + 2 * weight(output) - 3:
                report.violations.append(
                    f"{state}/{pair}: output {output} moves level {state.level} to "
                    f"{state.level + 2 * weight(output) - 3}, not to {target}"
                )
            labels_into[target].setdefault(output, []).append(state)

    for target, labels in labels_into.items():
        for output, sources in labels.items():
            if len(sources) > 1:
                report.violations.append(
                    f"label {output} enters {target} from {', '.join(map(str, sources))}"
                )

    for state, expected in EXPECTED_FINAL_BIT.items():
        if t.final_bit.get(state) != expected:
            report.violations.append(f"final bit of {state} must be {expected}")
    return report


class FsmEncoder(StreamEncoder):
    def __init__(self, table: FsmTable):
        self.table = table
        self.state = INITIAL_STATE

    def feed(self, msg: Word) -> Word:
        if len(msg) % 2:
            raise FramingError(f"message length {len(msg)} is odd")
        out: List[int] = []
        for block in msg.blocks(2):
            output, self.state = self.table.step(self.state, str(block))
            out.extend(output.bits)
        return Word(tuple(out))

    def finish(self) -> Word:
        return Word((self.table.final_bit[self.state],))


def encode_fsm(msg: Word, t: Optional[FsmTable] = None) -> Word:
    enc = FsmEncoder(t or default_table())
    return enc.feed(msg) + enc.finish()


def _check_code_length(code: Word):
    if len(code) % 3 != 1:
        raise FramingError(f"FSM codewords have length 3k+1, got {len(code)}")


def recover_final_state(code: Word, t: Optional[FsmTable] = None) -> FsmState:
    t = t or default_table()
    _check_code_length(code)
    level = rds(code[:-1])[-1]
    if not BAND[0] <= level <= BAND[1]:
        raise CorruptionError(f"RDS level {level} before the final bit is outside {list(BAND)}")
    last = code[-1]
    matches = [s for s in FsmState if s.level == level and t.final_bit.get(s) == last]
    if len(matches) != 1:
        raise CorruptionError(f"final bit {last} does not identify a state at level {level}")
    return matches[0]


def decode_fsm(code: Word, t: Optional[FsmTable] = None) -> Word:
    t = t or default_table()
    state = recover_final_state(code, t)
    incoming = t.incoming()
    body = code[:-1]
    pairs: List[str] = []
    for k in range(len(body) // 3 - 1, -1, -1):
        label = body[3 * k:3 * k + 3]
        entry = incoming[state].get(label)
        if entry is None:
            raise CorruptionError(f"no transition labelled {label} enters {state} (block {k})")
        state, pair = entry
        pairs.append(pair)
    if state is not INITIAL_STATE:
        raise CorruptionError(f"backward walk ended in {state}, not in {INITIAL_STATE}")
    return Word("".join(reversed(pairs)))


def table_to_json(t: FsmTable) -> Dict[str, Dict[str, Dict[str, str]]]:
    return {
        state.label: {
            pair: {"output": str(trans.output), "next": trans.target.label}
            for pair, trans in sorted(row.items())
        }
        for state, row in t.transitions.items()
    }


def table_from_json(data: Mapping) -> FsmTable:
    transitions = {}
    for state_label, row in data.items():
        transitions[FsmState.from_label(state_label)] = {
            pair: Transition(Word(entry["output"]), FsmState.from_label(entry["next"]))
            for pair, entry in row.items()
        }
    return FsmTable(transitions)


def load_table(path: Union[str, Path]) -> FsmTable:
    with open(path, "r") as f:
        table = table_from_json(json.load(f))
    report = validate_table(table)
    if not report.valid:
        for violation in report.violations:
            logger.error(f"FSM table {path}: {violation}")
        raise TableError(f"FSM table {path} is not decodable", report.violations)
    logger.info(f"Loaded FSM table from {path}")
    return table


class FsmScheme(BlockScheme):
    scheme_id = 2
    name = "fsm"

    def __init__(self, table: Optional[FsmTable] = None):
        self.table = table or default_table()

    @property
    def message_block(self) -> int:
        return 2

    @property
    def code_block(self) -> int:
        return 3

    def coded_length(self, message_bits: int) -> int:
        return super().coded_length(message_bits) + 1

    def encoder(self) -> StreamEncoder:
        return FsmEncoder(self.table)

    def decode(self, code: Word) -> Word:
        return decode_fsm(code, self.table)
