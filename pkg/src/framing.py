"""
LBC1 container: a fixed header followed by the coded bits, packed
most-significant-bit-first with the last byte zero-padded.
"""
import struct
from dataclasses import dataclass
from typing import BinaryIO, List

import numpy as np

from .errors import HeaderError
from .words import Word

MAGIC = b"LBC1"
HEADER = struct.Struct(">4sBBBHHQ")
SCHEME_NAMES = {1: "dyck", 2: "fsm", 3: "graph"}
SCHEME_IDS = {name: scheme_id for scheme_id, name in SCHEME_NAMES.items()}


@dataclass(frozen=True)
class FrameHeader:
    scheme: int
    ell: int
    delta: int
    s: int
    m: int
    payload_bits: int

    @property
    def scheme_name(self) -> str:
        return SCHEME_NAMES[self.scheme]

    def pack(self) -> bytes:
        return HEADER.pack(MAGIC, self.scheme, self.ell, self.delta, self.s, self.m, self.payload_bits)

    @classmethod
    def unpack(cls, data: bytes) -> "FrameHeader":
        if len(data) < HEADER.size:
            raise HeaderError(f"container holds {len(data)} bytes, the header alone needs {HEADER.size}")
        magic, scheme, ell, delta, s, m, payload_bits = HEADER.unpack_from(data)
        if magic != MAGIC:
            raise HeaderError(f"bad magic {magic!r}, expected {MAGIC!r}")
        if scheme not in SCHEME_NAMES:
            raise HeaderError(f"unsupported scheme id {scheme}")
        return cls(scheme, ell, delta, s, m, payload_bits)


def bytes_to_bits(data: bytes) -> Word:
    return Word(tuple(np.unpackbits(np.frombuffer(data, dtype=np.uint8)).tolist()))


def bits_to_bytes(bits: Word) -> bytes:
    return np.packbits(bits.to_array()).tobytes()


def pad_to(bits: Word, block: int) -> Word:
    """Zero-pad to a multiple of ``block`` bits"""
    return bits + Word.zeros(-len(bits) % block)


class BitWriter:
    """Packs bits into a binary stream as whole bytes become available"""

    def __init__(self, stream: BinaryIO):
        self.stream = stream
        self.bits_written = 0
        self._pending: List[int] = []

    def write(self, bits: Word):
        self._pending.extend(bits.bits)
        self.bits_written += len(bits)
        whole = len(self._pending) - len(self._pending) % 8
        if whole:
            self.stream.write(np.packbits(np.array(self._pending[:whole], dtype=np.uint8)).tobytes())
            del self._pending[:whole]

    def flush(self):
        if self._pending:
            self.stream.write(np.packbits(np.array(self._pending, dtype=np.uint8)).tobytes())
            self._pending = []
        self.stream.flush()
