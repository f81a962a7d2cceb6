import io

import pytest

from src.errors import HeaderError
from src.framing import HEADER, MAGIC, BitWriter, FrameHeader, bits_to_bytes, bytes_to_bits, pad_to
from src.words import Word


def test_header_layout():
    header = FrameHeader(2, 4, 1, 2, 3, 8)
    data = header.pack()
    assert HEADER.size == 19
    assert data[:4] == MAGIC
    assert data[4:7] == bytes([2, 4, 1])
    assert data[-8:] == (8).to_bytes(8, "big")
    assert FrameHeader.unpack(data) == header
    assert header.scheme_name == "fsm"


@pytest.mark.parametrize("data", [
    b"LBC1\x01",
    b"LBC0" + bytes(15),
    b"LBC1\x09" + bytes(14),
])
def test_bad_headers(data):
    with pytest.raises(HeaderError):
        FrameHeader.unpack(data)


def test_bits_are_msb_first():
    assert bytes_to_bits(b"\x80\x01") == Word("1000000000000001")
    assert bits_to_bytes(Word("101")) == b"\xa0"
    assert bits_to_bytes(Word()) == b""


def test_pad_to():
    assert pad_to(Word("1"), 3) == Word("100")
    assert pad_to(Word("101"), 3) == Word("101")


def test_bit_writer_streams_whole_bytes():
    stream = io.BytesIO()
    writer = BitWriter(stream)
    writer.write(Word("10101"))
    assert stream.getvalue() == b""
    writer.write(Word("0111"))
    assert stream.getvalue() == b"\xab"
    writer.flush()
    assert stream.getvalue() == b"\xab\x80"
    assert writer.bits_written == 9
