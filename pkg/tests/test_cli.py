import json

import numpy as np
import pytest

from src.framing import HEADER, FrameHeader
from src.main import main


@pytest.fixture
def run(tmp_path):
    def _run(*argv):
        return main(["--log-dir", str(tmp_path / "logs"), *argv])
    return _run


def _roundtrip(run, tmp_path, payload, *options):
    src = tmp_path / "in.bin"
    packed = tmp_path / "out.lbc"
    restored = tmp_path / "back.bin"
    src.write_bytes(payload)
    assert run("encode", *options, str(src), str(packed)) == 0
    decode_options = [opt for opt in options if opt != "--scheme" and opt not in ("dyck", "fsm", "graph")]
    if "--s" in decode_options:
        i = decode_options.index("--s")
        del decode_options[i:i + 2]
    assert run("decode", *decode_options, str(packed), str(restored)) == 0
    return packed.read_bytes(), restored.read_bytes()


def test_fsm_one_byte(run, tmp_path):
    packed, restored = _roundtrip(run, tmp_path, b"\x9d", "--scheme", "fsm")
    header = FrameHeader.unpack(packed)
    assert (header.scheme_name, header.payload_bits, header.s, header.m) == ("fsm", 8, 2, 3)
    # 10011101 -> 0110011001100
    assert packed[HEADER.size:] == bytes([0b01100110, 0b01100000])
    assert restored == b"\x9d"


def test_dyck_pads_to_whole_blocks(run, tmp_path):
    packed, restored = _roundtrip(run, tmp_path, b"\xff", "--scheme", "dyck", "--s", "3")
    header = FrameHeader.unpack(packed)
    assert (header.s, header.m, header.payload_bits) == (3, 5, 8)
    assert len(packed) == HEADER.size + 2
    assert restored == b"\xff"


def test_empty_input(run, tmp_path):
    packed, restored = _roundtrip(run, tmp_path, b"", "--scheme", "fsm")
    assert packed[HEADER.size:] == b"\x80"
    assert restored == b""


# byte lengths up to 4096 bits, with and without a padded last block
@pytest.mark.parametrize("size", [0, 1, 3, 6, 97, 512])
@pytest.mark.parametrize("scheme", ["dyck", "fsm", "graph"])
def test_random_roundtrip(run, tmp_path, scheme, size):
    options = ["--scheme", scheme]
    if scheme == "graph":
        codebook = tmp_path / "g41.lbg"
        assert run("search", "--ell", "4", "--delta", "1", "--m-min", "5", "--m-max", "7",
                   "--codebook", str(codebook)) == 0
        options += ["--codebook", str(codebook)]
    payload = np.random.default_rng(size).integers(0, 256, size=size, dtype=np.uint8).tobytes()
    _, restored = _roundtrip(run, tmp_path, payload, *options)
    assert restored == payload


def test_truncated_container(run, tmp_path):
    packed, _ = _roundtrip(run, tmp_path, b"\x9d", "--scheme", "fsm")
    short = tmp_path / "short.lbc"
    short.write_bytes(packed[:-1])
    assert run("decode", str(short), str(tmp_path / "x.bin")) == 4


def test_bad_magic(run, tmp_path):
    packed, _ = _roundtrip(run, tmp_path, b"\x9d", "--scheme", "fsm")
    bad = tmp_path / "bad.lbc"
    bad.write_bytes(b"NOPE" + packed[4:])
    assert run("decode", str(bad), str(tmp_path / "x.bin")) == 2


def test_missing_input_is_io_error(run, tmp_path):
    assert run("decode", str(tmp_path / "missing.lbc"), str(tmp_path / "x.bin")) == 3


def test_graph_needs_codebook(run, tmp_path):
    src = tmp_path / "in.bin"
    src.write_bytes(b"\x01")
    assert run("encode", "--scheme", "graph", str(src), str(tmp_path / "out.lbc")) == 2


def test_unknown_scheme(run, tmp_path):
    assert run("encode", "--scheme", "rll", "a", "b") == 2


def test_capacity_rds(run, capsys):
    assert run("capacity", "--rds", "3") == 0
    assert capsys.readouterr().out == "kind,ell,delta,capacity\nrds,,3,0.694\n"


def test_capacity_table_json(run, capsys):
    assert run("capacity", "--ell-min", "4", "--ell-max", "6", "--delta", "1", "--format", "json") == 0
    data = json.loads(capsys.readouterr().out)
    assert data["capacity"] == [
        {"ell": 4, "delta": 1, "capacity": 0.879},
        {"ell": 6, "delta": 1, "capacity": 0.841},
    ]
    assert data["rds"] == []


def test_capacity_empty_range(run, capsys):
    assert run("capacity", "--ell-min", "8", "--ell-max", "6") == 0
    assert capsys.readouterr().out == "kind,ell,delta,capacity\n"


def test_search(run, capsys):
    assert run("search", "--ell", "4", "--delta", "2", "--m-min", "3", "--m-max", "4") == 0
    assert capsys.readouterr().out == "m=3 s=3 rate=3/3=1.000\n"
    assert run("search", "--ell", "6", "--delta", "1", "--m-min", "2", "--m-max", "8") == 2


def test_verify(run, capsys, tmp_path):
    assert run("verify", "--n-max", "1") == 0
    assert json.loads(capsys.readouterr().out) == {}
    out = tmp_path / "report.json"
    assert run("verify", "--n-max", "14", "--output", str(out)) == 0
    report = json.loads(out.read_text())
    assert all(entry["pass"] for entries in report.values() for entry in entries)
    assert "recurrence" in report and "shift10_runs" in report


def test_verify_below_first_window_reports_failures(run, capsys):
    assert run("verify", "--n-min", "1", "--n-max", "3") == 6
    report = json.loads(capsys.readouterr().out)
    assert report["weight_4_2"][0] == {"n": 1, "lhs": None, "rhs": None, "pass": False}


def test_verify_injected_fault(run, capsys):
    assert run("verify", "--n-max", "12", "--inject-fault", "8") == 6
    report = json.loads(capsys.readouterr().out)
    failing = [entry["n"] for entry in report["recurrence"] if not entry["pass"]]
    assert 8 in failing


def test_count(run, capsys):
    assert run("count", "--ell", "6", "--delta", "1", "--n-max", "6") == 0
    assert capsys.readouterr().out.splitlines()[-2:] == ["5,32", "6,50"]
    assert run("count", "--ell", "6", "--delta", "1", "--n-max", "6", "--prefix", "0000",
               "--format", "json") == 0
    assert json.loads(capsys.readouterr().out)[6] == {"n": 6, "count": 1}
    assert run("count", "--ell", "5", "--delta", "1", "--n-max", "6") == 2


def test_report_log_written(run, tmp_path):
    assert run("count", "--ell", "4", "--delta", "1", "--n-max", "4", "--output", str(tmp_path / "c.csv")) == 0
    line = (tmp_path / "logs" / "report.log").read_text().splitlines()[-1]
    assert " | count | params: (4,1) | n_max: 4" in line
