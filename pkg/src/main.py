import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from config.config import Config

from .capacity import DEFAULT_MAX_ITER, DEFAULT_TOL, capacity_rds, capacity_table
from .counting.exhaustive import BRUTEFORCE_CAP, ExhaustiveCounter
from .enumeration import (
    FIRST_N, SIX_ONE, make_counter, verify_lemmas, verify_recurrence,
)
from .errors import (
    ConvergenceError, CorruptionError, CountOverflowError, FramingError, HeaderError,
    LBCodeError, NoCodeError, ParameterError, TableError,
)
from .framing import HEADER, SCHEME_IDS, BitWriter, FrameHeader, bits_to_bytes, bytes_to_bits
from .schemes import dyck_codec, fsm_codec, graph_codec
from .schemes.base import BlockScheme
from .utils.logging import REPORT_LOGGER, log_result, setup_logging
from .words import ConstraintParams, Word

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_CORRUPT = 4
EXIT_NO_CODE = 5
EXIT_VERIFY = 6
EXIT_CONVERGENCE = 7

# Checked in order, so subclasses come before their bases
EXIT_CODES: List[Tuple[type, int]] = [
    (HeaderError, EXIT_USAGE),
    (TableError, EXIT_USAGE),
    (ParameterError, EXIT_USAGE),
    (FramingError, EXIT_USAGE),
    (CountOverflowError, EXIT_USAGE),
    (CorruptionError, EXIT_CORRUPT),
    (NoCodeError, EXIT_NO_CODE),
    (ConvergenceError, EXIT_CONVERGENCE),
    (OSError, EXIT_IO),
]


def _fsm_table(args) -> fsm_codec.FsmTable:
    if args.fsm_table:
        return fsm_codec.load_table(args.fsm_table)
    return fsm_codec.default_table()


def _graph_codebook(args) -> graph_codec.GraphCodebook:
    if not args.codebook:
        raise HeaderError("the graph scheme needs --codebook")
    path = Path(args.codebook)
    if not path.is_file():
        raise HeaderError(f"codebook {path} does not exist")
    return graph_codec.load_codebook(path)


def scheme_for_encode(args, config: Config) -> Tuple[BlockScheme, FrameHeader]:
    """Scheme plus a header template whose payload length is still 0"""
    if args.scheme == "dyck":
        s = args.s or config.cli_settings.get("dyck_s", 3)
        scheme = dyck_codec.DyckScheme(dyck_codec.build_codebook(s))
        ell, delta = 4, 1
    elif args.scheme == "fsm":
        scheme = fsm_codec.FsmScheme(_fsm_table(args))
        ell, delta = 4, 1
    else:
        cb = _graph_codebook(args)
        scheme = graph_codec.GraphScheme(cb)
        ell, delta = cb.params.ell, cb.params.delta
    header = FrameHeader(SCHEME_IDS[scheme.name], ell, delta, scheme.message_block, scheme.code_block, 0)
    return scheme, header


def scheme_for_decode(header: FrameHeader, args) -> BlockScheme:
    if header.scheme_name == "dyck":
        scheme = dyck_codec.DyckScheme(dyck_codec.build_codebook(header.s))
    elif header.scheme_name == "fsm":
        scheme = fsm_codec.FsmScheme(_fsm_table(args))
    else:
        cb = _graph_codebook(args)
        found = (cb.params.ell, cb.params.delta, cb.s, cb.m)
        if found != (header.ell, header.delta, header.s, header.m):
            raise HeaderError(
                f"codebook has (ell, delta, s, m) = {found}, container expects "
                f"{(header.ell, header.delta, header.s, header.m)}"
            )
        scheme = graph_codec.GraphScheme(cb)
    if (scheme.message_block, scheme.code_block) != (header.s, header.m):
        raise HeaderError(f"container blocks {header.s}/{header.m} do not match the {scheme.name} scheme")
    return scheme


def padded_bits(payload_bits: int, block: int) -> int:
    return -(-payload_bits // block) * block


def cmd_encode(args, config: Config, report: logging.Logger) -> int:
    scheme, template = scheme_for_encode(args, config)
    block = scheme.message_block
    payload_bits = os.path.getsize(args.input) * 8
    header = FrameHeader(template.scheme, template.ell, template.delta, template.s, template.m, payload_bits)
    chunk_bytes = max(1, config.cli_settings.get("chunk_blocks", 4096) * block // 8)

    encoder = scheme.encoder()
    with open(args.input, "rb") as src, open(args.output, "wb") as dst:
        dst.write(header.pack())
        writer = BitWriter(dst)
        pending = Word()
        while True:
            chunk = src.read(chunk_bytes)
            if not chunk:
                break
            pending = pending + bytes_to_bits(chunk)
            usable = len(pending) - len(pending) % block
            writer.write(encoder.feed(pending[:usable]))
            pending = pending[usable:]
        if len(pending):
            writer.write(encoder.feed(pending + Word.zeros(block - len(pending))))
        writer.write(encoder.finish())
        writer.flush()

    logger.info(f"Encoded {args.input} ({payload_bits} bits) into {writer.bits_written} coded bits")
    log_result(report, "encode", scheme=scheme.name, payload_bits=payload_bits,
               coded_bits=writer.bits_written, output=args.output)
    return EXIT_OK


def cmd_decode(args, config: Config, report: logging.Logger) -> int:
    data = Path(args.input).read_bytes()
    header = FrameHeader.unpack(data)
    scheme = scheme_for_decode(header, args)
    coded_bits = scheme.coded_length(padded_bits(header.payload_bits, scheme.message_block))
    stream = bytes_to_bits(data[HEADER.size:])
    if len(stream) < coded_bits:
        raise CorruptionError(f"container holds {len(stream)} coded bits, header implies {coded_bits}")
    message = scheme.decode(stream[:coded_bits])
    Path(args.output).write_bytes(bits_to_bytes(message[:header.payload_bits]))

    logger.info(f"Decoded {args.input} with the {scheme.name} scheme")
    log_result(report, "decode", scheme=scheme.name, payload_bits=header.payload_bits, output=args.output)
    return EXIT_OK


def _emit(text: str, output: Optional[str]):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_capacity(args, config: Config, report: logging.Logger) -> int:
    settings = config.capacity_settings
    explicit_range = args.ell_min is not None or args.ell_max is not None or args.delta
    rows = []
    if explicit_range or not args.rds:
        start, stop, step = settings.get("ell_range", [4, 14, 2])
        ell_min = args.ell_min if args.ell_min is not None else start
        ell_max = args.ell_max if args.ell_max is not None else stop
        deltas = args.delta or settings.get("deltas", [1, 2])
        rows = capacity_table(
            range(ell_min, ell_max + 1, args.ell_step or step), deltas,
            tol=float(settings.get("tolerance", DEFAULT_TOL)),
            max_iter=int(settings.get("max_iterations", DEFAULT_MAX_ITER)),
        )
    rds_rows = [(delta, capacity_rds(delta)) for delta in args.rds or []]

    if args.format == "json":
        text = json.dumps({
            "capacity": [{"ell": r.ell, "delta": r.delta, "capacity": round(r.capacity, 3)} for r in rows],
            "rds": [{"delta": d, "capacity": round(c, 3)} for d, c in rds_rows],
        }, indent=2) + "\n"
    else:
        buffer = io.StringIO()
        out = csv.writer(buffer, lineterminator="\n")
        out.writerow(["kind", "ell", "delta", "capacity"])
        out.writerows(["lb", r.ell, r.delta, f"{r.capacity:.3f}"] for r in rows)
        out.writerows(["rds", "", d, f"{c:.3f}"] for d, c in rds_rows)
        text = buffer.getvalue()
    _emit(text, args.output)
    log_result(report, "capacity", rows=len(rows), rds_rows=len(rds_rows))
    return EXIT_OK


def cmd_search(args, config: Config, report: logging.Logger) -> int:
    p = ConstraintParams(args.ell, args.delta)
    m_min = args.m_min if args.m_min is not None else p.ell - 1
    m_max = args.m_max if args.m_max is not None else m_min + config.search_settings.get("m_span", 10)
    result = graph_codec.search_best_block(p, m_min, m_max)
    sys.stdout.write(f"m={result.m} s={result.s} rate={result.s}/{result.m}={float(result.rate):.3f}\n")
    if args.codebook:
        graph_codec.save_codebook(result.codebook, args.codebook)
    log_result(report, "search", params=str(p), m=result.m, s=result.s, rate=float(result.rate))
    return EXIT_OK


def cmd_verify(args, config: Config, report: logging.Logger) -> int:
    settings = config.enumeration_settings
    n_max = args.n_max if args.n_max is not None else settings.get("n_max", 28)
    n_min = args.n_min if args.n_min is not None else settings.get("first_n", FIRST_N)
    if args.method == "bruteforce":
        counter = ExhaustiveCounter(SIX_ONE, cap=settings.get("bruteforce_cap", BRUTEFORCE_CAP))
    else:
        counter = make_counter(SIX_ONE, "dp")
    outcome = verify_recurrence(n_max, n_min, perturb=args.inject_fault, counter=counter)
    outcome = outcome.merge(verify_lemmas(n_max, n_min, counter=counter))
    _emit(json.dumps(outcome.to_json(), indent=2) + "\n", args.output)

    failures = outcome.failures()
    for check in failures:
        logger.error(f"{check.identity} fails at n={check.n}: {check.lhs} != {check.rhs}")
    log_result(report, "verify", n_max=n_max, checks=len(outcome.checks), failures=len(failures))
    return EXIT_OK if outcome.passed else EXIT_VERIFY


def cmd_count(args, config: Config, report: logging.Logger) -> int:
    p = ConstraintParams(args.ell, args.delta)
    counter = make_counter(p, args.method)
    if args.prefix:
        prefix = Word(args.prefix)
        values = [counter.with_prefix(n, prefix) for n in range(args.n_max + 1)]
    else:
        values = counter.sequence(args.n_max)

    if args.format == "json":
        text = json.dumps([{"n": n, "count": v} for n, v in enumerate(values)], indent=2) + "\n"
    else:
        text = "n,count\n" + "".join(f"{n},{v}\n" for n, v in enumerate(values))
    _emit(text, args.output)
    log_result(report, "count", params=str(p), n_max=args.n_max, prefix=args.prefix or "-")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lbcode", description="Locally balanced constrained codes")
    parser.add_argument("--config", help="settings YAML (default: config/settings.yaml)")
    parser.add_argument("--log-level", help="technical log level")
    parser.add_argument("--log-dir", help="directory for lbcode.log and report.log")
    sub = parser.add_subparsers(dest="command", required=True)

    encode = sub.add_parser("encode", help="encode a file into an LBC1 container")
    encode.add_argument("--scheme", choices=sorted(SCHEME_IDS), required=True)
    encode.add_argument("--s", type=int, help="message bits per block for the dyck scheme")
    encode.add_argument("--codebook", help="LBG1 codebook for the graph scheme")
    encode.add_argument("--fsm-table", help="JSON transition table for the fsm scheme")
    encode.add_argument("input")
    encode.add_argument("output")
    encode.set_defaults(handler=cmd_encode)

    decode = sub.add_parser("decode", help="decode an LBC1 container")
    decode.add_argument("--codebook", help="LBG1 codebook for the graph scheme")
    decode.add_argument("--fsm-table", help="JSON transition table for the fsm scheme")
    decode.add_argument("input")
    decode.add_argument("output")
    decode.set_defaults(handler=cmd_decode)

    capacity = sub.add_parser("capacity", help="capacity table")
    capacity.add_argument("--ell-min", type=int)
    capacity.add_argument("--ell-max", type=int)
    capacity.add_argument("--ell-step", type=int)
    capacity.add_argument("--delta", type=int, action="append")
    capacity.add_argument("--rds", type=int, action="append", help="delta of a bounded-RDS capacity")
    capacity.add_argument("--format", choices=["csv", "json"], default="csv")
    capacity.add_argument("--output")
    capacity.set_defaults(handler=cmd_capacity)

    search = sub.add_parser("search", help="best graph block code over a range of m")
    search.add_argument("--ell", type=int, required=True)
    search.add_argument("--delta", type=int, required=True)
    search.add_argument("--m-min", type=int)
    search.add_argument("--m-max", type=int)
    search.add_argument("--codebook", help="write the winning codebook here")
    search.set_defaults(handler=cmd_search)

    verify = sub.add_parser("verify", help="check the (6,1) recurrence and identities")
    verify.add_argument("--n-max", type=int)
    verify.add_argument("--n-min", type=int)
    verify.add_argument("--inject-fault", type=int, metavar="N", help="add 1 to f_{N+12}")
    verify.add_argument("--method", choices=["dp", "bruteforce"], default="dp")
    verify.add_argument("--output")
    verify.set_defaults(handler=cmd_verify)

    count = sub.add_parser("count", help="number of locally balanced words")
    count.add_argument("--ell", type=int, required=True)
    count.add_argument("--delta", type=int, required=True)
    count.add_argument("--n-max", type=int, required=True)
    count.add_argument("--prefix")
    count.add_argument("--method", choices=["dp", "bruteforce"], default="dp")
    count.add_argument("--format", choices=["csv", "json"], default="csv")
    count.add_argument("--output")
    count.set_defaults(handler=cmd_count)
    return parser


def exit_code_for(error: BaseException) -> int:
    for kind, code in EXIT_CODES:
        if isinstance(error, kind):
            return code
    raise error


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    config = Config(args.config)
    log_settings = config.logging_settings
    setup_logging(args.log_dir or log_settings["directory"], (args.log_level or log_settings["level"]).upper())
    report = logging.getLogger(REPORT_LOGGER)

    try:
        return args.handler(args, config, report)
    except (LBCodeError, OSError) as e:
        code = exit_code_for(e)
        logger.error(f"{args.command} failed: {e}")
        report.error(f"{args.command} failed: {e}")
        return code


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
