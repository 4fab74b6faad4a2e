"""Command-line front end.

Exit codes: 0 success, 2 usage error, 1 runtime error. Codec frames on
stdin/stdout are newline-delimited; ``hex`` packs bits most-significant
first into ``ceil(bits/4)`` digits with zero padding at the end, ``bin``
writes one ``0``/``1`` character per bit and accepts ``?`` for an erasure
on decode input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import geometry as geo
from .decoder import ERASURE, decode_bec
from .encoder import encode_message
from .geometry import BudgetError
from .lab import cutoff_sequence
from .rng import DEFAULT_PARTITIONS
from .sim import (
    COMPLEXITY_HEADER,
    EXPONENT_HEADER,
    TRACE_HEADER,
    NoiseModel,
    TrialReport,
    complexity_figure,
    construct_bec_spec,
    exponent_figure,
    load_spec,
    simulate_bler,
    spec_to_json,
    write_csv,
)


class UsageError(Exception):
    pass


def _r12(x: float) -> float:
    return float(f"{x:.12g}")


def bits_to_hex(bits) -> str:
    bits = [int(b) for b in bits]
    bits += [0] * (-len(bits) % 4)
    return "".join(f"{int(''.join(map(str, bits[k:k + 4])), 2):x}" for k in range(0, len(bits), 4))


def hex_to_bits(text: str, count: int) -> np.ndarray:
    digits = (count + 3) // 4
    if len(text) != digits:
        raise ValueError(f"expected {digits} hex digits for {count} bits, got {len(text)}")
    try:
        value = int(text, 16) if text else 0
    except ValueError as exc:
        raise ValueError(f"bad hex frame {text!r}") from exc
    bits = [(value >> (4 * digits - 1 - k)) & 1 for k in range(4 * digits)]
    if any(bits[count:]):
        raise ValueError("padding bits must be zero")
    return np.array(bits[:count], dtype=np.uint8)


def _parse_frame(line: str, count: int, fmt: str, erasures: bool) -> np.ndarray:
    if fmt == "hex":
        return hex_to_bits(line.lower(), count)
    allowed = "01?" if erasures else "01"
    if len(line) != count or any(c not in allowed for c in line):
        raise ValueError(f"expected {count} characters from {allowed!r}, got {line!r}")
    return np.array([ERASURE if c == "?" else int(c) for c in line], dtype=np.uint8)


def _format_frame(bits, fmt: str) -> str:
    return bits_to_hex(bits) if fmt == "hex" else "".join(str(int(b)) for b in bits)


def _frames(stream):
    for line in stream:
        line = line.strip()
        if line:
            yield line


def _emit(text: str, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_analyze(args):
    m, n_max = args.m, args.n_max
    report = geo.geometry_report(m, n_max)
    doc = {
        "m": m,
        "phi": _r12(report.phi),
        "p_plus": _r12(report.p_plus),
        "p_minus": _r12(report.p_minus),
        "p_star": _r12(report.p_star),
        "exponent": _r12(geo.achievable_exponent(m)),
        "lengths": list(report.lengths),
        "enc_complexity": [geo.encoding_complexity(n, m) for n in range(n_max + 1)],
        "dec_complexity": [geo.decoding_complexity(n, m) for n in range(n_max + 1)],
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.output)


def cmd_construct(args):
    spec = construct_bec_spec(args.m, args.n, args.eps, args.rate)
    _emit(spec_to_json(spec) + "\n", args.output)


def cmd_encode(args):
    spec = load_spec(args.spec)
    for line in _frames(sys.stdin):
        msg = _parse_frame(line, spec.K, args.format, erasures=False)
        print(_format_frame(encode_message(msg, spec), args.format))


def cmd_decode(args):
    spec = load_spec(args.spec)
    info = spec.info_mask()
    for line in _frames(sys.stdin):
        y = _parse_frame(line, spec.N, args.format, erasures=True)
        print(_format_frame(decode_bec(y, spec).u_hat[info], args.format))


def cmd_simulate(args):
    spec = load_spec(args.spec)
    report = simulate_bler(spec, NoiseModel.parse(args.channel), args.trials, args.seed, args.partitions)
    text = write_csv(None, TrialReport.CSV_FIELDS, [report.row()])
    _emit(text, args.output)


def cmd_polarize(args):
    trace = cutoff_sequence(args.n, args.m, args.eps, args.delta)
    _emit(write_csv(None, TRACE_HEADER, trace.rows()), args.output)


def cmd_figures(args):
    ms = range(1, args.m_max + 1)
    if args.which == "complexity":
        text = write_csv(None, COMPLEXITY_HEADER, complexity_figure(ms, args.targets))
    else:
        text = write_csv(None, EXPONENT_HEADER, exponent_figure(ms))
    _emit(text, args.output)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        raise UsageError(message)


def _nonnegative(kind):
    def check(text):
        value = kind(text)
        if value < 0:
            raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
        return value

    return check


def _memory(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"memory order must be >= 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polarmem", description="Polar codes with higher-order memory.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="geometry report as JSON")
    p.add_argument("--m", type=_memory, required=True)
    p.add_argument("--n-max", type=_nonnegative(int), required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("construct", help="design a code for an erasure channel")
    p.add_argument("--m", type=_memory, required=True)
    p.add_argument("--n", type=_nonnegative(int), required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    for name, func in (("encode", cmd_encode), ("decode", cmd_decode)):
        p = sub.add_parser(name, help=f"{name} newline-delimited frames from stdin")
        p.add_argument("--spec", required=True)
        p.add_argument("--format", choices=("hex", "bin"), default="hex")
        p.set_defaults(func=func)

    p = sub.add_parser("simulate", help="block-error simulation, CSV output")
    p.add_argument("--spec", required=True)
    p.add_argument("--channel", required=True, help="bec:EPS or bsc:P")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--partitions", type=int, default=DEFAULT_PARTITIONS)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("polarize", help="erasure-ensemble traces, CSV output")
    p.add_argument("--m", type=_memory, required=True)
    p.add_argument("--n", type=_nonnegative(int), required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_polarize)

    p = sub.add_parser("figures", help="figure tables, CSV output")
    p.add_argument("--which", choices=("complexity", "exponent"), required=True)
    p.add_argument("--m-max", type=_memory, default=20)
    p.add_argument("--targets", type=int, nargs="+", default=[10**4, 10**6])
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_figures)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"polarmem: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 2
    try:
        args.func(args)
    except (ValueError, BudgetError, OverflowError, OSError, KeyError) as exc:
        print(f"polarmem: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())
