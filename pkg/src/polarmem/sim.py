"""Noise models, block-error simulation, figure tables and file formats.

CSV output always has a header row and prints floats with 12 significant
digits so that files are byte-stable for a fixed seed.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import binomtest

from .construction import bec_reliabilities, select_info_set
from .decoder import decode, decode_bec
from .dmc import DiscreteChannel, ErasureChannel, transmit
from .encoder import CodeSpec, encode_message
from .geometry import code_length, complexity_ratio, level_nearest, typical_frequencies
from .rng import DEFAULT_PARTITIONS, RNG_ALGORITHM, chunks, run_partitioned

NOISE_KINDS = ("BEC", "BSC")


@dataclass(frozen=True)
class NoiseModel:
    kind: str
    param: float

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in NOISE_KINDS:
            raise ValueError(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if not 0.0 <= self.param <= 1.0:
            raise ValueError(f"noise parameter must lie in [0, 1], got {self.param}")
        object.__setattr__(self, "kind", kind)

    @classmethod
    def parse(cls, text: str) -> "NoiseModel":
        """``"bec:0.3"`` or ``"bsc:0.1"``."""
        kind, sep, value = text.partition(":")
        if not sep:
            raise ValueError(f"expected KIND:PARAM, got {text!r}")
        return cls(kind, float(value))

    def to_channel(self):
        if self.kind == "BEC":
            return ErasureChannel(self.param)
        return DiscreteChannel.bsc(self.param)

    def __str__(self):
        return f"{self.kind.lower()}:{self.param:.12g}"


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


@dataclass(frozen=True)
class TrialReport:
    trials: int
    block_errors: int
    bler: float
    wilson_low: float
    wilson_high: float
    seed: int
    partitions: int
    rng: str = RNG_ALGORITHM
    elapsed: float = field(default=0.0, compare=False)

    CSV_FIELDS = ("trials", "block_errors", "bler", "wilson_low", "wilson_high", "seed", "partitions", "rng")

    def row(self) -> tuple:
        return tuple(getattr(self, f) for f in self.CSV_FIELDS)


def simulate_bler(
    spec: CodeSpec,
    noise: NoiseModel,
    trials: int,
    seed: int,
    partitions: int = DEFAULT_PARTITIONS,
    workers: int | None = None,
) -> TrialReport:
    """Encode random messages, pass them through ``noise`` and decode.

    A block error is any mismatch on the information set. Results depend
    only on ``(seed, partitions)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    w = noise.to_channel()
    info = spec.info_mask()
    llr_table = DiscreteChannel.bsc(noise.param).llr_table() if noise.kind == "BSC" else None

    def task(rng, share):
        errors = 0
        for size in chunks(share):
            msg = rng.integers(0, 2, size=(size, spec.K), dtype=np.uint8)
            y = transmit(w, encode_message(msg, spec), rng)
            if noise.kind == "BEC":
                u_hat = decode_bec(y, spec).u_hat
            else:
                u_hat = decode(llr_table[y], spec).u_hat
            errors += int(np.any(u_hat[:, info] != msg, axis=1).sum())
        return errors

    start = time.perf_counter()
    errors = sum(run_partitioned(task, trials, seed, partitions, workers))
    low, high = wilson_interval(errors, trials)
    return TrialReport(trials, errors, errors / trials, low, high, seed, partitions, elapsed=time.perf_counter() - start)


def random_info_spec(spec: CodeSpec, seed: int) -> CodeSpec:
    """Same length and dimension with a uniformly random information set."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    info = rng.choice(spec.N, size=spec.K, replace=False) + 1
    return CodeSpec(spec.m, spec.n, tuple(int(i) for i in info))


def construct_bec_spec(m: int, n: int, eps: float, rate: float) -> CodeSpec:
    """Erasure-channel design with ``K = round(rate * N)`` and zero frozen bits."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError("rate must lie in [0, 1]")
    N = code_length(n, m)
    K = int(round(rate * N))
    info = select_info_set(bec_reliabilities(n, m, eps), K)
    return CodeSpec(m, n, info, design_channel={"kind": "BEC", "eps": float(eps)})


def complexity_figure(m_range, targets) -> list[tuple[int, int, int, float, float]]:
    """Rows ``(m, n, N, eta_enc, eta_dec)`` at the level nearest each target length."""
    rows = []
    for target in targets:
        for m in m_range:
            n = level_nearest(int(target), m)
            rows.append((m, n, code_length(n, m), complexity_ratio(n, m, "enc"), complexity_ratio(n, m, "dec")))
    return rows


def exponent_figure(m_range) -> list[tuple[int, float]]:
    """Rows ``(m, p_plus)``; ``p_plus`` bounds the achievable exponent."""
    ms = list(m_range)
    if any(not 1 <= m <= 200 for m in ms):
        raise ValueError("memory orders must lie in 1..200")
    return [(m, typical_frequencies(m)[0]) for m in ms]


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    text = csv_text(header, rows)
    if path is None or str(path) == "-":
        return text
    Path(path).write_text(text, encoding="utf-8")
    return text


def parse_csv(text: str) -> tuple[list[str], list[list[str]]]:
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    return parse_csv(Path(path).read_text(encoding="utf-8"))


COMPLEXITY_HEADER = ("m", "n", "N", "eta_enc", "eta_dec")
EXPONENT_HEADER = ("m", "p_plus")
TRACE_HEADER = ("n", "mean_cutoff", "mean_capacity", "high_fraction", "low_fraction")
RELIABILITY_HEADER = ("index", "z")


def spec_to_json(spec: CodeSpec) -> str:
    channel = spec.design_channel or {"kind": "BEC", "eps": None}
    doc = {
        "m": spec.m,
        "n": spec.n,
        "channel": channel,
        "K": spec.K,
        "info_set": list(spec.info_set),
        "frozen": [{"index": i, "value": v} for i, v in spec.frozen_values],
    }
    return json.dumps(doc, indent=2)


def spec_from_json(text: str) -> CodeSpec:
    doc = json.loads(text)
    try:
        spec = CodeSpec(
            int(doc["m"]),
            int(doc["n"]),
            tuple(int(i) for i in doc["info_set"]),
            tuple((int(f["index"]), int(f["value"])) for f in doc.get("frozen", [])),
            design_channel=doc.get("channel"),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed code spec: {exc}") from exc
    if "K" in doc and int(doc["K"]) != spec.K:
        raise ValueError(f"K = {doc['K']} does not match the information set size {spec.K}")
    return spec


def save_spec(spec: CodeSpec, path):
    Path(path).write_text(spec_to_json(spec) + "\n", encoding="utf-8")


def load_spec(path) -> CodeSpec:
    return spec_from_json(Path(path).read_text(encoding="utf-8"))
