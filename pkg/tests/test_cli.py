import io
import json
import subprocess
import sys

import numpy as np
import pytest

from polarmem.cli import bits_to_hex, hex_to_bits, run
from polarmem.sim import TRACE_HEADER, TrialReport, load_spec, parse_csv


def _run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_memory_one(capsys):
    code, out, _ = _run(["analyze", "--m", "1", "--n-max", "3"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["phi"] == 2 and doc["p_plus"] == 0.5
    assert doc["lengths"] == [1, 2, 4, 8]
    assert doc["dec_complexity"][3] == 24 and doc["enc_complexity"][3] == 12


def test_analyze_memory_two(capsys):
    _, out, _ = _run(["analyze", "--m", "2", "--n-max", "6"], capsys)
    doc = json.loads(out)
    assert doc["phi"] == 1.61803398875
    assert doc["lengths"] == [1, 2, 3, 5, 8, 13, 21]


def test_figures_exponent_first_row(capsys):
    code, out, _ = _run(["figures", "--which", "exponent"], capsys)
    header, rows = parse_csv(out)
    assert code == 0 and header == ["m", "p_plus"]
    assert rows[0] == ["1", "0.5"] and len(rows) == 20


def test_figures_complexity(capsys, tmp_path):
    path = tmp_path / "c.csv"
    assert run(["figures", "--which", "complexity", "--m-max", "12", "--targets", "10000", "-o", str(path)]) == 0
    header, rows = parse_csv(path.read_text())
    assert header == ["m", "n", "N", "eta_enc", "eta_dec"]
    assert rows[0][2:] == ["8192", "0.5", "1"]
    assert 0.4 <= float(rows[11][4]) <= 0.6


def test_encode_decode_round_trip(capsys, monkeypatch, tmp_path):
    spec_path = tmp_path / "spec.json"
    assert run(["construct", "--m", "2", "--n", "8", "--eps", "0.3", "--rate", "0.5", "-o", str(spec_path)]) == 0
    spec = load_spec(spec_path)
    rng = np.random.default_rng(0)
    msgs = [rng.integers(0, 2, spec.K) for _ in range(5)]
    for fmt, frame in (("hex", bits_to_hex), ("bin", lambda b: "".join(map(str, b)))):
        text = "\n".join(frame(m) for m in msgs) + "\n"
        code, coded, _ = _run(["encode", "--spec", str(spec_path), "--format", fmt], capsys, text, monkeypatch)
        assert code == 0
        code, decoded, _ = _run(["decode", "--spec", str(spec_path), "--format", fmt], capsys, coded, monkeypatch)
        assert code == 0 and decoded == text


def test_decode_with_erasures(capsys, monkeypatch, tmp_path):
    spec_path = tmp_path / "spec.json"
    run(["construct", "--m", "1", "--n", "4", "--eps", "0.3", "--rate", "0.25", "-o", str(spec_path)])
    spec = load_spec(spec_path)
    msg = "1" * spec.K
    _, coded, _ = _run(["encode", "--spec", str(spec_path), "--format", "bin"], capsys, msg + "\n", monkeypatch)
    noisy = "?" + coded.strip()[1:]
    _, decoded, _ = _run(["decode", "--spec", str(spec_path), "--format", "bin"], capsys, noisy + "\n", monkeypatch)
    assert decoded.strip() == msg


def test_pipe_through_subprocesses(tmp_path):
    spec_path = tmp_path / "spec.json"
    cmd = [sys.executable, "-m", "polarmem"]
    subprocess.run(cmd + ["construct", "--m", "3", "--n", "9", "--eps", "0.4", "--rate", "0.4", "-o", str(spec_path)], check=True)
    k = load_spec(spec_path).K
    frames = "".join(bits_to_hex(np.random.default_rng(s).integers(0, 2, k)) + "\n" for s in range(4))
    coded = subprocess.run(cmd + ["encode", "--spec", str(spec_path)], input=frames, capture_output=True, text=True, check=True)
    back = subprocess.run(cmd + ["decode", "--spec", str(spec_path)], input=coded.stdout, capture_output=True, text=True, check=True)
    assert back.stdout == frames


def test_hex_helpers():
    assert bits_to_hex([1, 0, 1]) == "a"
    assert hex_to_bits("a", 3).tolist() == [1, 0, 1]
    with pytest.raises(ValueError):
        hex_to_bits("b", 3)  # nonzero padding
    with pytest.raises(ValueError):
        hex_to_bits("aa", 3)
    with pytest.raises(ValueError):
        hex_to_bits("g", 3)


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["analyze", "--m", "0", "--n-max", "3"],
        ["analyze", "--m", "1"],
        ["analyze", "--m", "1", "--n-max", "3", "--bogus"],
        ["figures", "--which", "nothing"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    code, _, err = _run(argv, capsys)
    assert code == 2
    assert "usage" in err


def test_runtime_errors_exit_one(capsys, monkeypatch, tmp_path):
    assert _run(["construct", "--m", "2", "--n", "5", "--eps", "1.5", "--rate", "0.5"], capsys)[0] == 1
    assert _run(["simulate", "--spec", str(tmp_path / "missing.json"), "--channel", "bec:0.3", "--trials", "10", "--seed", "1"], capsys)[0] == 1
    spec_path = tmp_path / "spec.json"
    run(["construct", "--m", "1", "--n", "3", "--eps", "0.3", "--rate", "0.5", "-o", str(spec_path)])
    assert _run(["decode", "--spec", str(spec_path)], capsys, "zz\n", monkeypatch)[0] == 1
    assert _run(["simulate", "--spec", str(spec_path), "--channel", "awgn:1", "--trials", "10", "--seed", "1"], capsys)[0] == 1


def test_simulate_bytes_fixed_by_seed(capsys, tmp_path):
    spec_path = tmp_path / "spec.json"
    run(["construct", "--m", "2", "--n", "10", "--eps", "0.3", "--rate", "0.5", "-o", str(spec_path)])
    argv = ["simulate", "--spec", str(spec_path), "--channel", "bec:0.35", "--trials", "2000"]
    outs = []
    for seed in ("4", "4", "5"):
        path = tmp_path / f"sim{len(outs)}.csv"
        assert run(argv + ["--seed", seed, "-o", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] != outs[2]
    header, rows = parse_csv(outs[0].decode())
    assert tuple(header) == TrialReport.CSV_FIELDS and len(rows) == 1


def test_polarize_csv_round_trip(capsys):
    code, out, _ = _run(["polarize", "--m", "2", "--n", "12", "--eps", "0.5"], capsys)
    header, rows = parse_csv(out)
    assert code == 0 and tuple(header) == TRACE_HEADER and len(rows) == 13
    assert all(0.0 <= float(v) <= 1.0 for r in rows for v in r[1:])
    assert float(rows[0][2]) == 0.5
