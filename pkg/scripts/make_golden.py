"""Regenerate the golden CSV files used by the test suite.

These are exact (deterministic) computations; rerunning must reproduce the
files byte for byte. Usage: ``python3 scripts/make_golden.py [--out DIR]``.
"""

import argparse
from pathlib import Path

from polarmem.geometry import level_nearest, typical_frequencies
from polarmem.lab import cutoff_sequence, exponent_experiment
from polarmem.sim import (
    COMPLEXITY_HEADER,
    EXPONENT_HEADER,
    TRACE_HEADER,
    complexity_figure,
    exponent_figure,
    write_csv,
)

EXPONENT_LADDERS = {1: range(10, 23, 2), 2: range(12, 29, 4)}
EXPONENT_EXPERIMENT_HEADER = ("m", "n", "beta", "probability")


def exponent_rows():
    for m, ladder in EXPONENT_LADDERS.items():
        p_plus = typical_frequencies(m)[0]
        for n in ladder:
            for beta in (p_plus - 0.05, p_plus + 0.05):
                yield m, n, beta, exponent_experiment(n, m, 0.5, beta)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "tests" / "golden")
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)

    for m in (1, 2):
        n_max = level_nearest(10**6, m) if m == 2 else 20
        trace = cutoff_sequence(n_max, m, 0.5, 1e-3)
        write_csv(args.out / f"trace_m{m}_eps0.5.csv", TRACE_HEADER, trace.rows())
    write_csv(args.out / "exponent_experiment.csv", EXPONENT_EXPERIMENT_HEADER, exponent_rows())
    write_csv(args.out / "fig6_exponent.csv", EXPONENT_HEADER, exponent_figure(range(1, 51)))
    write_csv(args.out / "fig7_complexity.csv", COMPLEXITY_HEADER, complexity_figure(range(1, 21), (10**4, 10**6)))
    print(f"golden files written to {args.out}")


if __name__ == "__main__":
    main()
