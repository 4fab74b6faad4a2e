"""Write the figure tables and polarization traces as CSV, then print a short summary.

Usage: ``python3 scripts/reproduce_figures.py [--out DIR] [--m-max M]``.
"""

import argparse
from pathlib import Path

from polarmem.lab import cutoff_sequence
from polarmem.sim import (
    COMPLEXITY_HEADER,
    EXPONENT_HEADER,
    TRACE_HEADER,
    complexity_figure,
    exponent_figure,
    write_csv,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("figures"))
    ap.add_argument("--m-max", type=int, default=50)
    ap.add_argument("--n-trace", type=int, default=24)
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)

    exp_rows = exponent_figure(range(1, args.m_max + 1))
    write_csv(args.out / "exponent.csv", EXPONENT_HEADER, exp_rows)
    cx_rows = complexity_figure(range(1, min(args.m_max, 20) + 1), (10**4, 10**6))
    write_csv(args.out / "complexity.csv", COMPLEXITY_HEADER, cx_rows)
    for m in (1, 2, 3):
        trace = cutoff_sequence(args.n_trace, m, 0.5)
        write_csv(args.out / f"trace_m{m}.csv", TRACE_HEADER, trace.rows())
        print(f"m={m}: E[J] {trace.mean_cutoff[0]:.4f} -> {trace.mean_cutoff[-1]:.4f}, "
              f"polarized {trace.high[-1]:.3f} / {trace.low[-1]:.3f} at n={args.n_trace}")

    print(f"p_plus: m=1 {exp_rows[0][1]:.4f}, m={exp_rows[-1][0]} {exp_rows[-1][1]:.4f}")
    for m, n, N, eta_enc, eta_dec in cx_rows:
        if m in (1, 2, 12):
            print(f"m={m:2d} N={N:8d}: eta_enc {eta_enc:.4f}, eta_dec {eta_dec:.4f}")
    print(f"tables written to {args.out}")


if __name__ == "__main__":
    main()
