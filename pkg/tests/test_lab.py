import csv
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chi2_contingency

from polarmem.construction import bec_reliabilities
from polarmem.geometry import BudgetError, code_length, dominant_root, level_nearest, typical_frequencies
from polarmem.lab import (
    BoundViolation,
    cutoff_sequence,
    decimated_cutoff,
    evolve_ensemble,
    evolve_path_log2,
    exponent_experiment,
    extremal_path,
    polarized_fractions,
    sample_state_paths,
    step_weights,
    zhat_evolution,
    zhat_max_zeta,
    zhat_worst_case,
)
from polarmem.states import MINUS, PLUS, STAR, state_index

GOLDEN = Path(__file__).parent / "golden"


def _golden(name):
    with open(GOLDEN / name, newline="") as fh:
        return list(csv.DictReader(fh))


def test_ensemble_single_transform():
    for m in (1, 2, 4):
        ens = evolve_ensemble(1, m, 0.3)
        assert ens.z.tolist() == pytest.approx([0.09, 0.51], abs=1e-15)
        assert ens.state_vector(1) == (PLUS,) and ens.state_vector(2) == (MINUS,)


def test_ensemble_trivial_channels():
    ens = evolve_ensemble(12, 2, 0.0)
    assert np.all(ens.z == 0.0)
    assert polarized_fractions(ens, 1e-3) == (1.0, 0.0)
    assert polarized_fractions(evolve_ensemble(12, 2, 1.0), 1e-3) == (0.0, 1.0)
    with pytest.raises(ValueError):
        polarized_fractions(ens, 0.5)


def test_ensemble_budget():
    with pytest.raises(BudgetError):
        evolve_ensemble(30, 1, 0.5, budget=1 << 20)


@pytest.mark.parametrize("n,m", [(7, 1), (9, 2), (11, 3)])
def test_ensemble_matches_construction(n, m):
    ens = evolve_ensemble(n, m, 0.37)
    assert ens.size == code_length(n, m)
    assert ens.probabilities.sum() == pytest.approx(1.0)
    assert np.array_equal(ens.z, bec_reliabilities(n, m, 0.37))
    for i in (1, ens.size // 2, ens.size):
        assert state_index(ens.state_vector(i), m) == i


@given(st.integers(1, 3), st.integers(1, 16), st.floats(0.0, 1.0))
def test_ensemble_capacity_identity(m, n, eps):
    mu = step_weights(n, m)
    now = evolve_ensemble(n, m, eps).mean_capacity()
    up = evolve_ensemble(n - 1, m, eps).mean_capacity()
    back = evolve_ensemble(max(n - m, 0), m, eps).mean_capacity()
    assert now == pytest.approx(mu * up + (1 - mu) * back, abs=1e-12)


def test_cutoff_first_step_gain():
    trace = cutoff_sequence(3, 1, 0.5)
    assert trace.mean_cutoff[1] > trace.mean_cutoff[0]
    assert trace.mean_cutoff[0] == pytest.approx(math.log2(2 / 1.5))


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("eps", [0.1, 0.5, 0.9])
def test_decimated_cutoff_nondecreasing(m, eps):
    n_max = 24 if m > 1 else 20
    trace = cutoff_sequence(n_max, m, eps)
    dec = decimated_cutoff(trace)
    assert len(dec) == n_max // m
    assert all(b >= a - 1e-13 for a, b in zip(dec, dec[1:]))
    seq = trace.mean_cutoff
    for n in range(1, n_max + 1):
        mu = step_weights(n, m)
        assert seq[n] >= mu * seq[n - 1] + (1 - mu) * seq[max(n - m, 0)] - 1e-13
    for row in trace.rows():
        assert all(0.0 <= v <= 1.0 for v in row[1:])


def test_trace_matches_golden():
    for m in (1, 2):
        rows = _golden(f"trace_m{m}_eps0.5.csv")
        trace = cutoff_sequence(len(rows) - 1, m, 0.5)
        for row, got in zip(rows, trace.rows()):
            assert int(row["n"]) == got[0]
            for key, v in zip(("mean_cutoff", "mean_capacity", "high_fraction", "low_fraction"), got[1:]):
                assert v == pytest.approx(float(row[key]), rel=1e-11, abs=1e-12)


def test_polarized_sum_increases_along_ladder():
    trace = cutoff_sequence(24, 2, 0.5)
    total = [h + lo for h, lo in zip(trace.high, trace.low)]
    ladder = [total[n] for n in (8, 12, 16, 20, 24)]
    assert all(b > a for a, b in zip(ladder, ladder[1:]))


def test_fractions_near_1e5():
    # stated window at N close to 1e5; exact values are 0.388 and 0.404
    n = level_nearest(10**5, 2)
    high, low = polarized_fractions(evolve_ensemble(n, 2, 0.5), 1e-3)
    assert 0.43 <= high <= 0.50
    assert 0.43 <= low <= 0.50


def test_exponent_monotone_in_beta():
    probs = [exponent_experiment(14, 2, 0.4, b) for b in np.linspace(0.05, 0.95, 19)]
    assert all(b <= a for a, b in zip(probs, probs[1:]))
    high, _ = polarized_fractions(evolve_ensemble(14, 2, 0.4), 1e-3)
    assert exponent_experiment(14, 2, 0.4, 1e-6) >= high
    with pytest.raises(ValueError):
        exponent_experiment(14, 2, 0.4, 1.0)


def test_exponent_matches_golden():
    for row in _golden("exponent_experiment.csv"):
        got = exponent_experiment(int(row["n"]), int(row["m"]), 0.5, float(row["beta"]))
        assert got == pytest.approx(float(row["probability"]), rel=1e-11)


def test_exponent_example_memory_one():
    # exact value is 0.2632
    assert exponent_experiment(20, 1, 0.5, 0.45) >= 0.40


def test_exponent_log_domain_agrees_with_linear():
    # thresholds small enough that linear z is still representable
    ens = evolve_ensemble(12, 1, 0.5)
    thr = 2.0 ** -(2.0 ** (12 * 0.3))
    assert exponent_experiment(12, 1, 0.5, 0.3) == pytest.approx(np.mean(ens.z <= thr))


def test_extremal_path_shape():
    p = extremal_path(40, 2, 0.5)
    assert p[:4] == (MINUS, STAR, MINUS, STAR)
    assert p.count(MINUS) == 10 and p[20:] == (PLUS,) * 20
    odd = extremal_path(7, 3, 0.5)
    assert odd == (MINUS, STAR, STAR, PLUS, PLUS, PLUS, PLUS)


def test_zhat_zero_start():
    res = zhat_worst_case(0, 40, 2, 0.5, 0.0, 0.05)
    assert res.zhat_log == -math.inf and res.holds


def test_zhat_preconditions():
    with pytest.raises(ValueError):
        zhat_worst_case(0, 40, 2, 0.5, 0.1, 0.05)  # zeta above 1 - phi^(-slack/2)
    with pytest.raises(ValueError):
        zhat_worst_case(5, 5, 2, 0.5, 0.0, 0.05)
    with pytest.raises(ValueError):
        zhat_worst_case(0, 10, 2, 1.5, 0.0, 0.05)
    assert zhat_max_zeta(2, 0.05) == pytest.approx(1 - dominant_root(2) ** -0.025)


def test_zhat_stated_example():
    # m=2, 40 levels, gamma 0.5, zeta 0.1, slack 0.05
    assert zhat_evolution(40, 2, 0.5, 0.1, 0.05).holds


def test_zhat_all_plus_memory_one():
    for zeta in (0.3, 0.01):
        res = zhat_evolution(20, 1, 1.0, zeta, 0.05)
        assert res.zhat_log == pytest.approx(2.0**20 * math.log2(zeta), rel=1e-14)


@pytest.mark.parametrize("m", [2, 3])
def test_zhat_all_plus_follows_length_recursion(m):
    zeta = 0.2
    res = zhat_evolution(40, m, 1.0, zeta, 0.05)
    assert res.zhat_log == pytest.approx(code_length(40, m) * math.log2(zeta), rel=1e-13)


def test_zhat_violation_raises():
    with pytest.raises(BoundViolation):
        zhat_worst_case(0, 40, 1, 0.2, zhat_max_zeta(1, 0.05), 0.05)


def test_evolve_path_matches_ensemble():
    m, n, eps = 2, 10, 0.4
    ens = evolve_ensemble(n, m, eps)
    for i in (1, 7, 40, ens.size):
        got = evolve_path_log2(ens.state_vector(i), m, math.log2(eps))
        assert got == pytest.approx(ens.log2z[i - 1], abs=1e-9)


def test_samples_empty_and_seeded():
    assert len(sample_state_paths(2, 50, 0, seed=1)) == 0
    a = sample_state_paths(2, 60, 200, seed=1)
    b = sample_state_paths(2, 60, 200, seed=2)
    c = sample_state_paths(2, 60, 200, seed=1)
    assert not np.array_equal(a.codes, b.codes)
    assert np.array_equal(a.codes, c.codes)


def test_samples_are_valid_and_carry_z():
    m, n = 2, 14
    s = sample_state_paths(m, n, 500, seed=9, eps=0.45)
    z = evolve_ensemble(n, m, 0.45).log2z
    for r in range(len(s)):
        i = state_index(s.path(r), m)
        assert s.log2z[r] == pytest.approx(z[i - 1], abs=1e-9)


def test_samples_are_uniform():
    m, n = 2, 6  # 21 branches
    s = sample_state_paths(m, n, 42_000, seed=4)
    idx = np.array([state_index(s.path(r), m) for r in range(len(s))])
    counts = np.bincount(idx, minlength=22)[1:]
    expected = len(s) / 21
    chi = ((counts - expected) ** 2 / expected).sum()
    assert chi < 45.3  # 0.999 quantile with 20 degrees of freedom


@pytest.mark.parametrize("seed", [5, 6])
def test_sampled_minus_frequency(seed):
    s = sample_state_paths(2, 500, 100_000, seed=seed)
    assert abs(s.frequencies()[:, 1].mean() - typical_frequencies(2)[1]) <= 0.01


@pytest.mark.parametrize("m", [2, 3])
def test_sampled_paths_markov_order(m):
    s = sample_state_paths(m, 200, 20_000, seed=31)
    codes = s.codes[:, 20:180]  # away from the ends
    order = m - 1
    # contingency of the next symbol against one extra symbol of history, per context
    for ctx in {tuple(r) for r in codes[:50, :order]}:
        table = np.zeros((3, 3))
        for t in range(order + 1, codes.shape[1]):
            hit = np.all(codes[:, t - order : t] == ctx, axis=1)
            for extra in range(3):
                sel = hit & (codes[:, t - order - 1] == extra)
                table[extra] += np.bincount(codes[sel, t], minlength=3)
        table = table[table.sum(axis=1) > 0][:, table.sum(axis=0) > 0]
        if table.shape[0] > 1 and table.shape[1] > 1:
            assert chi2_contingency(table).pvalue > 1e-4
