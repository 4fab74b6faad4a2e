"""Exact and sampled views of the polarization processes for erasure channels.

A branch is one bit channel of level ``n`` (equivalently, one state
vector), each observed with probability ``1/N``. For erasure channels the
Bhattacharyya value ``z`` is the erasure probability and ``I = 1 - z``.
Threshold comparisons against doubly-exponentially small values are done on
``log2 z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .construction import ENSEMBLE_BUDGET, _log2_minus, bec_evolution, bec_levels
from .geometry import code_length, dominant_root
from .states import MINUS, PLUS, STAR, StateVector, state_vector


@dataclass(frozen=True, eq=False)
class BranchEnsemble:
    """All ``N(n, m)`` branches at level ``n`` in channel-index order."""

    m: int
    n: int
    eps: float
    z: np.ndarray = field(repr=False)
    log2z: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.z)

    @property
    def probabilities(self) -> np.ndarray:
        return np.full(self.size, 1.0 / self.size)

    def state_vector(self, i: int) -> StateVector:
        return state_vector(self.n, self.m, i)

    def mean_capacity(self) -> float:
        return float(np.mean(1.0 - self.z))


def evolve_ensemble(n: int, m: int, eps: float, budget: int = ENSEMBLE_BUDGET) -> BranchEnsemble:
    z, lz = bec_evolution(n, m, eps, budget)
    return BranchEnsemble(m, n, eps, z, lz)


def _fractions(z: np.ndarray, delta: float) -> tuple[float, float]:
    return float(np.mean(z < delta)), float(np.mean(z > 1.0 - delta))


def polarized_fractions(ens: BranchEnsemble, delta: float) -> tuple[float, float]:
    """``(high, low)``: fractions of branches with ``I > 1 - delta`` and ``I < delta``."""
    if not 0.0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 0.5)")
    return _fractions(ens.z, delta)


def cutoff_value(z) -> np.ndarray:
    """Symmetric cut-off rate ``log2(2 / (1 + z))``."""
    return 1.0 - np.log2(1.0 + np.asarray(z))


@dataclass(frozen=True)
class ProcessTrace:
    """Per-level expectations over the branch ensemble, levels ``0..n_max``."""

    m: int
    eps: float
    delta: float
    levels: tuple[int, ...]
    mean_cutoff: tuple[float, ...]
    mean_capacity: tuple[float, ...]
    high: tuple[float, ...]
    low: tuple[float, ...]

    def rows(self):
        return zip(self.levels, self.mean_cutoff, self.mean_capacity, self.high, self.low)


def cutoff_sequence(n_max: int, m: int, eps: float, delta: float = 1e-3, budget: int = ENSEMBLE_BUDGET) -> ProcessTrace:
    """``E[J_n]``, ``E[I_n]`` and polarized fractions for ``n = 0..n_max``."""
    if not 0.0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 0.5)")
    cols: tuple[list, ...] = ([], [], [], [], [])
    for k, z, _ in bec_levels(n_max, m, eps, budget):
        high, low = _fractions(z, delta)
        for col, v in zip(cols, (k, float(np.mean(cutoff_value(z))), float(np.mean(1.0 - z)), high, low)):
            col.append(v)
    return ProcessTrace(m, eps, delta, *(tuple(c) for c in cols))


def decimated_cutoff(trace: ProcessTrace) -> list[float]:
    """``min(E[J_{km}], ..., E[J_{km-m+1}])`` for ``k = 1..floor(n_max/m)``."""
    m, seq = trace.m, trace.mean_cutoff
    return [min(seq[k * m - i] for i in range(m)) for k in range(1, (len(seq) - 1) // m + 1)]


def step_weights(n: int, m: int) -> float:
    """``mu = N(n-1)/N(n)``, the weight of the upper level in the step inequality."""
    return code_length(n - 1, m) / code_length(n, m)


def exponent_experiment(n: int, m: int, eps: float, beta: float, budget: int = ENSEMBLE_BUDGET) -> float:
    """Exact fraction of branches with ``z <= 2^(-phi^(n beta))``."""
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    _, lz = bec_evolution(n, m, eps, budget)
    return float(np.mean(lz <= -(dominant_root(m) ** (n * beta))))


class BoundViolation(AssertionError):
    """The evolved worst-case value exceeds the claimed bound."""


@dataclass(frozen=True)
class ZhatResult:
    zhat_log: float
    bound_log: float
    path: StateVector = field(repr=False)

    @property
    def holds(self) -> bool:
        return self.zhat_log <= self.bound_log


def zhat_max_zeta(m: int, eps_slack: float) -> float:
    """Largest starting value allowed for slack ``eps_slack``: ``1 - phi^(-eps_slack/2)``."""
    return 1.0 - dominant_root(m) ** (-eps_slack / 2.0)


def extremal_path(length: int, m: int, gamma: float) -> StateVector:
    """``a, ..., a, +, ..., +`` with ``a = (-, *, ..., *)`` of length ``m``.

    ``floor((1 - gamma) length / m)`` blocks ``a``; every remaining position
    is ``+``, so at least ``gamma * length`` pluses appear.
    """
    blocks = math.floor((1.0 - gamma) * length / m + 1e-12)
    a = (MINUS,) + (STAR,) * (m - 1)
    return a * blocks + (PLUS,) * (length - m * blocks)


def evolve_path_log2(path, m: int, start_log2: float) -> float:
    """``log2`` of the value evolved along ``path``; all history before it equals the start."""
    hist = [start_log2] * m  # hist[-1] is the latest level, hist[-m] is m levels back
    for sym in path:
        l1, l2 = hist[-1], hist[-m]
        if sym is PLUS:
            new = l1 + l2
        elif sym is MINUS:
            new = float(_log2_minus(np.float64(l1), np.float64(l2)))
        else:
            new = l1
        hist = hist[1:] + [new]
    return hist[-1]


def zhat_worst_case(
    n0: int, n: int, m: int, gamma: float, zeta: float, eps_slack: float, check: bool = True
) -> ZhatResult:
    """Evolve the dominating process along the extremal path from level ``n0`` to ``n``.

    Returns ``log2`` of the final value and the claimed bound
    ``-phi^((gamma - eps_slack)(n - n0))``. Raises :class:`ValueError` on a
    precondition violation and :class:`BoundViolation` when ``check`` is set
    and the bound fails.
    """
    length = n - n0
    if length < 1 or n0 < 0:
        raise ValueError("need 0 <= n0 < n")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    if not eps_slack > 0.0:
        raise ValueError("eps_slack must be positive")
    if not 0.0 <= zeta <= zhat_max_zeta(m, eps_slack):
        raise ValueError(f"zeta must lie in [0, {zhat_max_zeta(m, eps_slack)}] for this slack")
    result = zhat_evolution(length, m, gamma, zeta, eps_slack)
    if check and not result.holds:
        raise BoundViolation(f"log2 zhat = {result.zhat_log} exceeds the bound {result.bound_log}")
    return result


def zhat_evolution(length: int, m: int, gamma: float, zeta: float, eps_slack: float) -> ZhatResult:
    """Unchecked core of :func:`zhat_worst_case` over ``length`` levels."""
    path = extremal_path(length, m, gamma)
    with np.errstate(divide="ignore"):
        start = float(np.log2(zeta))
    bound = -(dominant_root(m) ** ((gamma - eps_slack) * length))
    return ZhatResult(evolve_path_log2(path, m, start), bound, path)


@dataclass(frozen=True, eq=False)
class SampledPaths:
    """Uniformly drawn state vectors (codes 0 ``+``, 1 ``-``, 2 ``*``) with their ``log2 z``."""

    m: int
    n: int
    seed: int
    codes: np.ndarray = field(repr=False)
    log2z: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.codes)

    def frequencies(self) -> np.ndarray:
        """Per-path fractions of ``(+, -, *)``, shape ``(count, 3)``."""
        if self.n == 0:
            return np.zeros((len(self), 3))
        return np.stack([(self.codes == c).mean(axis=1) for c in range(3)], axis=1)

    def path(self, r: int) -> StateVector:
        return tuple((PLUS, MINUS, STAR)[c] for c in self.codes[r])


def _plus_ratios(n: int, m: int) -> np.ndarray:
    # ratios[t] = N(t-1)/N(t) with exact integers (no 64-bit limit here)
    lengths = [1]
    for t in range(1, n + 1):
        lengths.append(lengths[t - 1] + (lengths[t - m] if t - m >= 0 else 1))
    return np.array([1.0] + [lengths[t - 1] / lengths[t] for t in range(1, n + 1)])


def sample_state_paths(m: int, n: int, count: int, seed: int, eps: float = 0.5) -> SampledPaths:
    """Draw ``count`` state vectors of length ``n`` uniformly from all valid ones.

    With ``t`` symbols still to place and no stars owed, ``+`` is chosen with
    probability ``N(t-1)/N(t)``, the share of completions that start with it.
    Each path also carries its erasure-channel ``log2 z`` for start value ``eps``.
    """
    if count < 0 or n < 0:
        raise ValueError("count and n must be non-negative")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    ratios = _plus_ratios(n, m)
    codes = np.zeros((count, n), dtype=np.int8)
    owed = np.zeros(count, dtype=np.int64)
    with np.errstate(divide="ignore"):
        start = np.log2(eps)
    hist = [np.full(count, start) for _ in range(m)]
    for step in range(n):
        free = owed == 0
        plus = free & (rng.random(count) < ratios[n - step])
        minus = free & ~plus
        code = np.where(plus, 0, np.where(minus, 1, 2)).astype(np.int8)
        codes[:, step] = code
        owed = np.where(minus, m - 1, np.maximum(owed - 1, 0))
        l1, l2 = hist[-1], hist[-m]
        new = np.where(plus, l1 + l2, np.where(minus, _log2_minus(l1, l2), l1))
        hist = hist[1:] + [new]
    return SampledPaths(m, n, seed, codes, hist[-1])
