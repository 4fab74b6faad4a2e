"""Bit-channel reliabilities and information-set selection.

Erasure channels are handled exactly by the Bhattacharyya recursion (every
synthesized channel is again an erasure channel). General channels get a
genie-aided Monte Carlo estimate, and tiny codes an exhaustive oracle that
sums the joint law over all inputs.

Channel indices are 1-based at the public surface; arrays are indexed
``i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decoder import genie_llrs
from .dmc import DEFAULT_OUTPUT_CAP, DiscreteChannel, ErasureChannel, _table, transform_pair, transmit
from .encoder import CodeSpec, build_generator, encode
from .geometry import BudgetError, code_length
from .rng import DEFAULT_PARTITIONS, chunks, run_partitioned
from .states import decode_order

ENSEMBLE_BUDGET = 1 << 24
EXHAUSTIVE_MAX_N = 13
EXHAUSTIVE_BUDGET = 1 << 24
_LN2 = np.log(2.0)


def _log2_minus(l1, l2):
    """``log2(z1 + z2 - z1 z2)`` from ``l = log2 z`` without leaving the log domain."""
    with np.errstate(divide="ignore"):
        out = np.logaddexp2(l1, l2 + np.log1p(-np.exp2(np.minimum(l1, 0.0))) / _LN2)
    return np.minimum(out, 0.0)


def bec_levels(n: int, m: int, eps: float, budget: int = ENSEMBLE_BUDGET):
    """Yield ``(k, z, log2z)`` for levels ``k = 0..n`` of the erasure recursion.

    ``z`` is evolved in linear space (exact conservation up to rounding) and
    ``log2z`` in log space, so doubly-exponentially small values stay
    comparable after ``z`` underflows.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {eps}")
    if n < 0:
        raise ValueError("level must be >= 0")
    if code_length(n, m) > budget:
        raise BudgetError(f"N({n}, {m}) = {code_length(n, m)} exceeds the budget of {budget}")
    with np.errstate(divide="ignore"):
        base = (np.array([eps]), np.log2(np.array([eps])))
    # levels[k] for the last m levels; levels <= 0 all equal the base
    hist = {0: base}
    yield 0, base[0], base[1]
    for k in range(1, n + 1):
        z1, l1 = hist[k - 1]
        z2, l2 = hist.get(k - m, base)
        nb = len(z2)
        a, la = z1[:nb], l1[:nb]
        z = np.concatenate([a * z2, z1[nb:], a + z2 - a * z2])
        lz = np.concatenate([la + l2, l1[nb:], _log2_minus(la, l2)])
        hist[k] = (z, lz)
        hist.pop(k - m, None)
        yield k, z, lz


def bec_evolution(n: int, m: int, eps: float, budget: int = ENSEMBLE_BUDGET):
    """``(z, log2z)`` of all bit channels at level ``n``."""
    for _, z, lz in bec_levels(n, m, eps, budget):
        pass
    return z, lz


def bec_reliabilities(n: int, m: int, eps: float, budget: int = ENSEMBLE_BUDGET) -> np.ndarray:
    """Erasure probability (equal to the Bhattacharyya value) of each bit channel."""
    return bec_evolution(n, m, eps, budget)[0]


def select_info_set(z, K: int) -> tuple[int, ...]:
    """The ``K`` most reliable indices (smallest ``z``, ties to the smaller index), sorted."""
    z = np.asarray(z, dtype=float)
    if not 0 <= K <= len(z):
        raise ValueError(f"K must lie in 0..{len(z)}, got {K}")
    best = np.argsort(z, kind="stable")[:K]
    return tuple(sorted(int(i) + 1 for i in best))


def bec_code(n: int, m: int, eps: float, K: int) -> CodeSpec:
    """Code designed for an erasure channel, frozen bits set to 0."""
    info = select_info_set(bec_reliabilities(n, m, eps), K)
    return CodeSpec(m, n, info, design_channel={"kind": "BEC", "eps": float(eps)})


def union_bound(z, info_set) -> float:
    """``sum of z`` over the information set (1-based indices)."""
    z = np.asarray(z, dtype=float)
    return float(z[np.asarray(info_set, dtype=np.int64) - 1].sum()) if len(info_set) else 0.0


def split_channels(n: int, m: int, w, cap: int = DEFAULT_OUTPUT_CAP) -> list[DiscreteChannel]:
    """All bit channels at level ``n`` by repeated pair transforms.

    Pair ``j`` combines the auxiliary channel of level ``n-m`` (it sees
    ``u[j] ^ u[j + N(n-1)]``) with the upper channel of level ``n-1`` (it sees
    ``u[j]``). Output alphabets grow quickly; ``cap`` bounds each transform.
    """
    base = [w if isinstance(w, DiscreteChannel) else DiscreteChannel(_table(w))]
    hist = {0: base}
    for k in range(1, n + 1):
        upper, aux = hist[k - 1], hist.get(k - m, base)
        pairs = [transform_pair(aux[j], upper[j], cap) for j in range(len(aux))]
        hist[k] = [p for _, p in pairs] + upper[len(aux):] + [mi for mi, _ in pairs]
        hist.pop(k - m, None)
    return hist[n]


def prior_indices(n: int, m: int, i: int) -> np.ndarray:
    """0-based indices decoded before channel ``i``, in decode order."""
    order = decode_order(n, m) if n >= 1 else np.zeros(1, dtype=np.int64)
    pos = int(np.flatnonzero(order == i - 1)[0])
    return order[:pos]


def exhaustive_bitchannel(n: int, m: int, i: int, w, budget: int = EXHAUSTIVE_BUDGET) -> DiscreteChannel:
    """Exact bit channel ``i`` by summing over every input word.

    The output of channel ``i`` is the pair (received word, earlier-decoded
    bits), laid out with the received word as the major index and the
    earlier bits (in decode order, first bit most significant) as the minor
    index. The input is ``u[i]``; later bits are summed out.
    """
    N = code_length(n, m)
    p = _table(w)
    ny = p.shape[1]
    prior = prior_indices(n, m, i)
    if N > EXHAUSTIVE_MAX_N:
        raise BudgetError(f"exhaustive enumeration limited to N <= {EXHAUSTIVE_MAX_N}, got {N}")
    if (2**N) * ny**N > budget or 2 * ny**N * 2 ** len(prior) > budget:
        raise BudgetError(f"enumeration for N={N}, |Y|={ny} exceeds the budget of {budget}")
    words = ((np.arange(2**N)[:, None] >> np.arange(N - 1, -1, -1)) & 1).astype(np.uint8)
    x = build_generator(n, m).multiply(words) if N > 1 else words
    # joint[u, y] = prod_k W(y_k | x_k), y_1 most significant
    joint = np.ones((2**N, 1))
    for k in range(N):
        joint = (joint[:, :, None] * p[x[:, k]][:, None, :]).reshape(2**N, -1)
    weights = (1 << np.arange(len(prior) - 1, -1, -1)) if len(prior) else np.zeros(0, dtype=np.int64)
    prior_idx = words[:, prior].astype(np.int64) @ weights if len(prior) else np.zeros(2**N, dtype=np.int64)
    table = np.zeros((2, 2 ** len(prior), ny**N))
    np.add.at(table, (words[:, i - 1], prior_idx), joint / 2 ** (N - 1))
    return DiscreteChannel(table.transpose(0, 2, 1).reshape(2, -1))


def exhaustive_output_index(y, prior_bits, ny: int) -> int:
    """Column of :func:`exhaustive_bitchannel` for received symbols ``y`` and earlier bits."""
    y_idx = 0
    for s in y:
        y_idx = y_idx * ny + int(s)
    b_idx = 0
    for b in prior_bits:
        b_idx = 2 * b_idx + int(b)
    return y_idx * 2 ** len(prior_bits) + b_idx


@dataclass(frozen=True)
class ReliabilityEstimate:
    """Genie-aided bit-error counts per channel index."""

    errors: np.ndarray
    trials: int
    seed: int
    partitions: int

    @property
    def rates(self) -> np.ndarray:
        return self.errors / self.trials


def mc_reliability_estimate(
    spec: CodeSpec,
    channel,
    trials: int,
    seed: int,
    partitions: int = DEFAULT_PARTITIONS,
    workers: int | None = None,
) -> ReliabilityEstimate:
    """Per-index bit-error frequency of genie-aided decisions with uniform inputs.

    Ties (LLR exactly 0) decide 0, so an erasure-channel bit errs with half
    its erasure probability.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    w = channel if isinstance(channel, (DiscreteChannel, ErasureChannel)) else channel.to_channel()
    llr_of = DiscreteChannel(_table(w)).llr_table()

    def task(rng, share):
        errs = np.zeros(spec.N, dtype=np.int64)
        for size in chunks(share):
            u = rng.integers(0, 2, size=(size, spec.N), dtype=np.uint8)
            y = transmit(w, encode(u, spec.n, spec.m), rng)
            llr = genie_llrs(llr_of[y], u, spec.n, spec.m)
            errs += ((llr < 0) != u.astype(bool)).sum(axis=0)
        return errs

    parts = run_partitioned(task, trials, seed, partitions, workers)
    return ReliabilityEstimate(np.sum(parts, axis=0), trials, seed, partitions)
