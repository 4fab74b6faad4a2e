"""Binary-input discrete memoryless channels and the single-step pair transforms.

A channel is stored as a ``(2, |Y|)`` table ``probs[x, y] = W(y|x)``. All
functionals use base-2 logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ROW_TOL = 1e-12
DEFAULT_OUTPUT_CAP = 1 << 20


class ChannelError(ValueError):
    """Invalid transition table."""


class AlphabetSizeError(ValueError):
    """A transform would exceed the configured output-alphabet cap."""


@dataclass(frozen=True, eq=False)
class DiscreteChannel:
    """Binary-input channel given by its transition table ``W(y|x)``."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 2 or p.shape[0] != 2 or p.shape[1] < 1:
            raise ChannelError(f"table must have shape (2, outputs), got {p.shape}")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ChannelError("probabilities must be finite and non-negative")
        sums = p.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > ROW_TOL):
            raise ChannelError(f"rows must sum to 1, got {sums.tolist()}")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def outputs(self) -> int:
        return self.probs.shape[1]

    @classmethod
    def identity(cls) -> "DiscreteChannel":
        return cls(np.eye(2))

    @classmethod
    def bsc(cls, p: float) -> "DiscreteChannel":
        return cls([[1 - p, p], [p, 1 - p]])

    def llr_table(self) -> np.ndarray:
        """``log(W(y|0)/W(y|1))`` per output, with ``±inf`` where a row is zero."""
        p0, p1 = self.probs
        with np.errstate(divide="ignore", invalid="ignore"):
            llr = np.log(p0) - np.log(p1)
        llr[(p0 == 0) & (p1 == 0)] = 0.0
        return llr


@dataclass(frozen=True)
class ErasureChannel:
    """Binary erasure channel with erasure probability ``eps``."""

    eps: float

    def __post_init__(self):
        if not 0.0 <= self.eps <= 1.0:
            raise ChannelError(f"erasure probability must lie in [0, 1], got {self.eps}")

    def to_discrete(self) -> DiscreteChannel:
        """Three outputs in the order ``(0, 1, erasure)``."""
        e = self.eps
        return DiscreteChannel([[1 - e, 0.0, e], [0.0, 1 - e, e]])


def _table(w) -> np.ndarray:
    if isinstance(w, ErasureChannel):
        return w.to_discrete().probs
    if isinstance(w, DiscreteChannel):
        return w.probs
    raise TypeError(f"expected a channel, got {type(w).__name__}")


def symmetric_capacity(w) -> float:
    """Mutual information between a uniform input and the output, in bits."""
    p = _table(w)
    both = p[0] + p[1]
    total = 0.0
    for row in p:
        mask = row > 0
        total += 0.5 * float(np.sum(row[mask] * np.log2(2.0 * row[mask] / both[mask])))
    return min(max(total, 0.0), 1.0)


def bhattacharyya(w) -> float:
    p = _table(w)
    return min(float(np.sum(np.sqrt(p[0] * p[1]))), 1.0)


def cutoff_rate(w) -> float:
    """Symmetric cut-off rate ``log2(2 / (1 + Z))``."""
    return float(np.log2(2.0 / (1.0 + bhattacharyya(w))))


def transform_pair(w1, w2, cap: int = DEFAULT_OUTPUT_CAP):
    """Synthesize the (minus, plus) channels from two independent channels.

    ``w1`` sees ``x1 ^ x2`` and ``w2`` sees ``x2``. The minus channel has input
    ``x1`` and output ``(y1, y2)``; the plus channel has input ``x2`` and output
    ``(x1, y1, y2)``. Output symbols are laid out row-major in that order and are
    never merged.
    """
    a, b = _table(w1), _table(w2)
    ny1, ny2 = a.shape[1], b.shape[1]
    if 2 * ny1 * ny2 > cap:
        raise AlphabetSizeError(f"plus channel would have {2 * ny1 * ny2} outputs (cap {cap})")
    # joint[x1, x2, y1, y2] = W1(y1 | x1^x2) W2(y2 | x2) / 2
    joint = np.empty((2, 2, ny1, ny2))
    for x1 in (0, 1):
        for x2 in (0, 1):
            joint[x1, x2] = 0.5 * np.outer(a[x1 ^ x2], b[x2])
    minus = joint.sum(axis=1).reshape(2, ny1 * ny2)
    plus = joint.transpose(1, 0, 2, 3).reshape(2, 2 * ny1 * ny2)
    return DiscreteChannel(_renormalize(minus)), DiscreteChannel(_renormalize(plus))


def _renormalize(p: np.ndarray) -> np.ndarray:
    return p / p.sum(axis=1, keepdims=True)


def bec_transform(a: ErasureChannel, b: ErasureChannel):
    """Closed-form pair transform for two erasure channels."""
    ea, eb = a.eps, b.eps
    return ErasureChannel(min(ea + eb - ea * eb, 1.0)), ErasureChannel(ea * eb)


def transmit(w, x, rng: np.random.Generator) -> np.ndarray:
    """Draw output symbol indices for input bits ``x`` (any shape).

    For an :class:`ErasureChannel` the symbols are ``0``, ``1`` and ``2`` for erasure.
    """
    p = _table(w)
    x = np.asarray(x, dtype=np.intp)
    cdf = np.cumsum(p, axis=1)
    draw = rng.random(x.shape)
    y = (draw[..., None] >= cdf[x]).sum(axis=-1)
    return np.minimum(y, p.shape[1] - 1)
