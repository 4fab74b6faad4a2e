"""Generator matrix and the recursive XOR-network encoder.

Index contract at every combining level ``n`` (0-based, ``N1 = N(n-1)``,
``Nm = N(n-m)``): input ``j`` of the upper block carries ``u[j]`` and input ``j``
of the auxiliary block carries ``u[j] ^ u[j + N1]`` for ``j < Nm``. The
decoder's partial sums rely on exactly this alignment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .geometry import BudgetError, code_length

MATRIX_BUDGET = 1 << 14


@lru_cache(maxsize=256)
def xor_schedule(n: int, m: int) -> tuple[tuple[int, int, int], ...]:
    """Pre-order list of ``(src, dst, length)`` block XORs: ``x[dst:dst+length] ^= x[src:...]``."""
    ops: list[tuple[int, int, int]] = []

    def walk(level: int, offset: int):
        if level <= 0:
            return
        n1, nm = code_length(level - 1, m), code_length(level - m, m)
        ops.append((offset, offset + n1, nm))
        walk(level - 1, offset)
        walk(level - m, offset + n1)

    walk(n, 0)
    return tuple(ops)


def _as_bits(u, N: int) -> np.ndarray:
    arr = np.asarray(u)
    if arr.shape[-1] != N:
        raise ValueError(f"expected {N} bits in the last axis, got shape {arr.shape}")
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("input must contain only 0/1 values")
    return arr.astype(np.uint8)


def encode_counted(u, n: int, m: int) -> tuple[np.ndarray, int]:
    """Encode ``u`` (shape ``(N,)`` or ``(batch, N)``); also return the per-word XOR count."""
    N = code_length(n, m)
    x = _as_bits(u, N).copy()
    count = 0
    for src, dst, length in xor_schedule(n, m):
        x[..., dst:dst + length] ^= x[..., src:src + length]
        count += length
    return x, count


def encode(u, n: int, m: int) -> np.ndarray:
    """``x = u G_N`` over GF(2), computed by the combining network."""
    return encode_counted(u, n, m)[0]


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """``N x N`` generator over GF(2), rows bit-packed into bytes."""

    n: int
    m: int
    packed: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return code_length(self.n, self.m)

    @property
    def bits(self) -> np.ndarray:
        return np.unpackbits(self.packed, axis=1, count=self.N)

    def multiply(self, u) -> np.ndarray:
        """Row-vector product ``u G`` (XOR of the rows selected by ``u``)."""
        u = _as_bits(u, self.N)
        if u.ndim == 1:
            rows = self.packed[u.astype(bool)]
            acc = np.bitwise_xor.reduce(rows, axis=0) if len(rows) else np.zeros(self.packed.shape[1], np.uint8)
            return np.unpackbits(acc, count=self.N)
        return np.stack([self.multiply(row) for row in u])


def build_generator(n: int, m: int, budget: int = MATRIX_BUDGET) -> GeneratorMatrix:
    """Block-recursive generator ``[[G1, [Gm; 0]], [0, Gm]]``."""
    N = code_length(n, m)
    if N > budget:
        raise BudgetError(f"N = {N} exceeds the matrix budget {budget}")
    return GeneratorMatrix(n, m, np.packbits(_generator_bits(n, m), axis=1))


def _generator_bits(n: int, m: int) -> np.ndarray:
    if n <= 0:
        return np.ones((1, 1), dtype=np.uint8)
    g1, gm = _generator_bits(n - 1, m), _generator_bits(n - m, m)
    n1, nm = len(g1), len(gm)
    g = np.zeros((n1 + nm, n1 + nm), dtype=np.uint8)
    g[:n1, :n1] = g1
    g[:nm, n1:] = gm
    g[n1:, n1:] = gm
    return g


def kronecker_generator(n: int) -> np.ndarray:
    """``n``-fold Kronecker power of ``[[1, 1], [0, 1]]`` (the memory-1 oracle)."""
    g = np.ones((1, 1), dtype=np.uint8)
    kernel = np.array([[1, 1], [0, 1]], dtype=np.uint8)
    for _ in range(n):
        g = np.kron(g, kernel)
    return g


def gf2_rank(bits: np.ndarray) -> int:
    """Rank over GF(2) by elimination on integer-packed rows."""
    basis: dict[int, int] = {}
    for row in np.asarray(bits, dtype=np.uint8):
        v = int.from_bytes(np.packbits(row).tobytes(), "big")
        while v:
            lead = v.bit_length() - 1
            if lead not in basis:
                basis[lead] = v
                break
            v ^= basis[lead]
    return len(basis)


@dataclass(frozen=True)
class CodeSpec:
    """One code instance: memory, level, information set and frozen values.

    ``info_set`` holds sorted 1-based channel indices. ``frozen_values`` maps
    frozen indices to their bit; indices absent from it are frozen to 0.
    """

    m: int
    n: int
    info_set: tuple[int, ...]
    frozen_values: tuple[tuple[int, int], ...] = ()
    design_channel: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        N = code_length(self.n, self.m)
        info = tuple(sorted(int(i) for i in self.info_set))
        if len(set(info)) != len(info) or any(not 1 <= i <= N for i in info):
            raise ValueError(f"information set must be distinct indices in 1..{N}")
        object.__setattr__(self, "info_set", info)
        frozen = tuple(sorted((int(i), int(v)) for i, v in dict(self.frozen_values).items()))
        for i, v in frozen:
            if i in info or not 1 <= i <= N or v not in (0, 1):
                raise ValueError(f"bad frozen entry ({i}, {v})")
        object.__setattr__(self, "frozen_values", frozen)

    @property
    def N(self) -> int:
        return code_length(self.n, self.m)

    @property
    def K(self) -> int:
        return len(self.info_set)

    @property
    def rate(self) -> float:
        return self.K / self.N

    def info_mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool)
        mask[np.asarray(self.info_set, dtype=np.int64) - 1] = True
        return mask

    def frozen_pattern(self) -> np.ndarray:
        """Length-``N`` vector with frozen values in place and zeros elsewhere."""
        u = np.zeros(self.N, dtype=np.uint8)
        for i, v in self.frozen_values:
            u[i - 1] = v
        return u


def encode_message(msg, spec: CodeSpec) -> np.ndarray:
    """Place ``msg`` (shape ``(K,)`` or ``(batch, K)``) on the information set and encode."""
    msg = np.asarray(msg, dtype=np.uint8)
    if msg.shape[-1] != spec.K:
        raise ValueError(f"message must have {spec.K} bits, got shape {msg.shape}")
    u = np.broadcast_to(spec.frozen_pattern(), msg.shape[:-1] + (spec.N,)).copy()
    u[..., spec.info_mask()] = msg
    return encode(u, spec.n, spec.m)
