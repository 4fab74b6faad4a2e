"""Successive-cancellation decoding over the memory-``m`` recursion.

Each combining level is a generator that walks its upper child (level
``n-1``) in that child's decode order. For a paired index ``j < N(n-m)`` it
emits the minus channel ``j + N(n-1)`` first, then the plus channel ``j``,
and feeds the decided bits back down: ``u[j]`` to the upper child and
``u[j] ^ u[j + N(n-1)]`` to the auxiliary child (level ``n-m``). Unpaired
indices pass the upper child's value through untouched. The emission order
is exactly the bit-reversed order, and every likelihood ratio is computed
once, so a full pass costs ``decoding_complexity(n, m)`` evaluations.

Values are log-likelihood ratios ``log W(y|0)/W(y|1)`` and may carry a
leading batch axis; all trials in a batch are decoded in lock-step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dmc import DiscreteChannel
from .encoder import CodeSpec
from .geometry import code_length
from .states import decode_order

ERASURE = 2


def _boxplus_raw(a, b):
    core = np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    corr = np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))
    return core + np.where(np.isnan(corr), 0.0, corr)


def boxplus(a, b):
    """Exact soft combination ``2 atanh(tanh(a/2) tanh(b/2))`` in a stable form."""
    with np.errstate(invalid="ignore", over="ignore"):
        return _boxplus_raw(a, b)


def boxplus_minsum(a, b):
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def plus_combine(a, b, u_minus):
    """Upper value plus the auxiliary value with its sign flipped by the minus bit.

    Opposite infinite certainties collapse to 0 rather than NaN.
    """
    with np.errstate(invalid="ignore"):
        return _plus_raw(a, b, u_minus)


def _plus_raw(a, b, u_minus):
    out = a + np.where(u_minus, -b, b)
    return np.where(np.isnan(out), 0.0, out)


def _erasure_minus(a, b):
    return a * b


def _erasure_plus(a, b, u_minus):
    return np.sign(a + np.where(u_minus, -b, b)).astype(np.int8)


class WorkspaceError(RuntimeError):
    pass


@dataclass
class DecoderWorkspace:
    """Per-pass decoder state.

    The level buffers live in the frames of the level generators; this
    object owns the evaluation counter and the single-use guard.
    ``approx`` switches the minus rule to the min-sum approximation;
    ``debug`` checks the emission order and child alignment at runtime.
    """

    approx: bool = False
    debug: bool = False
    ops: int = 0
    used: bool = False

    def reset(self):
        self.ops = 0
        self.used = False

    def _claim(self):
        if self.used:
            raise WorkspaceError("workspace already used; call reset() first")
        self.used = True


@dataclass
class DecodeResult:
    u_hat: np.ndarray
    bit_llrs: np.ndarray
    ops: int
    order: list[int] = field(default_factory=list, repr=False)


def _send(gen, value):
    try:
        return gen.send(value)
    except StopIteration:
        return None


def _level(level, m, values, ws, minus, plus):
    if level <= 0:
        yield 0, values[..., 0]
        return
    n1, nm = code_length(level - 1, m), code_length(level - m, m)
    upper = _level(level - 1, m, values[..., :n1], ws, minus, plus)
    aux = _level(level - m, m, values[..., n1:], ws, minus, plus)
    nxt = next(upper)
    ja, lb = next(aux)
    while nxt is not None:
        j, la = nxt
        if j < nm:
            if ws.debug and ja != j:
                raise AssertionError(f"auxiliary child at {ja}, expected {j} (level {level})")
            ws.ops += 1
            u_minus = yield j + n1, minus(la, lb)
            ws.ops += 1
            u_plus = yield j, plus(la, lb, u_minus)
            nxt = _send(upper, u_plus)
            after = _send(aux, u_plus ^ u_minus)
            if after is not None:
                ja, lb = after
        else:
            u = yield j, la
            nxt = _send(upper, u)


def _drive(values, n, m, ws, minus, plus, decide):
    ws._claim()
    gen = _level(n, m, values, ws, minus, plus)
    order = []
    with np.errstate(invalid="ignore", over="ignore"):
        item = next(gen)
        while item is not None:
            i, value = item
            order.append(i)
            item = _send(gen, decide(i, value))
    if ws.debug:
        expected = decode_order(n, m).tolist() if n >= 1 else [0]
        if order != expected:
            raise AssertionError("emission order differs from the bit-reversed order")
    return order


def _check_llrs(llr, N):
    llr = np.asarray(llr, dtype=float)
    if llr.shape[-1] != N:
        raise ValueError(f"expected {N} values in the last axis, got shape {llr.shape}")
    if np.isnan(llr).any():
        raise ValueError("LLRs must not be NaN")
    return llr


def _frozen_table(spec: CodeSpec):
    info = spec.info_mask()
    pattern = spec.frozen_pattern().astype(bool)
    return info, pattern


def decode(llr_in, spec: CodeSpec, workspace: DecoderWorkspace | None = None) -> DecodeResult:
    """Successive-cancellation decode of channel LLRs (shape ``(N,)`` or ``(batch, N)``).

    Frozen positions take their frozen value; information bits are 1 iff
    their LLR is negative (an exact 0 decides 0).
    """
    ws = workspace if workspace is not None else DecoderWorkspace()
    llr = _check_llrs(llr_in, spec.N)
    info, pattern = _frozen_table(spec)
    u_hat = np.zeros(llr.shape, dtype=np.uint8)
    bit_llrs = np.zeros(llr.shape)

    def decide(i, value):
        bit = value < 0 if info[i] else np.full(np.shape(value), pattern[i])
        u_hat[..., i] = bit
        bit_llrs[..., i] = value
        return bit

    minus = boxplus_minsum if ws.approx else _boxplus_raw
    order = _drive(llr, spec.n, spec.m, ws, minus, _plus_raw, decide)
    return DecodeResult(u_hat, bit_llrs, ws.ops, order)


def genie_llrs(llr_in, true_u, n: int, m: int, workspace: DecoderWorkspace | None = None) -> np.ndarray:
    """LLR of every bit channel when each decision is replaced by the true bit."""
    ws = workspace if workspace is not None else DecoderWorkspace()
    N = code_length(n, m)
    llr = _check_llrs(llr_in, N)
    true_u = np.asarray(true_u).astype(bool)
    out = np.zeros(llr.shape)

    def decide(i, value):
        out[..., i] = value
        return true_u[..., i]

    _drive(llr, n, m, ws, _boxplus_raw, _plus_raw, decide)
    return out


def genie_llr(n: int, m: int, i: int, w: DiscreteChannel, y, true_u) -> float:
    """Genie-aided LLR of channel ``i`` (1-based) for output symbols ``y`` of ``w``."""
    llr = w.llr_table()[np.asarray(y, dtype=np.int64)]
    return float(genie_llrs(llr, true_u, n, m)[i - 1])


def decode_bec(symbols, spec: CodeSpec, workspace: DecoderWorkspace | None = None) -> DecodeResult:
    """Erasure-channel decode over the three-valued algebra ``{0, 1, ERASURE}``.

    Makes the same decisions as :func:`decode` on the corresponding
    ``{+inf, -inf, 0}`` LLRs, using small-integer arithmetic.
    """
    ws = workspace if workspace is not None else DecoderWorkspace()
    sym = np.asarray(symbols)
    if sym.shape[-1] != spec.N:
        raise ValueError(f"expected {spec.N} symbols in the last axis, got shape {sym.shape}")
    if not np.all((sym == 0) | (sym == 1) | (sym == ERASURE)):
        raise ValueError("symbols must be 0, 1 or ERASURE")
    signs = np.where(sym == ERASURE, 0, 1 - 2 * sym.astype(np.int8)).astype(np.int8)
    info, pattern = _frozen_table(spec)
    u_hat = np.zeros(sym.shape, dtype=np.uint8)
    decided = np.zeros(sym.shape, dtype=np.int8)

    def decide(i, value):
        bit = value < 0 if info[i] else np.full(np.shape(value), pattern[i])
        u_hat[..., i] = bit
        decided[..., i] = value
        return bit

    order = _drive(signs, spec.n, spec.m, ws, _erasure_minus, _erasure_plus, decide)
    with np.errstate(invalid="ignore"):
        bit_llrs = np.where(decided == 0, 0.0, decided * np.inf)
    return DecodeResult(u_hat, bit_llrs, ws.ops, order)
