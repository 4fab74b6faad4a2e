"""Code-length recursion, its dominant root, typical state frequencies and
the encoding/decoding complexity recursions.

Lengths follow ``N(n) = N(n-1) + N(n-m)`` with ``N(n) = 1`` for ``n <= 0``.
All integer quantities are exact and must fit an unsigned 64-bit word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

U64_MAX = (1 << 64) - 1


class BudgetError(RuntimeError):
    """Requested enumeration or table is larger than the configured budget."""


@dataclass(frozen=True)
class MemoryParams:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"memory order must be >= 1, got {self.m}")
        if self.n < 0:
            raise ValueError(f"level must be >= 0, got {self.n}")

    @property
    def N(self) -> int:
        return code_length(self.n, self.m)


@dataclass(frozen=True)
class GeometryReport:
    m: int
    phi: float
    p_plus: float
    p_minus: float
    p_star: float
    lengths: tuple[int, ...] = field(default=())


def _check_m(m: int):
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"memory order must be an integer >= 1, got {m!r}")


def _checked(value: int, what: str) -> int:
    if value > U64_MAX:
        raise OverflowError(f"{what} exceeds the unsigned 64-bit range")
    return value


@lru_cache(maxsize=None)
def _lengths(m: int, n: int) -> tuple[int, ...]:
    # table[k] = N(k) for k = 0..n
    table = [1]
    for k in range(1, n + 1):
        prev = table[k - 1]
        back = table[k - m] if k - m >= 0 else 1
        table.append(_checked(prev + back, f"N({k}, {m})"))
    return tuple(table)


def code_length(n: int, m: int) -> int:
    """Exact code length ``N(n, m)``; levels below 1 have length 1."""
    _check_m(m)
    if n < 1 - m:
        raise ValueError(f"level {n} is below the initial range for m={m}")
    if n <= 0:
        return 1
    return _lengths(m, n)[n]


def length_table(n: int, m: int) -> tuple[int, ...]:
    """``(N(0), N(1), ..., N(n))``."""
    _check_m(m)
    return _lengths(m, max(n, 0))[: n + 1]


def _F(m: int, rho: float) -> float:
    return rho**m - rho ** (m - 1) - 1.0


@lru_cache(maxsize=None)
def dominant_root(m: int) -> float:
    """Largest real root of ``rho^m - rho^(m-1) - 1`` (unique on ``(1, 2]``).

    Plain bisection: ``F`` is negative at ``1`` and non-negative at ``2``.
    """
    _check_m(m)
    lo, hi = 1.0 + 1e-9, 2.0
    if _F(m, hi) == 0.0:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _F(m, mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    return lo if abs(_F(m, lo)) < abs(_F(m, hi)) else hi


def typical_frequencies(m: int) -> tuple[float, float, float]:
    """Typical frequencies ``(p_plus, p_minus, p_star)`` of the three states."""
    phi = dominant_root(m)
    p_minus = (phi - 1.0) / (1.0 + m * (phi - 1.0))
    return 1.0 - m * p_minus, p_minus, (m - 1) * p_minus


def achievable_exponent(m: int) -> float:
    """Supremum of the exponents ``beta`` reachable at memory ``m`` (equals ``p_plus``)."""
    return typical_frequencies(m)[0]


def geometry_report(m: int, n_max: int = 0) -> GeometryReport:
    p_plus, p_minus, p_star = typical_frequencies(m)
    return GeometryReport(m, dominant_root(m), p_plus, p_minus, p_star, length_table(n_max, m))


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def _check_q(m: int, q: float):
    _check_m(m)
    if not 0.0 <= q <= 1.0 / m + 1e-15:
        raise ValueError(f"q must lie in [0, 1/m] = [0, {1.0 / m}], got {q}")


def growth_function(m: int, q: float) -> float:
    """Exponential growth rate (bits per level) of the type class with a
    fraction ``q`` of minus states."""
    _check_q(m, q)
    scale = 1.0 - (m - 1) * q
    if scale <= 0.0:
        return 0.0
    return scale * binary_entropy(min(q / scale, 1.0))


def divergence(m: int, q: float) -> float:
    """Gap ``log2(phi) - G(m, q)``; zero only at the typical minus frequency."""
    return max(math.log2(dominant_root(m)) - growth_function(m, q), 0.0)


@lru_cache(maxsize=None)
def _complexities(m: int, n: int, kind: str) -> tuple[int, ...]:
    # table[k] = chi(k) for k = 0..n; chi(k) = 0 for k <= 0
    per_pair = 1 if kind == "enc" else 2
    lengths = _lengths(m, n)
    table = [0]
    for k in range(1, n + 1):
        back = table[k - m] if k - m >= 0 else 0
        n_back = lengths[k - m] if k - m >= 0 else 1
        table.append(_checked(table[k - 1] + back + per_pair * n_back, f"complexity({k}, {m})"))
    return tuple(table)


def encoding_complexity(n: int, m: int) -> int:
    """XOR count of the recursive encoder."""
    _check_m(m)
    if n < 1:
        return 0
    return _complexities(m, n, "enc")[n]


def decoding_complexity(n: int, m: int) -> int:
    """Number of likelihood-ratio evaluations in one successive-cancellation pass."""
    _check_m(m)
    if n < 1:
        return 0
    return _complexities(m, n, "dec")[n]


def complexity_ratio(n: int, m: int, kind: str = "dec") -> float:
    """Complexity normalized by ``N log2 N`` (the packing ratio for ``kind='dec'``)."""
    if kind not in ("enc", "dec"):
        raise ValueError(f"kind must be 'enc' or 'dec', got {kind!r}")
    N = code_length(n, m)
    if N < 2:
        raise ValueError("complexity ratio needs N >= 2")
    chi = encoding_complexity(n, m) if kind == "enc" else decoding_complexity(n, m)
    return chi / (N * math.log2(N))


def level_nearest(target: int, m: int) -> int:
    """Level whose code length is closest to ``target``; ties go to the larger length."""
    if target < 1:
        raise ValueError("target length must be positive")
    n = 0
    while code_length(n + 1, m) <= target:
        n += 1
    below, above = code_length(n, m), code_length(n + 1, m)
    return n + 1 if above - target <= target - below else n
