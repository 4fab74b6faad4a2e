"""State vectors of the synthesized bit channels, their decode order and
exact type-class counting.

Channel indices at the public surface are 1-based, matching the usual
numbering ``W_n^(1) .. W_n^(N)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import BudgetError, code_length, typical_frequencies

DEFAULT_STATE_BUDGET = 1 << 22


class StateSymbol(str, enum.Enum):
    PLUS = "+"
    MINUS = "-"
    STAR = "*"

    def __repr__(self):
        return self.value


PLUS, MINUS, STAR = StateSymbol.PLUS, StateSymbol.MINUS, StateSymbol.STAR

StateVector = tuple  # tuple[StateSymbol, ...]


def parse_state_vector(text: str) -> StateVector:
    """``"+-*"`` -> ``(PLUS, MINUS, STAR)``; ``★`` is accepted for ``*``."""
    return tuple(StateSymbol(c if c != "★" else "*") for c in text)


def format_state_vector(s) -> str:
    return "".join(sym.value for sym in s)


def _check_budget(n: int, m: int, budget: int) -> int:
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    N = code_length(n, m)
    if N > budget:
        raise BudgetError(f"N({n}, {m}) = {N} exceeds the budget of {budget}")
    return N


def assign_states(n: int, m: int, budget: int = DEFAULT_STATE_BUDGET) -> list[StateVector]:
    """State vectors of all ``N(n, m)`` bit channels; entry ``i-1`` belongs to channel ``i``."""
    _check_budget(n, m, budget)
    # levels[k] holds the vectors of level k; levels <= 0 are the empty vector
    levels: dict[int, list[StateVector]] = {0: [()]}
    for k in range(1, n + 1):
        prev = levels[k - 1]
        n_back = code_length(k - m, m)
        cur = [prev[j] + (PLUS,) for j in range(n_back)]
        cur += [prev[j] + (STAR,) for j in range(n_back, len(prev))]
        cur += [prev[j] + (MINUS,) for j in range(n_back)]
        levels[k] = cur
        levels.pop(k - m, None)
    return levels[n]


def state_vector(n: int, m: int, i: int) -> StateVector:
    """State vector of channel ``i`` (1-based) without enumerating the level."""
    N = code_length(n, m)
    if not 1 <= i <= N:
        raise IndexError(f"channel index {i} outside 1..{N}")
    j = i - 1
    out = []
    for k in range(n, 0, -1):
        n_prev, n_back = code_length(k - 1, m), code_length(k - m, m)
        if j < n_back:
            out.append(PLUS)
        elif j < n_prev:
            out.append(STAR)
        else:
            out.append(MINUS)
            j -= n_prev
    return tuple(reversed(out))


def state_index(s, m: int) -> int:
    """Inverse of :func:`state_vector`: the 1-based channel index of a valid vector."""
    if not validate_state_vector(s, m):
        raise ValueError(f"not a valid state vector for m={m}: {s!r}")
    j = 0
    for k, sym in enumerate(s, start=1):
        if StateSymbol(sym) is MINUS:
            j += code_length(k - 1, m)
    return j + 1


def validate_state_vector(s, m: int) -> bool:
    """True iff ``s`` is reachable by the assigning procedure for memory ``m``.

    A minus must be followed by exactly ``m-1`` stars unless the vector ends
    first; stars appear nowhere else.
    """
    if len(s) == 0:
        return False
    try:
        syms = [StateSymbol(x) for x in s]
    except ValueError:
        return False
    owed = 0
    for sym in syms:
        if owed > 0:
            if sym is not STAR:
                return False
            owed -= 1
        elif sym is STAR:
            return False
        elif sym is MINUS:
            owed = m - 1
    return True


def to_binary(s) -> tuple[int, ...]:
    return tuple(1 if StateSymbol(x) is PLUS else 0 for x in s)


@lru_cache(maxsize=64)
def _binary_values(n: int, m: int) -> np.ndarray:
    """Integer value of each channel's binary image (first symbol most significant)."""
    dtype = np.int64 if n <= 62 else object
    levels = {0: np.zeros(1, dtype=dtype)}
    for k in range(1, n + 1):
        prev = levels[k - 1]
        n_back = code_length(k - m, m)
        cur = np.concatenate([2 * prev[:n_back] + 1, 2 * prev[n_back:], 2 * prev[:n_back]])
        levels[k] = cur
        levels.pop(k - m, None)
    out = levels[n]
    out.setflags(write=False)
    return out


def binary_values(n: int, m: int, budget: int = DEFAULT_STATE_BUDGET) -> np.ndarray:
    _check_budget(n, m, budget)
    return _binary_values(n, m)


def decode_order(n: int, m: int, budget: int = DEFAULT_STATE_BUDGET) -> np.ndarray:
    """0-based channel indices listed in the order they are decoded."""
    return np.argsort(binary_values(n, m, budget), kind="stable")


def bit_reversed_order(n: int, m: int, budget: int = DEFAULT_STATE_BUDGET) -> np.ndarray:
    """``pi`` as an array: ``pi[i-1]`` is the 1-based decode position of channel ``i``."""
    order = decode_order(n, m, budget)
    pi = np.empty(len(order), dtype=np.int64)
    pi[order] = np.arange(1, len(order) + 1)
    return pi


@dataclass(frozen=True)
class OrderedCodeIndex:
    channel_index: int
    binary: tuple[int, ...]
    pi: int


def ordered_index(n: int, m: int, i: int) -> OrderedCodeIndex:
    return OrderedCodeIndex(i, to_binary(state_vector(n, m, i)), int(bit_reversed_order(n, m)[i - 1]))


@dataclass(frozen=True)
class TypeClassTable:
    """Exact number of valid state vectors per count ``k`` of minus symbols."""

    m: int
    n: int
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)


@lru_cache(maxsize=128)
def count_type_classes(n: int, m: int) -> TypeClassTable:
    """Dynamic program over the state automaton.

    Automaton state ``r`` is the number of stars still owed to the last minus;
    per state we keep a list indexed by the number of minus symbols so far.
    """
    if n < 0:
        raise ValueError("level must be >= 0")
    if n == 0:
        return TypeClassTable(m, 0, (1,))
    kmax = n // m + 1
    dp = [[0] * (kmax + 1) for _ in range(m)]
    dp[0][0] = 1
    for _ in range(n):
        nxt = [[0] * (kmax + 1) for _ in range(m)]
        free = dp[0]
        for k, c in enumerate(free):
            if c:
                nxt[0][k] += c
                nxt[m - 1][k + 1] += c
        for r in range(1, m):
            for k, c in enumerate(dp[r]):
                if c:
                    nxt[r - 1][k] += c
        dp = nxt
    counts = [sum(dp[r][k] for r in range(m)) for k in range(kmax + 1)]
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return TypeClassTable(m, n, tuple(counts))


def typical_mass(n: int, m: int, eps: float) -> float:
    """Fraction of the ``N(n, m)`` branches whose minus frequency is within
    ``eps`` of its typical value."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    table = count_type_classes(n, m)
    p_minus = typical_frequencies(m)[1]
    inside = sum(c for k, c in enumerate(table.counts) if abs(k / n - p_minus) <= eps)
    return inside / table.total
