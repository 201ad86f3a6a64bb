"""Complexity-based probability assignment: P(x) proportional to 2**-K(x).

This is a computable stand-in for conditional algorithmic probability. It
scores continuations by the complexity of the whole extended string, so it
inherits every low-complexity, low-probability blind spot of the estimator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from simbias.core import InvalidArgument, check_bits, ktilde


@dataclass(frozen=True)
class NextBitForecast:
    p0: float
    p1: float
    k0: float
    k1: float

    @property
    def best(self) -> str:
        """Most probable next bit; 0 on a tie."""
        return "1" if self.p1 > self.p0 else "0"


def next_bit(history: str) -> NextBitForecast:
    check_bits(history)
    k0 = ktilde(history + "0")
    k1 = ktilde(history + "1")
    # 2**-k0 / (2**-k0 + 2**-k1), written to avoid underflow for long strings
    p0 = 1.0 / (1.0 + 2.0 ** (k0 - k1))
    return NextBitForecast(p0, 1.0 - p0, k0, k1)


def extrapolate(history: str, horizon: int) -> str:
    """``history`` extended greedily by its most probable next bit, ``horizon`` times."""
    if horizon < 1:
        raise InvalidArgument("horizon must be >= 1")
    check_bits(history)
    s = history
    for _ in range(horizon):
        s += next_bit(s).best
    return s


def guess_order(candidates: Iterable[str]) -> list[str]:
    """Candidates from most to least probable under 2**-K; ties broken lexicographically."""
    unique = set(candidates)
    if not unique:
        raise InvalidArgument("no candidates to rank")
    for x in unique:
        check_bits(x)
    return sorted(unique, key=lambda x: (ktilde(x), x))
