"""Bit strings, the LZ76 phrase counter and the adapted complexity estimator.

Bit strings are plain ``str`` objects over ``'0'``/``'1'``; that is also their
canonical on-disk form. Helpers here validate and convert but never wrap.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

BITS = frozenset("01")
DOTBRACKET_CODE = {".": "00", "(": "01", ")": "10"}


class InvalidArgument(ValueError):
    """Raised when an input violates an operation's precondition."""


def check_bits(x: str) -> str:
    if not x:
        raise InvalidArgument("bit string must be non-empty")
    if not BITS.issuperset(x):
        raise InvalidArgument(f"not a bit string: {x!r}")
    return x


def complement(x: str) -> str:
    return x.translate(str.maketrans("01", "10"))


def lz76_phrase_count(s: Sequence) -> int:
    """Number of words in the LZ76 exhaustive history of ``s``.

    Works on any sequence of hashable, comparable symbols (a ``str`` is the
    usual case). Uses the Kaspar-Schuster scan: the current word keeps growing
    while it can be copied from some start position strictly before it, the
    copy being allowed to overlap the word itself. A trailing word that is
    still copyable when the input ends counts as one word.
    """
    n = len(s)
    if n == 0:
        raise InvalidArgument("lz76_phrase_count needs a non-empty sequence")
    if n == 1:
        return 1
    c = 1  # words found so far
    ell = 1  # start of the current word
    i = 0  # candidate copy start
    k = 1  # length of the current match
    k_max = 1
    while True:
        if s[i + k - 1] == s[ell + k - 1]:
            k += 1
            if ell + k > n:
                c += 1
                break
        else:
            k_max = max(k, k_max)
            i += 1
            if i == ell:
                c += 1
                ell += k_max
                if ell + 1 > n:
                    break
                i = 0
                k = 1
                k_max = 1
            else:
                k = 1
    return c


@lru_cache(maxsize=1 << 20)
def ktilde(x: str) -> float:
    """Adapted Lempel-Ziv complexity in bits.

    ``log2(n)`` for the two uniform strings of length ``n``, otherwise
    ``log2(n) * (N(x) + N(reversed x)) / 2`` with ``N`` the LZ76 word count.
    """
    check_bits(x)
    n = len(x)
    scale = math.log2(n)
    if "0" not in x or "1" not in x:
        return scale
    return scale * (lz76_phrase_count(x) + lz76_phrase_count(x[::-1])) / 2


def changes_count(x: str) -> int:
    """Number of adjacent positions where the bit flips."""
    check_bits(x)
    return sum(a != b for a, b in zip(x, x[1:]))


def ones_count(x: str) -> int:
    check_bits(x)
    return x.count("1")


def encode_dotbracket(structure: str, code: dict[str, str] | None = None) -> str:
    """Two bits per dot-bracket symbol: '.' -> 00, '(' -> 01, ')' -> 10."""
    code = DOTBRACKET_CODE if code is None else code
    try:
        return "".join(code[ch] for ch in structure)
    except KeyError as exc:
        raise InvalidArgument(f"foreign dot-bracket symbol {exc.args[0]!r}") from None
