"""RNA secondary structures by Nussinov base-pair maximisation.

``nussinov_fold`` is the readable reference. ``fold_batch`` is the same
recurrence and traceback compiled with numba, used for sampling and
enumeration; the test-suite holds the two to exact agreement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numba
import numpy as np

from simbias import rng
from simbias.core import InvalidArgument, encode_dotbracket
from simbias.maps.base import CHUNK, MapSpec, register

NUCLEOTIDES = "ACGU"
DEFAULT_PAIRS = ("AU", "UA", "GC", "CG", "GU", "UG")
_NUC_INDEX = {c: i for i, c in enumerate(NUCLEOTIDES)}


@register
@dataclass(frozen=True)
class RnaSpec(MapSpec):
    seq_length: int = 35
    min_loop: int = 3
    pair_rules: tuple[str, ...] = field(default=DEFAULT_PAIRS)

    kind = "rna"

    @property
    def output_length(self) -> int:
        return 2 * self.seq_length

    def validate(self):
        errors = []
        if self.seq_length < 1:
            errors.append(("seq_length", "must be >= 1"))
        if self.min_loop < 0:
            errors.append(("min_loop", "must be >= 0"))
        for rule in self.pair_rules:
            if len(rule) != 2 or not set(rule) <= set(NUCLEOTIDES):
                errors.append(("pair_rules", f"bad pair {rule!r}"))
        return errors

    def pair_matrix(self) -> np.ndarray:
        m = np.zeros((4, 4), dtype=np.bool_)
        for a, b in self.pair_rules:
            m[_NUC_INDEX[a], _NUC_INDEX[b]] = True
        return m

    def structures(self, seqs: np.ndarray) -> np.ndarray:
        return fold_batch(np.ascontiguousarray(seqs, dtype=np.int8), self.min_loop, self.pair_matrix())

    def outputs(self, seeds):
        seqs = rng.below(seeds, self.seq_length, 4)
        return structures_to_bits(self.structures(seqs))

    def input_space_size(self):
        return 4**self.seq_length

    def enumerate_outputs(self) -> Iterator[np.ndarray]:
        total = self.input_space_size()
        shifts = 2 * np.arange(self.seq_length - 1, -1, -1, dtype=np.int64)
        for lo in range(0, total, CHUNK):
            codes = np.arange(lo, min(lo + CHUNK, total), dtype=np.int64)
            seqs = (codes[:, None] >> shifts[None, :]) & 3
            yield structures_to_bits(self.structures(seqs))

    @classmethod
    def from_dict(cls, d):
        rules = d.get("pair_rules", DEFAULT_PAIRS)
        if isinstance(rules, str):
            rules = rules.replace(",", " ").split()
        return cls(
            seq_length=int(d.get("seq_length", 35)),
            min_loop=int(d.get("min_loop", 3)),
            pair_rules=tuple(rules),
        )


def structures_to_bits(structs: np.ndarray) -> np.ndarray:
    """'.' -> 00, '(' -> 01, ')' -> 10, matching :func:`encode_dotbracket`."""
    bits = np.empty((structs.shape[0], 2 * structs.shape[1]), dtype=np.uint8)
    bits[:, 0::2] = structs == 2
    bits[:, 1::2] = structs == 1
    return bits


def _check_seq(seq: str) -> None:
    bad = set(seq) - set(NUCLEOTIDES)
    if bad:
        raise InvalidArgument(f"foreign nucleotide(s) {sorted(bad)}")
    if not seq:
        raise InvalidArgument("empty sequence")


def nussinov_fold(seq: str, spec: RnaSpec | None = None) -> str:
    """Maximum base-pair structure of ``seq`` in dot-bracket notation.

    ``best[i][j]`` is the largest pair count on ``seq[i:j]``. Traceback
    prefers leaving ``i`` unpaired, then the smallest partner index.
    """
    spec = spec or RnaSpec(seq_length=len(seq))
    _check_seq(seq)
    pairs = set(spec.pair_rules)
    n, loop = len(seq), spec.min_loop
    best = [[0] * (n + 1) for _ in range(n + 1)]

    def options(i, j):
        for k in range(i + loop + 1, j):
            if seq[i] + seq[k] in pairs:
                yield k, 1 + best[i + 1][k] + best[k + 1][j]

    for span in range(loop + 2, n + 1):
        for i in range(0, n - span + 1):
            j = i + span
            value = best[i + 1][j]
            for _, v in options(i, j):
                value = max(value, v)
            best[i][j] = value

    out = ["."] * n
    stack = [(0, n)]
    while stack:
        i, j = stack.pop()
        if j - i < loop + 2:
            continue
        if best[i][j] == best[i + 1][j]:
            stack.append((i + 1, j))
            continue
        for k, v in options(i, j):
            if v == best[i][j]:
                out[i], out[k] = "(", ")"
                stack.append((k + 1, j))
                stack.append((i + 1, k))
                break
    return "".join(out)


@numba.njit(cache=True)
def _fold_one(seq, loop, pairs, best, out, stack):
    n = seq.shape[0]
    for i in range(n + 1):
        for j in range(n + 1):
            best[i, j] = 0
    for span in range(loop + 2, n + 1):
        for i in range(0, n - span + 1):
            j = i + span
            value = best[i + 1, j]
            for k in range(i + loop + 1, j):
                if pairs[seq[i], seq[k]]:
                    v = 1 + best[i + 1, k] + best[k + 1, j]
                    if v > value:
                        value = v
            best[i, j] = value
    for i in range(n):
        out[i] = 0
    stack[0, 0] = 0
    stack[0, 1] = n
    top = 1
    while top > 0:
        top -= 1
        i = stack[top, 0]
        j = stack[top, 1]
        if j - i < loop + 2:
            continue
        if best[i, j] == best[i + 1, j]:
            stack[top, 0] = i + 1
            stack[top, 1] = j
            top += 1
            continue
        for k in range(i + loop + 1, j):
            if pairs[seq[i], seq[k]] and 1 + best[i + 1, k] + best[k + 1, j] == best[i, j]:
                out[i] = 1
                out[k] = 2
                stack[top, 0] = k + 1
                stack[top, 1] = j
                stack[top + 1, 0] = i + 1
                stack[top + 1, 1] = k
                top += 2
                break


@numba.njit(cache=True)
def fold_batch(seqs, loop, pairs):
    """Fold each row of an (N, L) array of nucleotide codes 0..3.

    Returns an (N, L) int8 array of symbol codes (0 '.', 1 '(', 2 ')').
    """
    m, n = seqs.shape
    result = np.zeros((m, n), dtype=np.int8)
    best = np.zeros((n + 2, n + 2), dtype=np.int32)
    stack = np.zeros((2 * n + 2, 2), dtype=np.int64)
    for r in range(m):
        _fold_one(seqs[r], loop, pairs, best, result[r], stack)
    return result


def rna_sequence(spec: RnaSpec, seed: int) -> str:
    codes = rng.below(np.uint64(seed & (2**64 - 1)), spec.seq_length, 4)[0]
    return "".join(NUCLEOTIDES[c] for c in codes)


def rna_map(spec: RnaSpec, seed: int) -> str:
    return encode_dotbracket(nussinov_fold(rna_sequence(spec, seed), spec))
