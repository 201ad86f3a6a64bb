"""Deterministic length-preserving finite state transducers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from simbias import rng
from simbias.core import InvalidArgument, check_bits
from simbias.maps.base import CHUNK, MapSpec, register

# transitions[state][bit] == (next_state, output_bit)
Table = tuple[tuple[tuple[int, int], tuple[int, int]], ...]


@register
@dataclass(frozen=True)
class FstSpec(MapSpec):
    num_states: int
    transitions: Table
    input_length: int = 30
    start_state: int = 0

    kind = "fst"

    @property
    def output_length(self) -> int:
        return self.input_length

    def validate(self):
        errors = []
        if self.num_states < 1:
            errors.append(("num_states", "must be >= 1"))
        if self.input_length < 1:
            errors.append(("input_length", "must be >= 1"))
        if not 0 <= self.start_state < max(self.num_states, 1):
            errors.append(("start_state", "out of range"))
        if len(self.transitions) != self.num_states:
            errors.append(("transitions", f"need one row per state, got {len(self.transitions)}"))
        for s, row in enumerate(self.transitions):
            if len(row) != 2:
                errors.append(("transitions", f"state {s} must have entries for bits 0 and 1"))
                continue
            for nxt, out in row:
                if not 0 <= nxt < self.num_states or out not in (0, 1):
                    errors.append(("transitions", f"bad entry {(nxt, out)} in state {s}"))
        return errors

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        t = np.asarray(self.transitions, dtype=np.int64).reshape(self.num_states, 2, 2)
        return t[:, :, 0], t[:, :, 1].astype(np.uint8)

    def run(self, inputs: np.ndarray) -> np.ndarray:
        """Apply to an (N, input_length) array of input bits."""
        nxt, out = self.tables()
        inputs = np.asarray(inputs, dtype=np.int64)
        state = np.full(len(inputs), self.start_state, dtype=np.int64)
        result = np.empty(inputs.shape, dtype=np.uint8)
        for t in range(inputs.shape[1]):
            b = inputs[:, t]
            result[:, t] = out[state, b]
            state = nxt[state, b]
        return result

    def outputs(self, seeds):
        bits = rng.stream(seeds, self.input_length) >> np.uint64(63)
        return self.run(bits)

    def input_space_size(self):
        return 2**self.input_length

    def enumerate_outputs(self) -> Iterator[np.ndarray]:
        total = self.input_space_size()
        shifts = np.arange(self.input_length - 1, -1, -1, dtype=np.int64)
        for lo in range(0, total, CHUNK):
            codes = np.arange(lo, min(lo + CHUNK, total), dtype=np.int64)
            yield self.run((codes[:, None] >> shifts[None, :]) & 1)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if "transitions" not in d:
            return fst_random(int(d["num_states"]), int(d.get("input_length", 30)), int(d["fst_seed"]))
        table = parse_table(d["transitions"]) if isinstance(d["transitions"], str) else d["transitions"]
        return cls(
            num_states=int(d["num_states"]),
            transitions=tuple(tuple(tuple(int(v) for v in e) for e in row) for row in table),
            input_length=int(d.get("input_length", 30)),
            start_state=int(d.get("start_state", 0)),
        )


def parse_table(text: str) -> Table:
    """Parse ``"n0/o0 n1/o1; ..."``, one ``;``-separated group per state."""
    rows = []
    for group in text.split(";"):
        entries = group.split()
        if len(entries) != 2:
            raise InvalidArgument(f"transition group {group!r} needs two entries")
        rows.append(tuple(tuple(int(v) for v in e.split("/")) for e in entries))
    return tuple(rows)


def format_table(table: Table) -> str:
    return "; ".join(" ".join(f"{n}/{o}" for n, o in row) for row in table)


def fst_random(num_states: int, input_length: int, seed: int) -> FstSpec:
    """Uniformly random transition table, reproducible from ``seed``."""
    if num_states < 1:
        raise InvalidArgument("num_states must be >= 1")
    s = rng.seed_from_int(seed)
    nxt = rng.below(s, 2 * num_states, num_states)[0]
    out = rng.below(rng.seed_from_int(seed ^ 0x5A5A5A5A), 2 * num_states, 2)[0]
    table = tuple(
        ((int(nxt[2 * q]), int(out[2 * q])), (int(nxt[2 * q + 1]), int(out[2 * q + 1])))
        for q in range(num_states)
    )
    return FstSpec(num_states, table, input_length=input_length).check()


def fst_apply(spec: FstSpec, input_bits: str) -> str:
    check_bits(input_bits)
    if len(input_bits) != spec.input_length:
        raise InvalidArgument(f"input length {len(input_bits)} != {spec.input_length}")
    row = spec.run(np.array([[int(b) for b in input_bits]]))[0]
    return "".join(map(str, row.tolist()))
