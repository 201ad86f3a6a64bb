from __future__ import annotations

import dataclasses
import hashlib
import json
from typing import Any, ClassVar, Iterator

import numpy as np

from simbias.core import InvalidArgument

DEFAULT_ENUM_BUDGET = 1 << 26
CHUNK = 1 << 16

REGISTRY: dict[str, type["MapSpec"]] = {}


class UnsupportedOperation(RuntimeError):
    """The requested operation is not available for this map."""


def register(cls):
    REGISTRY[cls.kind] = cls
    return cls


def rows_to_strings(rows: np.ndarray) -> list[str]:
    """(N, L) array of 0/1 values -> list of N canonical bit strings."""
    rows = np.ascontiguousarray(rows, dtype=np.uint8)
    if rows.ndim != 2:
        raise ValueError("expected a 2-d array of bits")
    n, width = rows.shape
    blob = (rows + ord("0")).tobytes().decode("ascii")
    return [blob[i * width : (i + 1) * width] for i in range(n)]


def count_rows(rows: np.ndarray, into: dict[str, int]) -> None:
    """Add the multiset of bit rows to a string -> count mapping."""
    if len(rows) == 0:
        return
    width = rows.shape[1]
    if width <= 63:
        weights = np.uint64(1) << np.arange(width - 1, -1, -1, dtype=np.uint64)
        packed = (rows.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
        codes, counts = np.unique(packed, return_counts=True)
        shifts = np.arange(width - 1, -1, -1, dtype=np.uint64)
        uniq = ((codes[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.uint8)
    else:
        uniq, counts = np.unique(rows, axis=0, return_counts=True)
    for key, c in zip(rows_to_strings(uniq), counts.tolist()):
        into[key] = into.get(key, 0) + c


class MapSpec:
    """Common surface of every generative map.

    Subclasses are frozen dataclasses. ``outputs`` turns an array of stream
    seeds (one per draw) into an ``(N, output_length)`` array of bits; the
    scalar entry points in each map module are thin wrappers around it.
    """

    kind: ClassVar[str]

    @property
    def output_length(self) -> int:
        raise NotImplementedError

    def outputs(self, seeds: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def input_space_size(self) -> int | None:
        """Cardinality of the input space, or None when it is not finite."""
        return None

    def enumerate_outputs(self) -> Iterator[np.ndarray]:
        """Yield chunks of output rows covering every input exactly once."""
        raise UnsupportedOperation(f"{self.kind} map has no finite input space")

    def validate(self) -> list[tuple[str, str]]:
        """(field, message) pairs for every violated invariant."""
        return []

    def check(self):
        errors = self.validate()
        if errors:
            field, msg = errors[0]
            raise InvalidArgument(f"{self.kind}.{field}: {msg}")
        return self

    def to_dict(self) -> dict[str, Any]:
        d = {"type": self.kind}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = json.loads(json.dumps(value))
            d[f.name] = value
        return d

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def map_from_dict(d: dict[str, Any]) -> MapSpec:
    d = dict(d)
    kind = d.pop("type", None)
    if kind not in REGISTRY:
        raise InvalidArgument(f"unknown map type {kind!r}")
    return REGISTRY[kind].from_dict(d)
