"""Empirical and exact output distributions of a map.

Sampling draws ``n_samples`` outputs, draw ``i`` being a pure function of
``(master_seed, i)`` (see :mod:`simbias.rng`). Shards are contiguous ranges of
draw indices, so the shard count changes how work is split but never the
counts. Enumeration runs every input once.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from simbias import rng
from simbias.core import InvalidArgument, check_bits
from simbias.maps import DEFAULT_ENUM_BUDGET, BernoulliSpec, MapSpec, UnsupportedOperation, count_rows

log = logging.getLogger(__name__)

SAMPLED = "sampled"
ENUMERATED = "enumerated"
BATCH = 1 << 15


@dataclass(frozen=True)
class OutputDistribution:
    counts: Mapping[str, int | float]
    total: int | float
    mode: str
    map_digest: str
    seed: int | None = None
    # global draw-index ranges covered; sampled mode only, not persisted
    ranges: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.mode not in (SAMPLED, ENUMERATED):
            raise InvalidArgument(f"unknown mode {self.mode!r}")

    @classmethod
    def empty(cls, map_digest: str, seed: int | None = None) -> "OutputDistribution":
        return cls({}, 0, SAMPLED, map_digest, seed)

    def __len__(self) -> int:
        return len(self.counts)

    def __contains__(self, x) -> bool:
        return x in self.counts

    def prob(self, x: str) -> float:
        return self.counts.get(x, 0) / self.total

    def probabilities(self) -> dict[str, float]:
        return {x: c / self.total for x, c in self.counts.items()}

    def outputs(self) -> list[str]:
        return sorted(self.counts)

    def to_text(self) -> str:
        seed = "none" if self.seed is None else str(self.seed)
        lines = [f"# map={self.map_digest} seed={seed} mode={self.mode} total={_num(self.total)}"]
        lines += [f"{x},{_num(self.counts[x])}" for x in sorted(self.counts)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OutputDistribution":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("#"):
            raise InvalidArgument("distribution file lacks its header line")
        header = dict(kv.split("=", 1) for kv in lines[0][1:].split())
        counts = {}
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip() or line.startswith("#"):
                continue
            x, _, c = line.partition(",")
            counts[check_bits(x.strip())] = _parse_num(c)
        seed = None if header.get("seed", "none") == "none" else int(header["seed"])
        dist = cls(counts, _parse_num(header["total"]), header["mode"], header["map"], seed)
        if dist.mode == SAMPLED and sum(counts.values()) != dist.total:
            raise InvalidArgument("counts do not sum to the declared total")
        return dist

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> "OutputDistribution":
        return cls.from_text(Path(path).read_text())


def _num(v) -> str:
    return str(v) if isinstance(v, int) else repr(float(v))


def _parse_num(s: str):
    s = s.strip()
    try:
        return int(s)
    except ValueError:
        return float(s)


def shard_ranges(n_samples: int, n_shards: int) -> list[tuple[int, int]]:
    base, extra = divmod(n_samples, n_shards)
    out, lo = [], 0
    for s in range(n_shards):
        hi = lo + base + (s < extra)
        out.append((lo, hi))
        lo = hi
    return out


def sample_range(spec: MapSpec, master_seed: int, start: int, stop: int) -> OutputDistribution:
    """Counts for draws ``start .. stop-1``; one shard's worth of work."""
    counts: dict[str, int] = {}
    for lo in range(start, stop, BATCH):
        seeds = rng.draw_seeds(master_seed, lo, min(lo + BATCH, stop))
        count_rows(spec.outputs(seeds), counts)
    return OutputDistribution(counts, stop - start, SAMPLED, spec.digest(), master_seed, ((start, stop),))


def sample_distribution(
    spec: MapSpec,
    n_samples: int,
    master_seed: int = 0,
    n_shards: int = 1,
    workers: int = 1,
) -> OutputDistribution:
    if n_samples < 1:
        raise InvalidArgument("n_samples must be >= 1")
    if n_shards < 1:
        raise InvalidArgument("n_shards must be >= 1")
    spec.check()
    ranges = [r for r in shard_ranges(n_samples, n_shards) if r[0] < r[1]]
    if workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, os.cpu_count() or 1)) as pool:
            parts = list(pool.map(sample_range, *zip(*[(spec, master_seed, lo, hi) for lo, hi in ranges])))
    else:
        parts = [sample_range(spec, master_seed, lo, hi) for lo, hi in ranges]
    return merge_all(parts)


def enumerate_distribution(spec: MapSpec, budget: int = DEFAULT_ENUM_BUDGET) -> OutputDistribution:
    """Exact distribution over the whole input space.

    Bernoulli maps carry exact probability masses (total 1.0) since their
    inputs are not equally likely; every other map carries integer counts
    over its uniformly weighted inputs.
    """
    spec.check()
    size = spec.input_space_size()
    if size is None:
        raise UnsupportedOperation(f"{spec.kind} map has no finite input space to enumerate")
    if size > budget:
        raise UnsupportedOperation(f"input space of {size} exceeds the enumeration budget {budget}")
    if isinstance(spec, BernoulliSpec):
        return OutputDistribution(dict(spec.exact_masses()), 1.0, ENUMERATED, spec.digest())
    counts: dict[str, int] = {}
    for chunk in spec.enumerate_outputs():
        count_rows(chunk, counts)
    total = sum(counts.values())
    if total != size:
        raise RuntimeError(f"enumeration covered {total} inputs, expected {size}")
    return OutputDistribution(counts, total, ENUMERATED, spec.digest())


def merge(a: OutputDistribution, b: OutputDistribution) -> OutputDistribution:
    if a.map_digest != b.map_digest or a.seed != b.seed:
        raise InvalidArgument("cannot merge distributions with different provenance")
    if a.mode != SAMPLED or b.mode != SAMPLED:
        raise InvalidArgument("only sampled distributions can be merged")
    for lo, hi in a.ranges:
        for lo2, hi2 in b.ranges:
            if lo < hi2 and lo2 < hi:
                raise InvalidArgument(f"draw ranges overlap: {(lo, hi)} and {(lo2, hi2)}")
    counts = dict(a.counts)
    for x, c in b.counts.items():
        counts[x] = counts.get(x, 0) + c
    ranges = tuple(sorted(a.ranges + b.ranges))
    return OutputDistribution(counts, a.total + b.total, SAMPLED, a.map_digest, a.seed, ranges)


def merge_all(parts: Iterable[OutputDistribution]) -> OutputDistribution:
    parts = list(parts)
    if not parts:
        raise InvalidArgument("nothing to merge")
    out = parts[0]
    for p in parts[1:]:
        out = merge(out, p)
    return out
