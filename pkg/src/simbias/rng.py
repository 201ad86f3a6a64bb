"""Counter-based random streams built on the SplitMix64 mixer.

Every draw ``i`` of an experiment with master seed ``m`` owns the stream
``SplitMix64(state=draw_seed(m, i))``. Nothing is carried between draws, so a
draw's randomness depends only on ``(m, i)``: shards can be laid out any way,
run anywhere, and still agree bit for bit. All arithmetic is modulo 2**64 on
unsigned integers, which numpy reproduces identically on every platform.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def mix64(z):
    """SplitMix64 finalizer, elementwise on uint64 arrays."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _as_u64(value: int) -> np.uint64:
    return np.uint64(int(value) & _MASK)


def draw_seeds(master_seed: int, start: int, stop: int) -> np.ndarray:
    """Seeds of draws ``start .. stop-1``: mix(mix(master) + (i + 1) * golden)."""
    idx = np.arange(start, stop, dtype=np.uint64) + np.uint64(1)
    base = mix64(_as_u64(master_seed))
    with np.errstate(over="ignore"):
        return mix64(base + idx * GOLDEN)


def draw_seed(master_seed: int, index: int) -> int:
    return int(draw_seeds(master_seed, index, index + 1)[0])


def stream(seeds, count: int) -> np.ndarray:
    """First ``count`` SplitMix64 outputs for each seed; shape (len(seeds), count)."""
    seeds = np.atleast_1d(np.asarray(seeds, dtype=np.uint64))
    steps = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(seeds[:, None] + steps[None, :] * GOLDEN)


def uniforms(seeds, count: int) -> np.ndarray:
    """Doubles in [0, 1) from the top 53 bits of each stream word."""
    return (stream(seeds, count) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def normals(seeds, count: int) -> np.ndarray:
    """Standard normals by Box-Muller, two stream words per value."""
    u = uniforms(seeds, 2 * count)
    u1 = 1.0 - u[:, 0::2]  # (0, 1], keeps log finite
    u2 = u[:, 1::2]
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def below(seeds, count: int, bound: int) -> np.ndarray:
    """Integers uniform on [0, bound) using the multiply-high method on 32 bits."""
    hi = stream(seeds, count) >> np.uint64(32)
    return ((hi * np.uint64(bound)) >> np.uint64(32)).astype(np.int64)


def seed_from_int(seed: int) -> np.uint64:
    """Map an arbitrary Python int onto a stream seed."""
    return mix64(_as_u64(seed))
