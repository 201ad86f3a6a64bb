from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np

from simbias import rng
from simbias.core import InvalidArgument, check_bits
from simbias.maps.base import MapSpec, register


@register
@dataclass(frozen=True)
class BernoulliSpec(MapSpec):
    """n independent bits, each 1 with probability p."""

    n: int
    p: float

    kind = "bernoulli"

    @property
    def output_length(self) -> int:
        return self.n

    def validate(self):
        errors = []
        if self.n < 1:
            errors.append(("n", "must be >= 1"))
        if not 0 < self.p < 1:
            errors.append(("p", "must lie in (0, 1)"))
        return errors

    def outputs(self, seeds):
        return (rng.uniforms(seeds, self.n) < self.p).astype(np.uint8)

    def input_space_size(self):
        return 2**self.n

    def exact_masses(self) -> Iterator[tuple[str, float]]:
        """Every output with its exact probability; the input measure is not uniform."""
        for bits in product("01", repeat=self.n):
            x = "".join(bits)
            yield x, bernoulli_exact(self, x)

    @classmethod
    def from_dict(cls, d):
        return cls(n=int(d["n"]), p=float(d["p"]))


def bernoulli_map(spec: BernoulliSpec, seed: int) -> str:
    row = spec.outputs(np.uint64(seed & (2**64 - 1)))[0]
    return "".join(map(str, row.tolist()))


def bernoulli_exact(spec: BernoulliSpec, x: str) -> float:
    check_bits(x)
    if len(x) != spec.n:
        raise InvalidArgument(f"length {len(x)} != n={spec.n}")
    k = x.count("1")
    return spec.p**k * (1.0 - spec.p) ** (spec.n - k)
