"""Random polynomial curves on (0, 1), binarised by the up/down method."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from simbias import rng
from simbias.core import InvalidArgument
from simbias.maps.base import MapSpec, register


def updown_discretize(values: Sequence[float]) -> str:
    """Bit j is 1 when values[j+1] > values[j]; a tie gives 0."""
    if len(values) < 2:
        raise InvalidArgument("up/down discretisation needs at least 2 values")
    v = np.asarray(values, dtype=float)
    return "".join("1" if up else "0" for up in (v[1:] > v[:-1]))


@register
@dataclass(frozen=True)
class PolynomialSpec(MapSpec):
    degree: int = 14
    coefficient_std: float = 1.0
    grid_points: int = 17

    kind = "polynomial"

    @property
    def output_length(self) -> int:
        return self.grid_points - 1

    def validate(self):
        errors = []
        if self.degree < 1:
            errors.append(("degree", "must be >= 1"))
        if not self.coefficient_std > 0:
            errors.append(("coefficient_std", "must be > 0"))
        if self.grid_points < 2:
            errors.append(("grid_points", "must be >= 2"))
        return errors

    def abscissae(self) -> np.ndarray:
        return np.arange(1, self.grid_points + 1) / (self.grid_points + 1)

    def coefficients(self, seeds) -> np.ndarray:
        return self.coefficient_std * rng.normals(seeds, self.degree)

    def curves(self, seeds) -> np.ndarray:
        x = self.abscissae()
        powers = x[:, None] ** np.arange(1, self.degree + 1)[None, :]
        return self.coefficients(seeds) @ powers.T

    def outputs(self, seeds):
        y = self.curves(seeds)
        return (y[:, 1:] > y[:, :-1]).astype(np.uint8)

    @classmethod
    def from_dict(cls, d):
        return cls(
            degree=int(d.get("degree", 14)),
            coefficient_std=float(d.get("coefficient_std", 1.0)),
            grid_points=int(d.get("grid_points", 17)),
        )


def polynomial_map(spec: PolynomialSpec, seed: int) -> str:
    y = spec.curves(np.uint64(seed & (2**64 - 1)))[0]
    return updown_discretize(y)
