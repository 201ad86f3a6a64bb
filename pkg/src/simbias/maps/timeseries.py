"""Real-valued series from CSV files, cut into windows and binarised by the mean.

CSV layout: one series per row, an identifier in the first column and numeric
cells after it. Empty cells are missing values and are dropped.
"""

from __future__ import annotations

import csv
import hashlib
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from simbias import rng
from simbias.core import InvalidArgument
from simbias.maps.base import CHUNK, MapSpec, register

log = logging.getLogger(__name__)


class IngestionError(RuntimeError):
    def __init__(self, message: str, rows: Sequence[int] = ()):
        super().__init__(message)
        self.rows = list(rows)


@dataclass
class Ingested:
    series: list[np.ndarray]
    ids: list[str]
    invalid_rows: list[int] = field(default_factory=list)
    too_short: int = 0


def timeseries_ingest(source, window_length: int = 16, delimiter: str = ",") -> Ingested:
    """Read every valid row of ``source``; rows are numbered from 0.

    Rows with a non-numeric cell are skipped and reported in ``invalid_rows``.
    Series shorter than ``window_length`` after dropping gaps are counted in
    ``too_short``. A file with no valid row at all raises ``IngestionError``.
    """
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise IngestionError(f"cannot read {source}: {exc}") from exc
    result = Ingested([], [])
    rows = list(csv.reader(text.splitlines(), delimiter=delimiter))
    for idx, row in enumerate(rows):
        if not row or not any(cell.strip() for cell in row):
            continue
        try:
            values = [float(c) for c in row[1:] if c.strip()]
        except ValueError:
            result.invalid_rows.append(idx)
            continue
        if not np.all(np.isfinite(values)):
            result.invalid_rows.append(idx)
            continue
        if len(values) < window_length:
            result.too_short += 1
            continue
        result.series.append(np.asarray(values))
        result.ids.append(row[0])
    if result.too_short:
        log.warning("%d series shorter than %d discarded", result.too_short, window_length)
    if result.invalid_rows:
        log.warning("malformed rows skipped: %s", result.invalid_rows)
    if not result.series and result.invalid_rows:
        raise IngestionError(f"no valid series in {source}", result.invalid_rows)
    return result


def mean_discretize(series: Sequence[float], window_length: int | None = None) -> str:
    """Bit i is 1 when series[i] is strictly above the series mean."""
    v = np.asarray(series, dtype=float)
    if window_length is not None and len(v) != window_length:
        raise InvalidArgument(f"series length {len(v)} != window_length {window_length}")
    if len(v) < 1:
        raise InvalidArgument("empty series")
    return "".join("1" if above else "0" for above in (v > v.mean()))


@lru_cache(maxsize=8)
def _windows(source: str, mtime: int, w: int, delimiter: str) -> np.ndarray:
    data = timeseries_ingest(source, w, delimiter)
    parts = [np.lib.stride_tricks.sliding_window_view(s, w) for s in data.series]
    if not parts:
        raise IngestionError(f"no series of length >= {w} in {source}")
    return np.concatenate(parts)


@register
@dataclass(frozen=True)
class TimeSeriesSpec(MapSpec):
    """Every length-``window_length`` window of every ingested series is one input."""

    source: str
    window_length: int = 16
    delimiter: str = ","
    threshold_rule: str = "mean"

    kind = "timeseries"

    @property
    def output_length(self) -> int:
        return self.window_length

    def validate(self):
        errors = []
        if self.window_length < 2:
            errors.append(("window_length", "must be >= 2"))
        if self.threshold_rule != "mean":
            errors.append(("threshold_rule", "only 'mean' is supported"))
        if not Path(self.source).is_file():
            errors.append(("source", f"no such file {self.source!r}"))
        return errors

    def to_dict(self):
        d = super().to_dict()
        # the digest must change when the data file does
        d["source_sha256"] = hashlib.sha256(Path(self.source).read_bytes()).hexdigest()
        return d

    def windows(self) -> np.ndarray:
        path = Path(self.source)
        return _windows(str(path), path.stat().st_mtime_ns, self.window_length, self.delimiter)

    @staticmethod
    def _binarise(windows: np.ndarray) -> np.ndarray:
        return (windows > windows.mean(axis=1, keepdims=True)).astype(np.uint8)

    def outputs(self, seeds):
        windows = self.windows()
        pick = rng.below(seeds, 1, len(windows))[:, 0]
        return self._binarise(windows[pick])

    def input_space_size(self):
        return len(self.windows())

    def enumerate_outputs(self) -> Iterator[np.ndarray]:
        windows = self.windows()
        for lo in range(0, len(windows), CHUNK):
            yield self._binarise(windows[lo : lo + CHUNK])

    @classmethod
    def from_dict(cls, d):
        d = {k: v for k, v in d.items() if k != "source_sha256"}
        return cls(
            source=str(d["source"]),
            window_length=int(d.get("window_length", 16)),
            delimiter=str(d.get("delimiter", ",")),
            threshold_rule=str(d.get("threshold_rule", "mean")),
        )
