"""Experiment configuration files.

INI layout with four sections::

    [map]
    type = polynomial
    degree = 14

    [sampling]
    n_samples = 100000      ; or: enumerate = true
    master_seed = 0
    n_shards = 1

    [analysis]
    fit_mode = envelope
    pair_modes = weighted, uniform
    ...

    [output]
    directory = out

Every problem is reported as ``(field path, message)``, e.g. ``("map.p", ...)``.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from simbias.analysis import APRIORI, ENVELOPE, STATISTICS, UNIFORM, WEIGHTED
from simbias.core import InvalidArgument
from simbias.maps import REGISTRY, MapSpec, map_from_dict
from simbias.maps.fst import format_table

SECTIONS = ("map", "sampling", "analysis", "output")


class ConfigError(ValueError):
    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{f}: {m}" for f, m in errors))


@dataclass(frozen=True)
class SamplingConfig:
    enumerate: bool = False
    n_samples: int = 100_000
    master_seed: int = 0
    n_shards: int = 1
    workers: int = 1
    budget: int = 1 << 26


@dataclass(frozen=True)
class AnalysisConfig:
    fit_mode: str = ENVELOPE
    pair_modes: tuple[str, ...] = (WEIGHTED, UNIFORM)
    n_pairs: int = 10_000
    pair_seed: int = 0
    statistics: tuple[str, ...] = ("changes", "ones")
    k: str = "auto"
    delta_step: float = 1.0
    lklp_delta: float = 5.0
    lklp_quantile: float = 0.5


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"


@dataclass(frozen=True)
class ExperimentConfig:
    map: MapSpec
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def digest(self) -> str:
        """Content digest of everything that can change results.

        Shard count and worker count are left out: sampled counts do not
        depend on them, and their artifacts must stay interchangeable.
        """
        d = {
            "map": self.map.to_dict(),
            "sampling": {
                k: v
                for k, v in dataclasses.asdict(self.sampling).items()
                if k not in ("n_shards", "workers")
            },
            "analysis": dataclasses.asdict(self.analysis),
        }
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _map_section(spec: MapSpec) -> dict[str, str]:
    out = {"type": spec.kind}
    for f in dataclasses.fields(spec):
        value = getattr(spec, f.name)
        if f.name == "transitions":
            out[f.name] = format_table(value)
        elif isinstance(value, tuple):
            out[f.name] = ", ".join(value)
        else:
            out[f.name] = str(value)
    return out


def _plain_section(obj) -> dict[str, str]:
    out = {}
    for f in dataclasses.fields(obj):
        value = getattr(obj, f.name)
        if isinstance(value, tuple):
            value = ", ".join(value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        out[f.name] = str(value)
    return out


def serialize(cfg: ExperimentConfig) -> str:
    parser = configparser.ConfigParser(interpolation=None)
    parser["map"] = _map_section(cfg.map)
    parser["sampling"] = _plain_section(cfg.sampling)
    parser["analysis"] = _plain_section(cfg.analysis)
    parser["output"] = _plain_section(cfg.output)
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def _convert(kind, raw: str):
    if kind is bool:
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if kind == "tuple[str, ...]":
        return tuple(p.strip() for p in raw.split(",") if p.strip())
    return kind(raw.strip())


_KINDS = {"bool": bool, "int": int, "float": float, "str": str}


def _read_section(cls, section, errors: list, name: str):
    values = {}
    known = {f.name: f for f in dataclasses.fields(cls)}
    for key, raw in section.items():
        if key not in known:
            errors.append((f"{name}.{key}", "unknown field"))
            continue
        kind = known[key].type
        try:
            values[key] = _convert(_KINDS.get(kind, kind), raw)
        except ValueError as exc:
            errors.append((f"{name}.{key}", str(exc)))
    return values


def _check_ranges(sampling: dict, analysis: dict, errors: list) -> None:
    def bad(path, msg):
        errors.append((path, msg))

    if sampling.get("n_samples", 1) < 1:
        bad("sampling.n_samples", "must be >= 1")
    if sampling.get("n_shards", 1) < 1:
        bad("sampling.n_shards", "must be >= 1")
    if sampling.get("workers", 1) < 1:
        bad("sampling.workers", "must be >= 1")
    if sampling.get("budget", 1) < 1:
        bad("sampling.budget", "must be >= 1")
    if analysis.get("fit_mode", ENVELOPE) not in (APRIORI, ENVELOPE):
        bad("analysis.fit_mode", "must be 'apriori' or 'envelope'")
    for m in analysis.get("pair_modes", ()):
        if m not in (WEIGHTED, UNIFORM):
            bad("analysis.pair_modes", f"unknown mode {m!r}")
    for s in analysis.get("statistics", ()):
        if s not in STATISTICS:
            bad("analysis.statistics", f"unknown statistic {s!r}")
    if analysis.get("n_pairs", 1) < 1:
        bad("analysis.n_pairs", "must be >= 1")
    k = analysis.get("k", "auto")
    if k != "auto":
        try:
            float(k)
        except ValueError:
            bad("analysis.k", "must be 'auto' or a number")
    if not analysis.get("delta_step", 1.0) > 0:
        bad("analysis.delta_step", "must be > 0")
    if analysis.get("lklp_delta", 1.0) < 0:
        bad("analysis.lklp_delta", "must be >= 0")
    if not 0 < analysis.get("lklp_quantile", 0.5) <= 1:
        bad("analysis.lklp_quantile", "must lie in (0, 1]")


def _parse_map(section, errors: list) -> MapSpec | None:
    raw = dict(section)
    kind = raw.get("type")
    if kind is None:
        errors.append(("map.type", "missing"))
        return None
    if kind not in REGISTRY:
        errors.append(("map.type", f"unknown map type {kind!r}; expected one of {sorted(REGISTRY)}"))
        return None
    cls = REGISTRY[kind]
    allowed = {f.name for f in dataclasses.fields(cls)} | {"type", "fst_seed"}
    for key in raw:
        if key not in allowed:
            errors.append((f"map.{key}", "unknown field"))
    simple = {f.name: _KINDS[f.type] for f in dataclasses.fields(cls) if f.type in _KINDS}
    simple["fst_seed"] = int
    bad_values = False
    for key, kind in simple.items():
        if key in raw:
            try:
                kind(raw[key].strip())
            except ValueError:
                errors.append((f"map.{key}", f"not a valid {kind.__name__}: {raw[key]!r}"))
                bad_values = True
    if bad_values:
        return None
    try:
        spec = map_from_dict(raw)
    except KeyError as exc:
        errors.append((f"map.{exc.args[0]}", "missing"))
        return None
    except (ValueError, InvalidArgument) as exc:
        errors.append(("map", str(exc)))
        return None
    field_errors = spec.validate()
    errors.extend((f"map.{f}", m) for f, m in field_errors)
    return None if field_errors else spec


def parse_text(text: str) -> tuple[ExperimentConfig | None, list[tuple[str, str]]]:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        return None, [("<file>", str(exc).splitlines()[0])]
    errors: list[tuple[str, str]] = []
    for name in parser.sections():
        if name not in SECTIONS:
            errors.append((name, "unknown section"))
    if "map" not in parser:
        errors.append(("map", "missing section"))
        spec = None
    else:
        spec = _parse_map(parser["map"], errors)
    empty = {}
    sampling = _read_section(SamplingConfig, parser["sampling"] if "sampling" in parser else empty, errors, "sampling")
    analysis = _read_section(AnalysisConfig, parser["analysis"] if "analysis" in parser else empty, errors, "analysis")
    output = _read_section(OutputConfig, parser["output"] if "output" in parser else empty, errors, "output")
    _check_ranges(sampling, analysis, errors)
    if errors or spec is None:
        return None, errors
    cfg = ExperimentConfig(spec, SamplingConfig(**sampling), AnalysisConfig(**analysis), OutputConfig(**output))
    return cfg, []


def parse(text: str) -> ExperimentConfig:
    cfg, errors = parse_text(text)
    if errors:
        raise ConfigError(errors)
    return cfg


def validate_config(path) -> list[tuple[str, str]]:
    """All problems found in the file at ``path``; an empty list means it is valid."""
    text = Path(path).read_text()
    return parse_text(text)[1]


def load(path) -> ExperimentConfig:
    return parse(Path(path).read_text())
