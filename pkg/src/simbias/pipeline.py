"""Full experiment run: distribution -> fit -> analyses -> artifact files.

Files are written to a staging directory next to the output directory and
moved into place only when every stage has succeeded, so a failed run leaves
nothing half-written behind.
"""

from __future__ import annotations

import hashlib
import json
import logging
import shutil
import tempfile
from pathlib import Path

from simbias import analysis as an
from simbias.config import ExperimentConfig
from simbias.sampling import OutputDistribution, enumerate_distribution, sample_distribution

log = logging.getLogger(__name__)

MANIFEST = "manifest.json"


class StageError(RuntimeError):
    """A pipeline stage failed; the message names the module."""


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def build_distribution(cfg: ExperimentConfig) -> OutputDistribution:
    s = cfg.sampling
    if s.enumerate:
        return enumerate_distribution(cfg.map, budget=s.budget)
    return sample_distribution(cfg.map, s.n_samples, s.master_seed, s.n_shards, s.workers)


def distribution_text(dist: OutputDistribution, config_digest: str | None) -> str:
    text = dist.to_text()
    if config_digest is None:
        return text
    header, _, body = text.partition("\n")
    return f"{header}\n# config={config_digest}\n{body}"


def config_digest_of(path) -> str | None:
    """The ``# config=`` digest carried by an artifact file, if any."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        return data.get("config") if isinstance(data, dict) else None
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        if line.startswith("# config="):
            return line.split("=", 1)[1].strip()
    return None


def check_same_config(*paths) -> str | None:
    """Reject artifact sets whose config digests disagree."""
    seen = {p: d for p in paths if (d := config_digest_of(p)) is not None}
    if len(set(seen.values())) > 1:
        raise StageError(f"analysis: artifacts come from different configs: {seen}")
    return next(iter(seen.values()), None)


def _csv(header: str, rows, digest: str) -> str:
    return "\n".join([f"# config={digest}", header, *rows]) + "\n"


def write_analysis(dist: OutputDistribution, cfg: ExperimentConfig, digest: str, out: Path) -> list[str]:
    a = cfg.analysis
    written = []

    def put(name, text):
        (out / name).write_text(text)
        written.append(name)

    fit = an.fit_bound(dist, a.fit_mode)
    put("fit.json", dumps({"config": digest, "map": dist.map_digest, **fit.to_dict()}))
    points = an.scatter(dist, fit)
    put(
        "scatter.csv",
        _csv("output,k,log2p,deficit", (f"{p.output},{p.k!r},{p.log2p!r},{p.deficit!r}" for p in points), digest),
    )
    rank_rows = [
        f"{k!r},{r},{an.log2_prob(dist, x)!r}" for k, group in an.rank_groups(dist).items() for r, x, _ in group
    ]
    put("rank.csv", _csv("k,rank,log2p", rank_rows, digest))

    for mode in a.pair_modes:
        report = an.pair_prediction_experiment(dist, mode, a.n_pairs, a.pair_seed)
        put(f"pairs_{mode}.json", dumps({"config": digest, **report.to_dict()}))

    k = None if a.k == "auto" else float(a.k)
    for stat in a.statistics:
        try:
            payload = an.correlation_report(dist, k, stat).to_dict()
        except an.InsufficientData as exc:
            payload = {"statistic": stat, "k": k, "outcome": "insufficient-data", "reason": str(exc)}
        put(f"correlation_{stat}.json", dumps({"config": digest, **payload}))

    if fit.fit_mode == an.ENVELOPE:
        deltas = an.default_deltas(dist, fit, a.delta_step)
        profile = an.mass_deficit_profile(dist, fit, deltas)
        put("mass_profile.csv", _csv("delta,mass", (f"{d!r},{m!r}" for d, m in profile), digest))
        summary = {"config": digest, "deficit_constant": an.deficit_constant(profile)}
        try:
            summary["mean_decay_rate"] = an.mean_decay_rate(dist, fit)
        except an.InsufficientData:
            summary["mean_decay_rate"] = None
        put("mass_summary.json", dumps(summary))
        lklp = an.lklp_select(dist, fit, a.lklp_delta, a.lklp_quantile)
        put("lklp.txt", "\n".join([f"# config={digest}", *lklp]) + "\n")
    return written


def run_pipeline(cfg: ExperimentConfig, out_dir=None) -> Path:
    """Run every stage and return the path of the manifest."""
    out = Path(out_dir or cfg.output.directory)
    out.mkdir(parents=True, exist_ok=True)
    digest = cfg.digest()
    staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=out))
    try:
        try:
            dist = build_distribution(cfg)
        except Exception as exc:
            raise StageError(f"sampling: {exc}") from exc
        (staging / "distribution.txt").write_text(distribution_text(dist, digest))
        names = ["distribution.txt"]
        try:
            names += write_analysis(dist, cfg, digest, staging)
        except Exception as exc:
            raise StageError(f"analysis: {exc}") from exc
        manifest = {
            "config": digest,
            "artifacts": {n: sha256_file(staging / n) for n in sorted(names)},
        }
        (staging / MANIFEST).write_text(dumps(manifest))
        for n in names + [MANIFEST]:
            (staging / n).replace(out / n)
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    log.info("wrote %d artifacts to %s", len(names) + 1, out)
    return out / MANIFEST
