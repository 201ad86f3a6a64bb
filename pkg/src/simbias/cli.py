"""``simbias`` command line.

Exit status: 0 on success, 2 for usage or configuration errors, 3 when a
stage fails at run time. Error lines start with ``error:``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from simbias import analysis as an
from simbias import config as cfgmod
from simbias.core import InvalidArgument
from simbias.maps import IngestionError, UnsupportedOperation
from simbias.pipeline import StageError, check_same_config, dumps, run_pipeline, write_analysis
from simbias.predictor import extrapolate, guess_order, next_bit
from simbias.sampling import OutputDistribution, enumerate_distribution, sample_distribution

USAGE, RUNTIME = 2, 3


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_config(path) -> cfgmod.ExperimentConfig:
    try:
        return cfgmod.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from exc
    except cfgmod.ConfigError as exc:
        raise UsageError("\n".join(f"{f}: {m}" for f, m in exc.errors)) from exc


def _load_dist(path) -> OutputDistribution:
    try:
        return OutputDistribution.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read distribution {path}: {exc.strerror}") from exc


def cmd_sample(args):
    cfg = _load_config(args.map)
    dist = sample_distribution(cfg.map, args.n, args.seed, args.shards, args.workers)
    _emit(dist.to_text(), args.out)


def cmd_enumerate(args):
    cfg = _load_config(args.map)
    dist = enumerate_distribution(cfg.map, budget=args.budget)
    _emit(dist.to_text(), args.out)


def cmd_analyze(args):
    paths = [args.dist] + ([args.config] if args.config else [])
    dist = _load_dist(args.dist)
    if args.config:
        cfg = _load_config(args.config)
        digest = cfg.digest()
        if check_same_config(args.dist) not in (None, digest):
            raise StageError("analysis: distribution was produced by a different config")
    else:
        cfg = cfgmod.ExperimentConfig(map=_placeholder_map())
        digest = check_same_config(*paths) or "none"
    if args.fit_mode:
        cfg = cfgmod.ExperimentConfig(
            cfg.map, cfg.sampling, cfgmod.AnalysisConfig(**{**cfg.analysis.__dict__, "fit_mode": args.fit_mode}), cfg.output
        )
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name in write_analysis(dist, cfg, digest, out):
        print(out / name)


def _placeholder_map():
    from simbias.maps import BernoulliSpec

    return BernoulliSpec(1, 0.5)


def cmd_pairs(args):
    dist = _load_dist(args.dist)
    report = an.pair_prediction_experiment(dist, args.mode, args.n, args.seed)
    _emit(dumps({"config": check_same_config(args.dist), **report.to_dict()}), args.out)


def cmd_correlate(args):
    dist = _load_dist(args.dist)
    k = None if args.k == "auto" else float(args.k)
    report = an.correlation_report(dist, k, args.stat)
    _emit(dumps({"config": check_same_config(args.dist), **report.to_dict()}), args.out)


def cmd_predict(args):
    f = next_bit(args.history)
    result = {"history": args.history, "p0": f.p0, "p1": f.p1, "k0": f.k0, "k1": f.k1}
    if args.horizon:
        result["extrapolation"] = extrapolate(args.history, args.horizon)[len(args.history):]
    _emit(dumps(result), None)


def cmd_rank(args):
    lines = [ln.strip() for ln in Path(args.candidates).read_text().splitlines() if ln.strip()]
    _emit("\n".join(guess_order(lines)) + "\n", args.out)


def cmd_run(args):
    cfg = _load_config(args.config)
    manifest = run_pipeline(cfg, args.out_dir)
    print(manifest)


def cmd_validate(args):
    try:
        errors = cfgmod.validate_config(args.config)
    except OSError as exc:
        raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from exc
    if errors:
        raise UsageError("\n".join(f"{f}: {m}" for f, m in errors))
    print("ok")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simbias", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="Monte Carlo output distribution of a map")
    s.add_argument("--map", required=True, help="config file; its [map] section is used")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--shards", type=int, default=1)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("enumerate", help="exact output distribution over every input")
    s.add_argument("--map", required=True)
    s.add_argument("--budget", type=int, default=1 << 26)
    s.add_argument("--out")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("analyze", help="fit, scatter, rank, pair, correlation and deficit artifacts")
    s.add_argument("--dist", required=True)
    s.add_argument("--config", help="config whose [analysis] section to use")
    s.add_argument("--fit-mode", choices=[an.APRIORI, an.ENVELOPE])
    s.add_argument("--out-dir", default="analysis")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("pairs", help="pairwise probability prediction experiment")
    s.add_argument("--dist", required=True)
    s.add_argument("--mode", choices=[an.WEIGHTED, an.UNIFORM], default=an.WEIGHTED)
    s.add_argument("--n", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_pairs)

    s = sub.add_parser("correlate", help="statistic vs log2 P within one complexity group")
    s.add_argument("--dist", required=True)
    s.add_argument("--stat", choices=sorted(an.STATISTICS), default="changes")
    s.add_argument("--k", default="auto")
    s.add_argument("--out")
    s.set_defaults(func=cmd_correlate)

    s = sub.add_parser("predict", help="next-bit forecast and greedy extrapolation")
    s.add_argument("--history", required=True)
    s.add_argument("--horizon", type=int, default=0)
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("rank", help="order candidate strings by complexity (guessing order)")
    s.add_argument("--candidates", required=True, help="file with one bit string per line")
    s.add_argument("--out")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("run", help="full pipeline from a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("validate", help="check a config file without running it")
    s.add_argument("config")
    s.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        for line in str(exc).splitlines():
            print(f"error: {line}", file=sys.stderr)
        return USAGE
    except (InvalidArgument, UnsupportedOperation, IngestionError, StageError, an.InsufficientData, an.DegenerateFit) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME
    return 0


if __name__ == "__main__":
    sys.exit(main())
