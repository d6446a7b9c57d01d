"""Command-line front end: run any stage alone, or the whole pipeline.

Subcommands mirror the processing stages — simulate, ingest, mine, augment,
forge, train, score, detect, evaluate — plus `pipeline`, which chains them
and leaves every intermediate artifact in a working directory so any stage
can be re-run standalone with identical results.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from tempoguard import evaluation, forge, ingest, mining, scoring, simulate, training
from tempoguard.events import ActivityInstance, LABEL_NORMAL, with_label


class UsageError(Exception):
    """Bad invocation (not bad data): reported with exit code 1."""


@dataclass(frozen=True)
class RunConfig:
    """Every pipeline knob in one place; JSON config files mirror this."""

    seed: int = 42
    instances_per_activity: int = 50
    noise_sigma: float = 0.10
    inter_instance_gap_ms: int = 600_000
    gap_seconds: float = 120.0
    min_segment_len: int = 2
    min_support: int = 5
    min_len: int = 2
    alpha_min: float = 0.0
    alpha_max: float = 5.0
    alpha_step: float = 0.1
    boundary_epsilon: float = 1e-9
    ti_multiplier: float = 50.0
    train_normal: int = 40
    test_normal: int = 60
    train_anomaly: int = 10
    test_anomaly: int = 20
    workdir: str = "tempoguard_run"

    @classmethod
    def from_sources(cls, config_path: str | None, overrides: dict) -> RunConfig:
        """Defaults, then config-file values, then non-None CLI flags."""
        cfg = cls()
        if config_path is not None:
            data = json.loads(_read_text(config_path))
            if not isinstance(data, dict):
                raise ValueError("config file must hold a JSON object")
            known = {f.name for f in fields(cls)}
            unknown = sorted(set(data) - known)
            if unknown:
                raise UsageError(f"unknown config keys: {', '.join(unknown)}")
            cfg = replace(cfg, **data)
        supplied = {k: v for k, v in overrides.items() if v is not None}
        return replace(cfg, **supplied)


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_or_print(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _guard_clobber(inputs: list[str | None], outputs: list[str | None]) -> None:
    taken = {Path(p).resolve() for p in inputs if p}
    for out in outputs:
        if out and Path(out).resolve() in taken:
            raise UsageError(f"output path {out!r} would overwrite an input")


def _load_log(path: str, fmt: str | None = None) -> list:
    text = _read_text(path)
    if fmt == "jsonl" or (fmt is None and path.endswith(".jsonl")):
        return ingest.parse_log_jsonl(text)
    return ingest.parse_log(text)


def _pick_sources(
    pool: list[ActivityInstance], count: int, rng: random.Random
) -> list[ActivityInstance]:
    """count distinct draws when the pool allows it, else with replacement."""
    if count <= len(pool):
        return rng.sample(pool, count)
    return [pool[rng.randrange(len(pool))] for _ in range(count)]


# ---------------------------------------------------------------- subcommands


def _cmd_simulate(args: argparse.Namespace) -> int:
    _guard_clobber([], [args.out])
    specs = simulate.builtin_specs(args.noise_sigma)
    cfg = simulate.SimConfig(seed=args.seed, instances_per_activity=args.instances)
    events = simulate.generate(specs, cfg)
    _write_or_print(ingest.serialize_log(events, args.format), args.out)
    return 0


def _cmd_ingest(args: argparse.Namespace) -> int:
    _guard_clobber([args.log], [args.out])
    events = _load_log(args.log)
    cfg = ingest.IngestConfig(
        gap_ms=int(round(args.gap_seconds * 1000)), min_segment_len=args.min_segment_len
    )
    _write_or_print(ingest.instances_to_jsonl(ingest.segment(events, cfg)), args.out)
    return 0


def _cmd_mine(args: argparse.Namespace) -> int:
    _guard_clobber([args.instances], [args.out])
    instances = ingest.instances_from_jsonl(_read_text(args.instances))
    cfg = mining.MinerConfig(min_support=args.min_support, min_len=args.min_len)
    _write_or_print(mining.patterns_to_json(mining.mine_patterns(instances, cfg)), args.out)
    return 0


def _cmd_augment(args: argparse.Namespace) -> int:
    _guard_clobber([args.instances], [args.out])
    pool = ingest.instances_from_jsonl(_read_text(args.instances))
    rng = random.Random(args.seed)
    synthetic = forge.augment_normals(pool, args.count, rng)
    _write_or_print(ingest.instances_to_jsonl(synthetic), args.out)
    return 0


def _cmd_forge(args: argparse.Namespace) -> int:
    _guard_clobber([args.instances], [args.out])
    pool = ingest.instances_from_jsonl(_read_text(args.instances))
    if not pool:
        raise ValueError(f"no instances in {args.instances}")
    rng = random.Random(args.seed)
    cfg = forge.ForgeConfig(seed=args.seed, ti_multiplier=args.ti_multiplier)
    out: list[ActivityInstance] = []
    for src in _pick_sources(pool, args.count, rng):
        if args.kind == "seq":
            out.append(forge.make_anomaly_seq(src, rng))
        else:
            out.append(forge.make_anomaly_ti(src, cfg, rng))
    _write_or_print(ingest.instances_to_jsonl(out), args.out)
    return 0


def _route_groups(
    patterns: list, instances: list[ActivityInstance], models: dict | None = None
) -> dict[str, list[ActivityInstance]]:
    groups: dict[str, list[ActivityInstance]] = {p.name: [] for p in patterns}
    for inst in instances:
        groups[evaluation.select_pattern(patterns, inst, models).name].append(inst)
    return groups


def train_models(
    patterns: list, labeled: list[ActivityInstance], cfg: training.TrainConfig
) -> list[training.ScoreModel]:
    """Route labeled instances to their best pattern and train each activity."""
    groups = _route_groups(patterns, labeled)
    models = []
    for pattern in patterns:
        group = groups[pattern.name]
        if not group:
            print(f"warning: no training instances routed to {pattern.name!r}", file=sys.stderr)
            continue
        models.append(training.train(pattern, group, cfg))
    return models


def _cmd_train(args: argparse.Namespace) -> int:
    _guard_clobber([args.patterns, args.train_set], [args.out])
    patterns = mining.patterns_from_json(_read_text(args.patterns))
    labeled = ingest.instances_from_jsonl(_read_text(args.train_set))
    cfg = training.TrainConfig(
        alpha_min=args.alpha_min,
        alpha_max=args.alpha_max,
        alpha_step=args.alpha_step,
        boundary_epsilon=args.boundary_epsilon,
    )
    models = train_models(patterns, labeled, cfg)
    if not models:
        raise ValueError("no models trained (no instances routed to any pattern)")
    if len(models) == 1:
        _write_or_print(training.model_to_json(models[0]), args.out)
    else:
        _write_or_print(training.models_to_json(models), args.out)
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    patterns = mining.patterns_from_json(_read_text(args.pattern))
    events = _load_log(args.log)
    cfg = ingest.IngestConfig(
        gap_ms=int(round(args.gap_seconds * 1000)), min_segment_len=args.min_segment_len
    )
    for inst in ingest.segment(events, cfg):
        pattern = evaluation.select_pattern(patterns, inst)
        breakdown = scoring.score(pattern, inst, args.alpha)
        print(breakdown.total)
    return 0


def _cmd_detect(args: argparse.Namespace) -> int:
    _guard_clobber([args.models, args.patterns, args.log], [args.out])
    patterns = mining.patterns_from_json(_read_text(args.patterns))
    models = {m.activity: m for m in training.models_from_json(_read_text(args.models))}
    events = _load_log(args.log)
    cfg = ingest.IngestConfig(
        gap_ms=int(round(args.gap_seconds * 1000)), min_segment_len=args.min_segment_len
    )
    lines = []
    for inst in ingest.segment(events, cfg):
        pattern = evaluation.select_pattern(patterns, inst, models)
        model = models.get(pattern.name)
        if model is None:
            raise ValueError(f"no trained model for activity {pattern.name!r}")
        verdict = evaluation.classify(model, pattern, inst)
        lines.append(
            {
                "source_id": inst.source_id,
                "activity": pattern.name,
                "classification": verdict.classification,
                "total": verdict.breakdown.total,
            }
        )
        print(
            f"{inst.source_id}\t{pattern.name}\t{verdict.classification}"
            f"\t{verdict.breakdown.total}"
        )
    if args.out:
        Path(args.out).write_text(
            "".join(json.dumps(line) + "\n" for line in lines), encoding="utf-8"
        )
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    _guard_clobber([args.models, args.patterns, args.test_set], [args.out])
    patterns = mining.patterns_from_json(_read_text(args.patterns))
    models = {m.activity: m for m in training.models_from_json(_read_text(args.models))}
    labeled = ingest.instances_from_jsonl(_read_text(args.test_set))
    report = evaluation.build_report(patterns, models, labeled)
    sys.stdout.write(evaluation.render_report(report))
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return 0


def run_pipeline(cfg: RunConfig) -> dict:
    """simulate → ingest → mine → augment → forge → train → evaluate.

    Writes sim_log.csv, instances.jsonl, patterns.json, train_set.jsonl,
    test_set.jsonl, models.json, report.json, and report.txt under
    cfg.workdir, then returns the report dict.
    """
    workdir = Path(cfg.workdir)
    workdir.mkdir(parents=True, exist_ok=True)

    specs = simulate.builtin_specs(cfg.noise_sigma)
    sim_cfg = simulate.SimConfig(
        seed=cfg.seed,
        instances_per_activity=cfg.instances_per_activity,
        inter_instance_gap_ms=cfg.inter_instance_gap_ms,
    )
    events = simulate.generate(specs, sim_cfg)
    (workdir / "sim_log.csv").write_text(ingest.serialize_log(events, "csv"), encoding="utf-8")

    ingest_cfg = ingest.IngestConfig(
        gap_ms=int(round(cfg.gap_seconds * 1000)), min_segment_len=cfg.min_segment_len
    )
    instances = ingest.segment(events, ingest_cfg)
    (workdir / "instances.jsonl").write_text(
        ingest.instances_to_jsonl(instances), encoding="utf-8"
    )

    miner_cfg = mining.MinerConfig(min_support=cfg.min_support, min_len=cfg.min_len)
    patterns = mining.mine_patterns(instances, miner_cfg, names=simulate.spec_name_map(specs))
    if not patterns:
        raise ValueError("mining produced no patterns; lower min_support or add data")
    (workdir / "patterns.json").write_text(mining.patterns_to_json(patterns), encoding="utf-8")

    rng_augment = random.Random(cfg.seed + 1)
    rng_forge = random.Random(cfg.seed + 2)
    rng_split = random.Random(cfg.seed + 3)
    forge_cfg = forge.ForgeConfig(seed=cfg.seed + 2, ti_multiplier=cfg.ti_multiplier)
    normal_target = cfg.train_normal + cfg.test_normal
    anomalies_per_type = cfg.train_anomaly + cfg.test_anomaly
    train_set: list[ActivityInstance] = []
    test_set: list[ActivityInstance] = []
    for pattern in patterns:
        originals = [
            with_label(inst, LABEL_NORMAL)
            for inst in instances
            if inst.key_sequence() == pattern.keys
        ]
        synthetic = forge.augment_normals(
            originals, max(0, normal_target - len(originals)), rng_augment
        )
        normals = originals + synthetic
        rng_split.shuffle(normals)
        normals = normals[:normal_target]
        seq_anomalies = [
            forge.make_anomaly_seq(src, rng_forge)
            for src in _pick_sources(originals, anomalies_per_type, rng_forge)
        ]
        ti_anomalies = [
            forge.make_anomaly_ti(src, forge_cfg, rng_forge)
            for src in _pick_sources(originals, anomalies_per_type, rng_forge)
        ]
        train_set += (
            normals[: cfg.train_normal]
            + seq_anomalies[: cfg.train_anomaly]
            + ti_anomalies[: cfg.train_anomaly]
        )
        test_set += (
            normals[cfg.train_normal :]
            + seq_anomalies[cfg.train_anomaly :]
            + ti_anomalies[cfg.train_anomaly :]
        )
    (workdir / "train_set.jsonl").write_text(
        ingest.instances_to_jsonl(train_set), encoding="utf-8"
    )
    (workdir / "test_set.jsonl").write_text(ingest.instances_to_jsonl(test_set), encoding="utf-8")

    train_cfg = training.TrainConfig(
        alpha_min=cfg.alpha_min,
        alpha_max=cfg.alpha_max,
        alpha_step=cfg.alpha_step,
        boundary_epsilon=cfg.boundary_epsilon,
    )
    models = train_models(patterns, train_set, train_cfg)
    (workdir / "models.json").write_text(training.models_to_json(models), encoding="utf-8")

    report = evaluation.build_report(patterns, {m.activity: m for m in models}, test_set)
    (workdir / "report.json").write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    (workdir / "report.txt").write_text(evaluation.render_report(report), encoding="utf-8")
    return report


def _cmd_pipeline(args: argparse.Namespace) -> int:
    overrides = {
        "seed": args.seed,
        "instances_per_activity": args.instances,
        "noise_sigma": args.noise_sigma,
        "gap_seconds": args.gap_seconds,
        "min_segment_len": args.min_segment_len,
        "min_support": args.min_support,
        "min_len": args.min_len,
        "alpha_min": args.alpha_min,
        "alpha_max": args.alpha_max,
        "alpha_step": args.alpha_step,
        "boundary_epsilon": args.boundary_epsilon,
        "ti_multiplier": args.ti_multiplier,
        "workdir": args.workdir,
    }
    cfg = RunConfig.from_sources(args.config, overrides)
    _guard_clobber([args.config], [args.out])
    report = run_pipeline(cfg)
    sys.stdout.write(evaluation.render_report(report))
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return 0


# -------------------------------------------------------------------- parser


def _add_segmentation_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--gap-seconds", type=float, default=120.0,
                     help="idle gap that separates activity instances")
    sub.add_argument("--min-segment-len", type=int, default=2,
                     help="drop segments shorter than this")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempoguard",
        description="Learn timing patterns of smart-home activities and flag anomalies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic device log")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--instances", type=int, default=50, help="instances per activity")
    p.add_argument("--noise-sigma", type=float, default=0.10,
                   help="relative std-dev of interval jitter")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("ingest", help="segment a log into activity instances")
    p.add_argument("log", help="CSV or JSONL device log")
    _add_segmentation_flags(p)
    p.add_argument("--out", help="instances JSONL path (default: stdout)")
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("mine", help="mine frequent sequences into patterns")
    p.add_argument("instances", help="instances JSONL")
    p.add_argument("--min-support", type=int, default=5)
    p.add_argument("--min-len", type=int, default=2)
    p.add_argument("--out", help="patterns JSON path (default: stdout)")
    p.set_defaults(handler=_cmd_mine)

    p = sub.add_parser("augment", help="oversample normals by interval midpoints")
    p.add_argument("instances", help="instances JSONL (one shared key sequence)")
    p.add_argument("--count", type=int, required=True, help="synthetic instances to forge")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help="synthetic instances JSONL path (default: stdout)")
    p.set_defaults(handler=_cmd_augment)

    p = sub.add_parser(
        "forge", aliases=["forge-anomalies"], help="synthesize anomalous instances"
    )
    p.add_argument("instances", help="normal instances JSONL")
    p.add_argument("--kind", choices=("seq", "ti"), required=True,
                   help="seq: delete one event; ti: stretch one interval")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--ti-multiplier", type=float, default=50.0)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help="anomalies JSONL path (default: stdout)")
    p.set_defaults(handler=_cmd_forge)

    p = sub.add_parser("train", help="sweep the timing weight and fit score intervals")
    p.add_argument("--patterns", required=True, help="patterns JSON")
    p.add_argument("--train-set", required=True, help="labeled instances JSONL")
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=5.0)
    p.add_argument("--alpha-step", type=float, default=0.1)
    p.add_argument("--boundary-epsilon", type=float, default=1e-9)
    p.add_argument("--out", help="model JSON path (default: stdout)")
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("score", help="print total scores for each log segment")
    p.add_argument("--pattern", required=True, help="patterns JSON")
    p.add_argument("--log", required=True, help="CSV or JSONL device log")
    p.add_argument("--alpha", type=float, required=True, help="timing weight")
    _add_segmentation_flags(p)
    p.set_defaults(handler=_cmd_score)

    p = sub.add_parser("detect", help="classify log segments as normal or anomaly")
    p.add_argument("--models", required=True, help="trained models JSON")
    p.add_argument("--patterns", required=True, help="patterns JSON")
    p.add_argument("--log", required=True, help="CSV or JSONL device log")
    _add_segmentation_flags(p)
    p.add_argument("--out", help="verdicts JSONL path (optional)")
    p.set_defaults(handler=_cmd_detect)

    p = sub.add_parser("evaluate", help="confusion matrix over a labeled test set")
    p.add_argument("--models", required=True, help="trained models JSON")
    p.add_argument("--patterns", required=True, help="patterns JSON")
    p.add_argument("--test-set", required=True, help="labeled instances JSONL")
    p.add_argument("--out", help="JSON report path (optional)")
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("pipeline", help="run every stage end to end")
    p.add_argument("--config", help="JSON config file (flags override it)")
    p.add_argument("--seed", type=int)
    p.add_argument("--instances", type=int, help="instances per activity")
    p.add_argument("--noise-sigma", type=float)
    p.add_argument("--gap-seconds", type=float)
    p.add_argument("--min-segment-len", type=int)
    p.add_argument("--min-support", type=int)
    p.add_argument("--min-len", type=int)
    p.add_argument("--alpha-min", type=float)
    p.add_argument("--alpha-max", type=float)
    p.add_argument("--alpha-step", type=float)
    p.add_argument("--boundary-epsilon", type=float)
    p.add_argument("--ti-multiplier", type=float)
    p.add_argument("--workdir", help="artifact directory (default: tempoguard_run)")
    p.add_argument("--out", help="JSON report path (optional)")
    p.set_defaults(handler=_cmd_pipeline)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
