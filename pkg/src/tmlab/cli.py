"""``tmlab`` command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 state space too large for
exact analysis, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from tmlab.datagen import OperatorSpec, truth_table
from tmlab.experiments import ExperimentConfig, criterion_from_dict, run_batch
from tmlab.feedback import InfeasibleContext
from tmlab.machine import ConfigError, Gating, MachineConfig, Sample
from tmlab.markov.chain import AnalysisTooLarge, analyze, format_probability
from tmlab.markov.conditions import condition_diagram

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_SIZING = 3

TOP_LEVEL_KEYS = ("machine", "operator", "experiment", "output")
EXPERIMENT_KEYS = ("trials", "max_steps", "seed", "convergence", "workers")
OUTPUT_KEYS = ("dir", "formats")
FORMATS = ("json", "csv")
RESOLVED_NAME = "config.resolved.json"


def load_config(path: str | Path) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be an object")
    for key in data:
        if key not in TOP_LEVEL_KEYS:
            raise ConfigError(key, "unknown key")
    return data


def _section(data: dict[str, Any], name: str, allowed: Sequence[str] | None = None) -> dict[str, Any]:
    section = data.get(name, {})
    if not isinstance(section, dict):
        raise ConfigError(name, "must be an object")
    if allowed is not None:
        for key in section:
            if key not in allowed:
                raise ConfigError(f"{name}.{key}", "unknown key")
    return dict(section)


def _machine(data: dict[str, Any], default_gating: Gating) -> MachineConfig:
    raw = _section(data, "machine")
    if "gating" not in raw:
        raw["gating"] = default_gating.value
    try:
        return MachineConfig.from_dict(raw)
    except ConfigError as exc:
        raise ConfigError(f"machine.{exc.field}", exc.message) from None
    except TypeError as exc:
        raise ConfigError("machine", str(exc)) from None


def _operator(data: dict[str, Any]) -> OperatorSpec:
    if "operator" not in data:
        raise ConfigError("operator", "missing")
    return OperatorSpec.from_dict(_section(data, "operator"))


def resolve_output(data: dict[str, Any], out: str | None) -> tuple[Path, tuple[str, ...]]:
    section = _section(data, "output", OUTPUT_KEYS)
    target = out if out is not None else section.get("dir")
    if not target:
        raise ConfigError("output.dir", "no output directory (use --out)")
    formats = section.get("formats", list(FORMATS))
    if isinstance(formats, str) or not all(f in FORMATS for f in formats) or not formats:
        raise ConfigError("output.formats", f"must be a non-empty subset of {list(FORMATS)}")
    return Path(target), tuple(f for f in FORMATS if f in formats)


def resolve_train(data: dict[str, Any], seed: int | None) -> tuple[ExperimentConfig, int]:
    probe = _section(data, "machine")
    default_gating = Gating.ALWAYS_FIRE if probe.get("m") == 1 else Gating.GATED
    machine = _machine(data, default_gating)
    spec = _operator(data)
    raw = _section(data, "experiment", EXPERIMENT_KEYS)
    workers = raw.pop("workers", 1)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ConfigError("experiment.workers", "must be an integer >= 1")
    if seed is not None:
        raw["seed"] = seed
    if "convergence" in raw:
        raw["convergence"] = criterion_from_dict(raw["convergence"])
    return ExperimentConfig(machine, spec, **raw), workers


def _write(path: Path, text: str) -> None:
    path.write_text(text if text.endswith("\n") else text + "\n")


def _echo_config(out_dir: Path, resolved: dict[str, Any]) -> None:
    _write(out_dir / RESOLVED_NAME, json.dumps(resolved, indent=2))


def cmd_train(args: argparse.Namespace) -> int:
    data = load_config(args.config)
    cfg, workers = resolve_train(data, args.seed)
    out_dir, formats = resolve_output(data, args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    resolved = cfg.to_dict()
    resolved["experiment"]["workers"] = workers
    resolved["output"] = {"dir": str(out_dir), "formats": list(formats)}
    _echo_config(out_dir, resolved)
    report = run_batch(cfg, workers=workers)
    if "json" in formats:
        _write(out_dir / "report.json", report.to_json())
    if "csv" in formats:
        _write(out_dir / "report.csv", report.to_csv())
    agg = report.aggregate()
    q = agg["steps"]
    print(
        f"{agg['converged']}/{agg['trials']} trials converged "
        f"(fraction {agg['convergence_fraction']:.2f}); "
        f"steps p50={q['p50']} p90={q['p90']} max={q['max']}"
    )
    if not agg["sub_pattern_condition"] and cfg.machine.m > 1:
        print(f"note: T={cfg.machine.t} > m/3 with m={cfg.machine.m}")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    data = load_config(args.config)
    machine = _machine(data, Gating.ALWAYS_FIRE)
    spec = _operator(data)
    out_dir, _ = resolve_output(data, args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _echo_config(
        out_dir,
        {"machine": machine.to_dict(), "operator": spec.to_dict(), "output": {"dir": str(out_dir)}},
    )
    report = analyze(machine, spec)
    _write(out_dir / "chain.json", report.to_json())
    print(f"{report.kernel.size} joint states, {len(report.closed_classes)} closed class(es)")
    for label, vec in zip(report.labels, report.absorption):
        print(f"  {label}: min absorption {format_probability(min(vec))}")
    return EXIT_OK


def parse_sample(text: str) -> Sample:
    parts = text.split(",")
    if len(parts) != 3 or any(p.strip() not in ("0", "1") for p in parts):
        raise ConfigError("sample", f"expected x1,x2,y bits, got {text!r}")
    x1, x2, y = (int(p) for p in parts)
    return Sample((x1, x2), y)


def cmd_diagram(args: argparse.Namespace) -> int:
    sample = parse_sample(args.sample)
    try:
        dot = condition_diagram(args.case, args.scenario, args.ta, sample, s=args.s, n=args.n)
    except InfeasibleContext as exc:
        print(f"error: infeasible condition: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        raise ConfigError("diagram", str(exc)) from None
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dot)
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    spec = OperatorSpec(args.operator)
    weights = dict(spec.weights)
    names = [f"x{k + 1}" for k in range(spec.width)]
    print(" ".join(names) + " | y | weight")
    for x, y in truth_table(spec):
        w = weights[x]
        print(" ".join(f"{b:>{len(n)}}" for b, n in zip(x, names)) + f" | {y} | {w}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tmlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="run a seeded Monte Carlo batch")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("analyze", help="exact Markov-chain analysis")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("diagram", help="DOT diagram of one frozen condition")
    p.add_argument("--case", type=int, required=True, choices=range(1, 5))
    p.add_argument("--scenario", type=int, required=True, choices=range(1, 5))
    p.add_argument("--sample", required=True, help="x1,x2,y")
    p.add_argument("--ta", type=int, required=True, choices=range(1, 5))
    p.add_argument("--out", required=True)
    p.add_argument("--s", type=Fraction, default=Fraction(4))
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("table", help="print an operator truth table")
    p.add_argument("--operator", required=True)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AnalysisTooLarge as exc:
        print(f"sizing error: {exc}", file=sys.stderr)
        return EXIT_SIZING
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
