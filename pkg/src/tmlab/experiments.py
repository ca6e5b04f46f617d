"""Seeded Monte Carlo convergence campaigns.

Trial ``i`` of a batch uses ``random.Random(seed + i)`` as its only random
source: first for the boundary initialisation of the machine, then, per step,
one draw for the training sample followed by the machine's gate and event
draws.
"""

from __future__ import annotations

import csv
import io
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from tmlab.automaton import Action, depth
from tmlab.clause import EvalMode, conjunction, literals
from tmlab.datagen import Operator, OperatorSpec, sampler, truth_table
from tmlab.machine import ConfigError, MachineConfig, StepTrace, TsetlinMachine

REPORT_FORMAT = "tmlab-experiment-report"
REPORT_VERSION = 1

# Single-clause action profiles that realise each operator exactly.
TARGET_PROFILES = {
    Operator.AND: "IEIE",
    Operator.OR_SUB_11: "IEIE",
    Operator.OR_SUB_01: "EIIE",
    Operator.OR_SUB_10: "IEEI",
    Operator.IDENTITY: "IE",
    Operator.NOT: "EI",
}

Monitor = Callable[[StepTrace], bool]


@dataclass(frozen=True)
class TargetProfile:
    """Converged once the action profile equals ``profile`` and every
    automaton sits at least ``depth`` states from the boundary.

    ``depth=None`` means the chain end (``N``), i.e. the absorbing state.
    """

    profile: str
    depth: int | None = None
    kind = "target_profile"

    def monitor(self, tm: TsetlinMachine, spec: OperatorSpec) -> Monitor:
        n = tm.config.n
        target = [Action.from_symbol(c) for c in self.profile]
        if len(target) != tm.config.m * tm.config.tas_per_clause:
            raise ConfigError("experiment.convergence.profile", "length does not match the machine")
        need = n if self.depth is None else self.depth
        if not 1 <= need <= n:
            raise ConfigError("experiment.convergence.depth", f"must be in [1, {n}]")
        if need == n:
            deep = tuple(1 if a is Action.INCLUDE else 2 * n for a in target)
            return lambda trace: tm.states == deep
        sides = tuple(a is Action.INCLUDE for a in target)

        def check(trace: StepTrace) -> bool:
            states = tm.states
            return all(
                (st <= n) == inc and depth(st, n) >= need for st, inc in zip(states, sides)
            )

        return check

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "profile": self.profile, "depth": self.depth}


@dataclass(frozen=True)
class TruthTable:
    """Converged once the machine reproduces the operator at clause level.

    Every positive input must be matched by at least ``T`` clauses, no clause
    may fire on a negative input, and :meth:`TsetlinMachine.classify` must
    agree with every row (all in inference mode).
    """

    kind = "truth_table"

    def monitor(self, tm: TsetlinMachine, spec: OperatorSpec) -> Monitor:
        rows = [(literals(x), x, y) for x, y in truth_table(spec)]
        t, th, n = tm.config.t, tm.config.th, tm.config.n
        state = {"dirty": True, "ok": False}

        def evaluate() -> bool:
            includes = [[st <= n for st in c.states] for c in tm.clauses]
            for lits, _, y in rows:
                votes = sum(conjunction(inc, lits, EvalMode.INFER) for inc in includes)
                if y == 1 and votes < t:
                    return False
                if y == 0 and votes > 0:
                    return False
                if int(votes >= th) != y:
                    return False
            return True

        def check(trace: StepTrace) -> bool:
            # actions only change when some automaton crosses the boundary
            if trace.flips or state["dirty"]:
                state["ok"] = evaluate()
                state["dirty"] = False
            return state["ok"]

        return check

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind}


@dataclass(frozen=True)
class ActionStability:
    """Converged once no automaton has changed action for ``window`` steps."""

    window: int
    kind = "action_stability"

    def monitor(self, tm: TsetlinMachine, spec: OperatorSpec) -> Monitor:
        if self.window < 1:
            raise ConfigError("experiment.convergence.window", "must be >= 1")
        run = [0]

        def check(trace: StepTrace) -> bool:
            run[0] = 0 if trace.flips else run[0] + 1
            return run[0] >= self.window

        return check

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "window": self.window}


Criterion = TargetProfile | TruthTable | ActionStability


def criterion_from_dict(data: dict[str, Any] | str) -> Criterion:
    if isinstance(data, str):
        data = {"kind": data}
    data = dict(data)
    kind = data.pop("kind", None)
    classes = {c.kind: c for c in (TargetProfile, TruthTable, ActionStability)}
    if kind not in classes:
        raise ConfigError("experiment.convergence.kind", f"unknown criterion {kind!r}")
    try:
        return classes[kind](**data)
    except TypeError as exc:
        raise ConfigError("experiment.convergence", str(exc)) from None


def default_criterion(machine: MachineConfig, spec: OperatorSpec) -> Criterion:
    if machine.m == 1 and spec.name in TARGET_PROFILES:
        return TargetProfile(TARGET_PROFILES[spec.name])
    return TruthTable()


@dataclass(frozen=True)
class ExperimentConfig:
    machine: MachineConfig
    operator: OperatorSpec
    trials: int = 100
    max_steps: int = 100_000
    seed: int = 0
    convergence: Criterion | None = None

    def __post_init__(self):
        for name in ("trials", "max_steps"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"experiment.{name}", f"must be an integer >= 1, got {value!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("experiment.seed", f"must be a non-negative integer, got {self.seed!r}")
        if self.operator.width != self.machine.o:
            raise ConfigError(
                "machine.o",
                f"operator {self.operator.name.value} has width {self.operator.width}, "
                f"machine has o={self.machine.o}",
            )
        if self.convergence is None:
            object.__setattr__(self, "convergence", default_criterion(self.machine, self.operator))

    def trial_seed(self, index: int) -> int:
        return self.seed + index

    def to_dict(self) -> dict[str, Any]:
        return {
            "machine": self.machine.to_dict(),
            "operator": self.operator.to_dict(),
            "experiment": {
                "trials": self.trials,
                "max_steps": self.max_steps,
                "seed": self.seed,
                "convergence": self.convergence.to_dict(),
            },
        }


@dataclass(frozen=True)
class TrialResult:
    index: int
    seed: int
    converged: bool
    steps: int
    profile: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "seed": self.seed,
            "converged": self.converged,
            "steps": self.steps,
            "profile": self.profile,
        }


def run_trial(cfg: ExperimentConfig, trial_index: int) -> TrialResult:
    """Train a fresh machine until the criterion holds or the budget runs out.

    ``steps`` is the step at which convergence was first observed, or
    ``max_steps`` when it never was.
    """
    seed = cfg.trial_seed(trial_index)
    rng = random.Random(seed)
    tm = TsetlinMachine(cfg.machine, rng)
    check = cfg.convergence.monitor(tm, cfg.operator)
    draw = sampler(cfg.operator)
    step_fn = tm.train_step
    for step in range(1, cfg.max_steps + 1):
        if check(step_fn(draw(rng), rng)):
            return TrialResult(trial_index, seed, True, step, tm.profile_string())
    return TrialResult(trial_index, seed, False, cfg.max_steps, tm.profile_string())


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    trials: list[TrialResult] = field(default_factory=list)

    @property
    def converged_count(self) -> int:
        return sum(t.converged for t in self.trials)

    @property
    def convergence_fraction(self) -> float:
        return self.converged_count / len(self.trials)

    def step_quantiles(self) -> dict[str, int | None]:
        """p50/p90/max of steps-to-converge over converged trials only."""
        steps = [t.steps for t in self.trials if t.converged]
        if not steps:
            return {"p50": None, "p90": None, "max": None}
        arr = np.asarray(steps)
        return {
            "p50": int(np.percentile(arr, 50, method="lower")),
            "p90": int(np.percentile(arr, 90, method="lower")),
            "max": int(arr.max()),
        }

    def aggregate(self) -> dict[str, Any]:
        return {
            "trials": len(self.trials),
            "converged": self.converged_count,
            "convergence_fraction": self.convergence_fraction,
            "steps": self.step_quantiles(),
            "sub_pattern_condition": self.config.machine.sub_pattern_condition,
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": REPORT_FORMAT,
            "version": REPORT_VERSION,
            "config": self.config.to_dict(),
            "aggregate": self.aggregate(),
            "trials": [t.to_dict() for t in self.trials],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["seed", "converged", "steps", "profile"])
        for t in self.trials:
            writer.writerow([t.seed, int(t.converged), t.steps, t.profile])
        return buf.getvalue()


def _run_one(args: tuple[ExperimentConfig, int]) -> TrialResult:
    return run_trial(*args)


def run_batch(cfg: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Run every trial; results are ordered by trial index whatever ``workers`` is."""
    jobs = [(cfg, i) for i in range(cfg.trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(job) for job in jobs]
    return ExperimentReport(cfg, results)
