"""Single-class, positive-polarity Tsetlin Machine and its training game."""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from tmlab.automaton import Action, action_of
from tmlab.clause import ClauseState, EvalMode, conjunction, literals
from tmlab.feedback import (
    FeedbackContext,
    FeedbackEvent,
    InfeasibleContext,
    as_fraction,
    type_i_probs,
    type_ii_probs,
)

SNAPSHOT_FORMAT = "tmlab-machine"
SNAPSHOT_VERSION = 1


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class Gating(enum.Enum):
    GATED = "gated"
    ALWAYS_FIRE = "always_fire"


def format_fraction(value: Fraction) -> int | str:
    return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class MachineConfig:
    o: int
    m: int
    n: int = 100
    s: Fraction = Fraction(4)
    t: int = 1
    th: int | None = None
    gating: Gating = Gating.GATED

    def __post_init__(self):
        try:
            object.__setattr__(self, "s", as_fraction(self.s))
        except (TypeError, ValueError, ZeroDivisionError):
            raise ConfigError("s", f"not a number: {self.s!r}") from None
        if isinstance(self.gating, str):
            try:
                object.__setattr__(self, "gating", Gating(self.gating))
            except ValueError:
                raise ConfigError("gating", f"unknown gating {self.gating!r}") from None
        for name in ("o", "m", "n", "t"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(name, f"must be an integer, got {value!r}")
            if value < 1:
                raise ConfigError(name, f"must be >= 1, got {value}")
        if self.s <= 1:
            raise ConfigError("s", f"must be > 1, got {self.s}")
        if self.t > self.m:
            raise ConfigError("t", f"target T={self.t} exceeds clause count m={self.m}")
        if self.th is None:
            object.__setattr__(self, "th", self.t)
        elif isinstance(self.th, bool) or not isinstance(self.th, int):
            raise ConfigError("th", f"must be an integer, got {self.th!r}")

    @property
    def tas_per_clause(self) -> int:
        return 2 * self.o

    @property
    def sub_pattern_condition(self) -> bool:
        """Whether ``T <= m/3`` holds (the multi-clause OR regime)."""
        return 3 * self.t <= self.m

    def to_dict(self) -> dict[str, Any]:
        return {
            "o": self.o,
            "m": self.m,
            "n": self.n,
            "s": format_fraction(self.s),
            "t": self.t,
            "th": self.th,
            "gating": self.gating.value,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MachineConfig":
        known = {"o", "m", "n", "s", "t", "th", "gating"}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown key")
        for key in ("o", "m"):
            if key not in data:
                raise ConfigError(key, "missing")
        return cls(**data)


@dataclass(frozen=True)
class Sample:
    x: tuple[int, ...]
    y: int

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        if any(b not in (0, 1) for b in self.x) or self.y not in (0, 1):
            raise ValueError(f"sample bits must be 0/1: {self}")


def feedback_probability(y: int, f: int, t: int) -> Fraction:
    """Chance that a clause receives feedback, given label ``y`` and vote sum ``f``."""
    if t < 1:
        raise ValueError(f"T must be >= 1, got {t}")
    clamped = max(-t, min(t, f))
    if y == 1:
        return Fraction(t - clamped, 2 * t)
    return Fraction(t + clamped, 2 * t)


@dataclass
class StepTrace:
    sample: Sample
    clause_values: list[int]
    vote_sum: int
    gates: list[bool]
    events: list[list[FeedbackEvent] | None]
    flips: int = 0


def _float_table(s: Fraction) -> dict:
    """(y, include, clause, literal) -> (p_reward, p_reward + p_inaction) as floats."""
    table = {}
    for y in (0, 1):
        for action in Action:
            for cv in (0, 1):
                for lit in (0, 1):
                    try:
                        ctx = FeedbackContext(action, cv, lit)
                    except InfeasibleContext:
                        table[y, action is Action.INCLUDE, cv, lit] = None
                        continue
                    p = type_i_probs(ctx, s) if y == 1 else type_ii_probs(ctx)
                    table[y, action is Action.INCLUDE, cv, lit] = (
                        float(p.p_reward),
                        float(p.p_reward + p.p_inaction),
                    )
    return table


class TsetlinMachine:
    """``m`` clauses of ``2o`` automata voting for one class.

    ``rng`` draws the initial states uniformly from the two boundary states
    ``{N, N+1}``; pass ``states`` instead to start from a known position.
    """

    def __init__(
        self,
        config: MachineConfig,
        rng: random.Random | None = None,
        states: Sequence[Sequence[int]] | None = None,
    ):
        self.config = config
        n = config.n
        if states is None:
            rng = rng if rng is not None else random.Random(0)
            states = [
                [n if rng.random() < 0.5 else n + 1 for _ in range(config.tas_per_clause)]
                for _ in range(config.m)
            ]
        if len(states) != config.m:
            raise ValueError(f"expected {config.m} clauses, got {len(states)}")
        self.clauses = []
        for row in states:
            if len(row) != config.tas_per_clause:
                raise ValueError(f"expected {config.tas_per_clause} automata per clause")
            self.clauses.append(ClauseState(list(row), n))
        self._table = _float_table(config.s)

    @classmethod
    def from_profile(cls, config: MachineConfig, profile: str | Sequence[Action]) -> "TsetlinMachine":
        """Machine with every automaton at the deepest state of ``profile``.

        ``profile`` lists actions clause-major, e.g. ``"IEIE"`` for one clause
        over two inputs.
        """
        if isinstance(profile, str):
            profile = [Action.from_symbol(c) for c in profile]
        width = config.tas_per_clause
        if len(profile) != config.m * width:
            raise ValueError(f"profile length {len(profile)} != {config.m * width}")
        states = [
            [1 if a is Action.INCLUDE else 2 * config.n for a in profile[j * width:(j + 1) * width]]
            for j in range(config.m)
        ]
        return cls(config, states=states)

    @property
    def states(self) -> tuple[int, ...]:
        """Flat joint state, clause-major."""
        return tuple(st for c in self.clauses for st in c.states)

    def set_states(self, flat: Sequence[int]) -> None:
        width = self.config.tas_per_clause
        if len(flat) != width * self.config.m:
            raise ValueError("joint state has the wrong length")
        for j, c in enumerate(self.clauses):
            c.states[:] = flat[j * width:(j + 1) * width]

    def _check_width(self, x: Sequence[int]) -> None:
        if len(x) != self.config.o:
            raise ValueError(f"input width {len(x)} != o={self.config.o}")

    def clause_outputs(self, x: Sequence[int], mode: EvalMode) -> list[int]:
        self._check_width(x)
        lits = literals(x)
        n = self.config.n
        return [conjunction([st <= n for st in c.states], lits, mode) for c in self.clauses]

    def vote_sum(self, x: Sequence[int], mode: EvalMode = EvalMode.INFER) -> int:
        return sum(self.clause_outputs(x, mode))

    def classify(self, x: Sequence[int]) -> int:
        return int(self.vote_sum(x, EvalMode.INFER) >= self.config.th)

    def action_profile(self) -> list[Action]:
        n = self.config.n
        return [action_of(st, n) for c in self.clauses for st in c.states]

    def profile_string(self) -> str:
        return "".join(a.symbol for a in self.action_profile())

    def train_step(self, sample: Sample, rng: random.Random) -> StepTrace:
        """One round of the feedback game on ``sample``.

        All clause values and literal values are taken from the state before
        the step. Draw order: one gate variate per clause in index order,
        then one event variate per automaton of each fired clause, clause by
        clause and automaton by automaton.
        """
        x, y = sample.x, sample.y
        self._check_width(x)
        cfg = self.config
        n = cfg.n
        top = 2 * n
        lits = literals(x)
        values = [
            conjunction([st <= n for st in c.states], lits, EvalMode.TRAIN) for c in self.clauses
        ]
        f = sum(values)
        if cfg.gating is Gating.ALWAYS_FIRE:
            u = 1.0
        else:
            u = float(feedback_probability(y, f, cfg.t))
        gates = [rng.random() < u for _ in self.clauses]
        table = self._table
        events: list[list[FeedbackEvent] | None] = []
        flips = 0
        for c, cv, fired in zip(self.clauses, values, gates):
            if not fired:
                events.append(None)
                continue
            states = c.states
            clause_events = []
            for k, lit in enumerate(lits):
                st = states[k]
                inc = st <= n
                probs = table[y, inc, cv, lit]
                if probs is None:
                    raise InfeasibleContext(f"clause value {cv} with included 0-literal {k + 1}")
                r = rng.random()
                if r < probs[0]:
                    clause_events.append(FeedbackEvent.REWARD)
                    if inc:
                        if st > 1:
                            states[k] = st - 1
                    elif st < top:
                        states[k] = st + 1
                elif r < probs[1]:
                    clause_events.append(FeedbackEvent.INACTION)
                else:
                    clause_events.append(FeedbackEvent.PENALTY)
                    if inc:
                        states[k] = st + 1
                        if st == n:
                            flips += 1
                    else:
                        states[k] = st - 1
                        if st == n + 1:
                            flips += 1
            events.append(clause_events)
        return StepTrace(sample, values, f, gates, events, flips)

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": SNAPSHOT_FORMAT,
            "version": SNAPSHOT_VERSION,
            "config": self.config.to_dict(),
            "clauses": [list(c.states) for c in self.clauses],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TsetlinMachine":
        if data.get("format") != SNAPSHOT_FORMAT:
            raise ValueError(f"not a machine snapshot: format={data.get('format')!r}")
        if data.get("version") != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version {data.get('version')!r}")
        return cls(MachineConfig.from_dict(data["config"]), states=data["clauses"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "TsetlinMachine":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        return f"TsetlinMachine({self.config}, profile={self.profile_string()})"


def vote_sum(tm: TsetlinMachine, x: Sequence[int], mode: EvalMode) -> int:
    return tm.vote_sum(x, mode)


def classify(tm: TsetlinMachine, x: Sequence[int]) -> int:
    return tm.classify(x)


def train_step(tm: TsetlinMachine, sample: Sample, rng: random.Random) -> StepTrace:
    return tm.train_step(sample, rng)


def action_profile(tm: TsetlinMachine) -> list[Action]:
    return tm.action_profile()
