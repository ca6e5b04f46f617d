"""Noise-free training distributions for small Boolean operators."""

from __future__ import annotations

import bisect
import enum
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping

from tmlab.feedback import as_fraction
from tmlab.machine import ConfigError, Sample, format_fraction

Bits = tuple[int, ...]


class Operator(enum.Enum):
    AND = "AND"
    OR = "OR"
    OR_SUB_11 = "OR_SUB_11"
    OR_SUB_01 = "OR_SUB_01"
    OR_SUB_10 = "OR_SUB_10"
    XOR = "XOR"
    IDENTITY = "IDENTITY"
    NOT = "NOT"


_LABELS: dict[Operator, Callable[[Bits], int]] = {
    Operator.AND: lambda x: x[0] & x[1],
    Operator.OR: lambda x: x[0] | x[1],
    Operator.OR_SUB_11: lambda x: x[0] & x[1],
    Operator.OR_SUB_01: lambda x: x[1],
    Operator.OR_SUB_10: lambda x: x[0],
    Operator.XOR: lambda x: x[0] ^ x[1],
    Operator.IDENTITY: lambda x: x[0],
    Operator.NOT: lambda x: 1 - x[0],
}

# OR sub-patterns keep one positive pattern plus the all-zero negative.
_SUPPORT: dict[Operator, tuple[Bits, ...]] = {
    Operator.OR_SUB_11: ((0, 0), (1, 1)),
    Operator.OR_SUB_01: ((0, 0), (0, 1)),
    Operator.OR_SUB_10: ((0, 0), (1, 0)),
    Operator.IDENTITY: ((0,), (1,)),
    Operator.NOT: ((0,), (1,)),
}


def admissible_inputs(op: Operator) -> tuple[Bits, ...]:
    if op in _SUPPORT:
        return _SUPPORT[op]
    return tuple(itertools.product((0, 1), repeat=2))


def parse_bits(key: str) -> Bits:
    if not key or any(c not in "01" for c in key):
        raise ValueError(f"not a bit string: {key!r}")
    return tuple(int(c) for c in key)


def bits_key(x: Bits) -> str:
    return "".join(map(str, x))


@dataclass(frozen=True)
class OperatorSpec:
    """An operator plus a strictly positive distribution over its inputs.

    ``weights`` defaults to uniform over the admissible inputs. Custom
    weights must cover every admissible input and sum to 1.
    """

    name: Operator
    weights: tuple[tuple[Bits, Fraction], ...] = ()

    def __post_init__(self):
        if isinstance(self.name, str):
            try:
                object.__setattr__(self, "name", Operator(self.name.upper()))
            except ValueError:
                raise ConfigError("operator.name", f"unknown operator {self.name!r}") from None
        support = admissible_inputs(self.name)
        if not self.weights:
            w = Fraction(1, len(support))
            object.__setattr__(self, "weights", tuple((x, w) for x in support))
            return
        weights = dict(self.weights)
        if set(weights) != set(support):
            raise ConfigError(
                "operator.weights",
                f"weights must cover exactly {[bits_key(x) for x in support]}",
            )
        if any(w <= 0 for w in weights.values()):
            raise ConfigError("operator.weights", "every admissible input needs positive weight")
        if sum(weights.values()) != 1:
            raise ConfigError("operator.weights", "weights must sum to 1")
        object.__setattr__(self, "weights", tuple((x, weights[x]) for x in support))

    @classmethod
    def with_weights(cls, name: Operator | str, weights: Mapping[str | Bits, Any]) -> "OperatorSpec":
        parsed = []
        for key, w in weights.items():
            x = parse_bits(key) if isinstance(key, str) else tuple(key)
            try:
                parsed.append((x, as_fraction(w)))
            except (TypeError, ValueError, ZeroDivisionError):
                raise ConfigError("operator.weights", f"bad weight {w!r}") from None
        return cls(name, tuple(parsed))

    @property
    def width(self) -> int:
        return len(self.weights[0][0])

    def label(self, x: Bits) -> int:
        return _LABELS[self.name](tuple(x))

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name.value,
            "weights": {bits_key(x): format_fraction(w) for x, w in self.weights},
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "OperatorSpec":
        for key in data:
            if key not in ("name", "weights"):
                raise ConfigError(f"operator.{key}", "unknown key")
        if "name" not in data:
            raise ConfigError("operator.name", "missing")
        if data.get("weights"):
            return cls.with_weights(data["name"], data["weights"])
        return cls(data["name"])


def truth_table(spec: OperatorSpec) -> list[tuple[Bits, int]]:
    """Admissible ``(input, label)`` rows in lexicographic input order."""
    return [(x, spec.label(x)) for x in sorted(x for x, _ in spec.weights)]


class _Sampler:
    def __init__(self, spec: OperatorSpec):
        self.samples = [Sample(x, spec.label(x)) for x, _ in spec.weights]
        acc = 0.0
        self.cumulative = []
        for _, w in spec.weights:
            acc += float(w)
            self.cumulative.append(acc)
        self.cumulative[-1] = 1.0

    def __call__(self, rng: random.Random) -> Sample:
        return self.samples[bisect.bisect_right(self.cumulative, rng.random())]


_samplers: dict[OperatorSpec, _Sampler] = {}


def sampler(spec: OperatorSpec) -> Callable[[random.Random], Sample]:
    """Cached draw function for ``spec``; one uniform variate per sample."""
    try:
        return _samplers[spec]
    except KeyError:
        return _samplers.setdefault(spec, _Sampler(spec))


def sample(spec: OperatorSpec, rng: random.Random) -> Sample:
    return sampler(spec)(rng)
