"""Type I / Type II feedback tables and event sampling.

Probabilities are exact :class:`fractions.Fraction` values so that the chain
analyzer can build exact kernels; sampling converts to float at draw time.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

from tmlab.automaton import Action


class FeedbackEvent(enum.IntEnum):
    REWARD = 0
    INACTION = 1
    PENALTY = 2

    @property
    def symbol(self) -> str:
        return "RIP"[self]


class InfeasibleContext(ValueError):
    """An included literal of value 0 inside a clause that evaluated to 1.

    The combination cannot arise from a consistent clause evaluation, so
    hitting it means the caller built the context incorrectly.
    """


def as_fraction(value: Real | str) -> Fraction:
    """Exact rational form of ``value``; floats go through their repr."""
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class FeedbackProbs:
    p_reward: Fraction
    p_inaction: Fraction
    p_penalty: Fraction

    def __post_init__(self):
        for name in ("p_reward", "p_inaction", "p_penalty"):
            p = getattr(self, name)
            if not 0 <= p <= 1:
                raise ValueError(f"{name}={p} outside [0, 1]")
        if self.p_reward + self.p_inaction + self.p_penalty != 1:
            raise ValueError(f"probabilities do not sum to 1: {self}")

    def __iter__(self):
        return iter((self.p_reward, self.p_inaction, self.p_penalty))

    def of(self, event: FeedbackEvent) -> Fraction:
        return (self.p_reward, self.p_inaction, self.p_penalty)[event]


@dataclass(frozen=True)
class FeedbackContext:
    action: Action
    clause_value: int
    literal_value: int

    def __post_init__(self):
        if self.clause_value not in (0, 1) or self.literal_value not in (0, 1):
            raise ValueError("clause_value and literal_value must be bits")
        if self.action is Action.INCLUDE and self.clause_value == 1 and self.literal_value == 0:
            raise InfeasibleContext(
                "included literal is 0 but the clause evaluated to 1"
            )


def _check_s(s: Fraction) -> None:
    if s <= 1:
        raise ValueError(f"s must be > 1, got {s}")


def type_i_probs(ctx: FeedbackContext, s: Real | str) -> FeedbackProbs:
    """Feedback for a TA when the sample label is 1."""
    s = as_fraction(s)
    _check_s(s)
    low = 1 / s
    high = (s - 1) / s
    zero = Fraction(0)
    if ctx.action is Action.INCLUDE:
        if ctx.clause_value == 1:
            # literal is necessarily 1 here
            return FeedbackProbs(high, low, zero)
        return FeedbackProbs(zero, high, low)
    if ctx.clause_value == 1 and ctx.literal_value == 1:
        return FeedbackProbs(zero, low, high)
    return FeedbackProbs(low, high, zero)


def type_ii_probs(ctx: FeedbackContext) -> FeedbackProbs:
    """Feedback for a TA when the sample label is 0."""
    if ctx.action is Action.EXCLUDE and ctx.clause_value == 1 and ctx.literal_value == 0:
        return FeedbackProbs(Fraction(0), Fraction(0), Fraction(1))
    return FeedbackProbs(Fraction(0), Fraction(1), Fraction(0))


def feedback_probs(y: int, ctx: FeedbackContext, s: Real | str) -> FeedbackProbs:
    return type_i_probs(ctx, s) if y == 1 else type_ii_probs(ctx)


def sample_event(p: FeedbackProbs, rng: random.Random) -> FeedbackEvent:
    """Draw one event with a single uniform variate from ``rng``."""
    u = rng.random()
    if u < p.p_reward:
        return FeedbackEvent.REWARD
    if u < p.p_reward + p.p_inaction:
        return FeedbackEvent.INACTION
    return FeedbackEvent.PENALTY
