"""Two-action Tsetlin Automaton with ``2N`` states.

States are 1-indexed: ``1..N`` select Include (state 1 is the deepest),
``N+1..2N`` select Exclude (state ``2N`` is the deepest).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Action(enum.IntEnum):
    INCLUDE = 0
    EXCLUDE = 1

    @property
    def symbol(self) -> str:
        return "I" if self is Action.INCLUDE else "E"

    @classmethod
    def from_symbol(cls, symbol: str) -> "Action":
        try:
            return {"I": cls.INCLUDE, "E": cls.EXCLUDE}[symbol.upper()]
        except KeyError:
            raise ValueError(f"unknown action symbol {symbol!r}") from None


def action_of(state: int, n: int) -> Action:
    return Action.INCLUDE if state <= n else Action.EXCLUDE


def reward(state: int, n: int) -> int:
    """Move one step deeper into the current action, self-looping at the ends."""
    if state <= n:
        return state - 1 if state > 1 else 1
    return state + 1 if state < 2 * n else 2 * n


def penalty(state: int, n: int) -> int:
    """Move one step toward the opposite action."""
    return state + 1 if state <= n else state - 1


def deepest(action: Action, n: int) -> int:
    return 1 if action is Action.INCLUDE else 2 * n


def depth(state: int, n: int) -> int:
    """Distance from the action boundary: 1 at states N and N+1, N at the ends."""
    return n - state + 1 if state <= n else state - n


@dataclass(frozen=True)
class AutomatonState:
    state: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 1 <= self.state <= 2 * self.n:
            raise ValueError(f"state {self.state} outside [1, {2 * self.n}]")

    @property
    def action(self) -> Action:
        return action_of(self.state, self.n)

    def apply_reward(self) -> "AutomatonState":
        return AutomatonState(reward(self.state, self.n), self.n)

    def apply_penalty(self) -> "AutomatonState":
        return AutomatonState(penalty(self.state, self.n), self.n)
