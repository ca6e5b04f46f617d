"""Conjunctive clauses over literals.

Literal indices are 1-based: index ``2k-1`` is ``x_k`` and index ``2k`` is
``not x_k``, so a clause over ``o`` inputs owns ``2o`` automata.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from tmlab.automaton import Action, AutomatonState, action_of


class EvalMode(enum.Enum):
    TRAIN = "train"
    INFER = "infer"


def literal_value(x: Sequence[int], literal_index: int) -> int:
    if not 1 <= literal_index <= 2 * len(x):
        raise IndexError(f"literal index {literal_index} outside [1, {2 * len(x)}]")
    bit = x[(literal_index - 1) // 2]
    return bit if literal_index % 2 == 1 else 1 - bit


def literals(x: Sequence[int]) -> list[int]:
    """All ``2o`` literal values of ``x`` in TA order."""
    out = []
    for bit in x:
        out.append(bit)
        out.append(1 - bit)
    return out


def conjunction(included: Sequence[bool], lits: Sequence[int], mode: EvalMode) -> int:
    """Clause output given per-literal include flags and literal values."""
    empty = True
    for inc, lit in zip(included, lits):
        if inc:
            if not lit:
                return 0
            empty = False
    if empty and mode is EvalMode.INFER:
        return 0
    return 1


@dataclass
class ClauseState:
    """Mutable team of ``2o`` automaton states sharing chain depth ``n``."""

    states: list[int]
    n: int

    def __post_init__(self):
        if len(self.states) % 2 or not self.states:
            raise ValueError("a clause needs an even, non-zero number of automata")
        for st in self.states:
            if not 1 <= st <= 2 * self.n:
                raise ValueError(f"state {st} outside [1, {2 * self.n}]")

    @classmethod
    def from_actions(cls, actions: Sequence[Action] | str, n: int) -> "ClauseState":
        """Clause with every automaton at the deepest state of the given action."""
        if isinstance(actions, str):
            actions = [Action.from_symbol(c) for c in actions]
        return cls([1 if a is Action.INCLUDE else 2 * n for a in actions], n)

    @property
    def width(self) -> int:
        return len(self.states) // 2

    @property
    def tas(self) -> list[AutomatonState]:
        return [AutomatonState(st, self.n) for st in self.states]

    def actions(self) -> list[Action]:
        return [action_of(st, self.n) for st in self.states]

    def included(self) -> list[bool]:
        return [st <= self.n for st in self.states]

    def include_sets(self) -> tuple[set[int], set[int]]:
        """Input indices (1-based) included plainly and negated."""
        plain = {k // 2 + 1 for k, st in enumerate(self.states) if st <= self.n and k % 2 == 0}
        negated = {k // 2 + 1 for k, st in enumerate(self.states) if st <= self.n and k % 2 == 1}
        return plain, negated

    def evaluate(self, x: Sequence[int], mode: EvalMode) -> int:
        if len(x) != self.width:
            raise ValueError(f"input width {len(x)} != clause width {self.width}")
        return conjunction(self.included(), literals(x), mode)

    def describe(self) -> str:
        """Human-readable conjunction, e.g. ``x1 & ~x2``; ``1`` when empty."""
        terms = []
        for k, st in enumerate(self.states):
            if st <= self.n:
                terms.append(("~" if k % 2 else "") + f"x{k // 2 + 1}")
        return " & ".join(terms) if terms else "1"


def evaluate(c: ClauseState, x: Sequence[int], mode: EvalMode) -> int:
    return c.evaluate(x, mode)
