"""Frozen-automaton views of one clause over two inputs.

One pair of automata (the "frozen" input bit) is held at fixed actions while
the other pair is studied. The frozen pair's joint action is a *case*, the
studied pair's joint action is a *scenario*:

=====  =========================  ==========  ============
label  frozen pair (plain, neg)   scenario    studied pair
=====  =========================  ==========  ============
1      E, I  (include not-x)      1           I, I
2      I, E  (include x)          2           I, E
3      E, E  (exclude both)       3           E, I
4      I, I  (include both)       4           E, E
=====  =========================  ==========  ============
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from tmlab.automaton import Action, penalty, reward
from tmlab.clause import EvalMode, conjunction, literal_value, literals
from tmlab.datagen import OperatorSpec
from tmlab.feedback import FeedbackContext, FeedbackEvent, feedback_probs
from tmlab.machine import Sample

I, E = Action.INCLUDE, Action.EXCLUDE

CASES: dict[int, tuple[Action, Action]] = {1: (E, I), 2: (I, E), 3: (E, E), 4: (I, I)}
SCENARIOS: dict[int, tuple[Action, Action]] = {1: (I, I), 2: (I, E), 3: (E, I), 4: (E, E)}


class Direction(enum.Enum):
    TOWARD_INCLUDE = "toward-I"
    TOWARD_EXCLUDE = "toward-E"


class Drift(enum.Enum):
    TOWARD_INCLUDE = "toward-I"
    TOWARD_EXCLUDE = "toward-E"
    MIXED = "mixed"
    # no sample moves the automaton at all
    NONE = "none"


@dataclass(frozen=True)
class Transition:
    event: FeedbackEvent
    probability: Fraction
    direction: Direction


def _direction(action: Action, event: FeedbackEvent) -> Direction:
    toward_include = (action is I) == (event is FeedbackEvent.REWARD)
    return Direction.TOWARD_INCLUDE if toward_include else Direction.TOWARD_EXCLUDE


def condition_transitions(
    frozen: Mapping[int, Action] | Sequence[Action],
    target_ta: int,
    sample: Sample,
    s,
) -> list[Transition]:
    """Non-inaction events for automaton ``target_ta`` under fixed actions.

    ``frozen`` gives the action of every automaton of the clause (1-based,
    the target included). Probabilities are the raw table entries, i.e. the
    feedback gate is taken to fire.
    """
    if not isinstance(frozen, Mapping):
        frozen = {k + 1: a for k, a in enumerate(frozen)}
    width = 2 * len(sample.x)
    if sorted(frozen) != list(range(1, width + 1)):
        raise ValueError(f"frozen must assign actions to automata 1..{width}")
    actions = [frozen[k] for k in range(1, width + 1)]
    clause = conjunction([a is I for a in actions], literals(sample.x), EvalMode.TRAIN)
    action = actions[target_ta - 1]
    ctx = FeedbackContext(action, clause, literal_value(sample.x, target_ta))
    probs = feedback_probs(sample.y, ctx, s)
    return [
        Transition(event, probs.of(event), _direction(action, event))
        for event in (FeedbackEvent.REWARD, FeedbackEvent.PENALTY)
        if probs.of(event) > 0
    ]


def pair_of(ta: int) -> tuple[int, int]:
    first = ta if ta % 2 else ta - 1
    return first, first + 1


def frozen_actions(case: int, scenario: int, studied_bit: int = 2) -> dict[int, Action]:
    """Actions of TA1..TA4 for a case on the other bit and a scenario on ``studied_bit``."""
    if case not in CASES or scenario not in SCENARIOS:
        raise ValueError(f"case and scenario must be in 1..4, got {case}, {scenario}")
    if studied_bit not in (1, 2):
        raise ValueError("studied_bit must be 1 or 2")
    studied = pair_of(2 * studied_bit)
    other = pair_of(2 * (3 - studied_bit))
    return {
        other[0]: CASES[case][0],
        other[1]: CASES[case][1],
        studied[0]: SCENARIOS[scenario][0],
        studied[1]: SCENARIOS[scenario][1],
    }


def drift(transitions: Sequence[Transition]) -> Drift:
    directions = {t.direction for t in transitions}
    if not directions:
        return Drift.NONE
    if len(directions) > 1:
        return Drift.MIXED
    return Drift(directions.pop().value)


def direction_summary(
    case: int, scenario: int, spec: OperatorSpec, s=4, studied_bit: int = 2
) -> dict[int, Drift]:
    """Drift of each studied automaton over all samples in the support of ``spec``."""
    if spec.width != 2:
        raise ValueError("direction summaries are defined for two-input operators")
    actions = frozen_actions(case, scenario, studied_bit)
    samples = [Sample(x, spec.label(x)) for x, _ in spec.weights]
    out = {}
    for ta in pair_of(2 * studied_bit):
        moves = [t for smp in samples for t in condition_transitions(actions, ta, smp, s)]
        out[ta] = drift(moves)
    return out


def _fraction_label(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def condition_diagram(
    case: int,
    scenario: int,
    ta: int,
    sample: Sample,
    s=4,
    n: int = 2,
) -> str:
    """DOT digraph of one frozen condition for automaton ``ta``.

    Nodes are the ``2n`` chain states; each non-inaction event contributes
    one edge from every state on the automaton's current action side
    (rewards dashed, penalties solid, end-state rewards as self-loops).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 1 <= ta <= 4:
        raise ValueError(f"ta must be in 1..4, got {ta}")
    studied_bit = (ta + 1) // 2
    actions = frozen_actions(case, scenario, studied_bit)
    transitions = condition_transitions(actions, ta, sample, s)
    action = actions[ta]
    clause = conjunction([actions[k] is I for k in range(1, 5)], literals(sample.x), EvalMode.TRAIN)

    x1, x2 = sample.x
    assign = ", ".join(f"TA{k}={actions[k].symbol}" for k in range(1, 5))
    kind = "Type I" if sample.y == 1 else "Type II"
    title = (
        f"Case {case}, Scenario {scenario}: {assign}; study TA{ta}; "
        f"x1={x1}, x2={x2}, y={sample.y}; {kind}, literal={literal_value(sample.x, ta)}, C={clause}"
    )
    name = f"case{case}_scenario{scenario}_ta{ta}_{x1}{x2}{sample.y}"
    lines = [
        f'digraph "{name}" {{',
        "  rankdir=LR;",
        "  labelloc=t;",
        f'  label="{title}";',
        "  node [shape=circle];",
        '  subgraph cluster_include { label="Include"; '
        + " ".join(f"s{k};" for k in range(1, n + 1))
        + " }",
        '  subgraph cluster_exclude { label="Exclude"; '
        + " ".join(f"s{k};" for k in range(n + 1, 2 * n + 1))
        + " }",
    ]
    side = range(1, n + 1) if action is I else range(n + 1, 2 * n + 1)
    for tr in transitions:
        step = reward if tr.event is FeedbackEvent.REWARD else penalty
        style = "dashed" if tr.event is FeedbackEvent.REWARD else "solid"
        label = f"{tr.event.symbol} {_fraction_label(tr.probability)}"
        for st in side:
            lines.append(f'  s{st} -> s{step(st, n)} [label="{label}", style={style}];')
    if not transitions:
        lines.append('  none [shape=plaintext, label="No action"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


AND_SAMPLES = tuple(Sample(x, x[0] & x[1]) for x in itertools.product((1, 0), repeat=2))


def enumerate_conditions() -> list[tuple[int, int, int, Sample]]:
    """Every (case, scenario, studied TA3/TA4, AND sample) combination: 128 in all."""
    return [
        (case, scenario, ta, smp)
        for case in CASES
        for scenario in SCENARIOS
        for ta in (3, 4)
        for smp in AND_SAMPLES
    ]
