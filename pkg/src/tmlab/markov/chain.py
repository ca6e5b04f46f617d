"""Exact one-step kernels of the training game over joint automaton states.

Every joint state of ``m * 2o`` automata is one chain state. A chain step is
one sample draw followed by one (possibly gated) feedback round, with the
same snapshot semantics as :meth:`TsetlinMachine.train_step`.

Kernel entries are stored as integer numerators over one shared
denominator, so row sums and zero/non-zero structure are exact.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import spsolve

from tmlab.automaton import Action, action_of, reward
from tmlab.clause import EvalMode, conjunction, literals
from tmlab.datagen import OperatorSpec, truth_table
from tmlab.feedback import FeedbackContext, InfeasibleContext, feedback_probs
from tmlab.machine import Gating, MachineConfig

DEFAULT_STATE_CAP = 10**6
RESIDUAL_TOL = 1e-10
REPORT_FORMAT = "tmlab-chain-report"
REPORT_VERSION = 1


class AnalysisTooLarge(ValueError):
    def __init__(self, config: MachineConfig, size: int, cap: int):
        super().__init__(
            f"joint state space (2N)^(m*2o) = (2*{config.n})^({config.m}*{2 * config.o}) "
            f"= {size} exceeds the cap of {cap} states (n={config.n}, m={config.m}, o={config.o}); "
            "raise TMLAB_STATE_CAP or shrink n/m"
        )
        self.size = size
        self.cap = cap


def state_cap() -> int:
    value = os.environ.get("TMLAB_STATE_CAP")
    return int(value) if value else DEFAULT_STATE_CAP


@dataclass(frozen=True)
class JointSpace:
    """Mixed-radix numbering of joint states; the first automaton is most significant."""

    n: int
    count: int

    @property
    def size(self) -> int:
        return (2 * self.n) ** self.count

    def radix(self, k: int) -> int:
        return (2 * self.n) ** (self.count - 1 - k)

    def encode(self, states: Sequence[int]) -> int:
        if len(states) != self.count:
            raise ValueError(f"expected {self.count} states, got {len(states)}")
        base = 2 * self.n
        idx = 0
        for st in states:
            if not 1 <= st <= base:
                raise ValueError(f"state {st} outside [1, {base}]")
            idx = idx * base + (st - 1)
        return idx

    def decode(self, idx: int) -> tuple[int, ...]:
        if not 0 <= idx < self.size:
            raise ValueError(f"state id {idx} outside [0, {self.size})")
        base = 2 * self.n
        out = []
        for _ in range(self.count):
            idx, r = divmod(idx, base)
            out.append(r + 1)
        return tuple(reversed(out))

    def profile(self, idx: int) -> str:
        return "".join(action_of(st, self.n).symbol for st in self.decode(idx))


@dataclass
class TransitionKernel:
    config: MachineConfig
    spec: OperatorSpec
    space: JointSpace
    denominator: int
    rows: list[dict[int, int]] = field(repr=False)

    @property
    def size(self) -> int:
        return self.space.size

    def row(self, i: int) -> dict[int, Fraction]:
        return {j: Fraction(v, self.denominator) for j, v in self.rows[i].items()}

    def probability(self, i: int, j: int) -> Fraction:
        return Fraction(self.rows[i].get(j, 0), self.denominator)

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        src, dst = [], []
        for i, row in enumerate(self.rows):
            src.extend([i] * len(row))
            dst.extend(row)
        return np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)

    def to_sparse(self) -> sp.csr_matrix:
        src, dst = self.edges()
        data = np.array(
            [v / self.denominator for row in self.rows for v in row.values()], dtype=float
        )
        return sp.csr_matrix((data, (src, dst)), shape=(self.size, self.size))


def _int_table(s: Fraction) -> dict:
    """(y, include, clause, literal) -> (reward, inaction, penalty) numerators over s.numerator."""
    scale = s.numerator
    table = {}
    for y in (0, 1):
        for action in Action:
            for cv in (0, 1):
                for lit in (0, 1):
                    key = (y, action is Action.INCLUDE, cv, lit)
                    try:
                        probs = feedback_probs(y, FeedbackContext(action, cv, lit), s)
                    except InfeasibleContext:
                        table[key] = None
                        continue
                    nums = tuple(p * scale for p in probs)
                    assert all(v.denominator == 1 for v in nums)
                    table[key] = tuple(int(v) for v in nums)
    return table


def _convolve(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for da, va in a.items():
        for db, vb in b.items():
            d = da + db
            out[d] = out.get(d, 0) + va * vb
    return out


def build_kernel(
    config: MachineConfig, spec: OperatorSpec, cap: int | None = None
) -> TransitionKernel:
    """Exact one-step kernel of the game on ``spec`` for machine ``config``."""
    if spec.width != config.o:
        raise ValueError(f"operator width {spec.width} != machine input width o={config.o}")
    cap = state_cap() if cap is None else cap
    width = config.tas_per_clause
    space = JointSpace(config.n, config.m * width)
    if space.size > cap:
        raise AnalysisTooLarge(config, space.size, cap)

    n, t = config.n, config.t
    scale = config.s.numerator
    table = _int_table(config.s)
    weight_den = math.lcm(*(w.denominator for _, w in spec.weights))
    samples = [
        (x, spec.label(x), int(w * weight_den), literals(x)) for x, w in spec.weights
    ]
    always = config.gating is Gating.ALWAYS_FIRE
    gate_den = 1 if always else 2 * t
    clause_scale = scale**width
    denominator = weight_den * gate_den**config.m * clause_scale**config.m
    radices = [space.radix(k) for k in range(space.count)]

    rows: list[dict[int, int]] = []
    for idx in range(space.size):
        states = space.decode(idx)
        row: dict[int, int] = {}
        for _, y, weight, lits in samples:
            clause_states = [states[j * width:(j + 1) * width] for j in range(config.m)]
            values = [
                conjunction([st <= n for st in cs], lits, EvalMode.TRAIN) for cs in clause_states
            ]
            f = sum(values)
            if always:
                gate = 1
            else:
                clamped = max(-t, min(t, f))
                gate = t - clamped if y == 1 else t + clamped
            joint = {0: weight}
            for j, (cs, cv) in enumerate(zip(clause_states, values)):
                dist = {0: (gate_den - gate) * clause_scale}
                if gate:
                    fired = {0: gate}
                    for k, (st, lit) in enumerate(zip(cs, lits)):
                        inc = st <= n
                        probs = table[y, inc, cv, lit]
                        if probs is None:
                            raise InfeasibleContext(f"state {states} on input {lits}")
                        r, i, p = probs
                        radix = radices[j * width + k]
                        ta = {0: i} if i else {}
                        if r:
                            d = (reward(st, n) - st) * radix
                            ta[d] = ta.get(d, 0) + r
                        if p:
                            d = radix if inc else -radix
                            ta[d] = ta.get(d, 0) + p
                        fired = _convolve(fired, ta)
                    for d, v in fired.items():
                        dist[d] = dist.get(d, 0) + v
                joint = _convolve(joint, {d: v for d, v in dist.items() if v})
            for d, v in joint.items():
                if v:
                    row[idx + d] = row.get(idx + d, 0) + v
        rows.append(row)
    return TransitionKernel(config, spec, space, denominator, rows)


def closed_classes(kernel: TransitionKernel) -> list[list[int]]:
    """Closed communicating classes, each sorted, ordered by smallest member."""
    src, dst = kernel.edges()
    graph = sp.csr_matrix(
        (np.ones(len(src), dtype=np.int8), (src, dst)), shape=(kernel.size, kernel.size)
    )
    ncomp, labels = connected_components(graph, directed=True, connection="strong")
    leaks = labels[src] != labels[dst]
    open_comps = set(labels[src[leaks]].tolist())
    members: dict[int, list[int]] = {}
    for i, c in enumerate(labels.tolist()):
        if c not in open_comps:
            members.setdefault(c, []).append(i)
    return sorted(members.values(), key=lambda m: m[0])


def _is_closed(kernel: TransitionKernel, target: set[int]) -> bool:
    return all(j in target for i in target for j in kernel.rows[i])


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    size = len(b)
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            raise ArithmeticError("singular absorption system")
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / a[col][col]
        for r in range(size):
            if r != col and a[r][col] != 0:
                factor = a[r][col] * inv
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                b[r] -= factor * b[col]
    return [b[i] / a[i][i] for i in range(size)]


def absorption_probabilities(
    kernel: TransitionKernel, target: Iterable[int], exact: bool = False
) -> np.ndarray | list[Fraction]:
    """Probability of ending in the closed class ``target`` from every state.

    With ``exact=True`` the first-step system is solved over the rationals
    (dense elimination, only sensible for small chains) and a list of
    :class:`Fraction` is returned; otherwise a sparse float solve is used and
    its residual checked against ``1e-10``.
    """
    target = set(target)
    if not target or not _is_closed(kernel, target):
        raise ValueError("target is not a closed set of the kernel")
    absorbing = set().union(*map(set, closed_classes(kernel)))
    if not target <= absorbing:
        raise ValueError("target is not a closed class of the kernel")
    transient = [i for i in range(kernel.size) if i not in absorbing]
    pos = {s: k for k, s in enumerate(transient)}

    if exact:
        result = [Fraction(1) if i in target else Fraction(0) for i in range(kernel.size)]
        if transient:
            a = [[Fraction(0)] * len(transient) for _ in transient]
            b = [Fraction(0)] * len(transient)
            for k, i in enumerate(transient):
                a[k][k] += 1
                for j, p in kernel.row(i).items():
                    if j in pos:
                        a[k][pos[j]] -= p
                    elif j in target:
                        b[k] += p
            for i, v in zip(transient, _solve_exact(a, b)):
                result[i] = v
        return result

    result = np.array([1.0 if i in target else 0.0 for i in range(kernel.size)])
    if not transient:
        return result
    p = kernel.to_sparse().tocsr()
    t_idx = np.asarray(transient)
    q = p[t_idx][:, t_idx]
    tgt = np.zeros(kernel.size)
    tgt[list(target)] = 1.0
    b = p[t_idx] @ tgt
    a = (sp.identity(len(transient), format="csr") - q).tocsc()
    x = spsolve(a, b)
    if not np.all(np.isfinite(x)):
        raise ArithmeticError("singular absorption system")
    residual = np.max(np.abs(a @ x - b))
    if residual >= RESIDUAL_TOL:
        raise ArithmeticError(f"absorption solve residual {residual:.3e} >= {RESIDUAL_TOL}")
    result[t_idx] = x
    return result


def format_probability(value: float | Fraction) -> str:
    """Decimal string with 12 significant digits."""
    d = Decimal(float(value))
    if d == 0:
        return "0." + "0" * 11
    d = d.quantize(Decimal(1).scaleb(d.adjusted() - 11))
    # rounding up can carry into a new leading digit, e.g. 0.99...9 -> 1.0
    d = d.quantize(Decimal(1).scaleb(d.adjusted() - 11))
    return format(d, "f")


@dataclass
class ChainReport:
    kernel: TransitionKernel
    closed_classes: list[list[int]]
    labels: list[str]
    absorption: list[np.ndarray | list[Fraction]]

    @property
    def min_absorption(self) -> list[float]:
        return [float(min(v)) for v in self.absorption]

    def represents_truth_table(self, index: int) -> bool:
        """Whether every profile of closed class ``index`` reproduces the operator."""
        cfg = self.kernel.config
        width = cfg.tas_per_clause
        rows = truth_table(self.kernel.spec)
        for profile in self.labels[index].split("|"):
            clauses = [profile[j * width:(j + 1) * width] for j in range(cfg.m)]
            for x, y in rows:
                lits = literals(x)
                votes = sum(
                    conjunction([c == "I" for c in clause], lits, EvalMode.INFER)
                    for clause in clauses
                )
                if int(votes >= cfg.th) != y:
                    return False
        return True

    def to_dict(self) -> dict:
        space = self.kernel.space
        return {
            "format": REPORT_FORMAT,
            "version": REPORT_VERSION,
            "machine": self.kernel.config.to_dict(),
            "operator": self.kernel.spec.to_dict(),
            "states": self.kernel.size,
            "classes": [
                {
                    "label": label,
                    "members": [list(space.decode(i)) for i in members],
                    "min_absorption": format_probability(min(vec)),
                    "absorption": [format_probability(v) for v in vec],
                }
                for members, label, vec in zip(self.closed_classes, self.labels, self.absorption)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def class_label(kernel: TransitionKernel, members: Sequence[int]) -> str:
    """Distinct action profiles of a class, sorted and joined with ``|``."""
    return "|".join(sorted({kernel.space.profile(i) for i in members}))


def analyze(
    config: MachineConfig,
    spec: OperatorSpec,
    cap: int | None = None,
    exact: bool | None = None,
) -> ChainReport:
    """Kernel, closed classes and absorption vectors in one pass.

    ``exact`` defaults to rational solves for chains of at most 64 states.
    """
    kernel = build_kernel(config, spec, cap)
    classes = closed_classes(kernel)
    if exact is None:
        exact = kernel.size <= 64
    absorption = [absorption_probabilities(kernel, c, exact=exact) for c in classes]
    labels = [class_label(kernel, c) for c in classes]
    return ChainReport(kernel, classes, labels, absorption)
