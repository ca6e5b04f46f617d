"""Exact Markov-chain analysis of one clause on AND and the OR sub-patterns.

For each operator and chain depth the script builds the full joint kernel,
finds its closed classes and prints the smallest absorption probability
into each one.
"""

from tmlab import Gating, MachineConfig, OperatorSpec
from tmlab.markov import analyze
from tmlab.markov.chain import format_probability

for op in ("AND", "OR_SUB_11", "OR_SUB_01", "OR_SUB_10", "OR"):
    for n in (1, 2, 3):
        report = analyze(MachineConfig(o=2, m=1, n=n, s=4, gating=Gating.ALWAYS_FIRE), OperatorSpec(op))
        classes = ", ".join(
            f"{label} (min h = {format_probability(h)}, "
            f"{'solves' if report.represents_truth_table(k) else 'does not solve'} {op})"
            for k, (label, h) in enumerate(zip(report.labels, report.min_absorption))
        )
        print(f"{op:<10} N={n}  {report.kernel.size:>4} states  {classes}")

# A single clause cannot represent OR, so the full OR chain is instructive:
# whatever it settles into must fail on some input.
