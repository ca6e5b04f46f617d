"""Render frozen-automaton condition diagrams and the drift table for AND.

Writes DOT files to ``diagrams/`` (render with ``dot -Tpng``) and prints
which way the studied automata TA3 and TA4 are pushed in each case/scenario.
"""

from pathlib import Path

from tmlab import OperatorSpec, Sample
from tmlab.markov.conditions import CASES, SCENARIOS, Drift, condition_diagram, direction_summary

out = Path("diagrams")
out.mkdir(exist_ok=True)
for x1, x2 in ((1, 1), (0, 1)):
    sample = Sample((x1, x2), x1 & x2)
    for ta in (3, 4):
        path = out / f"case2_scenario1_ta{ta}_{x1}{x2}{sample.y}.dot"
        path.write_text(condition_diagram(2, 1, ta, sample))
        print("wrote", path)

symbol = {Drift.TOWARD_INCLUDE: "I", Drift.TOWARD_EXCLUDE: "E", Drift.MIXED: "m", Drift.NONE: "-"}
print("\nAND drift of (TA3, TA4); rows are scenarios, columns are cases")
print("      " + "  ".join(f"C{c}" for c in CASES))
for sc in SCENARIOS:
    cells = ["".join(symbol[d] for d in direction_summary(c, sc, OperatorSpec("AND")).values()) for c in CASES]
    print(f"  S{sc}  " + "  ".join(cells))
