"""Rewrite tests/golden/*.dot from the current diagram code.

Run only after an intentional format change; test_conditions checks the
goldens against the hand-transcribed reference independently.
"""

from pathlib import Path

from reference_tables import REFERENCE_CONDITIONS, golden_name

from tmlab.machine import Sample
from tmlab.markov.conditions import condition_diagram

GOLDEN_DIR = Path(__file__).parent / "golden"
GOLDEN_S = 4
GOLDEN_N = 2


def render(case, scenario, ta, xy):
    return condition_diagram(case, scenario, ta, Sample(xy[:2], xy[2]), s=GOLDEN_S, n=GOLDEN_N)


def main():
    GOLDEN_DIR.mkdir(exist_ok=True)
    for case, scenario, ta, xy, _ in REFERENCE_CONDITIONS:
        (GOLDEN_DIR / golden_name(case, scenario, ta, xy)).write_text(render(case, scenario, ta, xy))
    print(f"wrote {len(REFERENCE_CONDITIONS)} goldens to {GOLDEN_DIR}")


if __name__ == "__main__":
    main()
