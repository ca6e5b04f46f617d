"""Three gated clauses learning OR with T = 1.

The machine is solved once every positive input fires at least one clause
and (0, 0) fires none. The script trains a few machines, keeps training each
one well past that point to confirm the truth table holds, and shows which
clauses were learned. Besides the exact sub-patterns x1 x2, ~x1 x2 and
x1 ~x2, the wider single-literal clauses x1 and x2 show up often: they cover
two positive inputs at once and are just as valid under T = 1.
"""

import random
from collections import Counter

from tmlab import Gating, MachineConfig, OperatorSpec, TruthTable, TsetlinMachine
from tmlab.datagen import sampler

SUB_PATTERNS = {"IEIE": "x1 x2", "EIIE": "~x1 x2", "IEEI": "x1 ~x2"}
NAMES = {**SUB_PATTERNS, "IEEE": "x1", "EEIE": "x2"}

cfg = MachineConfig(o=2, m=3, n=100, s=4, t=1, th=1, gating=Gating.GATED)
spec = OperatorSpec("OR")
draw = sampler(spec)
seen = Counter()

for seed in range(10):
    rng = random.Random(seed)
    tm = TsetlinMachine(cfg, rng)
    check = TruthTable().monitor(tm, spec)
    steps = 1
    while not check(tm.train_step(draw(rng), rng)):
        steps += 1
    lost = sum(not check(tm.train_step(draw(rng), rng)) for _ in range(20_000))
    profile = tm.profile_string()
    clauses = [profile[k:k + 4] for k in range(0, 12, 4)]
    seen.update(c for c in clauses if c in SUB_PATTERNS)
    names = ", ".join(NAMES.get(c, c) for c in clauses)
    print(f"seed {seed}: solved after {steps:>4} steps, clauses [{names}], later misses {lost}")

print("sub-pattern clause counts:", dict(seen))
