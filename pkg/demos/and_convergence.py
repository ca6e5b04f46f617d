"""Train single-clause machines on AND and report how fast they settle on IEIE."""

import argparse

from tmlab import ExperimentConfig, Gating, MachineConfig, OperatorSpec, TargetProfile, run_batch


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--s", type=float, default=4)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    cfg = ExperimentConfig(
        MachineConfig(o=2, m=1, n=args.n, s=args.s, gating=Gating.ALWAYS_FIRE),
        OperatorSpec("AND"),
        trials=args.trials,
        max_steps=100_000,
        seed=args.seed,
        convergence=TargetProfile("IEIE"),
    )
    report = run_batch(cfg)
    agg = report.aggregate()
    print(f"{agg['converged']}/{agg['trials']} trials reached IEIE")
    print(f"steps: {agg['steps']}")
    for t in report.trials[:5]:
        print(f"  seed {t.seed}: {t.steps} steps, final profile {t.profile}")


if __name__ == "__main__":
    main()
