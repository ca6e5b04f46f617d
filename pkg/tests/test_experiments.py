import csv
import io
import json

import pytest

from tmlab.datagen import OperatorSpec
from tmlab.experiments import (
    ActionStability,
    ExperimentConfig,
    TargetProfile,
    TruthTable,
    criterion_from_dict,
    default_criterion,
    run_batch,
    run_trial,
)
from tmlab.machine import ConfigError, Gating, MachineConfig, Sample, StepTrace, TsetlinMachine

AF = Gating.ALWAYS_FIRE


def trace(flips=0):
    return StepTrace(Sample((0, 0), 0), [], 0, [], [], flips)


def and_cfg(**kw):
    machine = MachineConfig(o=2, m=1, n=kw.pop("n", 10), gating=AF)
    return ExperimentConfig(machine, OperatorSpec("AND"), **kw)


class TestCriteria:
    def test_truth_table_on_correct_or_machine(self):
        cfg = MachineConfig(o=2, m=3, n=5, t=1)
        tm = TsetlinMachine.from_profile(cfg, "IEIE" + "EIIE" + "IEEI")
        assert TruthTable().monitor(tm, OperatorSpec("OR"))(trace())

    def test_truth_table_rejects_clause_on_zero_input(self):
        cfg = MachineConfig(o=2, m=3, n=5, t=1)
        tm = TsetlinMachine.from_profile(cfg, "IEIE" + "EIIE" + "EIEI")
        assert not TruthTable().monitor(tm, OperatorSpec("OR"))(trace())

    def test_truth_table_needs_t_clauses_per_positive_input(self):
        cfg = MachineConfig(o=2, m=3, n=5, t=2, th=1)
        tm = TsetlinMachine.from_profile(cfg, "IEIE" + "EIIE" + "IEEI")
        assert not TruthTable().monitor(tm, OperatorSpec("OR"))(trace())

    def test_truth_table_only_rechecks_after_flips(self):
        cfg = MachineConfig(o=2, m=1, n=5)
        tm = TsetlinMachine.from_profile(cfg, "EEEE")
        check = TruthTable().monitor(tm, OperatorSpec("AND"))
        assert not check(trace())
        tm.set_states([1, 10, 1, 10])
        assert not check(trace(flips=0))
        assert check(trace(flips=1))

    def test_target_profile_depth(self):
        cfg = MachineConfig(o=2, m=1, n=5)
        tm = TsetlinMachine(cfg, states=[[5, 6, 5, 6]])
        assert not TargetProfile("IEIE").monitor(tm, None)(trace())
        assert TargetProfile("IEIE", depth=1).monitor(tm, None)(trace())
        assert not TargetProfile("IEIE", depth=2).monitor(tm, None)(trace())
        tm.set_states([1, 10, 1, 10])
        assert TargetProfile("IEIE").monitor(tm, None)(trace())
        with pytest.raises(ConfigError):
            TargetProfile("IE").monitor(tm, None)
        with pytest.raises(ConfigError):
            TargetProfile("IEIE", depth=6).monitor(tm, None)

    def test_action_stability(self):
        check = ActionStability(3).monitor(None, None)
        assert [check(trace(f)) for f in (0, 0, 1, 0, 0, 0)] == [False, False, False, False, False, True]
        with pytest.raises(ConfigError):
            ActionStability(0).monitor(None, None)

    def test_from_dict(self):
        assert criterion_from_dict("truth_table") == TruthTable()
        assert criterion_from_dict({"kind": "target_profile", "profile": "IEIE"}) == TargetProfile("IEIE")
        assert criterion_from_dict({"kind": "action_stability", "window": 5}) == ActionStability(5)
        for bad in ({"kind": "nope"}, {"kind": "target_profile"}, {"kind": "truth_table", "x": 1}):
            with pytest.raises(ConfigError):
                criterion_from_dict(bad)

    def test_defaults(self):
        single = MachineConfig(o=2, m=1)
        assert default_criterion(single, OperatorSpec("AND")) == TargetProfile("IEIE")
        assert default_criterion(single, OperatorSpec("OR_SUB_01")) == TargetProfile("EIIE")
        assert default_criterion(single, OperatorSpec("OR")) == TruthTable()
        assert default_criterion(MachineConfig(o=2, m=3), OperatorSpec("AND")) == TruthTable()


class TestConfig:
    @pytest.mark.parametrize("kw", [{"trials": 0}, {"max_steps": 0}, {"seed": -1}, {"trials": 1.5}])
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            and_cfg(**kw)

    def test_width_mismatch(self):
        with pytest.raises(ConfigError) as err:
            ExperimentConfig(MachineConfig(o=2, m=1), OperatorSpec("NOT"))
        assert err.value.field == "machine.o"


class TestRuns:
    def test_one_step_cannot_converge(self):
        result = run_trial(and_cfg(n=100, max_steps=1), 0)
        assert not result.converged and result.steps == 1

    def test_and_trial_converges(self):
        result = run_trial(and_cfg(n=100, max_steps=100_000, seed=3), 0)
        assert result.converged and result.profile == "IEIE"
        assert result.seed == 3

    def test_single_trial_aggregate(self):
        report = run_batch(and_cfg(trials=1, max_steps=50_000, seed=8))
        (t,) = report.trials
        agg = report.aggregate()
        assert agg["trials"] == 1 and agg["converged"] == int(t.converged)
        assert agg["steps"] == {"p50": t.steps, "p90": t.steps, "max": t.steps}

    def test_seeds_and_determinism(self):
        cfg = and_cfg(trials=4, max_steps=20_000, seed=10)
        a, b = run_batch(cfg), run_batch(cfg)
        assert [t.seed for t in a.trials] == [10, 11, 12, 13]
        assert a.to_json() == b.to_json() and a.to_csv() == b.to_csv()
        assert run_trial(cfg, 2) == a.trials[2]

    def test_workers_do_not_change_results(self):
        cfg = and_cfg(trials=3, max_steps=20_000, seed=1)
        assert run_batch(cfg, workers=2).to_json() == run_batch(cfg).to_json()

    def test_or_truth_table_run(self):
        machine = MachineConfig(o=2, m=3, n=20, t=1, gating=Gating.GATED)
        cfg = ExperimentConfig(machine, OperatorSpec("OR"), trials=5, max_steps=100_000, seed=0)
        report = run_batch(cfg)
        assert report.convergence_fraction == 1.0
        assert report.aggregate()["sub_pattern_condition"] is True

    def test_report_formats(self):
        report = run_batch(and_cfg(trials=2, max_steps=1, seed=0))
        data = json.loads(report.to_json())
        assert data["format"] == "tmlab-experiment-report"
        assert data["aggregate"]["steps"] == {"p50": None, "p90": None, "max": None}
        assert data["config"]["experiment"]["convergence"]["kind"] == "target_profile"
        rows = list(csv.reader(io.StringIO(report.to_csv())))
        assert rows[0] == ["seed", "converged", "steps", "profile"]
        assert len(rows) == 3 and rows[1][1] == "0"
