import json
import subprocess
import sys

import pytest

from tmlab.cli import main


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


AND_CONFIG = {
    "machine": {"o": 2, "m": 1, "n": 20, "s": 4},
    "operator": {"name": "AND"},
    "experiment": {"trials": 3, "max_steps": 50000, "seed": 1},
}


def test_train_writes_reports(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["train", "--config", write_config(tmp_path, AND_CONFIG), "--out", str(out)]) == 0
    assert (out / "report.json").exists() and (out / "report.csv").exists()
    resolved = json.loads((out / "config.resolved.json").read_text())
    assert resolved["machine"]["gating"] == "always_fire"
    assert resolved["machine"]["th"] == 1
    assert resolved["experiment"]["convergence"] == {"kind": "target_profile", "profile": "IEIE", "depth": None}
    assert "3/3 trials converged" in capsys.readouterr().out


def test_train_is_reproducible_from_resolved_config(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    main(["train", "--config", write_config(tmp_path, AND_CONFIG), "--out", str(first)])
    main(["train", "--config", str(first / "config.resolved.json"), "--out", str(second)])
    assert (first / "report.json").read_text() == (second / "report.json").read_text()


def test_seed_override(tmp_path):
    out = tmp_path / "out"
    main(["train", "--config", write_config(tmp_path, AND_CONFIG), "--out", str(out), "--seed", "42"])
    report = json.loads((out / "report.json").read_text())
    assert [t["seed"] for t in report["trials"]] == [42, 43, 44]


def test_multi_clause_defaults_to_gated(tmp_path):
    cfg = {
        "machine": {"o": 2, "m": 3, "n": 10},
        "operator": {"name": "OR"},
        "experiment": {"trials": 2, "max_steps": 10000},
        "output": {"formats": ["csv"]},
    }
    out = tmp_path / "out"
    assert main(["train", "--config", write_config(tmp_path, cfg), "--out", str(out)]) == 0
    resolved = json.loads((out / "config.resolved.json").read_text())
    assert resolved["machine"]["gating"] == "gated"
    assert resolved["experiment"]["convergence"] == {"kind": "truth_table"}
    assert not (out / "report.json").exists() and (out / "report.csv").exists()


@pytest.mark.parametrize(
    "patch, field",
    [
        ({"machine": {"o": 2, "m": 1, "s": 1}}, "machine.s"),
        ({"machine": {"o": 2, "m": 1, "t": 2}}, "machine.t"),
        ({"machine": {"o": 2, "m": 1, "bogus": 1}}, "machine.bogus"),
        ({"extra": {}}, "extra"),
        ({"experiment": {"trials": 1, "tirals": 2}}, "experiment.tirals"),
        ({"operator": {"name": "NAND"}}, "operator.name"),
        ({"experiment": {"convergence": {"kind": "magic"}}}, "experiment.convergence.kind"),
        ({"output": {"formats": ["xml"]}}, "output.formats"),
    ],
)
def test_train_config_errors(tmp_path, capsys, patch, field):
    cfg = {**AND_CONFIG, **patch}
    code = main(["train", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o")])
    assert code == 2
    assert field in capsys.readouterr().err


def test_missing_out_dir(tmp_path):
    assert main(["train", "--config", write_config(tmp_path, AND_CONFIG)]) == 2


def test_invalid_json_and_missing_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["train", "--config", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert main(["train", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path / "o")]) == 1


def test_analyze_and(tmp_path, capsys):
    cfg = {"machine": {"o": 2, "m": 1, "n": 1, "s": 4}, "operator": {"name": "AND"}}
    out = tmp_path / "out"
    assert main(["analyze", "--config", write_config(tmp_path, cfg), "--out", str(out)]) == 0
    report = json.loads((out / "chain.json").read_text())
    assert [c["label"] for c in report["classes"]] == ["IEIE"]
    assert float(report["classes"][0]["min_absorption"]) == 1.0
    assert json.loads((out / "config.resolved.json").read_text())["machine"]["gating"] == "always_fire"
    assert "IEIE: min absorption 1.0" in capsys.readouterr().out


def test_analyze_or_sub_01(tmp_path):
    cfg = {"machine": {"o": 2, "m": 1, "n": 1, "s": 4}, "operator": {"name": "OR_SUB_01"}}
    out = tmp_path / "out"
    assert main(["analyze", "--config", write_config(tmp_path, cfg), "--out", str(out)]) == 0
    report = json.loads((out / "chain.json").read_text())
    assert [c["label"] for c in report["classes"]] == ["EIIE"]


def test_analyze_too_large(tmp_path, capsys):
    cfg = {"machine": {"o": 2, "m": 3, "n": 100}, "operator": {"name": "OR"}}
    assert main(["analyze", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)]) == 3
    assert "m=3" in capsys.readouterr().err


def test_state_cap_env(tmp_path, monkeypatch):
    cfg = {"machine": {"o": 2, "m": 1, "n": 1}, "operator": {"name": "AND"}}
    monkeypatch.setenv("TMLAB_STATE_CAP", "8")
    assert main(["analyze", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path)]) == 3


def test_diagram_examples(tmp_path):
    out = tmp_path / "d.dot"
    base = ["diagram", "--case", "1", "--scenario", "2", "--ta", "3", "--out", str(out)]
    assert main(base + ["--sample", "1,1,1"]) == 0
    text = out.read_text()
    assert text.count('label="P 1/4"') == 2 and "R " not in text

    assert main(base + ["--sample", "1,0,0"]) == 0
    text = out.read_text()
    assert "->" not in text and "No action" in text

    base[2] = "2"
    assert main(base + ["--sample", "1,1,1", "--s", "10"]) == 0
    assert 'label="R 9/10"' in out.read_text()


@pytest.mark.parametrize(
    "args",
    [
        ["--sample", "1,1"],
        ["--sample", "1,2,1"],
        ["--sample", "1,1,1", "--s", "1"],
        ["--sample", "1,1,1", "--n", "0"],
    ],
)
def test_diagram_errors(tmp_path, args):
    base = ["diagram", "--case", "1", "--scenario", "1", "--ta", "3", "--out", str(tmp_path / "d.dot")]
    assert main(base + args) == 2


def test_table(capsys):
    assert main(["table", "--operator", "or"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "x1 x2 | y | weight"
    assert out[1:] == [" 0  0 | 0 | 1/4", " 0  1 | 1 | 1/4", " 1  0 | 1 | 1/4", " 1  1 | 1 | 1/4"]
    assert main(["table", "--operator", "nand"]) == 2


def test_console_script_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "tmlab.cli", "table", "--operator", "AND"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and " 1  1 | 1 | 1/4" in proc.stdout
