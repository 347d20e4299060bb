"""Campaign plumbing: config validation, report artifacts, determinism,
and the CLI exit-status contract."""

import json

import pytest

from stable_tv_lab.campaigns import (
    CAMPAIGNS,
    DEFAULT_PARAMS,
    ExperimentConfig,
    run_campaign,
)
from stable_tv_lab.cli import main

SMALL_SAMPLERS = {"alpha": [1.5], "t": [1.0], "xi": [1.0], "n": 40_000}


def test_all_campaigns_registered_with_defaults():
    assert set(CAMPAIGNS) == set(DEFAULT_PARAMS)
    assert len(CAMPAIGNS) == 7


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("not-a-campaign")
    with pytest.raises(ValueError):
        ExperimentConfig("constants", params={"bogus": 1})
    cfg = ExperimentConfig("constants", params={"d": [2]})
    assert cfg.params["d"] == [2]
    assert cfg.params["alpha"] == DEFAULT_PARAMS["constants"]["alpha"]  # merged


def test_config_from_file_with_overrides(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"campaign": "constants", "seed": 3, "params": {"d": [1]}}))
    cfg = ExperimentConfig.from_file(path, seed=9, output_dir=None)
    assert cfg.seed == 9 and cfg.params["d"] == [1]


def test_constants_campaign_report_shape():
    report = run_campaign(ExperimentConfig("constants"))
    assert report.passed
    json.dumps(report.as_dict())  # must be plain-Python serializable
    assert "constants" in report.data
    assert all(set(c) >= {"name", "value", "expected", "tolerance", "pass"} for c in report.checks)


def test_report_written_to_disk(tmp_path):
    out = tmp_path / "run"
    run_campaign(ExperimentConfig("constants", output_dir=str(out)))
    report = json.loads((out / "report.json").read_text())
    assert report["passed"] is True
    assert (out / "data" / "constants.csv").exists()


def test_campaign_reruns_are_value_identical():
    a = run_campaign(ExperimentConfig("verify-samplers", seed=5, params=SMALL_SAMPLERS))
    b = run_campaign(ExperimentConfig("verify-samplers", seed=5, params=SMALL_SAMPLERS))
    assert a.checks == b.checks
    assert a.data == b.data


def test_seed_changes_values_but_not_structure():
    a = run_campaign(ExperimentConfig("verify-samplers", seed=5, params=SMALL_SAMPLERS))
    b = run_campaign(ExperimentConfig("verify-samplers", seed=6, params=SMALL_SAMPLERS))
    assert [c["name"] for c in a.checks] == [c["name"] for c in b.checks]
    assert a.checks != b.checks


def test_cli_success_and_output(tmp_path, capsys):
    out = tmp_path / "cli-run"
    assert main(["constants", "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert json.loads(stdout)["passed"] is True
    assert (out / "report.json").exists()


def test_cli_config_file_and_failure_exit(tmp_path, capsys):
    # an absurd tolerance forces a failed check: exit status must be 1
    cfg = {
        "campaign": "moment-check",
        "params": {"alpha": [1.5], "t": [1.0], "n": 50_000, "blocks": 16, "rtol": 1e-12},
    }
    path = tmp_path / "doomed.json"
    path.write_text(json.dumps(cfg))
    assert main(["moment-check", "--config", str(path)]) == 1
    assert json.loads(capsys.readouterr().out)["passed"] is False


def test_cli_env_seed_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("STABLE_TV_LAB_SEED", "17")
    assert main(["constants"]) == 0
    assert json.loads(capsys.readouterr().out)["config"]["seed"] == 17


def test_cli_rejects_unknown_campaign():
    with pytest.raises(SystemExit):
        main(["definitely-not-a-campaign"])
