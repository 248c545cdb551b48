from __future__ import annotations

import csv
import json
import os

import pytest
from click.testing import CliRunner

from evovote.cli import main

from test_session_service import toy_csv_bytes


@pytest.fixture(scope="module")
def cli_run(tmp_path_factory):
    """One full headless run on the toy dataset, shared by the assertions."""
    tmp = tmp_path_factory.mktemp("cli")
    data = tmp / "toy.csv"
    data.write_bytes(toy_csv_bytes())
    out = tmp / "report.json"
    session_path = tmp / "session.json"
    runner = CliRunner()
    result = runner.invoke(main, [
        "run", "--data", str(data), "--label", "label", "--metrics", "balanced",
        "--n", "50", "--k", "5", "--stages", "1", "--auto-ensemble", "2",
        "--seed", "5", "--out", str(out), "--save-session", str(session_path),
    ])
    return result, tmp


def test_run_exits_cleanly_and_reports(cli_run):
    result, _ = cli_run
    assert result.exit_code == 0, result.output
    assert "dataset: 60 instances, 4 features" in result.output
    assert "best single model:" in result.output
    assert "auto ensemble (" in result.output
    assert "report written to" in result.output


def test_run_writes_report_document(cli_run):
    result, tmp = cli_run
    doc = json.loads((tmp / "report.json").read_text())
    assert doc["schema"] == "evovote-report/1"
    assert doc["settings"] == {"metric_group": "balanced",
                               "selected": ["accuracy", "precision", "recall", "f1"],
                               "n": 50, "k": 5, "seed": 5}
    assert doc["dataset"]["instances"] == 60
    assert doc["pool"]["models"] >= 250
    assert len(doc["stages"]) == 1
    assert doc["best_single"]["metrics"]["accuracy"] > 0.5
    assert doc["ensemble"] is not None
    assert doc["best_record"]["spec"]["overall"] >= doc["ensemble"]["overall"] - 1e-12
    assert set(doc["best_single_by_algorithm"]) == {"KNN", "LR", "MLP", "RF", "GradB"}
    assert doc["runtime_seconds"] > 0


def test_run_writes_models_csv(cli_run):
    result, tmp = cli_run
    doc = json.loads((tmp / "report.json").read_text())
    with open(tmp / "models.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == doc["pool"]["models"]
    assert rows[0]["id"] == "KNN0"
    header = rows[0].keys()
    for col in ("id", "algorithm", "stage", "origin", "params", "accuracy",
                "mcc", "overall"):
        assert col in header
    stages = {r["stage"] for r in rows}
    assert stages == {"0", "1"}
    assert any("n_neighbors=" in r["params"] for r in rows)
    for r in rows[:20]:
        assert 0.0 <= float(r["overall"]) <= 1.0


def test_run_renders_all_figures(cli_run):
    result, tmp = cli_run
    doc = json.loads((tmp / "report.json").read_text())
    assert set(doc["figures"]) == {"projection", "overall_by_algorithm",
                                   "stage_paths", "ensemble_per_class", "grid"}
    for name in doc["figures"].values():
        path = tmp / name
        assert path.exists(), name
        assert os.path.getsize(path) > 1000, name
        assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n", name


def test_run_saves_loadable_session(cli_run):
    from evovote.session import Session

    result, tmp = cli_run
    session = Session.load(tmp / "session.json")
    assert len(session.models) >= 250
    assert session.current_stage == 1
    assert session.best is not None


def test_run_rejects_missing_file(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["run", "--data", str(tmp_path / "nope.csv"),
                                  "--label", "y"])
    assert result.exit_code != 0


def test_run_rejects_cross_group_selection(tmp_path):
    data = tmp_path / "toy.csv"
    data.write_bytes(toy_csv_bytes())
    runner = CliRunner()
    result = runner.invoke(main, ["run", "--data", str(data), "--label", "label",
                                  "--metrics", "balanced", "--select", "mcc",
                                  "--n", "50", "--k", "5"])
    assert result.exit_code != 0


def test_demo_data_writes_fixed_dataset(tmp_path):
    out = tmp_path / "demo.csv"
    runner = CliRunner()
    result = runner.invoke(main, ["demo-data", "--out", str(out)])
    assert result.exit_code == 0, result.output
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 303
    targets = [r["target"] for r in rows]
    assert targets.count("0") == 138
    assert targets.count("1") == 165
    # fixed generator seed: repeated writes are identical
    out2 = tmp_path / "demo2.csv"
    runner.invoke(main, ["demo-data", "--out", str(out2)])
    assert out.read_bytes() == out2.read_bytes()
