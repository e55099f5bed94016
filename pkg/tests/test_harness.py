# tests/test_harness.py
from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from gplab.errors import AcceptanceError
from gplab.harness import ExperimentConfig, acceptance, parse, parse_text, run, serialize
from gplab.harness.cli import main

SMALL_RUN = ["--cutoffs", "2,3", "--samples", "2", "--set", "nnz=6"]


# ---- configuration ----
def test_parse_serialize_round_trip() -> None:
    c = parse("experiment = cor2-tail  # comment\nseed=0x10\ncutoffs=2,3\nlambdas=0.5,1.0\n")
    assert c.experiment == "cor2-tail"
    assert c.seed == 16
    assert c.cutoffs == [2, 3]
    assert c.lambdas == [0.5, 1.0]
    assert parse(serialize(c)) == c
    assert "seed=16\n" in serialize(c)


def test_defaults_round_trip() -> None:
    c = ExperimentConfig()
    assert c.T is None and c.dump_term is None
    assert parse(serialize(c)) == c


def test_bad_config_is_rejected() -> None:
    with pytest.raises(ValueError):
        parse("bogus=1")
    with pytest.raises(ValueError, match="line 2"):
        parse_text("k=1\nno equals sign\n")
    with pytest.raises(ValueError):
        parse("dts=0.1,-0.1")
    with pytest.raises(ValueError):
        parse("alphas=0.5,1.0").alpha


def test_overrides_win_over_file_values() -> None:
    c = parse("k=2\nj=2\n", {"k": 3, "j": None, "n-max": 1})
    assert (c.k, c.j, c.n_max) == (3, 2, 1)


def test_output_dir_from_environment(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    monkeypatch.setenv("GPLAB_OUTPUT_DIR", str(tmp_path))
    assert ExperimentConfig().output_dir == str(tmp_path)


# ---- runner ----
def test_run_without_writing(tmp_path: Path) -> None:
    c = ExperimentConfig(experiment="data-randomized", cutoffs=[2], samples=2, nnz=6, output_dir=str(tmp_path))
    report = run(c, write=False)
    assert len(report.rows) == 2
    assert report.header["seed"] == 0
    assert report.verdict is not None and report.verdict["passed"]
    assert report.verdict["notes"]
    assert not any(tmp_path.iterdir())


def test_failed_acceptance_raises(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(
        "gplab.harness.runner.acceptance",
        lambda report, c: {"passed": False, "checks": {"forced": False}, "notes": []},
    )
    c = ExperimentConfig(experiment="data-randomized", cutoffs=[2], samples=1, nnz=4)
    with pytest.raises(AcceptanceError, match="forced"):
        run(c, check=True, write=False)


def test_acceptance_checks_cor2() -> None:
    c = ExperimentConfig(experiment="cor2-tail", cutoffs=[2], samples=5, nnz=6)
    report = run(c, write=False)
    verdict = acceptance(report, c)
    assert set(verdict["checks"]) == {"below_markov"}
    assert verdict["passed"]


def test_acceptance_checks_nls_phase_rate() -> None:
    c = ExperimentConfig(experiment="nls-residual", cutoffs=[2], k=1, dts=[0.02, 0.01], t_end=0.2)
    report = run(c, write=False)
    assert report.summary["phase_rate_expected"] == pytest.approx(1.25)
    assert report.summary["phase_rate_rel_err"] <= 1e-6
    verdict = acceptance(report, c)
    assert verdict["checks"]["phase_rate"]
    assert any(key.startswith("slope[") for key in verdict["checks"])

    report.summary["phase_rate_rel_err"] = 1e-3
    assert not acceptance(report, c)["checks"]["phase_rate"]


# ---- command line ----
def test_cli_config_prints_effective_values() -> None:
    result = CliRunner().invoke(main, ["config", "--experiment", "cor2-tail", "--seed", "0x1f", "--T", "0.5"])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert "experiment=cor2-tail" in lines
    assert "seed=31" in lines
    assert "T=0.5" in lines


def test_cli_run_writes_reproducible_reports(tmp_path: Path) -> None:
    args = ["run", "thm1-ratio", *SMALL_RUN, "--output-dir", str(tmp_path)]
    first = CliRunner().invoke(main, args)
    assert first.exit_code == 0, first.output
    assert "thm1-ratio: 4 rows" in first.output

    csv_path = tmp_path / "thm1-ratio.csv"
    meta = json.loads((tmp_path / "thm1-ratio.meta.json").read_text(encoding="utf-8"))
    assert meta["experiment"] == "thm1-ratio"
    assert meta["header"]["config"].startswith("experiment=thm1-ratio\n")
    text = csv_path.read_text(encoding="utf-8")

    second = CliRunner().invoke(main, args)
    assert second.exit_code == 0, second.output
    assert csv_path.read_text(encoding="utf-8") == text


@pytest.mark.parametrize(
    "args",
    [
        ["run", "no-such-experiment"],
        ["run", "thm1-ratio", "--set", "bogus=1"],
        ["run", "thm1-ratio", "--set", "k"],
        ["run", "thm1-ratio", "--alpha", "0.5,1.0", "--cutoffs", "2"],
    ],
)
def test_cli_bad_input_exits_2(args: list[str], tmp_path: Path) -> None:
    result = CliRunner().invoke(main, [*args, "--output-dir", str(tmp_path)])
    assert result.exit_code == 2


def test_cli_failed_assert_exits_3(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    monkeypatch.setattr(
        "gplab.harness.runner.acceptance",
        lambda report, c: {"passed": False, "checks": {"forced": False}, "notes": []},
    )
    args = ["run", "thm1-ratio", "--assert", *SMALL_RUN, "--output-dir", str(tmp_path)]
    result = CliRunner().invoke(main, args)
    assert result.exit_code == 3
    # the report is still written before the verdict is enforced
    assert (tmp_path / "thm1-ratio.csv").exists()
