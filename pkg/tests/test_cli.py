"""Command-line interface, report output, and the verify suite."""

import csv
import json

import pytest

from sa_mimo_noma import cli, report
from sa_mimo_noma.errors import InvariantViolation, NumericalError
from sa_mimo_noma.presets import load_preset

SCENARIO_TOML = """
[scenario]
name = "cli-test"
link = "downlink"
allocation = "fixed"
bs_antennas = 2
user_antennas = 2

[geometry]
cell_radius_m = 20.0
inner_radius_m = 10.0
min_distance_m = 1.0
path_loss_exponent = 3.0

[interference]
density_per_m2 = 0.0

[power]
noise_power_dbm = -30.0
far_coeff_sq = 0.5625

[rates]
near_bpcu = 1.0
far_bpcu = 1.0

[monte_carlo]
trials = 2000

[sweep]
parameter = "tx_power_dbm"
values = [25.0, 35.0]

[outputs]
labels = ["far_mod", "near_mod"]
"""


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.toml"
    path.write_text(SCENARIO_TOML)
    return path


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_run_writes_outputs(scenario_file, tmp_path):
    out = tmp_path / "out"
    code = cli.main(["run", str(scenario_file), "--out", str(out)])
    assert code == cli.EXIT_OK
    rows = _read_csv(out / "curves.csv")
    assert rows[0] == list(report.CSV_COLUMNS)
    assert len(rows) == 1 + 2 * 2            # header + labels x sweep points
    assert (out / "summary.json").exists()
    assert (out / "curves.png").stat().st_size > 0
    summary = json.loads((out / "summary.json").read_text())
    assert all(summary["invariants"].values())


def test_run_is_reproducible(scenario_file, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["run", str(scenario_file), "--out", str(a)]) == 0
    assert cli.main(["run", str(scenario_file), "--out", str(b)]) == 0
    assert (a / "curves.csv").read_bytes() == (b / "curves.csv").read_bytes()


def test_run_json_format_and_overrides(scenario_file, tmp_path):
    out = tmp_path / "out"
    code = cli.main(["run", str(scenario_file), "--out", str(out),
                     "--format", "json", "--trials", "500", "--seed", "9",
                     "--threads", "2"])
    assert code == cli.EXIT_OK
    rows = json.loads((out / "curves.json").read_text())
    assert rows and all(r["trials"] == 500 and r["seed"] == 9 for r in rows)
    assert all(0.0 <= r["p_sim"] <= 1.0 for r in rows)


def test_analytic_columns_attached(scenario_file, tmp_path):
    out = tmp_path / "out"
    cli.main(["run", str(scenario_file), "--out", str(out), "--trials", "500"])
    rows = _read_csv(out / "curves.csv")
    header = rows[0]
    for row in rows[1:]:
        rec = dict(zip(header, row))
        assert float(rec["p_exact"]) > 0.0
        assert float(rec["p_highsnr"]) > 0.0


def test_validation_error_exit_code(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[scenario]\nname='x'\n")
    assert cli.main(["run", str(bad), "--out", str(tmp_path)]) == cli.EXIT_VALIDATION


def test_numerical_and_invariant_exit_codes(scenario_file, tmp_path, monkeypatch):
    def boom_numerical(*a, **k):
        raise NumericalError("quadrature failed")
    monkeypatch.setattr(report, "run_sweep", boom_numerical)
    assert cli.main(["run", str(scenario_file), "--out", str(tmp_path)]) \
        == cli.EXIT_NUMERICAL

    def boom_invariant(*a, **k):
        raise InvariantViolation("check failed")
    monkeypatch.setattr(report, "run_sweep", boom_invariant)
    assert cli.main(["run", str(scenario_file), "--out", str(tmp_path)]) \
        == cli.EXIT_INVARIANT


def test_verify_passes_on_clean_scenario(scenario_file, capsys):
    code = cli.main(["verify", str(scenario_file), "--trials", "2000"])
    out = capsys.readouterr().out
    assert code == cli.EXIT_OK
    assert "PASS" in out and "FAIL" not in out


def test_verify_checks_cover_invariants(scenario_file):
    from sa_mimo_noma.config import load_scenario
    results = report.verify_scenario(load_scenario(scenario_file), trials=2000)
    names = {name for name, _, _ in results}
    assert {"alignment_residual", "precoder_normalization",
            "bound_domination", "case2_per_trial_equality",
            "analytic_vs_quadrature"} <= names
    assert all(ok for _, ok, _ in results)
    report.require_all_passed(results)
    with pytest.raises(InvariantViolation):
        report.require_all_passed([("x", False, "boom")])


def test_presets_load_and_small_preset_runs(tmp_path):
    for name in ("fig1", "fig3a", "fig3b", "fig5", "fig6", "fig7", "antennas"):
        scenarios = load_preset(name)
        assert scenarios and all(s.base.trials > 0 for s in scenarios)
    out = tmp_path / "preset"
    code = cli.main(["preset", "fig7", "--out", str(out), "--trials", "500"])
    assert code == cli.EXIT_OK
    rows = _read_csv(out / "curves.csv")
    labels = {r[1] for r in rows[1:]}
    assert {"case1_far", "case1_near", "case2_far", "case2_near"} <= labels
