"""Scenario configuration: validation, sweeps, and TOML parsing."""

import dataclasses

import pytest

from conftest import make_config
from sa_mimo_noma.allocation import AllocationMode
from sa_mimo_noma.config import (LABELS, LinkDirection, SweepSpec,
                                 dbm_to_linear_snr, load_scenario,
                                 scenario_from_dict)
from sa_mimo_noma.errors import ConfigurationError

SCENARIO = {
    "scenario": {"name": "t", "link": "downlink", "allocation": "fixed",
                 "bs_antennas": 2, "user_antennas": 2, "delta": 1.0},
    "geometry": {"cell_radius_m": 20.0, "inner_radius_m": 10.0,
                 "min_distance_m": 1.0, "path_loss_exponent": 3.0},
    "interference": {"density_per_m2": 1e-4, "power_dbm": -20.0},
    "power": {"noise_power_dbm": -30.0, "far_coeff_sq": 0.75},
    "rates": {"near_bpcu": 1.0, "far_bpcu": 1.0},
    "monte_carlo": {"trials": 1000, "seed": 7},
    "sweep": {"parameter": "tx_power_dbm", "values": [20.0, 30.0]},
    "outputs": {"labels": ["far_mod", "near_mod"]},
}


def _scenario(mutate=None):
    import copy
    data = copy.deepcopy(SCENARIO)
    if mutate:
        mutate(data)
    return scenario_from_dict(data)


def test_dbm_conversion():
    assert dbm_to_linear_snr(0.0, -30.0) == pytest.approx(1e3)
    assert dbm_to_linear_snr(-30.0, -30.0) == 1.0


def test_config_validation():
    with pytest.raises(ConfigurationError):
        make_config(user_antennas=1)        # needs N > M/2
    with pytest.raises(ConfigurationError):
        make_config(delta=0.5)
    with pytest.raises(ConfigurationError):
        make_config(alpha=2.0)
    with pytest.raises(ConfigurationError):
        make_config(rho=0.0)
    with pytest.raises(ConfigurationError):
        make_config(trials=0)
    with pytest.raises(ConfigurationError):
        make_config(truncation_factor=0.5)


def test_config_properties():
    cfg = make_config(bs_antennas=2, user_antennas=3)
    assert cfg.nullspace_dim == 4
    assert cfg.truncation_radius == pytest.approx(2000.0)
    assert not cfg.has_interference
    assert make_config(interferer_density=1e-4,
                       rho_interferer=1.0).has_interference
    assert cfg.with_rho(5.0).rho == 5.0


def test_sweep_spec_validation():
    with pytest.raises(ConfigurationError):
        SweepSpec(parameter="tx_power_dbm", values=(), labels=("far_mod",))
    with pytest.raises(ConfigurationError):
        SweepSpec(parameter="tx_power_dbm", values=(2.0, 1.0),
                  labels=("far_mod",))
    with pytest.raises(ConfigurationError):
        SweepSpec(parameter="tx_power_dbm", values=(1.0,), labels=())


def test_scenario_from_dict_and_config_at():
    scenario = _scenario()
    assert scenario.base.rho == pytest.approx(dbm_to_linear_snr(20.0, -30.0))
    cfg = scenario.config_at(30.0)
    assert cfg.rho == pytest.approx(1e6)
    assert cfg.rho_interferer == pytest.approx(10.0)


def test_sweep_parameters_dispatch():
    def use(param, values):
        def mutate(d):
            d["sweep"] = {"parameter": param, "values": values}
            if param == "tx_power_dbm":
                return
            d["power"]["tx_power_dbm"] = 30.0
        return mutate

    s = _scenario(use("interferer_power_dbm", [-20.0, 0.0]))
    assert s.config_at(0.0).rho_interferer == pytest.approx(1e3)
    s = _scenario(use("interferer_density_per_m2", [1e-5, 1e-4]))
    assert s.config_at(1e-4).interferer_density == 1e-4
    s = _scenario(use("user_antennas", [2, 3]))
    assert s.config_at(3).user_antennas == 3
    s = _scenario(use("rate_far_bpcu", [1.0, 2.0]))
    assert s.config_at(2.0).rates.far == 2.0


def test_unknown_sweep_parameter_rejected():
    scenario = _scenario()
    bad = dataclasses.replace(
        scenario, sweep=dataclasses.replace(scenario.sweep, parameter="bogus"))
    with pytest.raises(ConfigurationError):
        bad.config_at(1.0)


def test_labels_checked_against_mode():
    with pytest.raises(ConfigurationError):
        _scenario(lambda d: d["outputs"].update(labels=["sum_mod"]))
    with pytest.raises(ConfigurationError):
        _scenario(lambda d: d["scenario"].update(allocation="cognitive_uplink_case1"))
    assert ("far_true" in LABELS[(LinkDirection.DOWNLINK, AllocationMode.FIXED)])


def test_missing_and_bad_keys_rejected():
    def drop(d):
        del d["geometry"]["cell_radius_m"]
    with pytest.raises(ConfigurationError):
        _scenario(drop)
    with pytest.raises(ConfigurationError):
        _scenario(lambda d: d["rates"].update(near_bpcu="fast"))


def test_load_scenario_roundtrip(tmp_path):
    text = """
[scenario]
name = "toml-test"
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
far_coeff_sq = 0.75

[rates]
near_bpcu = 1.0
far_bpcu = 1.0

[monte_carlo]
trials = 500

[sweep]
parameter = "tx_power_dbm"
values = [20.0, 30.0]

[outputs]
labels = ["far_mod"]
"""
    path = tmp_path / "scenario.toml"
    path.write_text(text)
    scenario = load_scenario(path)
    assert scenario.name == "toml-test"
    assert scenario.base.trials == 500
    assert scenario.base.rho_interferer == 0.0

    bad = tmp_path / "bad.toml"
    bad.write_text("not [valid toml")
    with pytest.raises(ConfigurationError):
        load_scenario(bad)
