"""Built-in scenario presets.

Each preset is a list of scenario dictionaries (most have one; the uplink
cognitive preset runs both decoding orders and merges the curves).  All
physical values are stated in the config's unit-suffixed keys.
"""

from .config import scenario_from_dict
from .errors import ConfigurationError

_WIDE_CELL = {
    "cell_radius_m": 20.0, "inner_radius_m": 10.0, "min_distance_m": 1.0,
    "path_loss_exponent": 3.0,
}

PRESETS = {
    # true vs bound-style downlink outage with fixed split
    "fig1": [{
        "scenario": {"name": "fig1", "link": "downlink", "allocation": "fixed",
                     "bs_antennas": 2, "user_antennas": 2, "delta": 1.0},
        "geometry": dict(_WIDE_CELL),
        "interference": {"density_per_m2": 1e-4, "power_dbm": -20.0},
        "power": {"noise_power_dbm": -30.0, "far_coeff_sq": 0.75},
        "rates": {"near_bpcu": 1.5, "far_bpcu": 1.5},
        "monte_carlo": {"trials": 20000, "seed": 2024},
        "sweep": {"parameter": "tx_power_dbm",
                  "values": [20.0, 25.0, 30.0, 35.0, 40.0, 45.0]},
        "outputs": {"labels": ["far_true", "far_mod", "near_true", "near_mod"]},
    }],
    # downlink fixed-split outage vs the closed forms
    "fig3a": [{
        "scenario": {"name": "fig3a", "link": "downlink", "allocation": "fixed",
                     "bs_antennas": 2, "user_antennas": 2, "delta": 1.0},
        "geometry": dict(_WIDE_CELL),
        "interference": {"density_per_m2": 1e-4, "power_dbm": -20.0},
        "power": {"noise_power_dbm": -30.0, "far_coeff_sq": 0.5625},
        "rates": {"near_bpcu": 1.0, "far_bpcu": 1.0},
        "monte_carlo": {"trials": 20000, "seed": 2024},
        "sweep": {"parameter": "tx_power_dbm",
                  "values": [20.0, 25.0, 30.0, 35.0, 40.0, 45.0]},
        "outputs": {"labels": ["far_mod", "near_mod"]},
    }],
    # same geometry without interferers, wider power range
    "fig3b": [{
        "scenario": {"name": "fig3b", "link": "downlink", "allocation": "fixed",
                     "bs_antennas": 2, "user_antennas": 2, "delta": 1.0},
        "geometry": dict(_WIDE_CELL),
        "interference": {"density_per_m2": 0.0},
        "power": {"noise_power_dbm": -30.0, "far_coeff_sq": 0.5625},
        "rates": {"near_bpcu": 1.0, "far_bpcu": 1.0},
        "monte_carlo": {"trials": 20000, "seed": 2024},
        "sweep": {"parameter": "tx_power_dbm",
                  "values": [20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0]},
        "outputs": {"labels": ["far_mod", "near_mod"]},
    }],
    # opportunistic downlink split, interference-free
    "fig5": [{
        "scenario": {"name": "fig5", "link": "downlink",
                     "allocation": "cognitive_downlink",
                     "bs_antennas": 2, "user_antennas": 2, "delta": 1.0},
        "geometry": dict(_WIDE_CELL),
        "interference": {"density_per_m2": 0.0},
        "power": {"noise_power_dbm": -30.0},
        "rates": {"near_bpcu": 1.0, "far_bpcu": 1.0},
        "monte_carlo": {"trials": 20000, "seed": 2024},
        "sweep": {"parameter": "tx_power_dbm",
                  "values": [20.0, 25.0, 30.0, 35.0, 40.0, 45.0]},
        "outputs": {"labels": ["far_cr", "near_cr", "near_cr_simplified"]},
    }],
    # uplink sum-rate outage with interferers
    "fig6": [{
        "scenario": {"name": "fig6", "link": "uplink", "allocation": "fixed",
                     "bs_antennas": 2, "user_antennas": 2, "delta": 1.0},
        "geometry": dict(_WIDE_CELL),
        "interference": {"density_per_m2": 1e-4, "power_dbm": -20.0},
        "power": {"noise_power_dbm": -30.0, "far_coeff_sq": 0.75},
        "rates": {"near_bpcu": 1.0, "far_bpcu": 1.0},
        "monte_carlo": {"trials": 20000, "seed": 2024},
        "sweep": {"parameter": "tx_power_dbm",
                  "values": [10.0, 15.0, 20.0, 25.0, 30.0, 35.0]},
        "outputs": {"labels": ["sum_true", "sum_mod"]},
    }],
    # uplink cognitive split, both decoding orders on the small cell
    "fig7": [
        {
            "scenario": {"name": "fig7-case1", "link": "uplink",
                         "allocation": "cognitive_uplink_case1",
                         "bs_antennas": 2, "user_antennas": 2, "delta": 1.0},
            "geometry": {"cell_radius_m": 4.0, "inner_radius_m": 2.0,
                         "min_distance_m": 1.0, "path_loss_exponent": 3.0},
            "interference": {"density_per_m2": 0.0},
            "power": {"noise_power_dbm": -30.0},
            "rates": {"near_bpcu": 1.0, "far_bpcu": 1.0},
            "monte_carlo": {"trials": 20000, "seed": 2024},
            "sweep": {"parameter": "tx_power_dbm",
                      "values": [-5.0, 0.0, 5.0, 10.0, 15.0, 20.0]},
            "outputs": {"labels": ["case1_far", "case1_near"]},
        },
        {
            "scenario": {"name": "fig7-case2", "link": "uplink",
                         "allocation": "cognitive_uplink_case2",
                         "bs_antennas": 2, "user_antennas": 2, "delta": 1.0},
            "geometry": {"cell_radius_m": 4.0, "inner_radius_m": 2.0,
                         "min_distance_m": 1.0, "path_loss_exponent": 3.0},
            "interference": {"density_per_m2": 0.0},
            "power": {"noise_power_dbm": -30.0},
            "rates": {"near_bpcu": 1.0, "far_bpcu": 1.0},
            "monte_carlo": {"trials": 20000, "seed": 2024},
            "sweep": {"parameter": "tx_power_dbm",
                      "values": [-5.0, 0.0, 5.0, 10.0, 15.0, 20.0]},
            "outputs": {"labels": ["case2_far", "case2_near"]},
        },
    ],
    # effect of the user antenna count under max-min selection
    "antennas": [{
        "scenario": {"name": "antennas", "link": "downlink",
                     "allocation": "fixed", "selection": "max_min",
                     "bs_antennas": 2, "user_antennas": 2, "delta": 1.0},
        "geometry": dict(_WIDE_CELL),
        "interference": {"density_per_m2": 0.0},
        "power": {"noise_power_dbm": -30.0, "far_coeff_sq": 0.75,
                  "tx_power_dbm": 40.0},
        "rates": {"near_bpcu": 4.0, "far_bpcu": 1.9},
        "monte_carlo": {"trials": 50000, "seed": 2024},
        "sweep": {"parameter": "user_antennas", "values": [2, 3, 4]},
        "outputs": {"labels": ["far_mod", "near_mod"]},
    }],
}


def load_preset(name):
    """Scenario objects for a named preset (validated on construction)."""
    try:
        tables = PRESETS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown preset '{name}'; available: {', '.join(sorted(PRESETS))}"
        ) from None
    return [scenario_from_dict(t, name=t["scenario"]["name"]) for t in tables]
