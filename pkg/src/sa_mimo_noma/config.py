"""Scenario configuration: validated parameters plus TOML loading.

Physical quantities carry explicit units in the file keys (``_dbm``, ``_m``,
``_per_m2``, ``_bpcu``); internally everything is linear and SI.  The linear
transmit SNR is rho = 10^((P_dBm - noise_dBm) / 10).
"""

try:
    import tomllib
except ModuleNotFoundError:          # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .allocation import AllocationMode, RateTargets
from .errors import ConfigurationError
from .geometry import DEFAULT_TRUNCATION_FACTOR, Region


class LinkDirection(str, Enum):
    DOWNLINK = "downlink"
    UPLINK = "uplink"


class SelectionMode(str, Enum):
    RANDOM = "random"      # alignment coefficient uniform on the sphere
    MAX_MIN = "max_min"    # shared basis index maximizing the worst pair gain


def dbm_to_linear_snr(power_dbm, noise_dbm):
    return 10.0 ** ((power_dbm - noise_dbm) / 10.0)


@dataclass(frozen=True)
class SystemConfig:
    bs_antennas: int                    # M (also the number of user pairs)
    user_antennas: int                  # N
    region: Region
    alpha: float                        # path-loss exponent
    rho: float                          # transmit SNR, linear
    rho_interferer: float               # interferer SNR, linear
    interferer_density: float           # lambda_I, per m^2
    delta: float                        # interference bound coefficient
    rates: RateTargets
    allocation: AllocationMode
    link: LinkDirection
    selection: SelectionMode
    fixed_far_sq: float                 # a_m'^2 under fixed allocation
    trials: int
    seed: int
    truncation_factor: float = DEFAULT_TRUNCATION_FACTOR

    def __post_init__(self):
        if self.user_antennas * 2 <= self.bs_antennas:
            raise ConfigurationError(
                f"need N > M/2, got N={self.user_antennas}, M={self.bs_antennas}")
        if self.delta < 1.0:
            raise ConfigurationError(f"delta must be >= 1, got {self.delta}")
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if self.rho <= 0:
            raise ConfigurationError("transmit SNR must be positive")
        if self.rho_interferer < 0 or self.interferer_density < 0:
            raise ConfigurationError("interference parameters must be non-negative")
        if self.alpha <= 2:
            raise ConfigurationError("path-loss exponent must exceed 2")
        if self.truncation_factor < 1.0:
            raise ConfigurationError("truncation factor must be >= 1")

    @property
    def nullspace_dim(self):
        return 2 * self.user_antennas - self.bs_antennas

    @property
    def truncation_radius(self):
        return self.truncation_factor * self.region.outer_radius

    @property
    def has_interference(self):
        return self.interferer_density > 0 and self.rho_interferer > 0

    def with_rho(self, rho, rho_interferer=None):
        if rho_interferer is None:
            rho_interferer = self.rho_interferer
        return replace(self, rho=rho, rho_interferer=rho_interferer)


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple
    labels: tuple

    def __post_init__(self):
        if not self.values:
            raise ConfigurationError("sweep grid must be nonempty")
        vals = list(self.values)
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigurationError("sweep grid must be strictly increasing")
        if not self.labels:
            raise ConfigurationError("at least one output label is required")


@dataclass(frozen=True)
class Scenario:
    name: str
    base: SystemConfig
    sweep: SweepSpec
    noise_dbm: float

    def config_at(self, value):
        """Base config with the swept parameter set to ``value``."""
        p = self.sweep.parameter
        if p == "tx_power_dbm":
            return self.base.with_rho(dbm_to_linear_snr(value, self.noise_dbm))
        if p == "interferer_power_dbm":
            return replace(self.base,
                           rho_interferer=dbm_to_linear_snr(value, self.noise_dbm))
        if p == "interferer_density_per_m2":
            return replace(self.base, interferer_density=float(value))
        if p == "user_antennas":
            return replace(self.base, user_antennas=int(value))
        if p == "rate_far_bpcu":
            return replace(self.base,
                           rates=RateTargets(near=self.base.rates.near, far=float(value)))
        raise ConfigurationError(f"unknown sweep parameter '{p}'")


def _get(table, section, key, cast, default=None):
    try:
        raw = table[section][key]
    except KeyError:
        if default is not None:
            return default
        raise ConfigurationError(f"missing config key [{section}] {key}") from None
    try:
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad value for [{section}] {key}: {raw!r}") from exc


def scenario_from_dict(data, name="scenario"):
    region = Region(
        inner_radius=_get(data, "geometry", "inner_radius_m", float),
        outer_radius=_get(data, "geometry", "cell_radius_m", float),
        min_distance=_get(data, "geometry", "min_distance_m", float),
    )
    noise_dbm = _get(data, "power", "noise_power_dbm", float)
    interferer_dbm = _get(data, "interference", "power_dbm", float, default=-np.inf)
    rho_i = 0.0 if interferer_dbm == -np.inf else dbm_to_linear_snr(interferer_dbm, noise_dbm)

    rates = RateTargets(
        near=_get(data, "rates", "near_bpcu", float),
        far=_get(data, "rates", "far_bpcu", float),
    )
    sweep_values = tuple(float(v) for v in _get(data, "sweep", "values", list))
    sweep = SweepSpec(
        parameter=_get(data, "sweep", "parameter", str),
        values=sweep_values,
        labels=tuple(_get(data, "outputs", "labels", list)),
    )
    base = SystemConfig(
        bs_antennas=_get(data, "scenario", "bs_antennas", int),
        user_antennas=_get(data, "scenario", "user_antennas", int),
        region=region,
        alpha=_get(data, "geometry", "path_loss_exponent", float),
        rho=dbm_to_linear_snr(
            sweep_values[0] if sweep.parameter == "tx_power_dbm"
            else _get(data, "power", "tx_power_dbm", float), noise_dbm),
        rho_interferer=rho_i,
        interferer_density=_get(data, "interference", "density_per_m2", float, default=0.0),
        delta=_get(data, "scenario", "delta", float, default=1.0),
        rates=rates,
        allocation=AllocationMode(_get(data, "scenario", "allocation", str)),
        link=LinkDirection(_get(data, "scenario", "link", str)),
        selection=SelectionMode(_get(data, "scenario", "selection", str, default="random")),
        fixed_far_sq=_get(data, "power", "far_coeff_sq", float, default=0.75),
        trials=_get(data, "monte_carlo", "trials", int),
        seed=_get(data, "monte_carlo", "seed", int, default=2024),
        truncation_factor=_get(data, "geometry", "truncation_radius_factor", float,
                               default=DEFAULT_TRUNCATION_FACTOR),
    )
    _check_labels(base, sweep.labels)
    return Scenario(name=name, base=base, sweep=sweep, noise_dbm=noise_dbm)


def load_scenario(path):
    """Parse and validate a TOML scenario file."""
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigurationError(f"{path}: {exc}") from exc
    name = data.get("scenario", {}).get("name", str(path))
    return scenario_from_dict(data, name=name)


# Valid outage-event labels per (link, allocation); see simulator for the
# event definitions and report for the attached analytic columns.
LABELS = {
    (LinkDirection.DOWNLINK, AllocationMode.FIXED):
        ("far_true", "far_mod", "near_true", "near_mod"),
    (LinkDirection.DOWNLINK, AllocationMode.COGNITIVE_DOWNLINK):
        ("far_cr", "near_cr", "near_cr_simplified"),
    (LinkDirection.UPLINK, AllocationMode.FIXED):
        ("sum_true", "sum_mod"),
    (LinkDirection.UPLINK, AllocationMode.COGNITIVE_UPLINK_CASE1):
        ("case1_far", "case1_near"),
    (LinkDirection.UPLINK, AllocationMode.COGNITIVE_UPLINK_CASE2):
        ("case2_far", "case2_near"),
}


def _check_labels(cfg, labels):
    valid = LABELS.get((cfg.link, cfg.allocation))
    if valid is None:
        raise ConfigurationError(
            f"allocation '{cfg.allocation.value}' is not valid for {cfg.link.value}")
    bad = [l for l in labels if l not in valid]
    if bad:
        raise ConfigurationError(
            f"labels {bad} not available for {cfg.link.value}/{cfg.allocation.value}; "
            f"choose from {valid}")
