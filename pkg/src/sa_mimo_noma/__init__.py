"""Link-level simulator and analytic outage calculator for signal-alignment
MIMO-NOMA with Poisson-field interference."""

from .allocation import AllocationMode, PowerAllocation, RateTargets
from .config import (LinkDirection, Scenario, SelectionMode, SweepSpec,
                     SystemConfig, dbm_to_linear_snr, load_scenario)
from .errors import (ConfigurationError, DegenerateChannelError,
                     InvariantViolation, NumericalError)
from .geometry import InterferenceField, Region
from .simulator import (OutageEstimate, estimate_outage, run_events,
                        simulate_downlink_trial, simulate_uplink_trial)

__version__ = "0.1.0"

__all__ = [
    "AllocationMode", "PowerAllocation", "RateTargets",
    "LinkDirection", "Scenario", "SelectionMode", "SweepSpec", "SystemConfig",
    "dbm_to_linear_snr", "load_scenario",
    "ConfigurationError", "DegenerateChannelError", "InvariantViolation",
    "NumericalError",
    "InterferenceField", "Region",
    "OutageEstimate", "estimate_outage", "run_events",
    "simulate_downlink_trial", "simulate_uplink_trial",
    "__version__",
]
