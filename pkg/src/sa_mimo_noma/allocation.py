"""Power-allocation rules: fixed split, opportunistic downlink allocation,
and the two uplink decoding-order variants.

Coefficients are handled as squared magnitudes (fractions of the pair
power).  ``near`` is the user in the inner disc, ``far`` the ring user that
receives the larger share under the multiple-access ordering.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError

# Squared channel gains below this are treated as exactly zero, triggering
# the documented clamp branches instead of overflowing the quotients.
_GAIN_FLOOR = 1e-300


class AllocationMode(str, Enum):
    FIXED = "fixed"
    COGNITIVE_DOWNLINK = "cognitive_downlink"
    COGNITIVE_UPLINK_CASE1 = "cognitive_uplink_case1"
    COGNITIVE_UPLINK_CASE2 = "cognitive_uplink_case2"


@dataclass(frozen=True)
class PowerAllocation:
    near_sq: float    # a_m^2
    far_sq: float     # a_m'^2
    mode: AllocationMode

    def __post_init__(self):
        for v in (self.near_sq, self.far_sq):
            if not (0.0 <= v <= 1.0 + 1e-12):
                raise ConfigurationError(f"power coefficient {v} outside [0, 1]")


@dataclass(frozen=True)
class RateTargets:
    """Target rates in bits per channel use and the induced SINR thresholds."""

    near: float   # R_m
    far: float    # R_m'

    def __post_init__(self):
        if self.near < 0 or self.far < 0:
            raise ConfigurationError("rates must be non-negative")

    @property
    def eps_near(self):
        return 2.0 ** self.near - 1.0

    @property
    def eps_far(self):
        return 2.0 ** self.far - 1.0

    @property
    def eps_sum(self):
        return 2.0 ** (self.near + self.far) - 1.0


def fixed_allocation(far_sq):
    """Constant split with the far user taking the larger share."""
    if not (0.5 <= far_sq <= 1.0):
        raise ConfigurationError(
            f"fixed allocation needs far share in [0.5, 1], got {far_sq}")
    return PowerAllocation(near_sq=1.0 - far_sq, far_sq=far_sq,
                           mode=AllocationMode.FIXED)


def fixed_allocation_feasible(alloc, rates):
    """a_m'^2 > a_m^2 eps_m': the far user's SINR ceiling clears its target."""
    return alloc.far_sq > alloc.near_sq * rates.eps_far


def cognitive_downlink_near_share(rho, h_far_sq, noise_term, eps_far):
    """Near-user share that leaves the far user exactly at its SINR target.

    ``noise_term`` is the realized |v|^2 + |v^H 1|^2 I denominator of the far
    user.  Vectorized over the channel arguments.
    """
    if rho <= 0:
        raise ConfigurationError("transmit SNR must be positive")
    h = np.asarray(h_far_sq, dtype=float)
    noise = np.asarray(noise_term, dtype=float)
    safe = np.maximum(h, _GAIN_FLOOR)
    share = (rho * safe - eps_far * noise) / ((1.0 + eps_far) * rho * safe)
    share = np.where(h < _GAIN_FLOOR, 0.0, np.maximum(share, 0.0))
    return share if share.ndim else float(share)


def cognitive_downlink_alloc(rho, h_far_sq, v_far, interference_far, eps_far):
    """Opportunistic downlink split from the realized far-user link."""
    v_far = np.asarray(v_far)
    noise_term = (np.sum(np.abs(v_far) ** 2)
                  + np.abs(np.sum(v_far.conj())) ** 2 * interference_far)
    near = float(cognitive_downlink_near_share(rho, h_far_sq, noise_term, eps_far))
    return PowerAllocation(near_sq=near, far_sq=1.0 - near,
                           mode=AllocationMode.COGNITIVE_DOWNLINK)


def cognitive_downlink_simplified_share(rho, h_far_sq, eps_far):
    """Interference-free variant with the noise term bounded by the constant 2.

    This is the allocation the closed-form downlink analysis models; the
    exact rule above is what the simulator applies by default.
    """
    return cognitive_downlink_near_share(rho, h_far_sq, 2.0, eps_far)


def cognitive_uplink_case1_far_share(rho, h_near_sq, h_far_sq, eps_far):
    """Far share when the far user's message is decoded first (vectorized)."""
    if rho <= 0:
        raise ConfigurationError("transmit SNR must be positive")
    hn = np.asarray(h_near_sq, dtype=float)
    hf = np.asarray(h_far_sq, dtype=float)
    denom = rho * hf + eps_far * rho * hn
    share = np.where(denom < _GAIN_FLOOR, 1.0,
                     (eps_far + rho * eps_far * hn) / np.maximum(denom, _GAIN_FLOOR))
    share = np.minimum(share, 1.0)
    if eps_far == 0.0:
        share = np.zeros_like(share)
    return share if share.ndim else float(share)


def cognitive_uplink_case1_alloc(rho, h_near_sq, h_far_sq, eps_far):
    far = float(cognitive_uplink_case1_far_share(rho, h_near_sq, h_far_sq, eps_far))
    return PowerAllocation(near_sq=1.0 - far, far_sq=far,
                           mode=AllocationMode.COGNITIVE_UPLINK_CASE1)


def cognitive_uplink_case2_far_share(rho, h_far_sq, eps_far):
    """Far share when the near user's message is decoded first (vectorized)."""
    if rho <= 0:
        raise ConfigurationError("transmit SNR must be positive")
    hf = np.asarray(h_far_sq, dtype=float)
    share = np.where(hf < _GAIN_FLOOR, 1.0,
                     np.minimum(1.0, eps_far / (rho * np.maximum(hf, _GAIN_FLOOR))))
    return share if share.ndim else float(share)


def cognitive_uplink_case2_alloc(rho, h_far_sq, eps_far):
    far = float(cognitive_uplink_case2_far_share(rho, h_far_sq, eps_far))
    return PowerAllocation(near_sq=1.0 - far, far_sq=far,
                           mode=AllocationMode.COGNITIVE_UPLINK_CASE2)
