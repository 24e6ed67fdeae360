"""User placement, Poisson interferer fields, and the bounded path-loss law.

The cell is a disc of radius ``outer_radius`` centred on the base station.
Near users live in the inner disc of radius ``inner_radius``, far users in
the surrounding ring.  Interferers form a homogeneous Poisson point process,
sampled on a truncation disc large enough that the discarded tail is
negligible for path-loss exponents above 2.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

# Truncation disc radius = factor * outer cell radius.  For alpha > 2 the
# mean interference from beyond R_max decays like R_max^(2-alpha); 100x keeps
# the truncation error below 1e-3 of the mean at alpha = 3.
DEFAULT_TRUNCATION_FACTOR = 100.0


@dataclass(frozen=True)
class Region:
    """Cell geometry: inner disc, outer ring, and path-loss saturation radius."""

    inner_radius: float   # r1, metres
    outer_radius: float   # r, metres
    min_distance: float   # r0, metres; path loss is constant below it

    def __post_init__(self):
        if not (0.0 < self.min_distance <= self.inner_radius < self.outer_radius):
            raise ConfigurationError(
                "region requires 0 < min_distance <= inner_radius < outer_radius, "
                f"got r0={self.min_distance}, r1={self.inner_radius}, r={self.outer_radius}"
            )


@dataclass
class InterferenceField:
    """One realization of the interferer point process."""

    points: np.ndarray          # (n, 2) planar coordinates, metres
    density: float              # lambda_I, points per m^2
    power: float                # rho_I, linear
    truncation_radius: float    # R_max, metres

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)


def path_loss(d, region, alpha):
    """Bounded path-loss law: d^alpha above min_distance, constant below.

    Accepts scalars or arrays; returns the linear attenuation factor L(d).
    """
    d = np.asarray(d, dtype=float)
    if not np.all(np.isfinite(d)):
        raise ConfigurationError("path_loss: distance must be finite")
    if np.any(d < 0):
        raise ConfigurationError("path_loss: distance must be non-negative")
    if alpha <= 2:
        raise ConfigurationError("path_loss: exponent must exceed 2")
    out = np.maximum(d, region.min_distance) ** alpha
    return out if out.ndim else float(out)


def sample_disc(radius, rng, size=None):
    """Points uniform over a disc of given radius, via inverse-CDF radii."""
    u = rng.random(size)
    r = radius * np.sqrt(u)
    theta = 2.0 * np.pi * rng.random(size)
    return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)


def sample_ring(r_in, r_out, rng, size=None):
    """Points uniform over the ring r_in <= d <= r_out."""
    u = rng.random(size)
    r = np.sqrt(r_in**2 + u * (r_out**2 - r_in**2))
    theta = 2.0 * np.pi * rng.random(size)
    return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)


def sample_user_pair_positions(region, rng, size=None):
    """Planar positions for one user pair: near uniform in the inner disc,
    far uniform in the ring.  Returns (pos_near, pos_far) with shape (..., 2).
    """
    pos_near = sample_disc(region.inner_radius, rng, size)
    pos_far = sample_ring(region.inner_radius, region.outer_radius, rng, size)
    return pos_near, pos_far


def sample_interference_field(density, power, truncation_radius, rng):
    """One PPP realization on the truncation disc centred at the base station."""
    if density < 0:
        raise ConfigurationError("interferer density must be non-negative")
    if truncation_radius <= 0:
        raise ConfigurationError("truncation radius must be positive")
    n = rng.poisson(density * np.pi * truncation_radius**2) if density > 0 else 0
    points = sample_disc(truncation_radius, rng, n) if n else np.empty((0, 2))
    return InterferenceField(points=points, density=density, power=power,
                             truncation_radius=truncation_radius)


def aggregate_interference(fld, at, region, alpha):
    """Total received interference power sum(rho_I / L(|p - at|)) at a point."""
    if fld.points.shape[0] == 0 or fld.power == 0.0:
        return 0.0
    at = np.asarray(at, dtype=float)
    d = np.hypot(fld.points[:, 0] - at[0], fld.points[:, 1] - at[1])
    return float(np.sum(fld.power / path_loss(d, region, alpha)))


def aggregate_interference_batched(px, py, trial_idx, n_trials, targets_x, targets_y,
                                   power, r0, alpha):
    """Per-trial interference sums for many pooled PPP points at once.

    ``px, py`` hold all interferer coordinates pooled over trials,
    ``trial_idx`` maps each point to its trial.  ``targets_x/y`` are length
    ``n_trials`` receiver coordinates.  Returns an (n_trials,) array.
    """
    if px.size == 0 or power == 0.0:
        return np.zeros(n_trials)
    d2 = (px - targets_x[trial_idx]) ** 2 + (py - targets_y[trial_idx]) ** 2
    lval = np.maximum(d2, r0 * r0) ** (alpha / 2.0)
    return np.bincount(trial_idx, weights=power / lval, minlength=n_trials)


def mean_interference_at_origin(density, power, truncation_radius, region, alpha):
    """Campbell-formula mean of the aggregate interference at the origin.

    lambda * rho_I * [pi r0^(2-alpha) r0^... ]: the integral of 1/L over the
    truncation disc, split at the saturation radius.
    """
    r0 = region.min_distance
    inner = np.pi * r0**2 / r0**alpha
    outer = 2.0 * np.pi * (r0 ** (2 - alpha) - truncation_radius ** (2 - alpha)) / (alpha - 2)
    return density * power * (inner + outer)
