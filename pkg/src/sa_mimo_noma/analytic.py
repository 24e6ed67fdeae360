"""Closed-form and asymptotic outage expressions.

Exact probabilities are evaluated by adaptive quadrature of the averaged
outage integrands over the user-position distributions; high-SNR companions
are the displayed polynomial-in-1/rho approximations.  All functions are
pure and safe to evaluate in parallel across sweep grids.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .specfun import QuadratureSpec, integrate_1d, integrate_2d, lower_incomplete_gamma


@dataclass(frozen=True)
class ThresholdSet:
    """SINR thresholds and the induced gain thresholds for one power split."""

    eps_near: float
    eps_far: float
    eps_sum: float
    phi_near: float     # eps_near / (rho a_m^2)
    phi_far: float      # eps_far / (rho a_m'^2 - rho a_m^2 eps_far)
    feasible: bool      # a_m'^2 > a_m^2 eps_far

    @property
    def phi_tilde(self):
        return max(self.phi_near, self.phi_far)

    @staticmethod
    def from_config(cfg, far_sq=None):
        if far_sq is None:
            far_sq = cfg.fixed_far_sq
        near_sq = 1.0 - far_sq
        rates = cfg.rates
        margin = far_sq - near_sq * rates.eps_far
        feasible = margin > 0.0
        phi_far = rates.eps_far / (cfg.rho * margin) if feasible else math.inf
        phi_near = (rates.eps_near / (cfg.rho * near_sq)
                    if near_sq > 0 else math.inf)
        return ThresholdSet(eps_near=rates.eps_near, eps_far=rates.eps_far,
                            eps_sum=rates.eps_sum, phi_near=phi_near,
                            phi_far=phi_far, feasible=feasible)


@dataclass(frozen=True)
class InterferenceFunctional:
    """Laplace-type attenuation of the aggregate interferer field.

    beta(x) = 2 phi delta rho_I L(x) feeds the exponent
    exp(-pi lambda_I beta^(2/alpha) gamma(1/alpha, beta / r0^alpha)).
    """

    phi: float
    delta: float
    rho_interferer: float
    density: float
    min_distance: float
    alpha: float

    def beta(self, x):
        loss = np.maximum(np.asarray(x, dtype=float), self.min_distance) ** self.alpha
        return 2.0 * self.phi * self.delta * self.rho_interferer * loss

    @property
    def theta_tilde(self):
        return (2.0 * np.pi * self.density * self.delta * self.rho_interferer
                * self.alpha / self.min_distance)

    def phi_i(self, x):
        return ppp_laplace(self.beta(x), self.density,
                           self.min_distance, self.alpha)


def ppp_laplace(beta, density, min_distance, alpha):
    """exp(-pi lambda beta^(2/alpha) gamma(1/alpha, beta / r0^alpha)).

    Equals 1 at beta = 0 (no interference); always in (0, 1].
    """
    beta = np.asarray(beta, dtype=float)
    out = np.ones_like(beta)
    pos = beta > 0.0
    if np.any(pos):
        b = beta[pos]
        g = lower_incomplete_gamma(1.0 / alpha, b / min_distance ** alpha)
        out[pos] = np.exp(-np.pi * density * b ** (2.0 / alpha) * g)
    return out if out.ndim else float(out)


def _geometry(cfg):
    reg = cfg.region
    return reg.min_distance, reg.inner_radius, reg.outer_radius


def lemma1_exact(cfg, alloc=None, spec=QuadratureSpec()):
    """Far-user outage under the fixed split with the bounded detector term."""
    far_sq = alloc.far_sq if alloc is not None else cfg.fixed_far_sq
    th = ThresholdSet.from_config(cfg, far_sq)
    if not th.feasible:
        return 1.0
    r0, r1, r = _geometry(cfg)
    func = InterferenceFunctional(
        phi=th.phi_far, delta=cfg.delta, rho_interferer=cfg.rho_interferer,
        density=cfg.interferer_density, min_distance=r0, alpha=cfg.alpha)

    def integrand(x):
        return math.exp(-2.0 * th.phi_far * x ** cfg.alpha) * func.phi_i(x) * x

    val, _ = integrate_1d(integrand, r1, r, spec)
    return 1.0 - 2.0 * val / (r ** 2 - r1 ** 2)


def lemma1_highsnr(cfg, alloc=None):
    """High-SNR expansion of lemma1_exact; no quadrature."""
    far_sq = alloc.far_sq if alloc is not None else cfg.fixed_far_sq
    th = ThresholdSet.from_config(cfg, far_sq)
    if not th.feasible:
        return 1.0
    r0, r1, r = _geometry(cfg)
    a = cfg.alpha
    theta_tilde = (2.0 * np.pi * cfg.interferer_density * cfg.delta
                   * cfg.rho_interferer * a / r0)
    return (2.0 * th.phi_far * (2.0 + theta_tilde)
            * (r ** (a + 2) - r1 ** (a + 2))
            / ((r ** 2 - r1 ** 2) * (a + 2)))


def lemma2_exact(cfg, alloc=None, spec=QuadratureSpec()):
    """Near-user outage under the fixed split with the bounded detector term.

    Two-piece position average: constant path loss inside the min-distance
    disc, power law from there to the inner radius.
    """
    far_sq = alloc.far_sq if alloc is not None else cfg.fixed_far_sq
    th = ThresholdSet.from_config(cfg, far_sq)
    if not th.feasible:
        return 1.0
    r0, r1, _ = _geometry(cfg)
    phi = th.phi_tilde
    func = InterferenceFunctional(
        phi=phi, delta=cfg.delta, rho_interferer=cfg.rho_interferer,
        density=cfg.interferer_density, min_distance=r0, alpha=cfg.alpha)

    disc = (r0 ** 2 / r1 ** 2) * math.exp(-2.0 * phi * r0 ** cfg.alpha) \
        * float(func.phi_i(r0))

    def integrand(x):
        return math.exp(-2.0 * phi * x ** cfg.alpha) * func.phi_i(x) * x

    val, _ = integrate_1d(integrand, r0, r1, spec)
    return 1.0 - disc - 2.0 * val / r1 ** 2


def lemma2_highsnr(cfg, alloc=None):
    """High-SNR expansion of lemma2_exact."""
    far_sq = alloc.far_sq if alloc is not None else cfg.fixed_far_sq
    th = ThresholdSet.from_config(cfg, far_sq)
    if not th.feasible:
        return 1.0
    r0, r1, _ = _geometry(cfg)
    a = cfg.alpha
    theta_tilde = (2.0 * np.pi * cfg.interferer_density * cfg.delta
                   * cfg.rho_interferer * a / r0)
    return (th.phi_tilde * (2.0 + theta_tilde)
            * (a * r0 ** (a + 2) + 2.0 * r1 ** (a + 2))
            / (r1 ** 2 * (a + 2)))


def upsilon1(y, region, alpha):
    """Position average of exp(-y d^alpha) over the ring [r1, r]."""
    if y < 0:
        raise ConfigurationError("upsilon1 requires y >= 0")
    r1, r = region.inner_radius, region.outer_radius
    if y == 0.0:
        return 1.0
    g_hi = lower_incomplete_gamma(2.0 / alpha + 1.0, y * r ** alpha)
    g_lo = lower_incomplete_gamma(2.0 / alpha + 1.0, y * r1 ** alpha)
    num = (math.exp(-y * r ** alpha) * r ** 2
           - math.exp(-y * r1 ** alpha) * r1 ** 2
           + y ** (-2.0 / alpha) * (g_hi - g_lo))
    # cancellation can leave a tiny negative residual once the true value
    # underflows; the average of a positive integrand stays in [0, 1]
    return min(1.0, max(0.0, num / (r ** 2 - r1 ** 2)))


def upsilon2(z, region, alpha):
    """Position average of exp(-z max(d, r0)^alpha) over the disc of radius r1."""
    if z < 0:
        raise ConfigurationError("upsilon2 requires z >= 0")
    r0, r1 = region.min_distance, region.inner_radius
    if z == 0.0:
        return 1.0
    g_hi = lower_incomplete_gamma(2.0 / alpha + 1.0, z * r1 ** alpha)
    g_lo = lower_incomplete_gamma(2.0 / alpha + 1.0, z * r0 ** alpha)
    val = (r0 ** 2 * math.exp(-z * r0 ** alpha) / r1 ** 2
           + (math.exp(-z * r1 ** alpha) * r1 ** 2
              - math.exp(-z * r0 ** alpha) * r0 ** 2) / r1 ** 2
           + z ** (-2.0 / alpha) * (g_hi - g_lo) / r1 ** 2)
    return min(1.0, max(0.0, val))


def _require_no_interference(cfg, name):
    if cfg.has_interference:
        raise ConfigurationError(
            f"{name} is only defined for the interference-free mode")


def lemma4_exact(cfg, rates=None):
    """Near-user outage under the opportunistic downlink split (no field)."""
    _require_no_interference(cfg, "lemma4_exact")
    rates = cfg.rates if rates is None else rates
    en, ef = rates.eps_near, rates.eps_far
    return 1.0 - (upsilon1(2.0 * ef / cfg.rho, cfg.region, cfg.alpha)
                  * upsilon2(2.0 * en * (1.0 + ef) / cfg.rho,
                             cfg.region, cfg.alpha))


def lemma4_highsnr(cfg, rates=None):
    """High-SNR expansion of lemma4_exact."""
    _require_no_interference(cfg, "lemma4_highsnr")
    rates = cfg.rates if rates is None else rates
    en, ef = rates.eps_near, rates.eps_far
    r0, r1, r = _geometry(cfg)
    a, rho = cfg.alpha, cfg.rho
    return (4.0 * ef * (r ** (a + 2) - r1 ** (a + 2))
            / (rho * (2.0 + a) * (r ** 2 - r1 ** 2))
            + 2.0 * r0 ** (2 + a) * en * (1.0 + ef) / (rho * r1 ** 2)
            + 4.0 * en * (1.0 + ef) * (r1 ** (a + 2) - r0 ** (a + 2))
            / (rho * (2.0 + a) * r1 ** 2))


def uplink_sum_exact(cfg, alloc=None, spec=QuadratureSpec()):
    """Sum-rate outage for one uplink pair with the bounded detector term."""
    far_sq = alloc.far_sq if alloc is not None else cfg.fixed_far_sq
    near_sq = 1.0 - far_sq
    eps = cfg.rates.eps_sum
    if eps == 0.0:
        return 0.0
    r0, r1, r = _geometry(cfg)
    a, rho = cfg.alpha, cfg.rho
    lam, rho_i, delta = cfg.interferer_density, cfg.rho_interferer, cfg.delta

    def integrand(x, y):
        lx = max(x, r0) ** a
        ly = max(y, r0) ** a
        zeta = eps / (rho * near_sq / lx + rho * far_sq / ly)
        atten = float(ppp_laplace(rho_i * delta * zeta, lam, r0, a))
        return math.exp(-zeta) * atten * x * y

    val, _ = integrate_2d(integrand, (0.0, r1), (r1, r), spec)
    return 1.0 - 4.0 * val / (r1 ** 2 * (r ** 2 - r1 ** 2))


def uplink_sum_highsnr(cfg, alloc=None, spec=QuadratureSpec()):
    """High-SNR expansion of uplink_sum_exact; the geometry factor is
    rho-independent and evaluated once by quadrature."""
    far_sq = alloc.far_sq if alloc is not None else cfg.fixed_far_sq
    near_sq = 1.0 - far_sq
    eps = cfg.rates.eps_sum
    if eps == 0.0:
        return 0.0
    r0, r1, r = _geometry(cfg)
    a = cfg.alpha

    def geom(x, y):
        lx = max(x, r0) ** a
        ly = max(y, r0) ** a
        return x * y / (near_sq / lx + far_sq / ly)

    xi, _ = integrate_2d(geom, (0.0, r1), (r1, r), spec)
    bracket = (np.pi * cfg.interferer_density * cfg.delta * a
               * cfg.rho_interferer / r0 + 1.0)
    return 4.0 * xi * eps * bracket / (cfg.rho * r1 ** 2 * (r ** 2 - r1 ** 2))


def uplink_cr_case1(cfg, rates=None):
    """Outage pair (far, near) when the far user's message is decoded first."""
    _require_no_interference(cfg, "uplink_cr_case1")
    rates = cfg.rates if rates is None else rates
    en, ef = rates.eps_near, rates.eps_far
    p_far = 1.0 - upsilon1(ef / cfg.rho, cfg.region, cfg.alpha)
    p_near = 1.0 - (upsilon1(ef * (1.0 + en) / cfg.rho, cfg.region, cfg.alpha)
                    * upsilon2(en / cfg.rho, cfg.region, cfg.alpha))
    return p_far, p_near


def uplink_cr_case2(cfg, rates=None):
    """Common outage of both users when the near user is decoded first."""
    _require_no_interference(cfg, "uplink_cr_case2")
    rates = cfg.rates if rates is None else rates
    en, ef = rates.eps_near, rates.eps_far
    return 1.0 - (upsilon1(ef / cfg.rho, cfg.region, cfg.alpha)
                  * upsilon2(en * (1.0 + ef) / cfg.rho, cfg.region, cfg.alpha))


def lemma5_bound(cfg, alloc=None):
    """High-SNR upper bound on the far-user outage under max-min selection.

    Decays like rho^-(2N - M); with 2N - M = 1 it reduces to M times the
    lemma1 high-SNR form.
    """
    far_sq = alloc.far_sq if alloc is not None else cfg.fixed_far_sq
    th = ThresholdSet.from_config(cfg, far_sq)
    if not th.feasible:
        return 1.0
    r0, r1, r = _geometry(cfg)
    a, m = cfg.alpha, cfg.bs_antennas
    k = cfg.nullspace_dim
    theta_tilde = (2.0 * np.pi * cfg.interferer_density * cfg.delta
                   * cfg.rho_interferer * a / r0)
    theta = th.phi_far * theta_tilde
    return (2.0 * (m * (theta + 2.0 * th.phi_far)) ** k
            * (r ** (k * a + 2) - r1 ** (k * a + 2))
            / ((r ** 2 - r1 ** 2) * (k * a + 2)))


# Analytic curves attached to simulator event labels in sweep reports.
# Labels without a closed form map to (None, None) and render as nulls.
def analytic_for_label(cfg, label):
    """(exact, high-SNR) values for a label, or None where no form exists."""
    from .config import SelectionMode
    if cfg.selection is SelectionMode.MAX_MIN:
        # closed forms assume random alignment coefficients; only the
        # far-user high-SNR upper bound is available under selection
        if label == "far_mod":
            return None, lemma5_bound(cfg)
        return None, None
    interference_free = not cfg.has_interference
    if label == "far_mod":
        return lemma1_exact(cfg), lemma1_highsnr(cfg)
    if label == "near_mod":
        return lemma2_exact(cfg), lemma2_highsnr(cfg)
    if label == "sum_mod":
        return uplink_sum_exact(cfg), uplink_sum_highsnr(cfg)
    if label == "near_cr_simplified" and interference_free:
        return lemma4_exact(cfg), lemma4_highsnr(cfg)
    if label in ("case1_far", "case1_near") and interference_free:
        p_far, p_near = uplink_cr_case1(cfg)
        return (p_far if label == "case1_far" else p_near), None
    if label in ("case2_far", "case2_near") and interference_free:
        p = uplink_cr_case2(cfg)
        return p, None
    return None, None
