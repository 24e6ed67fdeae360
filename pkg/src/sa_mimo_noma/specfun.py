"""Numerical kernels: lower incomplete gamma and adaptive quadrature.

The incomplete gamma uses the classic split: a power series for x < s + 1
and a Lentz-style continued fraction for the upper tail otherwise.  The
quadrature operations wrap adaptive Gauss-Kronrod integration (QUADPACK)
behind a tolerance/subdivision contract.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConfigurationError, NumericalError

_MAX_ITER = 500
_EPS = 1e-16


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 200

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0 or self.max_subdivisions < 1:
            raise ConfigurationError("quadrature tolerances must be positive")


def _gamma_series(s, x):
    """Regularized P(s, x) by series, valid for x < s + 1."""
    term = 1.0 / s
    total = term
    ap = s
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + s * math.log(x) - math.lgamma(s))


def _gamma_cf(s, x):
    """Regularized Q(s, x) by continued fraction (modified Lentz)."""
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + s * math.log(x) - math.lgamma(s)) * h


def _gamma_scalar(s, x):
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        p = _gamma_series(s, x)
    else:
        p = 1.0 - _gamma_cf(s, x)
    return p * math.gamma(s)


def lower_incomplete_gamma(s, x):
    """gamma(s, x) = integral_0^x t^(s-1) e^(-t) dt, non-regularized.

    ``s`` must be positive; ``x`` non-negative (scalar or array).
    """
    if not (s > 0):
        raise ConfigurationError("lower_incomplete_gamma requires s > 0")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or not np.all(np.isfinite(xa)):
        raise ConfigurationError("lower_incomplete_gamma requires finite x >= 0")
    if xa.ndim == 0:
        return _gamma_scalar(s, float(xa))
    return np.vectorize(lambda v: _gamma_scalar(s, v))(xa)


def integrate_1d(f, a, b, spec=QuadratureSpec()):
    """Adaptive quadrature of f over [a, b].  Returns (value, error_estimate)."""
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ConfigurationError("integration limits must be finite")
    value, err, info, *rest = integrate.quad(
        f, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
        limit=spec.max_subdivisions, full_output=True)
    if rest:   # a warning message means the tolerance was not met
        raise NumericalError(f"quadrature did not converge: {rest[0]}",
                             partial=value)
    return value, err


def integrate_2d(f, x_range, y_range, spec=QuadratureSpec()):
    """Iterated adaptive quadrature of f(x, y) over a rectangle.

    Returns (value, error_estimate); the error combines inner and outer
    estimates pessimistically.
    """
    ax, bx = x_range
    ay, by = y_range
    inner_err = [0.0]

    def outer(y):
        v, e = integrate_1d(lambda x: f(x, y), ax, bx, spec)
        inner_err[0] = max(inner_err[0], e)
        return v

    value, err = integrate_1d(outer, ay, by, spec)
    return value, err + inner_err[0] * abs(by - ay)
