"""Incomplete gamma and quadrature kernels against scipy references."""

import math

import numpy as np
import pytest
from scipy import special

from sa_mimo_noma.errors import ConfigurationError, NumericalError
from sa_mimo_noma.specfun import (QuadratureSpec, integrate_1d, integrate_2d,
                                  lower_incomplete_gamma)


def test_gamma_against_scipy_reference():
    for s in (0.2, 1.0 / 3.0, 0.5, 1.0, 2.7, 7.0):
        for x in np.logspace(-6, 3, 40):
            ref = special.gammainc(s, x) * special.gamma(s)
            val = lower_incomplete_gamma(s, x)
            assert val == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_gamma_special_values():
    # gamma(1, x) = 1 - e^-x
    assert abs(lower_incomplete_gamma(1.0, 1.0) - (1.0 - math.exp(-1.0))) < 1e-10
    assert lower_incomplete_gamma(2.0, 0.0) == 0.0
    # complete limit
    assert lower_incomplete_gamma(2.5, 1e4) == pytest.approx(special.gamma(2.5))


def test_gamma_continuity_at_series_cf_switch():
    for s in (0.3, 1.0, 4.2):
        x = s + 1.0
        lo = lower_incomplete_gamma(s, x - 1e-9)
        hi = lower_incomplete_gamma(s, x + 1e-9)
        assert abs(hi - lo) < 1e-7 * max(abs(lo), 1.0)


def test_gamma_vectorized_and_validated():
    xs = np.array([0.0, 0.5, 2.0])
    vals = lower_incomplete_gamma(0.5, xs)
    assert vals.shape == (3,)
    with pytest.raises(ConfigurationError):
        lower_incomplete_gamma(-1.0, 1.0)
    with pytest.raises(ConfigurationError):
        lower_incomplete_gamma(1.0, -0.5)
    with pytest.raises(ConfigurationError):
        lower_incomplete_gamma(1.0, np.inf)


def test_integrate_1d_polynomial():
    val, err = integrate_1d(lambda x: x * x, 0.0, 1.0)
    assert val == pytest.approx(1.0 / 3.0, rel=1e-10)
    assert err < 1e-8


def test_integrate_1d_validation():
    with pytest.raises(ConfigurationError):
        integrate_1d(lambda x: x, 0.0, np.inf)
    with pytest.raises(ConfigurationError):
        QuadratureSpec(rel_tol=-1.0)


def test_integrate_1d_reports_partial_on_failure():
    spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14, max_subdivisions=2)
    with pytest.raises(NumericalError) as exc:
        integrate_1d(lambda x: math.sin(1e4 * x) ** 2, 0.0, 1.0, spec)
    assert isinstance(exc.value.partial, float)


def test_integrate_2d_separable():
    val, _ = integrate_2d(lambda x, y: x * y, (0.0, 1.0), (0.0, 2.0))
    assert val == pytest.approx(1.0, rel=1e-9)
    val, _ = integrate_2d(lambda x, y: math.exp(-x - y), (0.0, 1.0), (0.0, 1.0))
    assert val == pytest.approx((1.0 - math.exp(-1.0)) ** 2, rel=1e-9)
