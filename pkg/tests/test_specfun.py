import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdma_netcap.specfun import (DomainNotSupported, NoConvergence, NonPositiveArgument,
                                 PoleAtC, QuadratureConfig, beta_fn, cosine_integral, digamma,
                                 gamma_fn, gauss_2f1, harmonic, integrate_interval,
                                 integrate_semi_infinite, log_gamma, sine_integral)
from sdma_netcap.analytics import holder_a_closed

mp.mp.dps = 30

# golden values generated with mpmath at 30 digits
GAMMA_PTS = [0.1, 0.5, 1.0, 1.5, 2.5, 3.3, 7.0, 12.25, 33.3, 100.5, 150.0]
DIGAMMA_PTS = [0.05, 0.5, 1.0, 2.0, 3.7, 10.5, 55.0, 1000.0]
SICI_PTS = [1e-6, 0.3, 1.0, 2.0, 2.5, 4.0, 10.0, 35.0, 500.0]


@pytest.mark.parametrize("x", GAMMA_PTS)
def test_gamma_golden(x):
    ref = float(mp.gamma(x)) if x < 170 else None
    assert gamma_fn(x) == pytest.approx(ref, rel=1e-12)
    assert log_gamma(x) == pytest.approx(float(mp.loggamma(x)), rel=1e-12, abs=1e-13)


def test_gamma_examples():
    assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-14)
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert gamma_fn(5.0) == pytest.approx(24.0, rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_gamma_nonpositive(x):
    with pytest.raises(NonPositiveArgument):
        gamma_fn(x)


def test_beta_examples():
    assert beta_fn(1, 1) == pytest.approx(1.0, rel=1e-13)
    assert beta_fn(0.5, 0.5) == pytest.approx(math.pi, rel=1e-13)
    direct = integrate_interval(lambda t: t ** 1.5 * (1 - t) ** 0.5, 0.0, 1.0)
    assert beta_fn(2.5, 1.5) == pytest.approx(direct, rel=1e-9)
    with pytest.raises(NonPositiveArgument):
        beta_fn(0.0, 1.0)


@given(st.floats(0.05, 30), st.floats(0.05, 30))
def test_beta_symmetric(a, b):
    assert beta_fn(a, b) == pytest.approx(beta_fn(b, a), rel=1e-13)


@pytest.mark.parametrize("x", DIGAMMA_PTS)
def test_digamma_golden(x):
    assert digamma(x) == pytest.approx(float(mp.digamma(x)), rel=1e-12, abs=1e-14)


def test_digamma_examples():
    g = 0.5772156649015329
    assert digamma(1.0) == pytest.approx(-g, rel=1e-12)
    assert digamma(2.0) == pytest.approx(1 - g, rel=1e-12)
    # recurrence from psi(0.5) = -gamma - 2 ln 2 up to 10.5
    psi = -g - 2 * math.log(2)
    x = 0.5
    while x < 10.5:
        psi += 1 / x
        x += 1
    assert digamma(10.5) == pytest.approx(psi, rel=1e-12)
    with pytest.raises(NonPositiveArgument):
        digamma(0.0)


def test_harmonic():
    assert harmonic(0) == 0.0
    assert harmonic(3) == pytest.approx(11 / 6, rel=1e-15)
    assert harmonic(100) == pytest.approx(digamma(101) + 0.5772156649015329, abs=1e-12)


@pytest.mark.parametrize("a,b,c,z", [
    (1, 2, 3.5, 0.6), (0.5, 1.5, 2.25, 0.9), (3, 1, 4, 0.75), (2.2, -1.3, 0.7, -0.8),
    (1, 1, 2, -5.0), (4.5, 1, 6, 0.99), (0.3, 0.7, 1.9, -30.0),
])
def test_2f1_golden(a, b, c, z):
    assert gauss_2f1(a, b, c, z) == pytest.approx(float(mp.hyp2f1(a, b, c, z)), rel=1e-10)


def test_2f1_examples():
    assert gauss_2f1(1.2, 3.4, 5.6, 0.0) == 1.0
    assert gauss_2f1(1, 1, 2, 0.3) == pytest.approx(-math.log(0.7) / 0.3, rel=1e-13)
    # explicit term-by-term partial sums to 1e-12
    s, t, n = 0.0, 1.0, 0
    while abs(t) > 1e-16:
        s += t
        t *= (1 + n) * (2 + n) / ((3.5 + n) * (n + 1)) * 0.6
        n += 1
    assert gauss_2f1(1, 2, 3.5, 0.6) == pytest.approx(s, rel=1e-12)


def test_2f1_errors():
    with pytest.raises(PoleAtC):
        gauss_2f1(1, 1, -2.0, 0.5)
    with pytest.raises(DomainNotSupported):
        gauss_2f1(1, 1, 2, 1.0)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 5), st.floats(-0.9, 0.9))
@settings(max_examples=60)
def test_2f1_symmetric(a, b, c, z):
    assert gauss_2f1(a, b, c, z) == pytest.approx(gauss_2f1(b, a, c, z), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("x", SICI_PTS)
def test_si_ci_golden(x):
    assert sine_integral(x) == pytest.approx(float(mp.si(x)), rel=1e-11, abs=1e-15)
    assert cosine_integral(x) == pytest.approx(float(mp.ci(x)), rel=1e-11, abs=1e-14)


def test_si_ci_examples():
    assert sine_integral(0.0) == 0.0
    # |Si(x) - pi/2| is about |cos x|/x, so 1e-6 is only reached near x = 1e6
    assert sine_integral(1e4) == pytest.approx(float(mp.si(1e4)), rel=1e-12)
    assert abs(sine_integral(1e4) - math.pi / 2) <= 1e-4
    assert sine_integral(2e6) == pytest.approx(math.pi / 2, abs=1e-6)
    # Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt
    part = integrate_interval(lambda t: np.where(t > 0, (np.cos(t) - 1.0) / np.where(t > 0, t, 1.0), 0.0),
                              0.0, 1.0)
    assert cosine_integral(1.0) == pytest.approx(0.5772156649015329 + part, rel=1e-10)
    assert cosine_integral(1.0) == pytest.approx(float(mp.quadosc(lambda t: -mp.cos(t) / t, [1, mp.inf],
                                                                  omega=1)), rel=1e-10)
    with pytest.raises(NonPositiveArgument):
        cosine_integral(0.0)


def test_semi_infinite_examples():
    assert integrate_semi_infinite(lambda x: np.exp(-x)) == pytest.approx(1.0, rel=1e-10)
    assert integrate_semi_infinite(lambda x: np.exp(-np.sqrt(x))) == pytest.approx(2.0, rel=1e-9)
    val = integrate_semi_infinite(lambda x: 1.0 / ((1 + x) * (1 + 0.25 * x) ** 3))
    # Euler-integral closed form with v = 1, K = 4, delta = 0.25
    assert val == pytest.approx(holder_a_closed(1.0, 0.25, 4), rel=1e-9)
    ref = float(mp.quad(lambda x: 1 / ((1 + x) * (1 + x / 4) ** 3), [0, mp.inf]))
    assert val == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("a", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0, 5.0])
def test_templates(a, alpha):
    assert integrate_semi_infinite(lambda x: np.exp(-a * x)) == pytest.approx(1 / a, rel=1e-7)
    b = a
    expect = b ** (-alpha / 2) * gamma_fn(1 + alpha / 2)
    got = integrate_semi_infinite(lambda x: np.exp(-b * x ** (2 / alpha)))
    assert got == pytest.approx(expect, rel=1e-7)


def test_no_convergence():
    cfg = QuadratureConfig(rel_tol=1e-14, abs_tol=1e-16, max_subdivisions=3)
    with pytest.raises(NoConvergence):
        integrate_interval(lambda x: np.sin(50 * x) / np.sqrt(np.abs(x - 0.3) + 1e-9),
                           0.0, 1.0, cfg)


def test_quadrature_config_invariants():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)
