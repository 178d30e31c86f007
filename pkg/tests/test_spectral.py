"""Grid operations: differentiation, quadrature, convolution, transforms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlgp import Grid, convolve, delta, derivative, gaussian, integrate
from nlgp.errors import ConfigError
from nlgp.spectral import (continuous_hat, cumulative_integral, sech,
                           spectral_density_integral, tail_magnitude)


def test_grid_basics():
    g = Grid(40.0, 256)
    assert g.spacing == pytest.approx(80.0 / 256)
    assert g.x[0] == -40.0 and g.x[-1] == pytest.approx(40.0 - g.spacing)
    assert np.all(np.diff(g.x) > 0)
    xi = np.sort(g.xi)
    assert set(np.round(xi, 12)) == set(np.round(np.pi * np.arange(-128, 128) / 40.0, 12))


def test_grid_validation():
    with pytest.raises(ConfigError):
        Grid(-1.0, 256)
    with pytest.raises(ConfigError):
        Grid(10.0, 300)  # not a power of two


def test_integrate_constant():
    g = Grid(40.0, 256)
    assert integrate(g, np.ones(g.size)) == pytest.approx(80.0)


def test_integrate_sech_powers():
    # int sech^2 = 2 and int sech^4 = 4/3
    g = Grid(40.0, 2048)
    assert integrate(g, sech(g.x) ** 2) == pytest.approx(2.0, abs=1e-10)
    assert integrate(g, sech(g.x) ** 4) == pytest.approx(4.0 / 3.0, abs=1e-10)


def test_derivative_eigenfunction():
    g = Grid(40.0, 256)
    f = np.sin(np.pi * g.x / 40.0)
    np.testing.assert_allclose(derivative(g, f),
                               (np.pi / 40.0) * np.cos(np.pi * g.x / 40.0),
                               atol=1e-12)
    np.testing.assert_allclose(derivative(g, np.ones(g.size), 3), 0.0, atol=1e-12)


def test_derivative_sech_squared():
    # analytic: (sech^2)'' = 4 sech^2 - 6 sech^4
    g = Grid(40.0, 2048)
    f = sech(g.x) ** 2
    exact = 4.0 * f - 6.0 * sech(g.x) ** 4
    assert np.abs(derivative(g, f, 2) - exact).max() < 1e-9


def test_derivative_order_validation():
    g = Grid(10.0, 64)
    with pytest.raises(ValueError):
        derivative(g, np.ones(64), 5)


def test_convolve_identity_kernel():
    g = Grid(40.0, 512)
    f = sech(g.x)
    np.testing.assert_allclose(convolve(delta(), g, f), f, atol=1e-14)


def test_convolve_constant_is_preserved():
    g = Grid(40.0, 512)
    out = convolve(gaussian(0.3), g, np.ones(g.size))
    np.testing.assert_allclose(out, 1.0, atol=1e-14)


def test_convolve_gaussian_closed_form():
    # gaussian kernel of symbol e^{-lam xi^2} against a gaussian density:
    # variances add, 2 s^2 -> 2 (s^2 + lam)
    lam, s2 = 0.7, 1.3
    g = Grid(64.0, 2048)
    f = np.exp(-g.x ** 2 / (4 * s2)) / math.sqrt(4 * math.pi * s2)
    out = convolve(gaussian(lam), g, f)
    v = s2 + lam
    exact = np.exp(-g.x ** 2 / (4 * v)) / math.sqrt(4 * math.pi * v)
    assert np.abs(out - exact).max() < 1e-8


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_parseval_and_symmetry(seed):
    rng = np.random.default_rng(seed)
    g = Grid(32.0, 256)
    band = np.exp(-(g.xi / 3.0) ** 2)
    f = np.fft.ifft(band * (rng.standard_normal(256) + 1j * rng.standard_normal(256))).real
    h = np.fft.ifft(band * (rng.standard_normal(256) + 1j * rng.standard_normal(256))).real
    # discrete Plancherel
    lhs = integrate(g, f ** 2)
    rhs = spectral_density_integral(g, np.ones(256), f)
    assert lhs == pytest.approx(rhs, rel=1e-12)
    # convolution symmetry and norm bound
    spec = gaussian(0.4)
    a = integrate(g, convolve(spec, g, f) * h)
    b = integrate(g, convolve(spec, g, h) * f)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-14)
    wf = convolve(spec, g, f)
    assert math.sqrt(integrate(g, wf ** 2)) <= math.sqrt(integrate(g, f ** 2)) * (1 + 1e-12)


def test_continuous_hat_gaussian():
    # transform of e^{-a x^2} is sqrt(pi/a) e^{-xi^2/(4a)}
    a = 0.25
    g = Grid(64.0, 2048)
    fh = continuous_hat(g, np.exp(-a * g.x ** 2))
    exact = math.sqrt(math.pi / a) * np.exp(-g.xi ** 2 / (4 * a))
    assert np.abs(fh.real - exact).max() < 1e-10
    assert np.abs(fh.imag).max() < 1e-10


def test_cumulative_integral():
    g = Grid(32.0, 1024)
    gp = np.cos(np.pi * g.x / 32.0)
    G = cumulative_integral(g, gp, anchor=0.0)
    exact = (32.0 / np.pi) * np.sin(np.pi * g.x / 32.0)
    assert np.abs(G - exact).max() < 1e-11
    # anchored at an off-node point: matches the shifted exact antiderivative
    a = 0.123
    G2 = cumulative_integral(g, gp, anchor=a)
    exact2 = exact - (32.0 / np.pi) * math.sin(np.pi * a / 32.0)
    assert np.abs(G2 - exact2).max() < 1e-11


def test_tail_magnitude():
    g = Grid(32.0, 512)
    f = sech(g.x)
    assert tail_magnitude(g, f) == pytest.approx(sech(32.0), rel=0.1)
