"""Hydrodynamic fields, residuals, identities, energy and momentum."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from nlgp import (Grid, VortexError, assemble, delta, energy, exp_repulsive,
                  identity_suite, initial_guess, momentum, nonvanishing_check,
                  phase_from_rho, plane_wave, residual_rho, residual_tw)
from nlgp.hydro import WaveFields, action
from nlgp.spectral import sech


def contact_amplitude(x, c):
    nu = math.sqrt(2.0 - c ** 2) / 2.0
    return np.sqrt(1.0 - ((2.0 - c ** 2) / 2.0) * sech(nu * x) ** 2)


def contact_eta(x, c):
    nu = math.sqrt(2.0 - c ** 2) / 2.0
    return ((2.0 - c ** 2) / 2.0) * sech(nu * x) ** 2


@pytest.fixture(scope="module")
def grid():
    return Grid(128.0, 4096)


@pytest.fixture(scope="module")
def contact_fields(grid):
    return assemble(grid, contact_amplitude(grid.x, 1.0), 1.0)


# ---------------------------------------------------------------------------
# phase


def test_phase_trivial(grid):
    theta = phase_from_rho(grid, np.ones(grid.size), 0.7)
    np.testing.assert_allclose(theta, 0.0, atol=1e-12)


def test_phase_odd(grid, contact_fields):
    # boundary node excluded: theta is not periodic, x = -L has no mirror node
    theta = contact_fields.theta
    assert np.abs((theta + grid.reflect(theta))[1:]).max() < 1e-10


def test_phase_jump_quadrature_oracle(grid):
    # oracle: adaptive quadrature of (c/2)(1/rho^2 - 1) on the closed form
    c = 1.0
    jump_oracle = quad(lambda y: 0.5 * c * (1.0 / contact_amplitude(y, c) ** 2 - 1.0),
                       -200.0, 200.0, limit=400)[0]
    theta = phase_from_rho(grid, contact_amplitude(grid.x, c), c)
    jump = theta[-1] - theta[0]
    assert jump == pytest.approx(jump_oracle, abs=1e-8)
    # and the arctan closed form of the contact soliton
    assert jump == pytest.approx(2.0 * math.atan(math.sqrt(2.0 - c ** 2) / c), abs=1e-6)


def test_phase_vortex_error(grid):
    rho = np.ones(grid.size)
    rho[5] = -0.1
    with pytest.raises(VortexError):
        phase_from_rho(grid, rho, 1.0)


# ---------------------------------------------------------------------------
# assembly


def test_assemble_trivial(grid):
    f = assemble(grid, np.ones(grid.size), 0.9)
    np.testing.assert_allclose(f.u, 1.0, atol=1e-14)
    np.testing.assert_allclose(f.eta, 0.0, atol=1e-14)
    np.testing.assert_allclose(f.K, 0.0, atol=1e-14)


def test_assemble_contact_trough(grid, contact_fields):
    # eta(0) = 1 - c^2/2 = 0.5 at c = 1
    j0 = grid.size // 2
    assert contact_fields.eta[j0] == pytest.approx(0.5, abs=1e-14)


def test_assemble_kinetic_density_analytic(grid, contact_fields):
    # |u'|^2 of the closed form: u' = sqrt(2) nu^2 sech^2(nu x), K = 2 nu^4 sech^4
    nu = 0.5
    exact = 2.0 * nu ** 4 * sech(nu * grid.x) ** 4
    assert np.abs(contact_fields.K - exact).max() < 1e-8


def test_invariants_eta_and_positivity(grid, contact_fields):
    np.testing.assert_allclose(contact_fields.eta, 1.0 - contact_fields.rho ** 2,
                               atol=1e-14)
    assert contact_fields.min_rho > 0


# ---------------------------------------------------------------------------
# residuals


def test_residual_tw_contact(grid, contact_fields):
    sup, l2 = residual_tw(contact_fields, delta())
    assert sup < 1e-8 and l2 < 1e-8


def test_residual_tw_trivial(grid):
    f = assemble(grid, np.ones(grid.size), 1.2)
    sup, _ = residual_tw(f, exp_repulsive(1.0, 3.0))
    assert sup < 1e-14


def test_residual_tw_plane_wave(grid):
    # infinite-energy solution r e^{ikx} with k^2 + ck = 1 - r^2
    c, mode = 1.0, 16
    k = math.pi * mode / grid.half_length
    r = math.sqrt(1.0 - k ** 2 - c * k)
    f = plane_wave(grid, r, mode, c)
    sup, _ = residual_tw(f, delta())
    assert sup < 1e-12


def test_residual_rho_contact(grid):
    sup, _ = residual_rho(grid, contact_amplitude(grid.x, 1.0), 1.0, delta())
    assert sup < 1e-8


def test_residual_rho_trivial_and_perturbed(grid):
    sup, _ = residual_rho(grid, np.ones(grid.size), 1.0, delta())
    assert sup < 1e-14
    sup, _ = residual_rho(grid, 1.0 + 0.1 * sech(grid.x), 1.0, delta())
    assert sup > 1e-3


# ---------------------------------------------------------------------------
# identity battery


def test_identity_suite_contact(grid, contact_fields):
    report = identity_suite(contact_fields, delta())
    assert report.passed
    assert report.max_residual < 1e-7


def test_identity_suite_trivial(grid):
    f = assemble(grid, np.ones(grid.size), 1.0)
    report = identity_suite(f, delta())
    assert report.max_residual < 1e-13


def test_identity_pohozaev_contact_value(grid, contact_fields):
    # contact kernel: int |u'|^2 = (1/2) int eta^2, both equal (2 - c^2)^{3/2}/3
    lhs = grid.spacing * contact_fields.K.sum()
    rhs = 0.5 * grid.spacing * np.sum(contact_fields.eta ** 2)
    assert lhs == pytest.approx(1.0 / 3.0, abs=1e-8)
    assert rhs == pytest.approx(1.0 / 3.0, abs=1e-8)
    e = identity_suite(contact_fields, delta())["pohozaev"]
    assert not e.skipped and e.residual_rel < 1e-10


def test_identity_skipped_without_deriv(grid, contact_fields):
    from nlgp import tabulated
    xs = np.linspace(0.0, 110.0, 4096)
    spec = tabulated(xs, np.ones_like(xs))
    object.__setattr__(spec, "_deriv", None)
    report = identity_suite(contact_fields, spec)
    assert report["pohozaev"].skipped and report["action_identity"].skipped


# ---------------------------------------------------------------------------
# energy / momentum


def test_energy_momentum_trivial(grid):
    f = assemble(grid, np.ones(grid.size), 0.8)
    e1, e2 = energy(f, delta())
    p1, p2 = momentum(f)
    assert e1 == e2 == 0.0
    assert p1 == p2 == 0.0


def test_energy_contact_closed_form(grid, contact_fields):
    e1, e2 = energy(contact_fields, delta())
    assert e1 == pytest.approx(1.0 / 3.0, abs=1e-8)
    assert e2 == pytest.approx(1.0 / 3.0, abs=1e-8)


def test_momentum_contact_quadrature_oracle(grid, contact_fields):
    # oracle: (c/4) int eta^2/(1 - eta) by adaptive quadrature on the closed form
    c = 1.0
    oracle = 0.25 * c * quad(lambda y: contact_eta(y, c) ** 2 / (1 - contact_eta(y, c)),
                             -100.0, 100.0, limit=400)[0]
    p1, p2 = momentum(contact_fields)
    assert p1 == pytest.approx(oracle, abs=1e-8)
    assert p2 == pytest.approx(oracle, abs=1e-8)
    assert oracle == pytest.approx((math.pi - 2.0) / 4.0, abs=1e-10)


def test_energy_forms_disagree_off_solutions(grid):
    # hydrodynamically assembled fields make the forms coincide identically;
    # an independent phase slope breaks the closure and separates them
    rho = 1.0 - 0.4 * sech(grid.x) ** 2
    f = WaveFields(grid=grid, c=1.0, rho=rho, theta=np.zeros(grid.size),
                   theta_prime=0.3 * sech(grid.x))
    e1, e2 = energy(f, delta())
    assert abs(e1 - e2) > 1e-4


# ---------------------------------------------------------------------------
# bounds, symmetries


def test_nonvanishing_contact(grid, contact_fields):
    rep = nonvanishing_check(contact_fields, delta())
    assert rep.bound == pytest.approx(0.25)
    assert rep.weta_sup == pytest.approx(0.5, abs=1e-12)
    assert rep.passed


def test_nonvanishing_trivial_fails(grid):
    f = assemble(grid, np.ones(grid.size), 1.0)
    assert not nonvanishing_check(f, delta()).passed


def test_conjugation_speed_sign(grid):
    rho = contact_amplitude(grid.x, 0.8)
    fp = assemble(grid, rho, 0.8)
    fm = assemble(grid, rho, -0.8)
    np.testing.assert_allclose(fm.u, np.conj(fp.u), atol=1e-12)
    sup, _ = residual_tw(fm, delta())
    assert sup < 1e-8  # the conjugate solves the reversed-speed equation


def test_gauge_invariance(grid, contact_fields):
    shifted = WaveFields(grid=grid, c=contact_fields.c, rho=contact_fields.rho,
                         theta=contact_fields.theta + 1.234,
                         theta_prime=contact_fields.theta_prime)
    s0 = residual_tw(contact_fields, delta())
    s1 = residual_tw(shifted, delta())
    assert s0 == pytest.approx(s1, rel=1e-12)
    assert energy(shifted, delta()) == pytest.approx(energy(contact_fields, delta()))
    assert momentum(shifted) == pytest.approx(momentum(contact_fields))


def test_action_equals_energy_minus_cp(grid, contact_fields):
    e1, _ = energy(contact_fields, delta())
    p1, _ = momentum(contact_fields)
    assert action(contact_fields, delta()) == pytest.approx(e1 - 1.0 * p1, abs=1e-10)


def test_catalog_invariant_battery(catalog_solutions):
    # every converged solution: identities at 1e-6, both energy forms and
    # both momentum forms agreeing at 1e-8 relative
    for name, sol in catalog_solutions.items():
        assert sol.identity_report.max_residual <= 1e-6, name
        e1, e2 = energy(sol.fields, sol.spec)
        assert abs(e1 - e2) <= 1e-8 * max(1.0, abs(e1)), name
        p1, p2 = momentum(sol.fields)
        assert abs(p1 - p2) <= 1e-8 * max(1.0, abs(p1)), name


def test_momentum_conditioning_warning(grid):
    from nlgp.hydro import momentum_conditioning_warning
    from nlgp import initial_guess
    slow = assemble(grid, initial_guess(grid, 0.05), 0.05)  # near-black
    assert momentum_conditioning_warning(slow) is not None
    fast = assemble(grid, initial_guess(grid, 1.0), 1.0)
    assert momentum_conditioning_warning(fast) is None
