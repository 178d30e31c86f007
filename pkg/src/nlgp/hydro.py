"""Hydrodynamic representation u = rho e^{i theta} and the identity battery.

A traveling profile is stored through its amplitude and phase.  The complex
field u is never differentiated directly (the phase is not periodic); all
derivatives go through the periodic quantities rho and theta', which keeps
spectral accuracy for profiles whose phase jumps across the domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import VortexError
from .potentials import PotentialSpec
from .spectral import (Grid, convolve, cumulative_integral, derivative,
                       integrate, spectral_density_integral)

POSITIVITY_FLOOR = 1e-3
MOMENTUM_CONDITIONING_FLOOR = 0.05


@dataclass(frozen=True)
class WaveFields:
    """One traveling-wave profile at speed c in hydrodynamic variables.

    theta is the cumulative phase on [-L, x] (not periodic; the mismatch
    theta(L) - theta(-L) is the physical phase jump).  theta_prime is stored
    separately because it *is* periodic and carries the spectral accuracy.
    """

    grid: Grid
    c: float
    rho: np.ndarray
    theta: np.ndarray
    theta_prime: np.ndarray
    u: np.ndarray = field(init=False, repr=False, compare=False)
    eta: np.ndarray = field(init=False, repr=False, compare=False)
    K: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rho, thp = self.rho, self.theta_prime
        u = rho * np.exp(1j * self.theta)
        eta = 1.0 - rho ** 2
        rho_x = derivative(self.grid, rho)
        K = rho_x ** 2 + (rho * thp) ** 2
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "K", K)

    @property
    def min_rho(self) -> float:
        return float(self.rho.min())

    def u_derivatives(self):
        """(u', u'') through the lifted representation."""
        g = self.grid
        rho, thp = self.rho, self.theta_prime
        rho_x = derivative(g, rho)
        rho_xx = derivative(g, rho, 2)
        thpp = derivative(g, thp)
        phase = np.exp(1j * self.theta)
        up = (rho_x + 1j * rho * thp) * phase
        upp = (rho_xx - rho * thp ** 2 + 1j * (2.0 * rho_x * thp + rho * thpp)) * phase
        return up, upp


def phase_from_rho(grid: Grid, rho: np.ndarray, c: float, anchor: float = 0.0) -> np.ndarray:
    """Phase theta with theta(anchor) = 0 from theta' = (c/2)(rho^-2 - 1)."""
    if rho.min() <= 0.0:
        raise VortexError(f"min rho = {rho.min():g} <= 0: phase lifting impossible")
    thp = 0.5 * c * (1.0 / rho ** 2 - 1.0)
    return cumulative_integral(grid, thp, anchor)


def assemble(grid: Grid, rho: np.ndarray, c: float, anchor: float = 0.0) -> WaveFields:
    """Build the full field set from an amplitude profile."""
    if rho.min() <= 0.0:
        raise VortexError(f"min rho = {rho.min():g} <= 0: lifting impossible")
    theta = phase_from_rho(grid, rho, c, anchor)
    thp = 0.5 * c * (1.0 / rho ** 2 - 1.0)
    return WaveFields(grid=grid, c=c, rho=rho, theta=theta, theta_prime=thp)


def plane_wave(grid: Grid, r: float, mode: int, c: float) -> WaveFields:
    """Constant-amplitude wave r e^{i k x} with k = pi * mode / L on the lattice."""
    k = np.pi * mode / grid.half_length
    rho = np.full(grid.size, float(r))
    return WaveFields(grid=grid, c=c, rho=rho, theta=k * grid.x,
                      theta_prime=np.full(grid.size, k))


def residual_tw(fields: WaveFields, spec: PotentialSpec):
    """(sup, L2) norms of i c u' + u'' + u (W * (1 - |u|^2))."""
    g = fields.grid
    up, upp = fields.u_derivatives()
    res = 1j * fields.c * up + upp + fields.u * convolve(spec, g, fields.eta)
    sup = float(np.abs(res).max())
    l2 = float(np.sqrt(integrate(g, np.abs(res) ** 2)))
    return sup, l2


def residual_rho(grid: Grid, rho: np.ndarray, c: float, spec: PotentialSpec):
    """(sup, L2) norms of the scalar amplitude equation; the solver's F(rho)."""
    res = rho_equation(grid, rho, c, spec)
    return float(np.abs(res).max()), float(np.sqrt(integrate(grid, res ** 2)))


def rho_equation(grid: Grid, rho: np.ndarray, c: float, spec: PotentialSpec) -> np.ndarray:
    """F(rho) = -rho'' + (c^2/4)(1 - rho^4)/rho^3 - rho (W * (1 - rho^2))."""
    if rho.min() <= 0.0:
        raise VortexError(f"min rho = {rho.min():g} <= 0")
    eta = 1.0 - rho ** 2
    return (-derivative(grid, rho, 2)
            + 0.25 * c ** 2 * (1.0 - rho ** 4) / rho ** 3
            - rho * convolve(spec, grid, eta))


# ---------------------------------------------------------------------------
# identity battery


@dataclass(frozen=True)
class IdentityEntry:
    name: str
    lhs_norm: float
    rhs_norm: float
    residual_rel: float
    passed: bool
    skipped: bool = False

    def as_dict(self):
        return {"name": self.name, "lhs_norm": self.lhs_norm,
                "rhs_norm": self.rhs_norm, "residual_rel": self.residual_rel,
                "pass": self.passed, "skipped": self.skipped}


@dataclass(frozen=True)
class IdentityReport:
    entries: tuple
    tol: float

    @property
    def passed(self) -> bool:
        return all(e.passed or e.skipped for e in self.entries)

    @property
    def max_residual(self) -> float:
        vals = [e.residual_rel for e in self.entries if not e.skipped]
        return max(vals) if vals else 0.0

    def __getitem__(self, name: str) -> IdentityEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def as_dict(self):
        return {"tol": self.tol, "pass": self.passed,
                "entries": [e.as_dict() for e in self.entries]}


def _entry(name, lhs, rhs, tol, scale=None):
    lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
    rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
    ln = float(np.abs(lhs).max())
    rn = float(np.abs(rhs).max())
    ref = max(ln, rn, scale if scale is not None else 0.0, 1e-300)
    rel = float(np.abs(lhs - rhs).max()) / ref
    return IdentityEntry(name, ln, rn, rel, rel <= tol)


def identity_suite(fields: WaveFields, spec: PotentialSpec,
                   tol: float = 1e-6) -> IdentityReport:
    """Evaluate the seven conserved identities of a traveling profile.

    For a converged solution every residual should sit below ``tol``
    (relative); for arbitrary fields the entries are still well-defined
    diagnostics.  The two spectral-density identities need the symbol
    derivative and are marked skipped when it is unavailable.
    """
    g = fields.grid
    c, rho, eta, K = fields.c, fields.rho, fields.eta, fields.K
    weta = convolve(spec, g, eta)
    eta_x = derivative(g, eta)
    scale = max(float(np.abs(eta).max()) * max(1.0, c) ** 2, 1e-30)

    entries = []
    # (c/2) eta = -<i u', u>
    up, _ = fields.u_derivatives()
    entries.append(_entry("phase_current", 0.5 * c * eta,
                          -np.real(1j * up * np.conj(fields.u)), tol, scale))
    # -eta'' + 2 W*eta - c^2 eta = 2K + 2 eta (W*eta)
    entries.append(_entry("elliptic",
                          -derivative(g, eta, 2) + 2.0 * weta - c ** 2 * eta,
                          2.0 * K + 2.0 * eta * weta, tol, scale))
    # K' = eta' (W*eta)
    entries.append(_entry("kinetic_flux", derivative(g, K), eta_x * weta, tol, scale))
    # c^2 eta^2 + (eta')^2 = 4 K (1 - eta)
    entries.append(_entry("first_integral", c ** 2 * eta ** 2 + eta_x ** 2,
                          4.0 * K * (1.0 - eta), tol, scale))
    # 2K = (c^2 eta^2 + (eta')^2) / (2 (1 - eta))
    entries.append(_entry("kinetic_closure", 2.0 * K,
                          (c ** 2 * eta ** 2 + eta_x ** 2) / (2.0 * (1.0 - eta)),
                          tol, scale))
    if spec.has_deriv:
        wk = spec.symbol(g.xi)
        xwp = spec.xi_symbol_deriv(g.xi)
        # int |u'|^2 = (1/4pi) int (W_hat - xi W_hat') |eta_hat|^2
        lhs = integrate(g, K)
        rhs = 0.5 * spectral_density_integral(g, wk - xwp, eta)
        entries.append(_entry("pohozaev", lhs, rhs, tol))
        # J_c(1 - rho) = int (rho')^2 + (1/8pi) int xi W_hat' |eta_hat|^2
        rho_x = derivative(g, rho)
        A = 0.5 * integrate(g, rho_x ** 2) + 0.25 * integrate(g, weta * eta)
        B = 0.125 * integrate(g, eta ** 2 / rho ** 2)
        jc = A - c ** 2 * B
        rhs = integrate(g, rho_x ** 2) + 0.25 * spectral_density_integral(g, xwp, eta)
        entries.append(_entry("action_identity", jc, rhs, tol))
    else:
        entries.append(IdentityEntry("pohozaev", np.nan, np.nan, np.nan, False, skipped=True))
        entries.append(IdentityEntry("action_identity", np.nan, np.nan, np.nan, False, skipped=True))
    return IdentityReport(entries=tuple(entries), tol=tol)


# ---------------------------------------------------------------------------
# energy, momentum, action


def energy(fields: WaveFields, spec: PotentialSpec):
    """Energy in its two algebraically distinct forms (gradient and density).

    The forms agree on solutions; their difference is a diagnostic for
    arbitrary fields.  The density form requires min rho > 0.
    """
    g = fields.grid
    eta, K = fields.eta, fields.K
    weta = convolve(spec, g, eta)
    pot = 0.25 * integrate(g, weta * eta)
    e_grad = 0.5 * integrate(g, K) + pot
    if fields.min_rho <= 0.0:
        raise VortexError("density form of the energy needs min rho > 0")
    one = 1.0 - eta
    eta_x = derivative(g, eta)
    e_dens = (fields.c ** 2 / 8.0) * integrate(g, eta ** 2 / one) \
        + 0.125 * integrate(g, eta_x ** 2 / one) + pot
    return float(e_grad), float(e_dens)


def momentum(fields: WaveFields):
    """Renormalized momentum: defining integral and the eta-only form."""
    g = fields.grid
    eta = fields.eta
    if fields.min_rho <= 0.0:
        raise VortexError("renormalized momentum needs min rho > 0")
    up, _ = fields.u_derivatives()
    iup_u = np.real(1j * up * np.conj(fields.u))
    p_def = -0.5 * integrate(g, iup_u * eta / (1.0 - eta))
    p_eta = 0.25 * fields.c * integrate(g, eta ** 2 / (1.0 - eta))
    return float(p_def), float(p_eta)


def action(fields: WaveFields, spec: PotentialSpec) -> float:
    """J_c(1 - rho) = A - c^2 B evaluated directly from the amplitude."""
    g = fields.grid
    rho, eta = fields.rho, fields.eta
    rho_x = derivative(g, rho)
    A = 0.5 * integrate(g, rho_x ** 2) + 0.25 * integrate(g, convolve(spec, g, eta) * eta)
    B = 0.125 * integrate(g, eta ** 2 / rho ** 2)
    return float(A - fields.c ** 2 * B)


def momentum_conditioning_warning(fields: WaveFields) -> Optional[str]:
    """Near-vortex profiles make the renormalized momentum ill-conditioned."""
    if fields.min_rho < MOMENTUM_CONDITIONING_FLOOR:
        return (f"min rho = {fields.min_rho:.3g} < {MOMENTUM_CONDITIONING_FLOOR}: "
                "momentum integrand is near-singular; accuracy not asserted")
    return None


@dataclass(frozen=True)
class NonvanishingReport:
    weta_sup: float
    bound: float
    passed: bool


def nonvanishing_check(fields: WaveFields, spec: PotentialSpec) -> NonvanishingReport:
    """Check ||W * eta||_inf >= (2 - c^2)/4, satisfied by nontrivial solutions."""
    weta = convolve(spec, fields.grid, fields.eta)
    sup = float(np.abs(weta).max())
    bound = (2.0 - fields.c ** 2) / 4.0
    return NonvanishingReport(weta_sup=sup, bound=bound, passed=sup >= bound)
