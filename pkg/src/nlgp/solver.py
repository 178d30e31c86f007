"""Soliton computation: preconditioned Newton-Krylov on the amplitude
equation, speed continuation, gradient-flow relaxation, and the sonic sweep.

The linearization of the amplitude equation equals the vacuum multiplier
M_c(xi) = xi^2 + 2 W_hat - c^2 in the far field, so 1/M_c is used as the
(exact-at-vacuum) preconditioner for the matrix-free Krylov solves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from .errors import OutOfRegimeError, SupersonicMultiplierError, VortexError
from .hydro import (WaveFields, action, assemble, energy, identity_suite,
                    momentum, rho_equation)
from .functionals import Vfield, functional_J, grad_J
from .potentials import PotentialSpec, decay_prediction, mc_symbol
from .spectral import Grid, convolve, derivative, sech, tail_magnitude


@dataclass(frozen=True)
class SolverOptions:
    tol_newton: float = 1e-10        # on sup |F(rho)|
    max_iter: int = 50
    damping_factor: float = 0.5
    max_dampings: int = 20
    positivity_floor: float = 1e-3
    symmetry_mode: str = "even_subspace"   # or "full_grid"
    dc_init: float = 0.05
    dc_min: float = 1e-5
    krylov_tol: float = 1e-8
    krylov_maxiter: int = 400
    trivial_eta_tol: float = 1e-8
    identity_tol: float = 1e-6

    def __post_init__(self):
        if self.tol_newton <= 0 or self.dc_min <= 0:
            raise ValueError("tolerances must be positive")
        if self.dc_min >= self.dc_init:
            raise ValueError("dc_min must be below dc_init")
        if self.symmetry_mode not in ("even_subspace", "full_grid"):
            raise ValueError(f"unknown symmetry mode {self.symmetry_mode!r}")


@dataclass(frozen=True)
class SolitonSolution:
    spec: PotentialSpec
    fields: WaveFields
    converged: bool
    status: str                       # converged | newton_failed | trivialized | vanishing_amplitude
    newton_iters: int
    residual_sup: float
    residual_l2: float
    identity_report: object = None
    E: float = math.nan
    p: float = math.nan
    J: float = math.nan

    @property
    def c(self) -> float:
        return self.fields.c

    @property
    def grid(self) -> Grid:
        return self.fields.grid

    @property
    def eta_max(self) -> float:
        return float(self.fields.eta.max())


@dataclass
class SolitonBranch:
    spec: PotentialSpec
    solutions: list
    termination: str                  # reached_cmax | trivialized | newton_failed | sonic_limit

    def table(self):
        """Columns: c, E, p, J, eta_max, min_rho, newton_iters."""
        rows = [(s.c, s.E, s.p, s.J, s.eta_max, s.fields.min_rho, s.newton_iters)
                for s in self.solutions]
        return np.array(rows)


def initial_guess(grid: Grid, c: float) -> np.ndarray:
    """Amplitude of the contact-kernel soliton, the universal branch seed."""
    if not (0.0 < abs(c) < math.sqrt(2.0)):
        raise OutOfRegimeError(f"closed-form seed needs 0 < |c| < sqrt(2), got {c:g}")
    nu = math.sqrt(2.0 - c ** 2) / 2.0
    return np.sqrt(1.0 - ((2.0 - c ** 2) / 2.0) * sech(nu * grid.x) ** 2)


def _symmetrize(grid: Grid, f: np.ndarray) -> np.ndarray:
    return 0.5 * (f + grid.reflect(f))


def _gauge_shift(grid: Grid, rho: np.ndarray) -> np.ndarray:
    """Circular shift placing the density trough (argmax eta) at x = 0."""
    j = int(np.argmin(rho))
    return np.roll(rho, grid.size // 2 - j)


def newton_solve(spec: PotentialSpec, grid: Grid, c: float, rho0: np.ndarray,
                 opts: SolverOptions = SolverOptions()) -> SolitonSolution:
    """Damped Newton iteration on the amplitude equation.

    Linear solves are matrix-free GMRES preconditioned by 1/M_c; steps that
    would push the amplitude through the positivity floor are rejected and
    halved.  Convergence to a flat profile is flagged ``trivialized`` rather
    than treated as a soliton.
    """
    if np.min(rho0) <= opts.positivity_floor:
        raise VortexError("seed amplitude at or below the positivity floor")
    mc = mc_symbol(spec, abs(c), grid.xi)
    if np.min(mc) <= 0.0:
        raise SupersonicMultiplierError(
            f"M_c nonpositive on the lattice at c = {c:g}; "
            "speed outside the certified subsonic range")
    even = opts.symmetry_mode == "even_subspace"
    rho = np.array(rho0, dtype=float)
    if even:
        rho = _symmetrize(grid, rho)

    def residual(r):
        return rho_equation(grid, r, c, spec)

    def finalize(rho, status, iters, res):
        rho = _gauge_shift(grid, rho)
        sup = float(np.abs(res).max())
        l2 = float(math.sqrt(grid.spacing * np.sum(res ** 2)))
        fields = assemble(grid, rho, c)
        converged = status == "converged"
        if converged and fields.eta.max() < opts.trivial_eta_tol:
            status, converged = "trivialized", False
        report = identity_suite(fields, spec, tol=opts.identity_tol)
        e1, _ = energy(fields, spec)
        p1, _ = momentum(fields)
        return SolitonSolution(
            spec=spec, fields=fields, converged=converged, status=status,
            newton_iters=iters, residual_sup=sup, residual_l2=l2,
            identity_report=report, E=e1, p=p1, J=action(fields, spec))

    res = residual(rho)
    for it in range(opts.max_iter):
        if even:
            res = _symmetrize(grid, res)
        nrm = float(np.abs(res).max())
        if nrm < opts.tol_newton:
            return finalize(rho, "converged", it, res)

        def jac(d):
            return (-derivative(grid, d, 2)
                    - 0.25 * c ** 2 * (3.0 / rho ** 4 + 1.0) * d
                    - convolve(spec, grid, 1.0 - rho ** 2) * d
                    + 2.0 * rho * convolve(spec, grid, rho * d))

        n = grid.size
        A = LinearOperator((n, n), matvec=jac, dtype=float)
        P = LinearOperator((n, n), dtype=float,
                           matvec=lambda r: np.fft.ifft(np.fft.fft(r) / mc).real)
        d, info = gmres(A, res, M=P, rtol=opts.krylov_tol, atol=0.0,
                        maxiter=opts.krylov_maxiter)
        if info != 0:
            return finalize(rho, "newton_failed", it, res)
        t = 1.0
        accepted = False
        for _ in range(opts.max_dampings):
            trial = rho - t * d
            if np.min(trial) > opts.positivity_floor:
                trial_res = residual(trial)
                if float(np.abs(trial_res).max()) < nrm:
                    rho, res = trial, trial_res
                    if even:
                        rho = _symmetrize(grid, rho)
                    accepted = True
                    break
            t *= opts.damping_factor
        if not accepted:
            return finalize(rho, "vanishing_amplitude", it, res)
    return finalize(rho, "newton_failed", opts.max_iter, res)


def solve_auto(spec: PotentialSpec, c: float, opts: SolverOptions = SolverOptions(),
               half_length: float = 128.0, size: int = 4096,
               tail_tol: float = 1e-10, max_refinements: int = 3,
               auto_refine: bool = True):
    """Solve on the default grid, doubling the domain until the tail resolves.

    Kernels with an algebraic-decay prediction never meet an exponential
    tail tolerance, so refinement is skipped for them and the periodization
    is only monitored.
    """
    grid = Grid(half_length, size)
    pred = decay_prediction(spec, c) if auto_refine else None
    refine = auto_refine and (pred is None or pred.model != "algebraic")
    sol = newton_solve(spec, grid, c, initial_guess(grid, c), opts)
    tail = tail_magnitude(grid, 1.0 - sol.fields.rho)
    n = 0
    while refine and sol.converged and tail > tail_tol and n < max_refinements:
        grid = grid.refined()
        sol = newton_solve(spec, grid, c, initial_guess(grid, c), opts)
        tail = tail_magnitude(grid, 1.0 - sol.fields.rho)
        n += 1
    return sol, tail


def continue_branch(spec: PotentialSpec, grid: Grid, c_from: float, c_to: float,
                    opts: SolverOptions = SolverOptions()) -> SolitonBranch:
    """March the branch in speed with adaptive steps, previous-solution seeding.

    The step halves on failure (down to dc_min, then the partial branch is
    returned) and grows by 1.3x after an easy solve.  Marching stops at the
    sonic point when c_to lies beyond it.
    """
    sols = []
    mc0 = mc_symbol(spec, c_to, grid.xi)
    c_stop, sonic_capped = c_to, False
    if np.min(mc0) <= 0.0:  # locate the largest admissible speed on the lattice
        lo, hi = c_from, c_to
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if np.min(mc_symbol(spec, mid, grid.xi)) > 0.0:
                lo = mid
            else:
                hi = mid
        c_stop, sonic_capped = lo * (1.0 - 1e-9), True
    c = c_from
    rho_seed = initial_guess(grid, c_from)
    dc = opts.dc_init
    while True:
        sol = newton_solve(spec, grid, c, rho_seed, opts)
        if sol.status == "trivialized":
            return SolitonBranch(spec, sols, "trivialized")
        if not sol.converged:
            while not sol.converged and dc > opts.dc_min and sols:
                dc *= 0.5
                c = min(sols[-1].c + dc, c_stop)
                sol = newton_solve(spec, grid, c, sols[-1].fields.rho, opts)
            if not sol.converged:
                return SolitonBranch(spec, sols, "newton_failed")
        sols.append(sol)
        if c >= c_stop:
            return SolitonBranch(spec, sols,
                                 "sonic_limit" if sonic_capped else "reached_cmax")
        if sol.newton_iters <= 4:
            dc = min(dc * 1.3, opts.dc_init * 4.0)
        rho_seed = sol.fields.rho
        c = min(c + dc, c_stop)


def gradient_flow(spec: PotentialSpec, grid: Grid, c: float, v0: np.ndarray,
                  opts: SolverOptions = SolverOptions(), tol: float = 1e-8,
                  max_steps: int = 5000, step: float = 1e-2,
                  precondition: bool = True) -> np.ndarray:
    """Backtracked descent on the action; local relaxation near a seed.

    The raw spectral gradient is Nyquist-stiff (the Laplacian eigenvalue
    (pi/h)^2 forces explicit steps below ~1e-4), so the descent direction is
    preconditioned by 1/M_c by default; the operator is positive on the
    lattice, so the direction still strictly decreases J under backtracking.
    The action is unbounded below and its soliton critical points are
    saddles, so this is only a local relaxation; it stops at the gradient
    tolerance or the step budget and returns the iterate with the smallest
    gradient norm seen.
    """
    v = np.array(v0, dtype=float)
    vf = Vfield.make(grid, v, opts.positivity_floor)
    if not vf.in_nv:
        raise VortexError("gradient flow seed outside the nonvanishing set")
    mc = mc_symbol(spec, abs(c), grid.xi)
    if precondition and np.min(mc) <= 0.0:
        raise SupersonicMultiplierError("preconditioned flow needs M_c > 0")
    J = functional_J(vf, c, spec).J
    best_v, best_g = v, math.inf
    s = step
    for _ in range(max_steps):
        g = grad_J(vf, c, spec)
        gnorm = float(np.abs(g).max())
        if gnorm < best_g:
            best_v, best_g = v, gnorm
        if gnorm <= tol:
            break
        d = np.fft.ifft(np.fft.fft(g) / mc).real if precondition else g
        accepted = False
        for _ in range(30):
            trial = v - s * d
            tf = Vfield.make(grid, trial, opts.positivity_floor)
            if tf.in_nv:
                Jt = functional_J(tf, c, spec).J
                if Jt < J:
                    v, vf, J = trial, tf, Jt
                    accepted = True
                    s = min(s * 1.5, 1.0)  # warm-start the next line search
                    break
            s *= 0.5
        if not accepted:
            break
    return best_v


@dataclass(frozen=True)
class SonicSweep:
    spec_label: str
    rows: np.ndarray        # columns: c, sqrt2 - c, eta_max, E, p, nonvanishing margin
    gamma: float            # fitted exponent of eta_max ~ (2 - c^2)^gamma
    d2_symbol_at_zero: Optional[float]
    all_nonvanishing_ok: bool


def sonic_sweep(spec: PotentialSpec, opts: SolverOptions = SolverOptions(),
                gaps=None, base_half_length: float = 128.0,
                base_size: int = 4096) -> SonicSweep:
    """Amplitude decay toward the sonic speed and the vanishing-exponent fit.

    Samples c = sqrt(2) - gap for a decreasing sequence of gaps, enlarging
    the domain as the predicted tail rate sqrt(2 - c^2) degrades, and fits
    log eta_max against log (2 - c^2).  The lower bound
    ||W * eta||_inf >= (2 - c^2)/4 is evaluated at every sample.
    """
    if gaps is None:
        gaps = np.array([0.2, 0.12, 0.08, 0.05, 0.03, 0.02, 0.012, 0.008, 0.005])
    c2 = math.sqrt(2.0)
    rows = []
    ok = True
    for gap in gaps:
        c = float(c2 - gap)
        rate = math.sqrt(2.0 - c ** 2)
        L, N = base_half_length, base_size
        while rate * L < 30.0 and L < 2048:  # keep e^{-rate L} below roundoff
            L, N = 2.0 * L, 2 * N
        grid = Grid(L, N)
        sol = newton_solve(spec, grid, c, initial_guess(grid, c), opts)
        if not sol.converged:
            continue
        weta = convolve(spec, grid, sol.fields.eta)
        margin = float(np.abs(weta).max() - (2.0 - c ** 2) / 4.0)
        ok = bool(ok and margin >= 0.0)
        rows.append((c, float(gap), sol.eta_max, sol.E, sol.p, margin))
    rows = np.array(rows)
    x = np.log(2.0 - rows[:, 0] ** 2)
    gamma = float(np.polyfit(x, np.log(rows[:, 2]), 1)[0])
    return SonicSweep(spec_label=spec.label(), rows=rows, gamma=gamma,
                      d2_symbol_at_zero=spec.d2_at_zero, all_nonvanishing_ok=ok)
