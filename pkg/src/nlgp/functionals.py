"""Variational layer: the action functional, its derivatives, and the
numerical mountain-pass geometry.

The unknown is v = 1 - rho, constrained to the nonvanishing set (sup v < 1).
Critical points of J_c(v) = A(v) - c^2 B(v) are exactly the zeros of the
amplitude equation; the gradient returned here is the L2 representative, so
grad_J(v) = -F(rho) with rho = 1 - v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridTooSmallError, OutOfRegimeError, VortexError
from .hydro import POSITIVITY_FLOOR
from .potentials import HypothesisCertificate, PotentialSpec
from .spectral import Grid, convolve, derivative, integrate


@dataclass(frozen=True)
class Vfield:
    """A candidate v = 1 - rho with its nonvanishing-set membership flag."""

    grid: Grid
    v: np.ndarray
    in_nv: bool

    @classmethod
    def make(cls, grid: Grid, v: np.ndarray, floor: float = POSITIVITY_FLOOR) -> "Vfield":
        return cls(grid=grid, v=np.asarray(v, dtype=float),
                   in_nv=bool(np.max(v) < 1.0 - floor))


def sobolev_norm(grid: Grid, v: np.ndarray) -> float:
    """Discrete H1 norm: sqrt(int v^2 + int (v')^2)."""
    return math.sqrt(integrate(grid, v ** 2) + integrate(grid, derivative(grid, v) ** 2))


def _f(s):
    return s * (2.0 - s)


def _h(s):
    return s * (2.0 - s) * (s ** 2 - 2.0 * s + 2.0) / (4.0 * (1.0 - s) ** 3)


def _h_prime(s):
    r4 = (1.0 - s) ** 4
    return (3.0 + r4) / (4.0 * r4)


@dataclass(frozen=True)
class ActionParts:
    J: float
    A: float
    B: float


def functional_J(vf: Vfield, c: float, spec: PotentialSpec) -> ActionParts:
    """J_c = A - c^2 B.  Outside the nonvanishing set B = +inf and J = -inf."""
    g = vf.grid
    v = vf.v
    eta = _f(v)
    A = 0.5 * integrate(g, derivative(g, v) ** 2) \
        + 0.25 * integrate(g, convolve(spec, g, eta) * eta)
    if not vf.in_nv:
        return ActionParts(J=-math.inf, A=float(A), B=math.inf)
    B = 0.125 * integrate(g, eta ** 2 / (1.0 - v) ** 2)
    return ActionParts(J=float(A - c ** 2 * B), A=float(A), B=float(B))


def grad_J(vf: Vfield, c: float, spec: PotentialSpec) -> np.ndarray:
    """L2 representative of the first derivative: -v'' + (W*f(v))(1-v) - c^2 h(v)."""
    if not vf.in_nv:
        raise VortexError("gradient undefined outside the nonvanishing set")
    g, v = vf.grid, vf.v
    return (-derivative(g, v, 2)
            + convolve(spec, g, _f(v)) * (1.0 - v)
            - c ** 2 * _h(v))


def hess_J_apply(vf: Vfield, c: float, spec: PotentialSpec, psi: np.ndarray) -> np.ndarray:
    """Second derivative applied to a direction psi (symmetric operator)."""
    if not vf.in_nv:
        raise VortexError("Hessian undefined outside the nonvanishing set")
    g, v = vf.grid, vf.v
    fp = 2.0 - 2.0 * v
    return (-derivative(g, psi, 2)
            - c ** 2 * _h_prime(v) * psi
            + convolve(spec, g, fp * psi) * (1.0 - v)
            - convolve(spec, g, _f(v)) * psi)


def pairing_identity(vf: Vfield, c: float, spec: PotentialSpec):
    """Both sides of 2 J_c(v) - J_c'(v)(v) = (1/2) int (W*f(v)) v^2 + (c^2/4) int f(v) v^2/(1-v)^3.

    The left side combines the functional and the gradient; the right side is
    direct quadrature.  Returns (lhs, rhs, relative residual); the identity
    holds for any v in the nonvanishing set, critical or not.
    """
    if not vf.in_nv:
        raise VortexError("pairing identity needs v in the nonvanishing set")
    g, v = vf.grid, vf.v
    parts = functional_J(vf, c, spec)
    lhs = 2.0 * parts.J - integrate(g, grad_J(vf, c, spec) * v)
    eta = _f(v)
    rhs = 0.5 * integrate(g, convolve(spec, g, eta) * v ** 2) \
        + 0.25 * c ** 2 * integrate(g, eta * v ** 2 / (1.0 - v) ** 3)
    resid = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)
    return float(lhs), float(rhs), float(resid)


# ---------------------------------------------------------------------------
# mountain-pass geometry


@dataclass(frozen=True)
class PhiEndpoint:
    vfield: Vfield
    delta: float
    r: float
    J: float


def build_phi_c(c: float, spec: PotentialSpec, grid: Grid,
                floor: float = POSITIVITY_FLOOR) -> PhiEndpoint:
    """Negative-action endpoint: phi^2 = delta on [-r, r], cosine ramp to 1.

    delta is chosen below c^2 / (2 ||W_hat||_inf) so that widening the core
    strictly lowers the action; r doubles until J_c(1 - phi) < 0.
    """
    if c <= 0:
        raise OutOfRegimeError("endpoint construction needs c > 0")
    wsup = float(np.abs(spec.symbol(grid.xi)).max())
    delta = 0.5 * min(1.0 - 2.0 * floor, c ** 2 / (2.0 * wsup))
    ax = np.abs(grid.x)
    r = 2.0
    while True:
        if r > grid.half_length / 2.0:
            raise GridTooSmallError(
                f"negative endpoint needs core radius > L/2 = {grid.half_length / 2:g}")
        phi2 = np.ones(grid.size)
        core = ax <= r
        ramp = (ax > r) & (ax < r + 1.0)
        phi2[core] = delta
        t = ax[ramp] - r
        phi2[ramp] = delta + (1.0 - delta) * 0.5 * (1.0 - np.cos(np.pi * t))
        vf = Vfield.make(grid, 1.0 - np.sqrt(phi2), floor)
        J = functional_J(vf, c, spec).J
        if J < 0.0:
            return PhiEndpoint(vfield=vf, delta=float(delta), r=float(r), J=float(J))
        r *= 2.0


@dataclass(frozen=True)
class SphereBound:
    ell: float
    lower: float          # ell * r^2
    r: float
    r_sup: float          # largest radius keeping both terms positive
    samples_checked: int
    min_margin: float     # min over samples of J(v) - lower


def _r_sup(cert: HypothesisCertificate, c: float) -> float:
    """Largest radius keeping both terms of the sphere constant positive."""
    sigma, kappa = cert.sigma, cert.kappa

    def ok(r):
        return (1.0 - 2.0 * kappa * (1.0 + r) ** 2 > 0.0
                and sigma - c ** 2 / (2.0 * (1.0 - r) ** 2) > 0.0)

    if not ok(1e-12):
        raise OutOfRegimeError(
            f"no admissible sphere radius at c = {c:g} under (sigma, kappa) = "
            f"({sigma:g}, {kappa:g})")
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def sphere_ell(cert: HypothesisCertificate, c: float, r: float) -> float:
    """min{(1 - 2 kappa (1+r)^2)/2, (sigma - c^2/(2 (1-r)^2))/4} at radius r."""
    return min((1.0 - 2.0 * cert.kappa * (1.0 + r) ** 2) / 2.0,
               (cert.sigma - c ** 2 / (2.0 * (1.0 - r) ** 2)) / 4.0)


def sphere_bound(c: float, spec: PotentialSpec, cert: HypothesisCertificate,
                 r: float, grid: Grid, n_samples: int = 200,
                 rng=None) -> SphereBound:
    """Sphere lower bound J_c >= ell_r r^2, verified on random band-limited fields.

    Sampling only checks the analytic bound; it never claims an infimum.
    Raises OutOfRegimeError when c is outside the certified interval.
    """
    if c >= math.sqrt(2.0 * cert.sigma):
        raise OutOfRegimeError(f"c = {c:g} >= sqrt(2 sigma) = "
                               f"{math.sqrt(2 * cert.sigma):g}")
    r_sup = _r_sup(cert, c)
    if not (0 < r <= r_sup):
        raise OutOfRegimeError(f"radius r = {r:g} outside (0, {r_sup:g}]")
    ell = sphere_ell(cert, c, r)
    lower = ell * r ** 2
    rng = np.random.default_rng(0) if rng is None else rng
    min_margin = math.inf
    checked = 0
    while checked < n_samples:
        v = _random_band_limited(grid, rng)
        v *= r / sobolev_norm(grid, v)
        if np.max(v) >= 1.0 - POSITIVITY_FLOOR:  # resample on NV violation
            continue
        J = functional_J(Vfield.make(grid, v), c, spec).J
        min_margin = min(min_margin, J - lower * (1.0 - 1e-6))
        checked += 1
    return SphereBound(ell=float(ell), lower=float(lower), r=float(r),
                       r_sup=float(r_sup), samples_checked=checked,
                       min_margin=float(min_margin))


def _random_band_limited(grid: Grid, rng, bandwidth: float = 2.0) -> np.ndarray:
    coef = rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size)
    coef *= np.exp(-(grid.xi / bandwidth) ** 2)
    return np.fft.ifft(coef).real


@dataclass
class MountainPassBracket:
    c: float
    lower: float
    upper: float
    path: list                    # list of v arrays from 0 to 1 - phi_c
    phi_delta: float
    phi_r: float
    endpoint_J: float
    upper_history: list

    def as_dict(self):
        return {"c": self.c, "lower": self.lower, "upper": self.upper,
                "path_nodes": len(self.path),
                "phi_params": {"delta": self.phi_delta, "r": self.phi_r},
                "endpoint_J": self.endpoint_J,
                "upper_history": self.upper_history}


def mountain_pass_bracket(c: float, spec: PotentialSpec, cert: HypothesisCertificate,
                          grid: Grid, refine_steps: int = 200, n_nodes: int = 33,
                          step: float = 0.5, subdivisions: int = 8) -> MountainPassBracket:
    """Bracket the mountain-pass level between the sphere bound and a path max.

    The initial path is the straight segment t (1 - phi_c), which stays in
    the nonvanishing set; interior nodes then descend along the multiplier-
    preconditioned gradient with fixed endpoints (a string method),
    re-parameterized by H1 arc length after each sweep.  ``upper_history``
    tracks the running minimum of the nodal path maxima; the reported upper
    bound re-evaluates the final path on ``subdivisions`` interior points per
    segment, since the nodal maximum alone can step over the ridge between
    nodes.  The lower bound is the sphere constant at radius r_sup / 2.
    """
    from .potentials import mc_symbol
    endpoint = build_phi_c(c, spec, grid)
    v_end = endpoint.vfield.v
    r = _r_sup(cert, c) / 2.0
    sb = sphere_bound(c, spec, cert, r, grid, n_samples=0)
    path = [t * v_end for t in np.linspace(0.0, 1.0, n_nodes)]
    mc = mc_symbol(spec, abs(c), grid.xi)

    def J_of(v):
        # a path through the boundary is inadmissible: +inf, never a bound
        vf = Vfield.make(grid, v)
        return functional_J(vf, c, spec).J if vf.in_nv else math.inf

    nodal = max(J_of(v) for v in path)
    history = [nodal]
    for _ in range(refine_steps):
        for i in range(1, n_nodes - 1):
            v = path[i]
            Jv = J_of(v)
            if Jv <= endpoint.J:
                # frozen downhill tail: the action is steeply unbounded below
                # near the positivity floor, and chasing it only stretches the
                # path until reparameterization drags nodes off the barrier
                continue
            gvec = grad_J(Vfield.make(grid, v), c, spec)
            dvec = np.fft.ifft(np.fft.fft(gvec) / mc).real
            s = step
            for _ in range(12):  # reject and halve on NV escape or J increase
                vn = v - s * dvec
                if np.max(vn) < 1.0 - POSITIVITY_FLOOR and J_of(vn) <= Jv:
                    path[i] = vn
                    break
                s *= 0.5
        path = _reparameterize(grid, path)
        nodal = min(nodal, max(J_of(v) for v in path))
        history.append(nodal)
    upper = max(J_of((1.0 - w) * a + w * b)
                for a, b in zip(path[:-1], path[1:])
                for w in np.linspace(0.0, 1.0, subdivisions + 2))
    return MountainPassBracket(c=c, lower=sb.lower, upper=float(upper), path=path,
                               phi_delta=endpoint.delta, phi_r=endpoint.r,
                               endpoint_J=endpoint.J, upper_history=history)


def _reparameterize(grid: Grid, path):
    """Redistribute nodes to equal H1 arc length along the polyline."""
    n = len(path)
    d = np.zeros(n)
    for i in range(1, n):
        d[i] = d[i - 1] + sobolev_norm(grid, path[i] - path[i - 1])
    if d[-1] == 0.0:
        return path
    d /= d[-1]
    new_path = [path[0]]
    targets = np.linspace(0.0, 1.0, n)[1:-1]
    for s in targets:
        i = int(np.searchsorted(d, s))
        i = min(max(i, 1), n - 1)
        w = (s - d[i - 1]) / max(d[i] - d[i - 1], 1e-300)
        new_path.append((1.0 - w) * path[i - 1] + w * path[i])
    new_path.append(path[-1])
    return new_path
