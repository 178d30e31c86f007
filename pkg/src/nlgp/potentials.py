"""Interaction-kernel catalog defined through Fourier symbols.

Every potential is specified by its (even, bounded) symbol W_hat; the solver
never needs the physical-space kernel.  This module also certifies the
quadratic lower bound W_hat >= sigma - kappa xi^2, the one-sided derivative
bound W_hat' >= -m xi, the Bogoliubov dispersion curve with its maxon/roton
critical points, and the multiplier M_c(xi) = xi^2 + 2 W_hat(xi) - c^2 whose
inverse kernel controls the far-field decay of solitons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (CertificationError, NoSoundSpeedError, OutOfRangeError,
                     SupersonicMultiplierError)
from .spectral import Grid

POSITIVITY_TOL = 1e-12


@dataclass(frozen=True)
class MeasureDecomposition:
    """Data of a kernel of the form A (delta_0 + mu): variations of mu and A."""

    mu_plus: float
    mu_minus: float
    amplitude: float

    @property
    def b0(self) -> float:
        """Amplitude bound constant 1 + |mu+| / (1 - |mu-|)."""
        return 1.0 + self.mu_plus / (1.0 - self.mu_minus)

    @property
    def b1(self) -> float:
        """Derivative bound constant B0^(1/2) (1 + 2 sqrt(2) B0^(1/2))."""
        b0 = self.b0
        return math.sqrt(b0) * (1.0 + 2.0 * math.sqrt(2.0) * math.sqrt(b0))


@dataclass(frozen=True)
class PotentialSpec:
    """An interaction kernel, defined primarily by its Fourier symbol."""

    kind: str
    params: dict
    _symbol: Callable[[np.ndarray], np.ndarray]
    _deriv: Optional[Callable[[np.ndarray], np.ndarray]] = None
    _complex_symbol: Optional[Callable[[np.ndarray], np.ndarray]] = None
    measure_decomposition: Optional[MeasureDecomposition] = None
    d2_at_zero: Optional[float] = None
    total_variation: Optional[float] = None
    h2_class: str = "W2inf"  # {"W2inf", "XiDerivBounded", "Fails"}

    def symbol(self, xi):
        """W_hat evaluated at xi; evenness is enforced exactly."""
        return self._symbol(np.abs(np.asarray(xi, dtype=float)))

    @property
    def has_deriv(self) -> bool:
        return self._deriv is not None

    def symbol_deriv(self, xi):
        """(W_hat)' at xi; odd by evenness of the symbol."""
        if self._deriv is None:
            raise ValueError(f"{self.kind}: symbol derivative unavailable")
        xi = np.asarray(xi, dtype=float)
        return np.sign(xi) * self._deriv(np.abs(xi))

    def xi_symbol_deriv(self, xi):
        """xi * (W_hat)'(xi) with the limit value 0 at xi = 0."""
        xi = np.asarray(xi, dtype=float)
        out = np.abs(xi) * self._deriv(np.abs(xi))
        return np.where(xi == 0.0, 0.0, out)

    @property
    def has_complex_symbol(self) -> bool:
        return self._complex_symbol is not None

    def complex_symbol(self, z):
        if self._complex_symbol is None:
            raise ValueError(f"{self.kind}: no analytic extension available")
        return self._complex_symbol(np.asarray(z, dtype=complex))

    def label(self) -> str:
        if not self.params:
            return self.kind
        inner = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.kind}({inner})"


# ---------------------------------------------------------------------------
# catalog constructors


def delta() -> PotentialSpec:
    """Contact interaction: W_hat = 1."""
    one = lambda xi: np.ones_like(xi)
    return PotentialSpec(
        kind="delta", params={}, _symbol=one,
        _deriv=lambda xi: np.zeros_like(xi),
        _complex_symbol=lambda z: np.ones_like(z),
        measure_decomposition=MeasureDecomposition(0.0, 0.0, 1.0),
        d2_at_zero=0.0, total_variation=1.0)


def exp_repulsive(alpha: float, beta: float) -> PotentialSpec:
    """Contact repulsion plus exponential attraction; requires beta > 2 alpha > 0.

    W_hat(xi) = beta/(beta - 2 alpha) * (1 - 2 alpha beta / (xi^2 + beta^2)).
    """
    if not (beta > 2 * alpha > 0):
        raise ValueError("exp_repulsive requires beta > 2*alpha > 0")
    A = beta / (beta - 2 * alpha)

    def sym(xi):
        return A * (1.0 - 2.0 * alpha * beta / (xi ** 2 + beta ** 2))

    def der(xi):
        return A * 4.0 * alpha * beta * xi / (xi ** 2 + beta ** 2) ** 2

    return PotentialSpec(
        kind="exp_repulsive", params={"alpha": alpha, "beta": beta},
        _symbol=sym, _deriv=der, _complex_symbol=lambda z: A * (1.0 - 2.0 * alpha * beta / (z ** 2 + beta ** 2)),
        measure_decomposition=MeasureDecomposition(0.0, 2.0 * alpha / beta, A),
        d2_at_zero=4.0 * alpha / (beta ** 2 * (beta - 2 * alpha)),
        total_variation=(beta + 2 * alpha) / (beta - 2 * alpha))


def shifted_deltas(lam: float) -> PotentialSpec:
    """Contact repulsion with attractive deltas at +-lam: W_hat = 2 - cos(lam xi)."""
    if lam <= 0:
        raise ValueError("shifted_deltas requires lam > 0")
    return PotentialSpec(
        kind="shifted_deltas", params={"lam": lam},
        _symbol=lambda xi: 2.0 - np.cos(lam * xi),
        _deriv=lambda xi: lam * np.sin(lam * xi),
        _complex_symbol=lambda z: 2.0 - np.cos(lam * z),
        measure_decomposition=MeasureDecomposition(0.0, 0.5, 2.0),
        d2_at_zero=lam ** 2, total_variation=3.0)


def gaussian(lam: float) -> PotentialSpec:
    """Gaussian kernel: W_hat(xi) = exp(-lam xi^2)."""
    if lam <= 0:
        raise ValueError("gaussian requires lam > 0")
    return PotentialSpec(
        kind="gaussian", params={"lam": lam},
        _symbol=lambda xi: np.exp(-lam * xi ** 2),
        _deriv=lambda xi: -2.0 * lam * xi * np.exp(-lam * xi ** 2),
        _complex_symbol=lambda z: np.exp(-lam * z ** 2),
        d2_at_zero=-2.0 * lam, total_variation=1.0)


def soft_core(lam: float) -> PotentialSpec:
    """Top-hat kernel of width 2 lam: W_hat(xi) = sin(lam xi)/(lam xi)."""
    if lam <= 0:
        raise ValueError("soft_core requires lam > 0")

    def sym(xi):
        return np.sinc(lam * xi / np.pi)

    def der(xi):
        x = lam * xi
        with np.errstate(invalid="ignore", divide="ignore"):
            out = (np.cos(x) - np.sinc(x / np.pi)) / xi
        return np.where(xi == 0.0, 0.0, out)

    def csym(z):
        x = lam * z
        small = np.abs(x) < 1e-8
        xs = np.where(small, 1.0, x)
        return np.where(small, 1.0 - x ** 2 / 6.0, np.sin(xs) / xs)

    return PotentialSpec(
        kind="soft_core", params={"lam": lam}, _symbol=sym, _deriv=der,
        _complex_symbol=csym, d2_at_zero=-lam ** 2 / 3.0, total_variation=1.0)


def bochner_riesz(kappa: float) -> PotentialSpec:
    """Truncated parabola W_hat(xi) = (1 - kappa xi^2)^+, kappa in (0, 1/2]."""
    if not (0 < kappa <= 0.5):
        raise ValueError("bochner_riesz requires kappa in (0, 1/2]")

    def der(xi):
        return np.where(kappa * xi ** 2 < 1.0, -2.0 * kappa * xi, 0.0)

    return PotentialSpec(
        kind="bochner_riesz", params={"kappa": kappa},
        _symbol=lambda xi: np.maximum(1.0 - kappa * xi ** 2, 0.0),
        _deriv=der, d2_at_zero=-2.0 * kappa, h2_class="XiDerivBounded")


def berloff(a: float, b: float, lam: float) -> PotentialSpec:
    """Polynomial-Gaussian symbol with maxon/roton dispersion.

    W_hat(xi) = (1 + a xi^2 + b xi^4) exp(-lam xi^2).
    """

    def sym(xi):
        x2 = xi ** 2
        return (1.0 + a * x2 + b * x2 ** 2) * np.exp(-lam * x2)

    def der(xi):
        x2 = xi ** 2
        return ((2 * a * xi + 4 * b * xi * x2)
                - 2 * lam * xi * (1.0 + a * x2 + b * x2 ** 2)) * np.exp(-lam * x2)

    def csym(z):
        z2 = z ** 2
        return (1.0 + a * z2 + b * z2 ** 2) * np.exp(-lam * z2)

    return PotentialSpec(
        kind="berloff", params={"a": a, "b": b, "lam": lam},
        _symbol=sym, _deriv=der, _complex_symbol=csym,
        d2_at_zero=2.0 * (a - lam))


def measure_combo(weights, shifts) -> PotentialSpec:
    """Normalized atomic kernel A (delta_0 + mu), mu = sum_j w_j (delta_{s_j} + delta_{-s_j})/2.

    A shift of zero contributes w_j delta_0.  Requires |mu^-| < 1 and
    1 + mu_hat(0) > 0 so that the normalization A = 1/(1 + mu_hat(0)) exists.
    """
    w = np.asarray(weights, dtype=float)
    s = np.abs(np.asarray(shifts, dtype=float))
    if w.shape != s.shape or w.ndim != 1 or len(w) == 0:
        raise ValueError("weights and shifts must be equal-length 1-d sequences")
    mu_hat0 = float(np.sum(w))
    mu_minus = float(np.sum(-w[w < 0]))
    mu_plus = float(np.sum(w[w > 0]))
    if mu_minus >= 1.0:
        raise ValueError(f"negative variation must satisfy |mu^-| < 1, got {mu_minus}")
    if 1.0 + mu_hat0 <= 0.0:
        raise ValueError("1 + mu_hat(0) must be positive")
    A = 1.0 / (1.0 + mu_hat0)

    def sym(xi):
        acc = np.ones_like(xi)
        for wj, sj in zip(w, s):
            acc = acc + wj * np.cos(sj * xi)
        return A * acc

    def der(xi):
        acc = np.zeros_like(xi)
        for wj, sj in zip(w, s):
            acc = acc - wj * sj * np.sin(sj * xi)
        return A * acc

    def csym(z):
        acc = np.ones_like(z)
        for wj, sj in zip(w, s):
            acc = acc + wj * np.cos(sj * z)
        return A * acc

    return PotentialSpec(
        kind="measure_combo",
        params={"weights": tuple(w.tolist()), "shifts": tuple(s.tolist())},
        _symbol=sym, _deriv=der, _complex_symbol=csym,
        measure_decomposition=MeasureDecomposition(mu_plus, mu_minus, A),
        d2_at_zero=float(-A * np.sum(w * s ** 2)),
        total_variation=float(A * (1.0 + np.sum(np.abs(w)))))


def tabulated(xi_samples, w_samples) -> PotentialSpec:
    """Symbol given by samples, linearly interpolated; even extension assumed."""
    xs = np.asarray(xi_samples, dtype=float)
    ws = np.asarray(w_samples, dtype=float)
    if xs.ndim != 1 or xs.shape != ws.shape or len(xs) < 2:
        raise ValueError("tabulated symbol needs two equal-length 1-d arrays")
    order = np.argsort(np.abs(xs))
    xs, ws = np.abs(xs[order]), ws[order]
    xmax = xs[-1]
    step = np.diff(xs).min()

    def sym(xi):
        if np.any(xi > xmax + 1e-12):
            raise OutOfRangeError(
                f"tabulated symbol queried at |xi| up to {np.max(xi):g} > {xmax:g}")
        return np.interp(xi, xs, ws)

    def der(xi):
        h = step
        hi = np.minimum(xi + h, xmax)
        lo = np.maximum(xi - h, 0.0)
        return (np.interp(hi, xs, ws) - np.interp(lo, xs, ws)) / (hi - lo)

    return PotentialSpec(kind="tabulated",
                         params={"n_samples": len(xs), "xi_max": float(xmax)},
                         _symbol=sym, _deriv=der, h2_class="XiDerivBounded")


def tabulated_from_csv(path) -> PotentialSpec:
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    return tabulated(data[:, 0], data[:, 1])


CATALOG = {
    "delta": delta,
    "exp_repulsive": exp_repulsive,
    "shifted_deltas": shifted_deltas,
    "gaussian": gaussian,
    "soft_core": soft_core,
    "bochner_riesz": bochner_riesz,
    "berloff": berloff,
    "measure_combo": measure_combo,
    "tabulated": tabulated,
}


def make_potential(kind: str, **params) -> PotentialSpec:
    if kind not in CATALOG:
        raise ValueError(f"unknown potential kind {kind!r}; choose from {sorted(CATALOG)}")
    return CATALOG[kind](**params)


# ---------------------------------------------------------------------------
# sound speed, certificates


def sound_speed(spec: PotentialSpec) -> float:
    """c_* = sqrt(2 W_hat(0)), the conjectured supremum of soliton speeds."""
    w0 = float(spec.symbol(0.0))
    if w0 <= 0.0:
        raise NoSoundSpeedError(f"W_hat(0) = {w0:g} <= 0: subsonic regime empty")
    return math.sqrt(2.0 * w0)


def certification_lattice(spec: PotentialSpec, n_linear: int = 8192,
                          n_tail: int = 2048) -> np.ndarray:
    """Default sample lattice: dense on [0, 8 c*], logarithmic out to 10^3 c*."""
    cs = sound_speed(spec)
    lin = np.linspace(0.0, 8.0 * cs, n_linear)
    tail = np.geomspace(8.0 * cs, 1e3 * cs, n_tail)[1:]
    return np.concatenate([lin, tail])


@dataclass(frozen=True)
class HypothesisCertificate:
    """Sampled certificate of the kernel hypotheses.

    Sampling on a lattice cannot prove almost-everywhere inequalities; every
    field here is a *sampled* statement, and consumers treat it as such.
    """

    sigma: float
    kappa: float
    sound_speed: float
    normalized: bool
    critical_sigma: Optional[float] = None  # kappa = 1/2 route for W_hat >= 0
    m: Optional[float] = None               # derivative bound, None if uncertified
    h3_full: bool = False                   # m < 1 together with W_hat >= 0, W_hat(0) = 1
    h2_class: str = "W2inf"
    h4_norm: Optional[float] = None
    sampled: bool = True
    notes: tuple = ()

    @property
    def certified_speed(self) -> float:
        """Upper end of the certified subsonic interval, sqrt(2 sigma_best)."""
        return math.sqrt(2.0 * self.sigma_best)

    @property
    def sigma_best(self) -> float:
        if self.critical_sigma is not None:
            return max(self.sigma, self.critical_sigma)
        return self.sigma


def certify_h1(spec: PotentialSpec, lattice: Optional[np.ndarray] = None,
               kappa_step: float = 0.01, tol: float = 1e-9):
    """Largest sampled sigma with the smallest kappa realizing it.

    sigma(kappa) = min over the lattice of W_hat + kappa xi^2 is nondecreasing
    in kappa; the sweep runs kappa over {0, step, ..., 1/2 - step}, takes the
    best sigma, and bisects for the smallest kappa attaining it (within tol).
    When the symbol is nonnegative the critical case kappa = 1/2 is recorded
    separately.  Raises CertificationError when no positive sigma exists.
    """
    if lattice is None:
        lattice = certification_lattice(spec)
    wl = spec.symbol(lattice)
    lat2 = lattice ** 2

    def sigma_of(kappa):
        return float(np.min(wl + kappa * lat2))

    kappas = np.arange(0.0, 0.5, kappa_step)
    sigmas = np.array([sigma_of(k) for k in kappas])
    best = sigmas.max()
    if best <= POSITIVITY_TOL:
        raise CertificationError(
            f"{spec.label()}: no sampled sigma > 0 for kappa < 1/2")
    target = best - tol * max(1.0, abs(best))
    i_first = int(np.argmax(sigmas >= target))
    if i_first == 0:
        kappa_star = 0.0
    else:
        lo, hi = kappas[i_first - 1], kappas[i_first]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if sigma_of(mid) >= target:
                hi = mid
            else:
                lo = mid
        kappa_star = hi
    sigma_star = sigma_of(kappa_star)

    critical = None
    if float(np.min(wl)) >= -POSITIVITY_TOL:
        sc = sigma_of(0.5)
        if sc > POSITIVITY_TOL:
            critical = sc
    return sigma_star, kappa_star, critical


def certify_h3(spec: PotentialSpec, lattice: Optional[np.ndarray] = None,
               cross_check_tol: float = 1e-12):
    """Smallest sampled m in [0, 1) with (W_hat)'(xi) >= -m xi for xi > 0.

    Also cross-checks the implied bound W_hat >= 1 - m xi^2 / 2 on the
    lattice.  Raises CertificationError when the required m reaches 1.
    """
    if lattice is None:
        lattice = certification_lattice(spec)
    pos = lattice[lattice > 0]
    slopes = -spec.symbol_deriv(pos) / pos
    m = max(0.0, float(slopes.max()))
    if m >= 1.0:
        raise CertificationError(
            f"{spec.label()}: derivative bound needs m = {m:g} >= 1")
    implied = spec.symbol(lattice) - (1.0 - 0.5 * m * lattice ** 2)
    if implied.min() < -cross_check_tol * max(1.0, 0.5 * m * lattice.max() ** 2):
        raise CertificationError(
            f"{spec.label()}: implied bound W_hat >= 1 - m xi^2/2 fails on lattice")
    return m


def certify(spec: PotentialSpec, lattice: Optional[np.ndarray] = None) -> HypothesisCertificate:
    """Full sampled certificate: quadratic bound, derivative bound, metadata."""
    if lattice is None:
        lattice = certification_lattice(spec)
    cs = sound_speed(spec)
    notes = []
    sigma, kappa, critical = certify_h1(spec, lattice)
    normalized = abs(float(spec.symbol(0.0)) - 1.0) < 1e-12
    m = None
    h3_full = False
    if spec.has_deriv:
        try:
            m = certify_h3(spec, lattice)
        except CertificationError as exc:
            notes.append(str(exc))
        else:
            nonneg = float(np.min(spec.symbol(lattice))) >= -POSITIVITY_TOL
            h3_full = nonneg and normalized
    if spec.kind == "soft_core":
        lam = spec.params["lam"]
        notes.append(
            "soft_core: sweep yields kappa = lam^2/6 = "
            f"{lam ** 2 / 6:.6f} (so kappa < 1/2 iff lam < sqrt(3)); an often-"
            "quoted value lam^2/3 is the derivative bound m, not kappa")
    return HypothesisCertificate(
        sigma=sigma, kappa=kappa, sound_speed=cs, normalized=normalized,
        critical_sigma=critical, m=m, h3_full=h3_full,
        h2_class=spec.h2_class, h4_norm=spec.total_variation,
        notes=tuple(notes))


# ---------------------------------------------------------------------------
# dispersion


def dispersion(spec: PotentialSpec, xi, with_flag: bool = False):
    """Bogoliubov curve w(xi) = sqrt(xi^4 + 2 W_hat(xi) xi^2).

    A negative radicand marks an imaginary branch; those samples come back as
    NaN together with a diagnostic mask when ``with_flag`` is set.
    """
    xi = np.asarray(xi, dtype=float)
    rad = xi ** 4 + 2.0 * spec.symbol(xi) * xi ** 2
    imag = rad < 0.0
    w = np.sqrt(np.where(imag, np.nan, rad))
    if with_flag:
        return w, imag
    return w


def _dispersion_slope(spec: PotentialSpec, xi):
    """dw/dxi away from 0, via w^2 = xi^4 + 2 W_hat xi^2."""
    xi = np.asarray(xi, dtype=float)
    w = dispersion(spec, xi)
    num = 4.0 * xi ** 3 + 2.0 * spec.symbol_deriv(xi) * xi ** 2 + 4.0 * spec.symbol(xi) * xi
    return num / (2.0 * w)


def roton_maxon(spec: PotentialSpec, lattice: Optional[np.ndarray] = None):
    """Interior critical points of the dispersion curve on (0, xi_max).

    Returns a list of (xi*, w(xi*), 'max'|'min') found by sign changes of the
    discrete slope refined by bisection; empty when w is monotone.
    """
    if lattice is None:
        lattice = np.linspace(0.0, 8.0 * sound_speed(spec), 8192)
    xs = lattice[lattice > 0]
    sl = _dispersion_slope(spec, xs)
    good = np.isfinite(sl)
    xs, sl = xs[good], sl[good]
    out = []
    signs = np.sign(sl)
    for i in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        lo, hi = xs[i], xs[i + 1]
        flo = sl[i]
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            fm = float(_dispersion_slope(spec, mid))
            if flo * fm <= 0:
                hi = mid
            else:
                lo, flo = mid, fm
        xstar = 0.5 * (lo + hi)
        kind = "max" if sl[i] > 0 else "min"
        out.append((float(xstar), float(dispersion(spec, xstar)), kind))
    return out


# ---------------------------------------------------------------------------
# multiplier and its kernel


def mc_symbol(spec: PotentialSpec, c: float, xi):
    """M_c(xi) = xi^2 + 2 W_hat(xi) - c^2."""
    xi = np.asarray(xi, dtype=float)
    return xi ** 2 + 2.0 * spec.symbol(xi) - c ** 2


def kink_aligned_half_length(spec: PotentialSpec, target: float) -> float:
    """Half-length near ``target`` putting the symbol's kink at a frequency-cell
    midpoint.

    Spectral sums over a lattice that straddles a symbol kink converge only
    at O(1/L); centering the kink between lattice points cancels the leading
    jump term and restores O(1/L^2).  Kinds without a kink return ``target``.
    """
    if spec.kind != "bochner_riesz":
        return target
    xistar = 1.0 / math.sqrt(spec.params["kappa"])
    k = max(1, round(target * xistar / math.pi - 0.5))
    return (k + 0.5) * math.pi / xistar


def lc_kernel(spec: PotentialSpec, c: float, grid: Grid,
              corrected: bool = True) -> np.ndarray:
    """Grid samples of the inverse-multiplier kernel (inverse transform of 1/M_c).

    Raises SupersonicMultiplierError unless M_c > 0 on the whole frequency
    lattice.  The result is real, even, and absolutely summable.

    The kernel has a kink at the origin, so the bare inverse DFT of 1/M_c
    carries an O(h) series-truncation error there.  With ``corrected`` the
    Lorentzian part 1/(xi^2 + B^2) is inverted in closed form and only the
    faster-decaying remainder goes through the DFT, which recovers the line
    kernel at the nodes (exactly so for the contact kernel).  The two
    descriptions cannot coincide: samples of the line kernel alias under the
    DFT, so the exact round-trip DFT -> 1/M_c holds only for the uncorrected
    output.
    """
    mc = mc_symbol(spec, c, grid.xi)
    if np.min(mc) <= 0.0:
        raise SupersonicMultiplierError(
            f"{spec.label()}: M_c has a nonpositive value {np.min(mc):g} "
            f"on the lattice at c = {c:g}")
    signs = np.where(np.arange(grid.size) % 2 == 0, 1.0, -1.0)
    if not corrected:
        return np.fft.ifft(signs / mc).real / grid.spacing
    B2 = 2.0 * float(spec.symbol(np.abs(grid.xi).max())) - c ** 2
    if B2 < 1e-8:
        B2 = 1.0
    B = math.sqrt(B2)
    ax = np.abs(grid.x)
    L = grid.half_length
    base = (np.exp(-B * ax) + np.exp(-B * (2 * L - ax))
            + np.exp(-B * (2 * L + ax))) / (2.0 * B)
    remainder = 1.0 / mc - 1.0 / (grid.xi ** 2 + B2)
    return base + np.fft.ifft(signs * remainder).real / grid.spacing


# ---------------------------------------------------------------------------
# decay prediction via strip sampling


@dataclass(frozen=True)
class DecayPrediction:
    """Predicted far-field behaviour of eta = 1 - |u|^2."""

    model: str                      # "exponential" | "algebraic" | "unknown"
    value: float = math.nan         # rate (exponential) or power supremum (algebraic)
    zero: Optional[complex] = None  # lowest multiplier zero located, if any
    censored: bool = False          # True when no zero was found inside the search box


def _strip_zeros(fz, xi_max: float, w_max: float, nxi: int, nw: int):
    """Zeros of an analytic function on [0, xi_max] x (0, w_max].

    Dense sampling of |f| locates candidate minima which are polished by
    complex Newton (derivative by central differences); only candidates that
    polish to |f| < 1e-9 count as zeros.
    """
    xs = np.linspace(0.0, xi_max, nxi)
    ws = np.linspace(w_max / nw, w_max, nw)
    Z = xs[None, :] + 1j * ws[:, None]
    with np.errstate(all="ignore"):
        A = np.abs(fz(Z))
    A = np.where(np.isfinite(A), A, np.inf)  # poles repel, never attract
    finite = A[np.isfinite(A)]
    if finite.size == 0:
        return []
    thr = np.quantile(finite, 0.05)
    cand = []
    interior = (A[1:-1, 1:-1] <= thr)
    interior &= (A[1:-1, 1:-1] <= A[:-2, 1:-1]) & (A[1:-1, 1:-1] <= A[2:, 1:-1])
    interior &= (A[1:-1, 1:-1] <= A[1:-1, :-2]) & (A[1:-1, 1:-1] <= A[1:-1, 2:])
    for i, j in zip(*np.nonzero(interior)):
        cand.append(Z[i + 1, j + 1])
    for i in range(1, nw - 1):  # imaginary-axis column
        if A[i, 0] <= thr and A[i, 0] <= A[i - 1, 0] and A[i, 0] <= A[i + 1, 0] and A[i, 0] <= A[i, 1]:
            cand.append(Z[i, 0])
    zeros = []
    for z0 in cand:
        z = complex(z0)
        for _ in range(100):
            f = complex(fz(np.array(z)))
            h = 1e-7 * (1.0 + abs(z))
            df = (complex(fz(np.array(z + h))) - complex(fz(np.array(z - h)))) / (2 * h)
            if df == 0:
                break
            dz = f / df
            z -= dz
            if abs(dz) < 1e-13 * (1.0 + abs(z)):
                break
        if abs(complex(fz(np.array(z)))) < 1e-9 and 1e-6 < z.imag <= w_max + 0.5:
            zeros.append(z)
    return zeros


def decay_prediction(spec: PotentialSpec, c: float, w_max: float = 4.0,
                     nxi: int = 1024, nw: int = 256) -> DecayPrediction:
    """Predict the tail model of eta from the multiplier symbol.

    Analytic symbols: exponential decay at the rate set by the lowest zero of
    M_c in the upper half-strip, located by rectangle sampling on
    [0, 4 c*] x (0, w_max] plus Newton polishing.  The truncated-parabola
    kernel only admits algebraic decay (every power below 1); tabulated
    symbols give no prediction.
    """
    if spec.kind == "bochner_riesz":
        return DecayPrediction(model="algebraic", value=1.0)
    if not spec.has_complex_symbol:
        return DecayPrediction(model="unknown")
    cs = sound_speed(spec)

    def fz(z):
        return z ** 2 + 2.0 * spec.complex_symbol(z) - c ** 2

    zeros = _strip_zeros(fz, xi_max=4.0 * cs, w_max=w_max, nxi=nxi, nw=nw)
    if not zeros:
        return DecayPrediction(model="exponential", value=w_max, censored=True)
    zlow = min(zeros, key=lambda z: z.imag)
    return DecayPrediction(model="exponential", value=float(zlow.imag), zero=zlow)


def exp_repulsive_decay_rates(alpha: float, beta: float, c: float):
    """Positive roots (beta_1, beta_2) of the quartic numerator of M_c.

    For the rational symbol of ``exp_repulsive``, 1/M_c is a rational function
    whose poles sit at +- i beta_j; the kernel is a sum of two exponentials
    with these rates.
    """
    A = beta / (beta - 2 * alpha)
    # (s + beta^2)(s - c^2) + 2 A (s + beta^2 - 2 alpha beta) = 0,  s = z^2
    coeffs = [1.0,
              beta ** 2 - c ** 2 + 2.0 * A,
              -c ** 2 * beta ** 2 + 2.0 * A * (beta ** 2 - 2.0 * alpha * beta)]
    roots = np.roots(coeffs)
    if np.any(np.abs(roots.imag) > 1e-10) or np.any(roots.real >= 0):
        raise ValueError("expected two negative real roots; is c subsonic?")
    b = np.sort(np.sqrt(-roots.real))
    return float(b[0]), float(b[1])
