"""Thin-crystal closed forms: amplitudes, brightness formulas, walk-off shift.

Everything here assumes the symmetric degenerate configuration
w_i = w_s = w, w_p = r w, alpha_i = alpha_s = alpha, Omega = omega_0/2, for
which the effective waist is wbar^2 = r^2 w^2 / (1 + 2 r^2).  Brightness
values carry the same unit normalization as the full evaluators (overall
constant set to 1), so thin forms and quadrature of the full amplitude can
be compared absolutely, not just as ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from ._quad import gauss_legendre

from .dispersion import Polarization, walkoff_slope
from .geometry import SourceSetup
from .units import C_UM_FS as C
from .wavefunction import (
    collection_wavevectors,
    effective_waists,
    expansion_center,
    paraxial_params,
    pump_spectral_amplitude,
)
from .dispersion import kz

_SQRT2 = math.sqrt(2.0)
_SQRT_PI = math.sqrt(math.pi)
_erf = np.vectorize(math.erf, otypes=[float])

# Maclaurin series of the erf-weighted brightness loses digits once the erf
# argument at the window edge exceeds ~2; beyond that use the quadrature.
SERIES_PARAMETER_LIMIT = 2.0


class SeriesRegimeError(ValueError):
    """Series expansion not usable here; integrate brightness_exact_thin."""


@dataclass(frozen=True)
class ThinConfig:
    """Inputs of the closed-form thin-crystal expressions."""

    w: float                      # signal/idler waist [um]
    alpha: float                  # collection angle [rad]
    tau_p: float                  # pump pulse parameter [fs]
    omega_0: float                # pump central frequency [rad/fs]
    window: tuple[float, float]   # transmission window (omega_b, omega_t) [rad/fs]
    length: float                 # crystal length [um]
    delta: float | None = None    # spectral filter half-width [rad/fs]
    beta_p: float = 0.0           # pump walk-off slope (dimensionless)

    @classmethod
    def from_setup(cls, setup: SourceSetup, delta: float | None = None) -> "ThinConfig":
        w = setup.waists()
        if not (
            math.isclose(w[1, 0], w[1, 1])
            and math.isclose(w[2, 0], w[2, 1])
            and math.isclose(w[0, 0], w[0, 1])
            and math.isclose(w[1, 0], w[2, 0])
        ):
            raise ValueError("thin-crystal forms assume round, equal signal/idler waists")
        geo = setup.geometry
        if not math.isclose(geo.alpha_i, geo.alpha_s, abs_tol=1e-15):
            raise ValueError("thin-crystal forms assume symmetric collection angles")
        beta_p = 0.0
        if setup.pump.polarization is Polarization.EXTRAORDINARY:
            beta_p = float(walkoff_slope(setup.omega_0, setup.crystal))
        return cls(
            w=float(w[1, 0]),
            alpha=geo.alpha_s,
            tau_p=setup.tau_p,
            omega_0=setup.omega_0,
            window=setup.crystal.window,
            length=setup.crystal.length,
            delta=delta,
            beta_p=beta_p,
        )

    def with_alpha(self, alpha: float) -> "ThinConfig":
        return replace(self, alpha=alpha)

    def wbar(self, r: float) -> float:
        return r * self.w / math.sqrt(1.0 + 2.0 * r**2)


def _waist_ratio_check(r) -> None:
    if np.any(np.asarray(r) <= 0):
        raise ValueError("waist ratio r must be positive")


def psi_thin(setup: SourceSetup, omega_i, omega_s):
    """Thin-crystal amplitude: sinc(L dkz/2) x Gaussian suppression x prefactor.

    Closed form, no quadrature; the central mismatch is still evaluated from
    the full dispersion at the expansion centers.  Thin validity (focal and
    deviation parameters small) is not enforced here.
    """
    omega_i = np.asarray(omega_i, dtype=float)
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i, omega_s = np.broadcast_arrays(omega_i, omega_s)
    omega_p = omega_i + omega_s
    crystal = setup.crystal
    w = setup.waists()
    wbar = effective_waists(setup)

    k0_i, k0_s = collection_wavevectors(setup, omega_i, omega_s)
    k0_sum = k0_i + k0_s
    kbar_i, kbar_s, kbar_p = expansion_center(setup, omega_i, omega_s)
    kz_p = kz((kbar_p[..., 0], kbar_p[..., 1]), omega_p, setup.pump.polarization, crystal)
    kz_i = kz((kbar_i[..., 0], kbar_i[..., 1]), omega_i, setup.idler.polarization, crystal)
    kz_s = kz((kbar_s[..., 0], kbar_s[..., 1]), omega_s, setup.signal.polarization, crystal)
    dkz = crystal.poling_wavevector + kz_p - kz_i - kz_s

    gauss = np.exp(-np.sum(wbar**2 * k0_sum**2, axis=-1) / 4.0)
    waist_factor = float(np.prod(wbar / np.sqrt(w[0] * w[1] * w[2])))
    pump = pump_spectral_amplitude(omega_p, setup.omega_0, setup.tau_p)
    sinc = np.sinc(0.5 * crystal.length * dkz / math.pi)
    result = (
        4.0 * math.sqrt(2.0 * math.pi) * crystal.length
        * pump * sinc * waist_factor * gauss
    )
    return result if result.shape else float(result)


def d_coefficient(n: int, cfg: ThinConfig) -> float:
    """Window moment d_n = int_0^{tau(w_t - 2 w_b)} e^{-2(y + tau(2 w_b - w_0))^2} y^(1+2n) dy."""
    if n < 0:
        raise ValueError("n must be non-negative")
    omega_b, omega_t = cfg.window
    upper = cfg.tau_p * (omega_t - 2.0 * omega_b)
    if upper <= 0.0:
        return 0.0
    y0 = cfg.tau_p * (cfg.omega_0 - 2.0 * omega_b)
    lo = max(0.0, y0 - 7.0)
    hi = min(upper, y0 + 7.0)
    if hi <= lo:
        # window edge far from the Gaussian: integrate the residual tail anyway
        lo, hi = 0.0, upper
    nodes, weights = gauss_legendre(128)
    y = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    vals = np.exp(-2.0 * (y - y0) ** 2) * y ** (1 + 2 * n)
    return float(0.5 * (hi - lo) * np.dot(weights, vals))


def brightness_collinear(r, cfg: ThinConfig) -> float:
    """Perfect-phase-matching brightness at alpha = 0 (series order 0)."""
    _waist_ratio_check(r)
    r = np.asarray(r, dtype=float)
    d0 = d_coefficient(0, cfg)
    value = (
        32.0 * cfg.length**2 * math.sqrt(2.0 * math.pi)
        * r**2 / ((1.0 + 2.0 * r**2) ** 2 * cfg.w**2 * cfg.tau_p) * d0
    )
    return value if value.shape else float(value)


def brightness_large_angle(r, cfg: ThinConfig) -> float:
    """Large-collection-angle limit: erf in the window integral replaced by 1."""
    _waist_ratio_check(r)
    if cfg.alpha <= 0:
        raise ValueError("large-angle form needs alpha > 0")
    r = np.asarray(r, dtype=float)
    omega_b, omega_t = cfg.window
    bracket = math.erf(_SQRT2 * cfg.tau_p * (cfg.omega_0 - 2.0 * omega_b)) - math.erf(
        _SQRT2 * cfg.tau_p * (cfg.omega_0 - omega_t)
    )
    value = (
        8.0 * _SQRT2 * cfg.length**2 * C * math.pi**1.5
        * r / ((1.0 + 2.0 * r**2) ** 1.5 * cfg.w**3 * cfg.alpha) * bracket
    )
    return value if value.shape else float(value)


def _series_term(r: float, cfg: ThinConfig, n: int) -> float:
    scale = (
        32.0 * cfg.length**2 * math.sqrt(2.0 * math.pi)
        * r**2 / ((1.0 + 2.0 * r**2) ** 2 * cfg.w**2 * cfg.tau_p)
    )
    ratio = r**2 / (1.0 + 2.0 * r**2)
    angle = (cfg.alpha * cfg.w / (cfg.tau_p * C)) ** 2
    coef = (-1.0) ** n / (2.0**n * (2 * n + 1) * math.factorial(n))
    return scale * coef * (ratio * angle) ** n * d_coefficient(n, cfg)


def _series_terms(r: float, cfg: ThinConfig, n_max: int):
    return [_series_term(r, cfg, n) for n in range(n_max + 1)]


def series_parameter(r: float, cfg: ThinConfig) -> float:
    """Erf argument at the window edge; the series is safe below ~2."""
    omega_b, omega_t = cfg.window
    return cfg.wbar(r) * cfg.alpha * (omega_t - 2.0 * omega_b) / C


def brightness_series(r: float, cfg: ThinConfig, n_max: int | None = None) -> float:
    """Maclaurin-in-angle brightness; alternating series in the erf expansion.

    With ``n_max`` given, returns that explicit truncation.  In auto mode the
    sum stops once a term drops below 1e-12 relative; outside the
    convergent-parameter regime auto mode raises SeriesRegimeError (use
    :func:`brightness_exact_thin` there).
    """
    _waist_ratio_check(r)
    if n_max is not None:
        return float(sum(_series_terms(r, cfg, n_max)))
    param = series_parameter(r, cfg)
    if param >= SERIES_PARAMETER_LIMIT:
        raise SeriesRegimeError(
            f"series parameter {param:.3g} >= {SERIES_PARAMETER_LIMIT}; "
            "use brightness_exact_thin for this configuration"
        )
    total = 0.0
    prev = math.inf
    for n in range(61):
        term = _series_term(r, cfg, n)
        total += term
        if abs(term) <= 1e-12 * abs(total) and abs(term) <= prev:
            return total
        prev = abs(term)
    return total


def brightness_exact_thin(r, cfg: ThinConfig, n_nodes: int = 256) -> float:
    """Thin-limit brightness under perfect longitudinal phase matching.

    One-dimensional quadrature over u = omega_i + omega_s of the
    Gaussian-pump envelope times the erf window factor.  Exact reference for
    the collinear, large-angle and series forms.
    """
    _waist_ratio_check(r)
    scalar = np.isscalar(r)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    omega_b, omega_t = cfg.window
    values = np.empty_like(r)
    for j, rj in enumerate(r):
        wbar = cfg.wbar(rj)
        t_slope = wbar * cfg.alpha / (_SQRT2 * C)
        if t_slope * (cfg.omega_0 - 2.0 * omega_b) < 1e-8:
            values[j] = brightness_collinear(rj, cfg)
            continue
        sigma = 1.0 / (2.0 * cfg.tau_p)
        lo = max(2.0 * omega_b, cfg.omega_0 - 8.0 * sigma)
        hi = min(omega_t, cfg.omega_0 + 8.0 * sigma)
        nodes, weights = gauss_legendre(n_nodes)
        u = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
        integrand = np.exp(-2.0 * cfg.tau_p**2 * (u - cfg.omega_0) ** 2) * _erf(
            t_slope * (u - 2.0 * omega_b)
        )
        integral = 0.5 * (hi - lo) * float(np.dot(weights, integrand))
        values[j] = (
            32.0 * math.pi * cfg.length**2
            * cfg.tau_p * C * wbar**3 / (cfg.alpha * rj**2 * cfg.w**6)
            * integral
        )
    return float(values[0]) if scalar else values


def _filter_halfwidth(cfg: ThinConfig) -> float:
    if cfg.delta is None or cfg.delta <= 0:
        raise ValueError("this configuration has no spectral filter set")
    return cfg.delta


def brightness_filtered(r, cfg: ThinConfig, n_nodes: int = 256):
    """Brightness with step filters omega_0/2 +- delta: (exact, third_order).

    The exact path integrates the filtered window integral numerically.  The
    third-order path expands the erf of the collection term to third order
    in its argument and solves the remaining pump-Gaussian moments in closed
    form; for narrow filters (delta*w*alpha/c << 1) the two agree and, when
    additionally tau_p*delta << 1, the third-order value reduces to the
    flat-pump small-filter formula with its alpha-independent leading term.
    """
    _waist_ratio_check(r)
    scalar = np.isscalar(r)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    delta = _filter_halfwidth(cfg)
    exact = np.empty_like(r)
    third = np.empty_like(r)
    for j, rj in enumerate(r):
        wbar = cfg.wbar(rj)
        t_slope = wbar * cfg.alpha / (_SQRT2 * C)
        # alpha-free combination P*t: the 1/alpha prefactor cancels
        pt = 32.0 * math.pi * cfg.length**2 * cfg.tau_p * wbar**4 / (
            _SQRT2 * rj**2 * cfg.w**6
        )
        j1 = _filter_moment(delta, cfg.tau_p, 1)
        j3 = _filter_moment(delta, cfg.tau_p, 3)
        third[j] = (2.0 / _SQRT_PI) * pt * (j1 - (t_slope**2 / 3.0) * j3)
        if t_slope * 2.0 * delta < 1e-8:
            exact[j] = third[j]
            continue
        nodes, weights = gauss_legendre(n_nodes)
        u = delta * (nodes + 1.0)  # [0, 2 delta]; integrand is even in u
        integrand = np.exp(-2.0 * cfg.tau_p**2 * u**2) * _erf(t_slope * (2.0 * delta - u))
        integral = 2.0 * delta * float(np.dot(weights, integrand))
        prefactor = (
            32.0 * math.pi * cfg.length**2
            * cfg.tau_p * C * wbar**3 / (cfg.alpha * rj**2 * cfg.w**6)
        )
        exact[j] = prefactor * integral
    if scalar:
        return float(exact[0]), float(third[0])
    return exact, third


def _filter_moment(delta: float, tau_p: float, power: int) -> float:
    """J_p = int_{-2d}^{2d} e^{-2 tau^2 u^2} (2d - |u|)^p du, p in {1, 3}."""
    a = _SQRT2 * tau_p
    d_full = 2.0 * delta
    ad = a * d_full
    erf_ad = math.erf(ad)
    exp_ad = math.exp(-(ad**2))
    if power == 1:
        return (d_full * _SQRT_PI / a) * erf_ad - (1.0 - exp_ad) / a**2
    if power == 3:
        return (
            (_SQRT_PI / a) * erf_ad * (d_full**3 + 1.5 * d_full / a**2)
            - 3.0 * d_full**2 / a**2
            - (1.0 - exp_ad) / a**4
            + (d_full**2 / a**2) * exp_ad
        )
    raise ValueError("only moments p = 1, 3 are used")


def anisotropic_rate(phi, w_p, w_i, w_s):
    """Large-angle thin-limit rate for elliptic beams vs emission azimuth.

    ``w_p``, ``w_i``, ``w_s`` are (x, y) waist pairs [um].  Up to the common
    normalization: [wbar_x^2 cos^2 + wbar_y^2 sin^2]^(-1/2) * prod_mu
    wbar_mu^2/(w_p w_i w_s)_mu.
    """
    w = np.array([w_p, w_i, w_s], dtype=float)
    if np.any(w <= 0):
        raise ValueError("waists must be positive")
    wbar2 = 1.0 / np.sum(1.0 / w**2, axis=0)
    phi = np.asarray(phi, dtype=float)
    root = np.sqrt(wbar2[0] * np.cos(phi) ** 2 + wbar2[1] * np.sin(phi) ** 2)
    value = np.prod(wbar2 / np.prod(w, axis=0)) / root
    return value if value.shape else float(value)


def optimal_phi(w_p, w_i, w_s):
    """Optimal emission azimuths for :func:`anisotropic_rate`.

    Returns a tuple of optima in [0, 2 pi), or None when the effective waist
    is isotropic and every azimuth is equivalent.
    """
    w = np.array([w_p, w_i, w_s], dtype=float)
    wbar2 = 1.0 / np.sum(1.0 / w**2, axis=0)
    if math.isclose(wbar2[0], wbar2[1], rel_tol=1e-12):
        return None
    if wbar2[0] > wbar2[1]:
        return (math.pi / 2.0, 3.0 * math.pi / 2.0)
    return (0.0, math.pi)


def _erf_over_x(x):
    """erf(x)/x with the series limit 2/sqrt(pi) at x -> 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-6
    safe = np.where(small, 1.0, x)
    out = np.where(small, (2.0 / _SQRT_PI) * (1.0 - x**2 / 3.0), _erf(safe) / safe)
    return out


def brightness_walkoff_collinear(r, cfg: ThinConfig) -> float:
    """Collinear brightness with the first-order walk-off correction.

    Constant-index approximation: the walk-off slope is evaluated at the
    pump central frequency (cfg.beta_p).  beta_p = 0 reduces smoothly to the
    uncorrected collinear form.
    """
    _waist_ratio_check(r)
    r = np.asarray(r, dtype=float)
    d0 = d_coefficient(0, cfg)
    x = cfg.length * cfg.beta_p / (_SQRT2 * cfg.w * np.sqrt(1.0 + 2.0 * r**2))
    erf_factor = _erf_over_x(x) ** 2 * cfg.length**2 / (2.0 * cfg.w**2 * (1.0 + 2.0 * r**2))
    value = (
        16.0 * _SQRT2 * math.pi**1.5 * d0 / cfg.tau_p
        * r**2 / (1.0 + 2.0 * r**2) * erf_factor
    )
    return value if value.shape else float(value)


def psi_first_order_xi(setup: SourceSetup, omega_i, omega_s):
    """Amplitude at first order in the focal parameters, perfect phase matching.

    Only the walk-off combination A = A_x + A_y survives the expansion:
    Psi = prefactor * sqrt(pi) * erf(sqrt(A)) / sqrt(A).  Valid where
    L*dkz << 1 (not enforced).
    """
    bundle = paraxial_params(setup, omega_i, omega_s)
    w = setup.waists()
    gauss = np.exp(-np.sum(bundle.wbar**2 * bundle.k0_sum**2, axis=-1) / 4.0)
    waist_factor = float(np.prod(bundle.wbar / np.sqrt(w[0] * w[1] * w[2])))
    pump = pump_spectral_amplitude(
        bundle.omega_i + bundle.omega_s, setup.omega_0, setup.tau_p
    )
    a_total = np.sum(bundle.a_coef, axis=-1)
    z_integral = _SQRT_PI * _erf_over_x(np.sqrt(a_total))
    result = (
        2.0 * math.sqrt(2.0 * math.pi) * bundle.length
        * pump * waist_factor * gauss * z_integral
    )
    return result if result.shape else float(result)
