"""Collection geometry, source description and the phase-matching solver.

The signal and idler are collected by single-mode fibers whose directions
make angles alpha_s, alpha_i with the pump axis, in the transverse plane
azimuth phi.  Central transverse wavevectors follow the small-angle rule
sin(alpha) -> alpha (an exact-sine switch exists for sensitivity checks).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dispersion import CrystalModel, Polarization, kz
from .units import C_UM_FS as C

SMALL_ANGLE_LIMIT = 0.2  # rad; beyond this the sine approximation is dubious
PARAXIAL_FLOOR = 5.0  # hard minimum waist, in units of vacuum wavelength
PARAXIAL_COMFORT = 20.0  # below this (in wavelengths) a warning is emitted


class PhaseMatchingError(ValueError):
    """No phase-matching angle exists for the requested configuration."""


class ParaxialValidityError(ValueError):
    """A beam waist is too small for the Gaussian-mode description."""


@dataclass(frozen=True)
class CollectionGeometry:
    """Fiber collection directions: angles [rad] and emission-plane azimuth."""

    alpha_i: float
    alpha_s: float
    phi: float = 0.0
    exact_sine: bool = False

    def __post_init__(self):
        if self.alpha_i < 0 or self.alpha_s < 0:
            raise ValueError("collection angles must be non-negative")
        if max(self.alpha_i, self.alpha_s) > SMALL_ANGLE_LIMIT:
            warnings.warn(
                f"collection angle {max(self.alpha_i, self.alpha_s):.3f} rad exceeds "
                f"the small-angle validity limit {SMALL_ANGLE_LIMIT} rad",
                stacklevel=2,
            )

    @classmethod
    def symmetric(cls, alpha: float, phi: float = 0.0, **kw) -> "CollectionGeometry":
        """Equal collection angles, the degenerate-emission configuration."""
        return cls(alpha_i=alpha, alpha_s=alpha, phi=phi, **kw)

    @classmethod
    def matched(
        cls, alpha_s: float, omega_i: float, omega_s: float, phi: float = 0.0, **kw
    ) -> "CollectionGeometry":
        """Derive alpha_i from transverse matching Omega_i sin a_i = Omega_s sin a_s."""
        if kw.get("exact_sine"):
            alpha_i = math.asin(omega_s * math.sin(alpha_s) / omega_i)
        else:
            alpha_i = omega_s * alpha_s / omega_i
        return cls(alpha_i=alpha_i, alpha_s=alpha_s, phi=phi, **kw)

    def direction(self) -> np.ndarray:
        """Unit vector of the emission plane in the (x, y) plane."""
        return np.array([math.cos(self.phi), math.sin(self.phi)])


@dataclass(frozen=True)
class Beam:
    """One Gaussian beam: central frequency [rad/fs], waists [um], polarization."""

    omega: float
    waist_x: float
    waist_y: float
    polarization: Polarization

    def __post_init__(self):
        lam = 2.0 * math.pi * C / self.omega
        for w in (self.waist_x, self.waist_y):
            if w < PARAXIAL_FLOOR * lam:
                raise ParaxialValidityError(
                    f"waist {w:.3g} um below the paraxial floor "
                    f"{PARAXIAL_FLOOR}*lambda = {PARAXIAL_FLOOR * lam:.3g} um"
                )
            if w < PARAXIAL_COMFORT * lam:
                warnings.warn(
                    f"waist {w:.3g} um is below {PARAXIAL_COMFORT} wavelengths; "
                    "paraxial accuracy degrades",
                    stacklevel=2,
                )

    @classmethod
    def round(cls, omega: float, waist: float, polarization: Polarization) -> "Beam":
        return cls(omega=omega, waist_x=waist, waist_y=waist, polarization=polarization)


@dataclass(frozen=True)
class SourceSetup:
    """Crystal, pump, collection modes and geometry of one SPDC source."""

    crystal: CrystalModel
    pump: Beam
    signal: Beam
    idler: Beam
    tau_p: float  # pump coherence parameter [fs], Gaussian spectral amplitude
    geometry: CollectionGeometry

    def __post_init__(self):
        if self.tau_p <= 0:
            raise ValueError("tau_p must be positive")
        mismatch = abs(self.idler.omega + self.signal.omega - self.pump.omega)
        if mismatch > 1e-9 * self.pump.omega:
            raise ValueError(
                "energy matching violated: Omega_i + Omega_s != omega_0 "
                f"(off by {mismatch:.3g} rad/fs)"
            )

    @property
    def omega_0(self) -> float:
        return self.pump.omega

    def beams(self) -> tuple[Beam, Beam, Beam]:
        """(pump, idler, signal) in the index order used throughout."""
        return self.pump, self.idler, self.signal

    def waists(self) -> np.ndarray:
        """Waist matrix w[a, mu], a in (p, i, s), mu in (x, y)."""
        return np.array(
            [
                [self.pump.waist_x, self.pump.waist_y],
                [self.idler.waist_x, self.idler.waist_y],
                [self.signal.waist_x, self.signal.waist_y],
            ]
        )


def collection_wavevectors(setup: SourceSetup, omega_i, omega_s):
    """Central transverse wavevectors (k0_i, k0_s), each shaped (..., 2).

    k0_i = +(omega_i alpha_i / c) m_hat and k0_s = -(omega_s alpha_s / c) m_hat,
    with m_hat = (cos phi, sin phi); sines are replaced by angles unless the
    geometry requests exact sines.
    """
    geo = setup.geometry
    if geo.exact_sine:
        s_i, s_s = math.sin(geo.alpha_i), math.sin(geo.alpha_s)
    else:
        s_i, s_s = geo.alpha_i, geo.alpha_s
    m_hat = geo.direction()
    omega_i = np.asarray(omega_i, dtype=float)
    omega_s = np.asarray(omega_s, dtype=float)
    k0_i = (omega_i * s_i / C)[..., None] * m_hat
    k0_s = -(omega_s * s_s / C)[..., None] * m_hat
    return k0_i, k0_s


def phase_mismatch(k_i, omega_i, k_s, omega_s, setup: SourceSetup):
    """Delta k_z = m 2 pi / Lambda + k_pz(k_i + k_s) - k_iz - k_sz [rad/um]."""
    crystal = setup.crystal
    k_p = (np.asarray(k_i[0]) + np.asarray(k_s[0]), np.asarray(k_i[1]) + np.asarray(k_s[1]))
    omega_p = np.asarray(omega_i, dtype=float) + np.asarray(omega_s, dtype=float)
    k_pz = kz(k_p, omega_p, setup.pump.polarization, crystal)
    k_iz = kz(k_i, omega_i, setup.idler.polarization, crystal)
    k_sz = kz(k_s, omega_s, setup.signal.polarization, crystal)
    return crystal.poling_wavevector + k_pz - k_iz - k_sz


def _central_mismatch(theta: float, setup: SourceSetup) -> float:
    crystal = setup.crystal.with_cut_angle(theta)
    probe = SourceSetup(
        crystal=crystal,
        pump=setup.pump,
        signal=setup.signal,
        idler=setup.idler,
        tau_p=setup.tau_p,
        geometry=setup.geometry,
    )
    k0_i, k0_s = collection_wavevectors(probe, setup.idler.omega, setup.signal.omega)
    return float(
        phase_mismatch(
            (k0_i[..., 0], k0_i[..., 1]),
            setup.idler.omega,
            (k0_s[..., 0], k0_s[..., 1]),
            setup.signal.omega,
            probe,
        )
    )


def _bracketed_root(f, a: float, fa: float, b: float, fb: float, xtol: float) -> float:
    """Bisection with secant acceleration on a sign-changing bracket."""
    for _ in range(200):
        if b - a <= xtol:
            break
        mid = 0.5 * (a + b)
        denom = fb - fa
        if denom != 0.0:
            sec = b - fb * (b - a) / denom
            if a + 0.01 * (b - a) < sec < b - 0.01 * (b - a):
                mid = sec
        fm = f(mid)
        if fm == 0.0:
            return mid
        if fa * fm < 0.0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def solve_pm_angle(
    crystal: CrystalModel,
    omega_0: float,
    geometry: CollectionGeometry,
    pm_type: str = "e-oo",
    omega_i: float | None = None,
    omega_s: float | None = None,
    scan_step_deg: float = 0.5,
) -> float:
    """Cut angle theta* [rad] nulling the central phase mismatch.

    ``pm_type`` names the (pump, idler, signal) polarizations as in "e-oo".
    The central frequencies default to degenerate emission omega_0 / 2.
    Raises PhaseMatchingError when no sign change exists on (0, pi/2).
    """
    pols = parse_pm_type(pm_type)
    omega_i = 0.5 * omega_0 if omega_i is None else omega_i
    omega_s = 0.5 * omega_0 if omega_s is None else omega_s
    setup = _probe_setup(crystal, omega_0, omega_i, omega_s, pols, geometry)

    f = lambda theta: _central_mismatch(theta, setup)
    thetas = np.arange(1e-6, math.pi / 2, math.radians(scan_step_deg))
    thetas = np.append(thetas, math.pi / 2 - 1e-6)
    values = [f(t) for t in thetas]
    for (t0, f0), (t1, f1) in zip(zip(thetas, values), zip(thetas[1:], values[1:])):
        if f0 == 0.0:
            return float(t0)
        if f0 * f1 < 0.0:
            return _bracketed_root(f, t0, f0, t1, f1, xtol=1e-14)
    raise PhaseMatchingError(
        f"no phase-matching angle for {pm_type} on the scanned interval "
        f"(0, 90) deg at omega_0 = {omega_0:.5g} rad/fs; "
        f"mismatch stays within [{min(values):.4g}, {max(values):.4g}] rad/um"
    )


def parse_pm_type(pm_type: str) -> tuple[Polarization, Polarization, Polarization]:
    """Map "e-oo" style strings to (pump, idler, signal) polarizations."""
    table = {"e": Polarization.EXTRAORDINARY, "o": Polarization.ORDINARY}
    try:
        pump, pair = pm_type.lower().split("-")
        return table[pump], table[pair[0]], table[pair[1]]
    except (ValueError, KeyError, IndexError):
        raise ValueError(
            f"cannot parse phase-matching type {pm_type!r}; expected e.g. 'e-oo'"
        ) from None


def _probe_setup(crystal, omega_0, omega_i, omega_s, pols, geometry) -> SourceSetup:
    """Internal setup with generous waists, used only by the angle solver."""
    pol_p, pol_i, pol_s = pols
    big = 1000.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return SourceSetup(
            crystal=crystal,
            pump=Beam.round(omega_0, big, pol_p),
            idler=Beam.round(omega_i, big, pol_i),
            signal=Beam.round(omega_s, big, pol_s),
            tau_p=100.0,
            geometry=geometry,
        )


def degenerate_setup(
    crystal: CrystalModel,
    pump_wavelength_um: float,
    tau_p_fs: float,
    photon_waist_um: float,
    waist_ratio: float,
    alpha_rad: float,
    phi_rad: float = 0.0,
    pm_type: str = "e-oo",
    cut_angle: float | str = "solve",
    exact_sine: bool = False,
) -> SourceSetup:
    """Degenerate symmetric source: w_i = w_s = w, w_p = r*w, alpha_i = alpha_s.

    ``cut_angle="solve"`` runs the phase-matching solver for this geometry;
    pass a number (rad) to pin the angle instead.
    """
    omega_0 = 2.0 * math.pi * C / pump_wavelength_um
    pol_p, pol_i, pol_s = parse_pm_type(pm_type)
    geometry = CollectionGeometry.symmetric(alpha_rad, phi_rad, exact_sine=exact_sine)
    if cut_angle == "solve":
        theta = solve_pm_angle(crystal, omega_0, geometry, pm_type)
    else:
        theta = float(cut_angle)
    oriented = crystal.with_cut_angle(theta)
    half = 0.5 * omega_0
    return SourceSetup(
        crystal=oriented,
        pump=Beam.round(omega_0, waist_ratio * photon_waist_um, pol_p),
        idler=Beam.round(half, photon_waist_um, pol_i),
        signal=Beam.round(half, photon_waist_um, pol_s),
        tau_p=tau_p_fs,
        geometry=geometry,
    )
