"""Uniaxial-crystal dispersion: principal indices and longitudinal wavevectors.

The longitudinal component of a wave vector inside the crystal is

    k_z(k, w) = beta * k_y + sqrt((n w / c)^2 - (g_x k_x)^2 - (g_y k_y)^2)

with polarization-dependent parameters: for an ordinary wave n = n_o,
g_x = g_y = 1 and beta = 0; for an extraordinary wave n = n_theta,
g_x = n_theta/n_e, g_y = n_theta^2/(n_e n_o) and
beta = n_theta^2 (1/n_e^2 - 1/n_o^2) sin(theta) cos(theta), where theta is
the angle between the optic axis (lying in the (y, z) plane) and z.

All functions broadcast over NumPy arrays.  Units: um, fs, rad/fs.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .units import C_UM_FS as C
from .units import TWO_PI_C, parse_quantity

try:  # Python 3.11+
    import tomllib as _toml
except ModuleNotFoundError:  # pragma: no cover
    import tomli as _toml


class DispersionDomainError(ValueError):
    """Frequency outside the crystal transmission window."""


class EvanescentWaveError(ValueError):
    """Transverse wavevector beyond the evanescence boundary."""


class ConditioningError(ValueError):
    """Expansion point too close to the evanescence boundary for stable jets."""


# kz_jet refuses radicands below this fraction of (n w / c)^2; the paraxial
# regime never comes near the boundary, so the guard only trips on bad input.
_JET_RADICAND_FLOOR = 1e-6


class Polarization(Enum):
    ORDINARY = "ordinary"
    EXTRAORDINARY = "extraordinary"


@dataclass(frozen=True)
class SellmeierFit:
    """Single-resonance Sellmeier fit n^2 = a + b/(lam^2 - c) - d*lam^2, lam in um."""

    a: float
    b: float
    c: float
    d: float

    def index(self, lambda_um):
        lam2 = np.asarray(lambda_um, dtype=float) ** 2
        n2 = self.a + self.b / (lam2 - self.c) - self.d * lam2
        return np.sqrt(n2)

    @staticmethod
    def constant(n: float) -> "SellmeierFit":
        """Dispersionless fit returning exactly ``n`` at every wavelength."""
        return SellmeierFit(a=n * n, b=0.0, c=0.0, d=0.0)


@dataclass(frozen=True)
class CrystalModel:
    """Uniaxial crystal: Sellmeier data, transmission window and geometry.

    ``window`` is (omega_b, omega_t) in rad/fs; ``length`` in um;
    ``poling_period`` in um or None for an unpoled crystal; ``cut_angle`` is
    the optic-axis angle theta in rad.
    """

    sellmeier_o: SellmeierFit
    sellmeier_e: SellmeierFit
    window: tuple[float, float]
    length: float
    cut_angle: float
    poling_period: float | None = None
    poling_order: int = 0
    name: str = "crystal"

    def __post_init__(self):
        omega_b, omega_t = self.window
        if not omega_b < omega_t:
            raise ValueError(f"empty transmission window {self.window}")
        if self.length <= 0:
            raise ValueError(f"crystal length must be positive, got {self.length}")
        if self.poling_period is not None and self.poling_period <= 0:
            raise ValueError("poling period must be positive when present")
        if self.poling_order != 0 and self.poling_period is None:
            raise ValueError("poling order set but no poling period given")

    @property
    def poling_wavevector(self) -> float:
        """Quasi-phase-matching contribution m * 2*pi / Lambda [rad/um]."""
        if self.poling_period is None or self.poling_order == 0:
            return 0.0
        return self.poling_order * 2.0 * math.pi / self.poling_period

    def with_cut_angle(self, theta: float) -> "CrystalModel":
        return dataclasses.replace(self, cut_angle=theta)

    def with_length(self, length: float) -> "CrystalModel":
        return dataclasses.replace(self, length=length)

    def check_window(self, omega) -> None:
        omega = np.asarray(omega, dtype=float)
        omega_b, omega_t = self.window
        if np.any(omega < omega_b * (1 - 1e-12)) or np.any(omega > omega_t * (1 + 1e-12)):
            bad = float(np.atleast_1d(omega)[
                np.argmax((omega < omega_b) | (omega > omega_t))
            ])
            raise DispersionDomainError(
                f"omega = {bad:.6g} rad/fs outside transmission window "
                f"[{omega_b:.6g}, {omega_t:.6g}] of {self.name}"
            )


def refractive_indices(omega, crystal: CrystalModel):
    """Principal indices (n_o, n_e) at angular frequency ``omega`` [rad/fs]."""
    crystal.check_window(omega)
    lam = TWO_PI_C / np.asarray(omega, dtype=float)
    return crystal.sellmeier_o.index(lam), crystal.sellmeier_e.index(lam)


def index_at_angle(omega, theta, crystal: CrystalModel):
    """Extraordinary-branch index at angle ``theta`` to the optic axis:
    1/n_theta^2 = sin^2(theta)/n_e^2 + cos^2(theta)/n_o^2.
    """
    n_o, n_e = refractive_indices(omega, crystal)
    s, c_ = np.sin(theta), np.cos(theta)
    return 1.0 / np.sqrt((s / n_e) ** 2 + (c_ / n_o) ** 2)


def _wave_parameters(omega, pol: Polarization, crystal: CrystalModel):
    """(n, g_x, g_y, beta) entering the k_z expression for this polarization."""
    n_o, n_e = refractive_indices(omega, crystal)
    if pol is Polarization.ORDINARY:
        one = np.ones_like(n_o)
        return n_o, one, one, np.zeros_like(n_o)
    theta = crystal.cut_angle
    s, c_ = math.sin(theta), math.cos(theta)
    n_th = 1.0 / np.sqrt((s / n_e) ** 2 + (c_ / n_o) ** 2)
    gx = n_th / n_e
    gy = n_th**2 / (n_e * n_o)
    beta = n_th**2 * (1.0 / n_e**2 - 1.0 / n_o**2) * s * c_
    return n_th, gx, gy, beta


def walkoff_slope(omega, crystal: CrystalModel):
    """Extraordinary-wave walk-off slope beta at ``omega`` (dimensionless)."""
    _, _, _, beta = _wave_parameters(omega, Polarization.EXTRAORDINARY, crystal)
    return beta


def kz(k, omega, pol: Polarization, crystal: CrystalModel):
    """Longitudinal wavevector component [rad/um].

    ``k`` is the transverse wavevector, a pair (k_x, k_y) of scalars or
    broadcastable arrays in rad/um.
    """
    kx = np.asarray(k[0], dtype=float)
    ky = np.asarray(k[1], dtype=float)
    n, gx, gy, beta = _wave_parameters(omega, pol, crystal)
    n_omega_c = n * np.asarray(omega, dtype=float) / C
    radicand = n_omega_c**2 - (gx * kx) ** 2 - (gy * ky) ** 2
    if np.any(radicand <= 0.0):
        raise EvanescentWaveError(
            "transverse wavevector beyond the evanescence boundary "
            f"(max |k| here is {float(np.min(n_omega_c)):.4g} rad/um)"
        )
    return beta * ky + np.sqrt(radicand)


def kz_jet(kbar, omega, pol: Polarization, crystal: CrystalModel):
    """k_z with its first and second transverse derivatives at ``kbar``.

    Returns ``(kz, K1, K2)`` where K1 has shape (..., 2) and K2 shape
    (..., 2, 2); K2 is symmetric.  Closed forms follow from differentiating
    the k_z expression directly:

        S = kz - beta*ky ,
        dkz/dkx   = -gx^2 kx / S
        dkz/dky   = beta - gy^2 ky / S
        d2kz/dkx2 = -gx^2 (S^2 + gx^2 kx^2) / S^3
        d2kz/dky2 = -gy^2 (S^2 + gy^2 ky^2) / S^3
        d2kz/dkxdky = -gx^2 gy^2 kx ky / S^3
    """
    kx = np.asarray(kbar[0], dtype=float)
    ky = np.asarray(kbar[1], dtype=float)
    n, gx, gy, beta = _wave_parameters(omega, pol, crystal)
    n_omega_c = n * np.asarray(omega, dtype=float) / C
    radicand = n_omega_c**2 - (gx * kx) ** 2 - (gy * ky) ** 2
    if np.any(radicand < _JET_RADICAND_FLOOR * n_omega_c**2):
        raise ConditioningError(
            "expansion point too close to the evanescence boundary; "
            "second derivatives of k_z are ill-conditioned there"
        )
    s_root = np.sqrt(radicand)
    kz_val = beta * ky + s_root

    k1 = np.stack(
        np.broadcast_arrays(-(gx**2) * kx / s_root, beta - gy**2 * ky / s_root),
        axis=-1,
    )
    inv_s3 = 1.0 / s_root**3
    k2_xx = -(gx**2) * (radicand + gx**2 * kx**2) * inv_s3
    k2_yy = -(gy**2) * (radicand + gy**2 * ky**2) * inv_s3
    k2_xy = -(gx**2) * (gy**2) * kx * ky * inv_s3
    row_x = np.stack(np.broadcast_arrays(k2_xx, k2_xy), axis=-1)
    row_y = np.stack(np.broadcast_arrays(k2_xy, k2_yy), axis=-1)
    k2 = np.stack([row_x, row_y], axis=-2)
    return kz_val, k1, k2


def _parse_fit(section: dict, where: str) -> SellmeierFit:
    try:
        return SellmeierFit(
            a=float(section["a"]),
            b=float(section["b"]),
            c=float(section["c"]),
            d=float(section["d"]),
        )
    except KeyError as missing:
        raise ValueError(f"crystal file: {where} is missing coefficient {missing}") from None


def load_crystal(path: str | Path) -> CrystalModel:
    """Load a crystal definition file (TOML).

    Required sections/fields::

        name = "BBO"
        [sellmeier.ordinary]      # n^2 = a + b/(lam^2 - c) - d*lam^2
        a = ...; b = ...; c = ...; d = ...
        [sellmeier.extraordinary]
        a = ...; b = ...; c = ...; d = ...
        [transmission]
        min_wavelength = "0.2 um"
        max_wavelength = "2.2 um"
        [geometry]
        length = "100 um"
        cut_angle = "29 deg"
        [poling]                  # optional
        period = "3.4 um"
        order = 1
    """
    path = Path(path)
    with open(path, "rb") as handle:
        raw = _toml.load(handle)
    try:
        fit_o = _parse_fit(raw["sellmeier"]["ordinary"], "sellmeier.ordinary")
        fit_e = _parse_fit(raw["sellmeier"]["extraordinary"], "sellmeier.extraordinary")
        lam_min = parse_quantity(raw["transmission"]["min_wavelength"], "length")
        lam_max = parse_quantity(raw["transmission"]["max_wavelength"], "length")
        length = parse_quantity(raw["geometry"]["length"], "length")
        cut = raw["geometry"].get("cut_angle")
    except KeyError as missing:
        raise ValueError(f"crystal file {path}: missing section/field {missing}") from None
    cut_angle = 0.0 if cut is None else parse_quantity(cut, "angle")
    poling = raw.get("poling", {})
    period = poling.get("period")
    poling_period = None
    if period is not None and str(period).lower() != "none":
        poling_period = parse_quantity(period, "length")
    crystal = CrystalModel(
        sellmeier_o=fit_o,
        sellmeier_e=fit_e,
        window=(TWO_PI_C / lam_max, TWO_PI_C / lam_min),
        length=length,
        cut_angle=cut_angle,
        poling_period=poling_period,
        poling_order=int(poling.get("order", 0)),
        name=str(raw.get("name", path.stem)),
    )
    _check_index_sanity(crystal)
    return crystal


def _check_index_sanity(crystal: CrystalModel) -> None:
    """Indices must stay in (1, 3) across the transmission window."""
    omega = np.linspace(crystal.window[0], crystal.window[1], 257)
    n_o, n_e = refractive_indices(omega, crystal)
    for label, n in (("n_o", n_o), ("n_e", n_e)):
        if not (np.all(np.isfinite(n)) and np.all(n > 1.0) and np.all(n < 3.0)):
            raise ValueError(
                f"{crystal.name}: {label} leaves the physical range (1, 3) "
                "inside the transmission window; check the Sellmeier data"
            )


def bbo(length_um: float = 100.0, cut_angle_rad: float = 0.0) -> CrystalModel:
    """Bundled beta barium borate model (Kato 1986 fit, 0.2-2.2 um window)."""
    crystal = load_crystal(Path(__file__).parent / "data" / "bbo.toml")
    return dataclasses.replace(crystal, length=length_um, cut_angle=cut_angle_rad)
