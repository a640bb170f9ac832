"""Unit conventions and quantity parsing.

Internal units throughout the package: lengths in micrometers, time in
femtoseconds, angles in radians, angular frequencies in rad/fs.  With these
choices every quantity appearing in the calculations is O(1)-conditioned and
the vacuum speed of light is C_UM_FS = 0.299792458 um/fs.

Configuration files carry explicit unit suffixes ("405 nm", "100 fs",
"2.8 deg"); :func:`parse_quantity` converts them to internal units.
"""

from __future__ import annotations

import math
import re

C_UM_FS = 0.299792458
TWO_PI_C = 2.0 * math.pi * C_UM_FS

_LENGTH_UM = {
    "nm": 1e-3,
    "um": 1.0,
    "µm": 1.0,
    "micron": 1.0,
    "microns": 1.0,
    "mm": 1e3,
    "cm": 1e4,
}
_TIME_FS = {"fs": 1.0, "ps": 1e3, "ns": 1e6}
_ANGLE_RAD = {"rad": 1.0, "mrad": 1e-3, "deg": math.pi / 180.0, "°": math.pi / 180.0}

_QUANTITY_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*([a-zA-Zµ°/]+)\s*$")


class UnitError(ValueError):
    """A quantity string could not be interpreted."""


def omega_from_vacuum_wavelength(lambda_um: float) -> float:
    """Angular frequency [rad/fs] of vacuum wavelength ``lambda_um`` [um]."""
    if lambda_um <= 0.0:
        raise UnitError(f"wavelength must be positive, got {lambda_um} um")
    return TWO_PI_C / lambda_um


def vacuum_wavelength_from_omega(omega: float) -> float:
    """Vacuum wavelength [um] of angular frequency ``omega`` [rad/fs]."""
    if omega <= 0.0:
        raise UnitError(f"angular frequency must be positive, got {omega} rad/fs")
    return TWO_PI_C / omega


def parse_quantity(text: str | float, kind: str) -> float:
    """Parse ``"value unit"`` into internal units.

    ``kind`` is one of ``"length"`` (-> um), ``"time"`` (-> fs) or
    ``"angle"`` (-> rad).  Bare numbers are rejected so that configuration
    files cannot silently mix unit conventions.
    """
    if isinstance(text, (int, float)):
        raise UnitError(
            f"bare number {text!r} not allowed for a {kind}; write e.g. '405 nm'"
        )
    match = _QUANTITY_RE.match(text)
    if match is None:
        raise UnitError(f"cannot parse quantity {text!r}")
    value = float(match.group(1))
    unit = match.group(2)
    tables = {"length": _LENGTH_UM, "time": _TIME_FS, "angle": _ANGLE_RAD}
    try:
        table = tables[kind]
    except KeyError:
        raise UnitError(f"unknown quantity kind {kind!r}") from None
    if unit not in table:
        raise UnitError(
            f"unknown {kind} unit {unit!r} in {text!r}; accepted: {sorted(table)}"
        )
    return value * table[unit]


def filter_halfwidth_from_bandwidth(bandwidth_um: float, center_um: float) -> float:
    """Angular-frequency half-width [rad/fs] of a wavelength bandpass.

    ``bandwidth_um`` is the full wavelength width of the filter centred at
    ``center_um``; the returned half-width refers to the passband
    ``|omega - omega_c| <= delta``.
    """
    if bandwidth_um <= 0 or center_um <= 0:
        raise UnitError("filter bandwidth and center must be positive")
    return 0.5 * TWO_PI_C * bandwidth_um / center_um**2
