"""Run-configuration files: parsing, schema validation and setup building.

Configurations are TOML with explicit unit suffixes on every physical
quantity (``wavelength = "405 nm"``); bare numbers are accepted only for
dimensionless fields (waist ratio, grid counts, tolerances).  Validation
collects every violation before failing so a bad file is reported in one
pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .brightness import FrequencyDomain
from .dispersion import CrystalModel, bbo, load_crystal
from .geometry import degenerate_setup
from .optimize import MODEL_TAGS
from .units import (
    TWO_PI_C,
    UnitError,
    filter_halfwidth_from_bandwidth,
    parse_quantity,
)

try:  # Python 3.11+
    import tomllib as _toml
except ModuleNotFoundError:  # pragma: no cover
    import tomli as _toml


class ConfigError(ValueError):
    """Invalid run configuration; message lists every violation found."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__(
            "invalid configuration:\n" + "\n".join(f"  - {p}" for p in problems)
        )


@dataclass
class SweepSpec:
    axis: str            # "alpha" | "w" | "r"
    start: float
    stop: float
    points: int


@dataclass
class JsaSpec:
    points: int = 41
    span_sigma: float = 6.0   # grid half-span in units of the pump spectral width


@dataclass
class RunConfig:
    """Validated run configuration in internal units."""

    crystal: CrystalModel
    cut_angle_mode: str | float       # "solve" or a fixed angle [rad]
    pump_wavelength_um: float
    tau_p: float
    photon_waist_um: float
    waist_ratio: float
    alpha_rad: float
    phi_rad: float
    pm_type: str
    model: str
    domain_kind: str                  # "window" | "filter"
    filter_halfwidth: float | None
    rel_tol: float
    psi_rtol: float
    sweep: SweepSpec | None
    jsa: JsaSpec
    crystal_file: str | None
    source_text: dict = field(repr=False, default_factory=dict)

    @property
    def omega_0(self) -> float:
        return TWO_PI_C / self.pump_wavelength_um

    def solved_cut_angle(self) -> float | str:
        return "solve" if self.cut_angle_mode == "solve" else float(self.cut_angle_mode)

    def build_setup(self, waist_ratio: float | None = None, alpha_rad: float | None = None,
                    photon_waist_um: float | None = None, cut_angle=None):
        """Construct the SourceSetup, optionally overriding swept fields."""
        return degenerate_setup(
            self.crystal,
            self.pump_wavelength_um,
            self.tau_p,
            self.photon_waist_um if photon_waist_um is None else photon_waist_um,
            self.waist_ratio if waist_ratio is None else waist_ratio,
            self.alpha_rad if alpha_rad is None else alpha_rad,
            phi_rad=self.phi_rad,
            pm_type=self.pm_type,
            cut_angle=self.solved_cut_angle() if cut_angle is None else cut_angle,
        )

    def domain(self) -> FrequencyDomain:
        if self.domain_kind == "window":
            return FrequencyDomain.from_crystal(self.crystal)
        return FrequencyDomain.spectral_filter(0.5 * self.omega_0, self.filter_halfwidth)


def _get(raw: dict, section: str, key: str, problems: list, default=None, required=False):
    sect = raw.get(section)
    if sect is None:
        if required:
            problems.append(f"missing section [{section}]")
        return default
    if key not in sect:
        if required:
            problems.append(f"missing field {section}.{key}")
        return default
    return sect[key]


def _quantity(raw, section, key, kind, problems, default=None, required=False):
    value = _get(raw, section, key, problems, required=required)
    if value is None:
        return default
    try:
        return parse_quantity(value, kind)
    except UnitError as exc:
        problems.append(f"{section}.{key}: {exc}")
        return default


def load_config(path: str | Path) -> RunConfig:
    """Parse and validate a run configuration file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError([f"config file not found: {path}"])
    with open(path, "rb") as handle:
        raw = _toml.load(handle)
    problems: list[str] = []

    crystal_file = _get(raw, "crystal", "file", problems)
    crystal = None
    if crystal_file in (None, "bundled:bbo"):
        crystal = bbo()
        crystal_file = None
    else:
        crystal_path = Path(crystal_file)
        if not crystal_path.is_absolute():
            crystal_path = path.parent / crystal_path
        if not crystal_path.exists():
            problems.append(f"crystal.file: no such file {crystal_path}")
        else:
            try:
                crystal = load_crystal(crystal_path)
                crystal_file = str(crystal_path)
            except (ValueError, UnitError) as exc:
                problems.append(f"crystal.file: {exc}")

    length = _quantity(raw, "crystal", "length", "length", problems)
    if crystal is not None and length is not None:
        crystal = crystal.with_length(length)

    cut_raw = _get(raw, "crystal", "cut_angle", problems, default="solve")
    cut_angle_mode: str | float = "solve"
    if cut_raw != "solve":
        try:
            cut_angle_mode = parse_quantity(cut_raw, "angle")
        except UnitError as exc:
            problems.append(f"crystal.cut_angle: {exc}")

    lam0 = _quantity(raw, "pump", "wavelength", "length", problems, required=True)
    tau_p = _quantity(raw, "pump", "pulse_duration", "time", problems, required=True)
    if tau_p is not None and tau_p <= 0:
        problems.append("pump.pulse_duration must be positive")

    w = _quantity(raw, "collection", "waist", "length", problems, required=True)
    pump_waist = _quantity(raw, "pump", "waist", "length", problems)
    ratio_raw = _get(raw, "collection", "waist_ratio", problems)
    ratio = None
    if ratio_raw is not None:
        try:
            ratio = float(ratio_raw)
            if ratio <= 0:
                problems.append("collection.waist_ratio must be positive")
        except (TypeError, ValueError):
            problems.append(f"collection.waist_ratio: not a number: {ratio_raw!r}")
    if ratio is None and pump_waist is not None and w:
        ratio = pump_waist / w
    if ratio is None:
        problems.append("give either collection.waist_ratio or pump.waist")
    elif pump_waist is not None and w and not math.isclose(pump_waist, ratio * w, rel_tol=1e-9):
        problems.append(
            f"pump.waist = {pump_waist} um contradicts collection.waist_ratio "
            f"* collection.waist = {ratio * w} um"
        )

    alpha = _quantity(raw, "collection", "angle", "angle", problems, default=0.0)
    phi = _quantity(raw, "collection", "azimuth", "angle", problems, default=0.0)
    pm_type = _get(raw, "collection", "pm_type", problems, default="e-oo")
    if not isinstance(pm_type, str) or len(pm_type.split("-")) != 2:
        problems.append(f"collection.pm_type: expected 'e-oo' style, got {pm_type!r}")

    model = _get(raw, "computation", "model", problems, default="full-factorized")
    known_models = MODEL_TAGS + ("general",)
    if model not in known_models:
        problems.append(f"computation.model: {model!r} not one of {known_models}")

    domain_kind = _get(raw, "computation", "domain", problems, default="window")
    if domain_kind not in ("window", "filter"):
        problems.append(f"computation.domain: {domain_kind!r} not 'window' or 'filter'")
    filter_halfwidth = None
    if domain_kind == "filter":
        bandwidth = _quantity(
            raw, "computation", "filter_bandwidth", "length", problems, required=True
        )
        if bandwidth is not None and lam0:
            filter_halfwidth = filter_halfwidth_from_bandwidth(bandwidth, 2.0 * lam0)

    rel_tol = float(_get(raw, "computation", "tolerance", problems, default=1e-6))
    psi_rtol = float(_get(raw, "computation", "psi_tolerance", problems, default=1e-8))

    sweep = None
    if "sweep" in raw:
        axis = _get(raw, "sweep", "axis", problems, required=True)
        if axis not in ("alpha", "w", "r"):
            problems.append(f"sweep.axis: {axis!r} not one of alpha|w|r")
        kind = {"alpha": "angle", "w": "length", "r": None}.get(axis)
        def _axis_value(key):
            value = _get(raw, "sweep", key, problems, required=True)
            if value is None:
                return None
            if kind is None:
                try:
                    return float(value)
                except (TypeError, ValueError):
                    problems.append(f"sweep.{key}: not a number: {value!r}")
                    return None
            try:
                return parse_quantity(value, kind)
            except UnitError as exc:
                problems.append(f"sweep.{key}: {exc}")
                return None
        start = _axis_value("start")
        stop = _axis_value("stop")
        points = _get(raw, "sweep", "points", problems, default=11)
        try:
            points = int(points)
            if points < 1:
                problems.append("sweep.points must be >= 1")
        except (TypeError, ValueError):
            problems.append(f"sweep.points: not an integer: {points!r}")
            points = 0
        if axis in ("alpha", "w", "r") and start is not None and stop is not None:
            sweep = SweepSpec(axis=axis, start=start, stop=stop, points=points)

    jsa = JsaSpec()
    if "jsa" in raw:
        points = _get(raw, "jsa", "points", problems, default=41)
        span = _get(raw, "jsa", "span_sigma", problems, default=6.0)
        try:
            jsa = JsaSpec(points=int(points), span_sigma=float(span))
        except (TypeError, ValueError):
            problems.append("jsa.points / jsa.span_sigma: invalid numbers")

    # physics sanity that does not need a full setup
    if crystal is not None and lam0:
        omega_0 = TWO_PI_C / lam0
        omega_b, omega_t = crystal.window
        if not (omega_b <= omega_0 <= omega_t):
            problems.append(
                f"pump at {lam0} um lies outside the crystal transmission window"
            )
        if not (omega_b <= 0.5 * omega_0 <= omega_t):
            problems.append(
                "degenerate photons fall outside the crystal transmission window"
            )
    if lam0 and w is not None and w < 5.0 * 2.0 * lam0:
        problems.append(
            f"collection.waist = {w} um is below the paraxial floor "
            f"5*lambda = {5.0 * 2.0 * lam0} um at the degenerate wavelength"
        )
    if lam0 and ratio and w is not None and ratio * w < 5.0 * lam0:
        problems.append(
            f"pump waist {ratio * w:.3g} um is below the paraxial floor "
            f"5*lambda_pump = {5.0 * lam0:.3g} um"
        )

    if problems:
        raise ConfigError(problems)

    return RunConfig(
        crystal=crystal,
        cut_angle_mode=cut_angle_mode,
        pump_wavelength_um=lam0,
        tau_p=tau_p,
        photon_waist_um=w,
        waist_ratio=ratio,
        alpha_rad=alpha,
        phi_rad=phi,
        pm_type=pm_type,
        model=model,
        domain_kind=domain_kind,
        filter_halfwidth=filter_halfwidth,
        rel_tol=rel_tol,
        psi_rtol=psi_rtol,
        sweep=sweep,
        jsa=jsa,
        crystal_file=crystal_file,
        source_text=raw,
    )
