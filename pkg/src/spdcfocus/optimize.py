"""Scalar optimization of the brightness over the waist ratio and waist.

Models are named by tags:

* ``thin-perfect-pm``   - thin crystal, sinc term set to 1 (closed quadrature);
* ``thin-sinc``         - thin-crystal amplitude including the sinc factor;
* ``full-factorized``   - the paraxial amplitude with the full Z integral;
* ``walkoff-closed-form`` - collinear first-order walk-off brightness.

For angle-dependent models the phase-matching angle is re-solved per
collection angle, so brightness changes along a sweep come from geometry
alone.  Optima are located by a coarse scan followed by golden-section
refinement; every reported optimum is invariant under rescaling the
brightness by a positive constant.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .brightness import FrequencyDomain, total_brightness
from .dispersion import CrystalModel, bbo, load_crystal, walkoff_slope
from .geometry import (
    PARAXIAL_FLOOR,
    CollectionGeometry,
    degenerate_setup,
    solve_pm_angle,
)
from .thinlimit import (
    ThinConfig,
    brightness_exact_thin,
    brightness_walkoff_collinear,
    psi_thin,
)
from .units import C_UM_FS as C
from .units import TWO_PI_C
from .wavefunction import psi_factorized

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

MODEL_TAGS = ("thin-perfect-pm", "thin-sinc", "full-factorized", "walkoff-closed-form")


@dataclass
class OptimizeResult:
    """Location and value of a one-dimensional maximum."""

    x: float
    value: float
    uncertainty: float
    degenerate: bool = False
    edge: bool = False
    evaluations: int = 0


@dataclass(frozen=True)
class SweepRow:
    """One record of an optimal-focusing sweep (CSV-ready)."""

    figure: int
    model: str
    alpha: float        # rad
    w: float            # um
    length: float       # um
    r_star: float
    r_err: float
    r_bracket_star: float   # dense-scan argmax, golden-section cross-check
    brightness: float
    brightness_norm: float = math.nan
    status: str = "ok"


def golden_section_max(f, lo: float, hi: float, xtol: float = 1e-4, coarse: int = 25):
    """Maximize a unimodal scalar function on [lo, hi].

    A ``coarse``-point scan selects the bracketing triple (and guards against
    surprise multimodality); golden-section then shrinks the bracket below
    ``xtol``.  A flat objective (relative variation below 1e-12) is reported
    as a degenerate optimum at the bracket midpoint.
    """
    if not hi > lo:
        raise ValueError("need hi > lo")
    xs = np.linspace(lo, hi, coarse)
    ys = np.array([f(x) for x in xs])
    evals = coarse
    best = int(np.argmax(ys))
    spread = float(np.max(ys) - np.min(ys))
    if spread <= 1e-12 * max(abs(float(np.max(ys))), 1e-300):
        return OptimizeResult(
            x=0.5 * (lo + hi), value=float(ys[best]),
            uncertainty=0.5 * (hi - lo), degenerate=True, evaluations=evals,
        )
    edge = best in (0, coarse - 1)
    a = xs[max(best - 1, 0)]
    b = xs[min(best + 1, coarse - 1)]

    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals += 2
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    x_star = 0.5 * (a + b)
    return OptimizeResult(
        x=x_star, value=f(x_star), uncertainty=0.5 * (b - a),
        edge=edge, evaluations=evals + 1,
    )


def _pump_floor_ratio(w: float, pump_wavelength_um: float) -> float:
    return PARAXIAL_FLOOR * pump_wavelength_um / w


def ratio_objective(
    model: str,
    alpha: float,
    w: float,
    length: float,
    crystal: CrystalModel | None = None,
    tau_p: float = 100.0,
    pump_wavelength_um: float = 0.405,
    phi: float = 0.0,
    pm_type: str = "e-oo",
    theta: float | None = None,
    rel_tol: float = 1e-6,
    psi_rtol: float = 1e-8,
):
    """Brightness as a function of the waist ratio r, for one model tag."""
    if model not in MODEL_TAGS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODEL_TAGS}")
    crystal = (bbo() if crystal is None else crystal).with_length(length)
    omega_0 = TWO_PI_C / pump_wavelength_um

    if model == "thin-perfect-pm":
        cfg = ThinConfig(
            w=w, alpha=alpha, tau_p=tau_p, omega_0=omega_0,
            window=crystal.window, length=length,
        )
        return lambda r: float(brightness_exact_thin(r, cfg))

    if theta is None:
        theta = solve_pm_angle(
            crystal, omega_0, CollectionGeometry.symmetric(alpha, phi), pm_type
        )

    if model == "walkoff-closed-form":
        if alpha != 0.0:
            raise ValueError("walkoff-closed-form is a collinear (alpha = 0) model")
        beta_p = float(walkoff_slope(omega_0, crystal.with_cut_angle(theta)))
        cfg = ThinConfig(
            w=w, alpha=0.0, tau_p=tau_p, omega_0=omega_0,
            window=crystal.window, length=length, beta_p=beta_p,
        )
        return lambda r: float(brightness_walkoff_collinear(r, cfg))

    evaluator = psi_thin if model == "thin-sinc" else (
        lambda s, oi, os_: psi_factorized(s, oi, os_, rtol=psi_rtol)
    )
    domain = FrequencyDomain.from_crystal(crystal)

    def objective(r: float) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            setup = degenerate_setup(
                crystal, pump_wavelength_um, tau_p, w, r, alpha,
                phi_rad=phi, pm_type=pm_type, cut_angle=theta,
            )
        v_sigma = None
        if alpha > 0:
            wbar = r * w / math.sqrt(1.0 + 2.0 * r**2)
            v_sigma = C / (wbar * alpha)
        result = total_brightness(
            lambda oi, os_: evaluator(setup, oi, os_),
            domain, omega_0, tau_p, v_sigma=v_sigma, rel_tol=rel_tol,
        )
        return result.value

    return objective


def optimal_ratio(
    model,
    alpha: float,
    w: float,
    length: float,
    bracket: tuple[float, float] = (0.2, 2.0),
    xtol: float = 1e-4,
    coarse: int = 25,
    **context,
) -> OptimizeResult:
    """Optimal pump/collection waist ratio and the brightness there.

    ``model`` is a tag (see module docstring) or a ready callable r -> R.
    The lower bracket edge is clipped to keep the pump waist above the
    paraxial floor.
    """
    objective = model if callable(model) else ratio_objective(
        model, alpha, w, length, **context
    )
    lam_pump = context.get("pump_wavelength_um", 0.405)
    lo = max(bracket[0], _pump_floor_ratio(w, lam_pump))
    if lo >= bracket[1]:
        raise ValueError(
            f"ratio bracket {bracket} collapses under the pump paraxial floor at w={w} um"
        )
    return golden_section_max(objective, lo, bracket[1], xtol=xtol, coarse=coarse)


def optimal_waist(
    model,
    alpha: float,
    length: float,
    w_bracket: tuple[float, float],
    xtol: float = 0.05,
    coarse: int = 13,
    r_bracket: tuple[float, float] = (0.2, 2.0),
    r_xtol: float = 1e-3,
    **context,
):
    """Nested optimum: for each waist first optimize r, then maximize over w.

    Returns ``(OptimizeResult for w, OptimizeResult for r at the optimum)``;
    the w result carries the edge flag (an edge maximum means the true
    optimum sits at or beyond the paraxial validity floor).
    """
    lam = context.get("pump_wavelength_um", 0.405)
    floor = PARAXIAL_FLOOR * 0.5 * 2.0 * lam  # photon wavelength = 2 * pump wavelength
    if w_bracket[0] < floor:
        raise ValueError(
            f"waist bracket {w_bracket} dips below the paraxial floor {floor:.3g} um"
        )

    def outer(w: float) -> float:
        return optimal_ratio(
            model, alpha, w, length, bracket=r_bracket, xtol=r_xtol, **context
        ).value

    w_res = golden_section_max(outer, w_bracket[0], w_bracket[1], xtol=xtol, coarse=coarse)
    r_res = optimal_ratio(
        model, alpha, w_res.x, length, bracket=r_bracket, xtol=r_xtol, **context
    )
    return w_res, r_res


@dataclass(frozen=True)
class PointSpec:
    """Self-contained description of one sweep point (picklable for pools)."""

    figure: int
    model: str
    alpha: float
    w: float
    length: float
    tau_p: float = 100.0
    pump_wavelength_um: float = 0.405
    phi: float = 0.0
    pm_type: str = "e-oo"
    theta: float | None = None
    r_bracket: tuple[float, float] = (0.2, 2.0)
    r_xtol: float = 1e-3
    rel_tol: float = 1e-6
    crystal_file: str | None = None
    curve: str = ""
    grid_check: bool = False  # also run the dense-grid argmax cross-check


def _point_crystal(spec: PointSpec) -> CrystalModel:
    if spec.crystal_file is None:
        return bbo(length_um=spec.length)
    return load_crystal(spec.crystal_file).with_length(spec.length)


def evaluate_point(spec: PointSpec) -> SweepRow:
    """Run the r optimization for one sweep point; failures become row status."""
    try:
        crystal = _point_crystal(spec)
        result = optimal_ratio(
            spec.model, spec.alpha, spec.w, spec.length,
            bracket=spec.r_bracket, xtol=spec.r_xtol,
            crystal=crystal, tau_p=spec.tau_p,
            pump_wavelength_um=spec.pump_wavelength_um,
            phi=spec.phi, pm_type=spec.pm_type, theta=spec.theta,
            rel_tol=spec.rel_tol,
        )
        grid_star = math.nan
        if spec.grid_check:
            objective = ratio_objective(
                spec.model, spec.alpha, spec.w, spec.length,
                crystal=crystal, tau_p=spec.tau_p,
                pump_wavelength_um=spec.pump_wavelength_um,
                phi=spec.phi, pm_type=spec.pm_type, theta=spec.theta,
                rel_tol=spec.rel_tol,
            )
            grid_star = _dense_grid_argmax(objective, spec.r_bracket, spec.r_xtol)
        return SweepRow(
            figure=spec.figure, model=spec.model, alpha=spec.alpha,
            w=spec.w, length=spec.length,
            r_star=result.x, r_err=result.uncertainty, r_bracket_star=grid_star,
            brightness=result.value,
        )
    except Exception as exc:
        return SweepRow(
            figure=spec.figure, model=spec.model, alpha=spec.alpha,
            w=spec.w, length=spec.length,
            r_star=math.nan, r_err=math.nan, r_bracket_star=math.nan,
            brightness=math.nan, status=str(exc),
        )


def _dense_grid_argmax(objective, bracket, xtol, points: int = 61) -> float:
    """Coarse-grid argmax refined once; cross-checks the golden section."""
    xs = np.linspace(bracket[0], bracket[1], points)
    ys = [objective(x) for x in xs]
    best = int(np.argmax(ys))
    lo = xs[max(best - 1, 0)]
    hi = xs[min(best + 1, points - 1)]
    fine = np.arange(lo, hi + 0.5 * xtol, xtol)
    ys_fine = [objective(x) for x in fine]
    return float(fine[int(np.argmax(ys_fine))])


_FIG_ALPHA_WIDE_DEG = 4.0
_FIG_ALPHA_NARROW_DEG = 2.5

FIGURE_DEFAULTS = {
    3: dict(model="thin-perfect-pm", L_list=(100.0,), w_list=(10.0, 30.0, 50.0),
            alpha_deg_list=tuple(np.linspace(0.0, _FIG_ALPHA_WIDE_DEG, 17))),
    5: dict(model="thin-sinc", L_list=(100.0,), w_list=(10.0, 30.0, 50.0, 70.0),
            alpha_deg_list=tuple(np.linspace(0.0, _FIG_ALPHA_NARROW_DEG, 11))),
    6: dict(model="full-factorized", L_list=(100.0, 500.0), w_list=(10.0, 30.0, 50.0, 70.0),
            alpha_deg_list=tuple(np.linspace(0.0, _FIG_ALPHA_NARROW_DEG, 6))),
    7: dict(model="full-factorized+walkoff-closed-form", L_list=(500.0,),
            w_list=(10.0, 15.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0),
            alpha_deg_list=(0.0,)),
    8: dict(model="full-factorized", L_list=(500.0,),
            w_list=(5.0, 7.0, 10.0, 15.0, 20.0, 30.0, 45.0, 60.0),
            alpha_deg_list=(0.0,)),
    9: dict(model="full-factorized", L_list=(100.0,), w_list=(10.0, 30.0, 50.0, 70.0),
            alpha_deg_list=tuple(np.linspace(0.0, 3.0, 7))),
}

_OVERRIDE_KEYS = {
    "model", "L_list", "w_list", "alpha_deg_list", "tau_p",
    "pump_wavelength_um", "phi", "pm_type", "r_bracket", "r_xtol",
    "rel_tol", "crystal_file",
}


def figure_points(figure: int, overrides: dict | None = None) -> list[PointSpec]:
    """Expand a figure preset into independent sweep points.

    Phase-matching angles are solved here, once per collection angle, and
    pinned into the specs so that pooled workers stay consistent.
    """
    if figure not in FIGURE_DEFAULTS:
        raise ValueError(f"unknown figure id {figure}; presets: {sorted(FIGURE_DEFAULTS)}")
    preset = dict(FIGURE_DEFAULTS[figure])
    overrides = dict(overrides or {})
    unknown = set(overrides) - _OVERRIDE_KEYS
    if unknown:
        raise ValueError(f"unknown override keys {sorted(unknown)}")
    preset.update(overrides)

    models = preset["model"].split("+")
    tau_p = float(preset.get("tau_p", 100.0))
    lam0 = float(preset.get("pump_wavelength_um", 0.405))
    phi = float(preset.get("phi", 0.0))
    pm_type = preset.get("pm_type", "e-oo")
    r_bracket = tuple(preset.get("r_bracket", (0.2, 2.0)))
    r_xtol = float(preset.get("r_xtol", 1e-3))
    rel_tol = float(preset.get("rel_tol", 1e-6))
    crystal_file = preset.get("crystal_file")

    crystal = bbo() if crystal_file is None else load_crystal(crystal_file)
    omega_0 = TWO_PI_C / lam0

    theta_cache: dict[float, float] = {}

    def theta_for(alpha: float, model: str) -> float | None:
        if model == "thin-perfect-pm":
            return None
        if alpha not in theta_cache:
            theta_cache[alpha] = solve_pm_angle(
                crystal, omega_0, CollectionGeometry.symmetric(alpha, phi), pm_type
            )
        return theta_cache[alpha]

    points = []
    for model in models:
        for length in preset["L_list"]:
            for w in preset["w_list"]:
                for alpha_deg in preset["alpha_deg_list"]:
                    alpha = math.radians(alpha_deg)
                    points.append(
                        PointSpec(
                            figure=figure, model=model, alpha=alpha, w=float(w),
                            length=float(length), tau_p=tau_p,
                            pump_wavelength_um=lam0, phi=phi, pm_type=pm_type,
                            theta=theta_for(alpha, model),
                            r_bracket=r_bracket, r_xtol=r_xtol, rel_tol=rel_tol,
                            crystal_file=crystal_file,
                            curve=f"{model}|L={length:g}|w={w:g}",
                        )
                    )
    return points


def normalize_rows(rows: list[SweepRow]) -> list[SweepRow]:
    """Fill brightness_norm: each (model, L, w) curve normalized to its max."""
    by_curve: dict[tuple, float] = {}
    for row in rows:
        key = (row.model, row.length, row.w)
        if math.isfinite(row.brightness):
            by_curve[key] = max(by_curve.get(key, 0.0), row.brightness)
    out = []
    for row in rows:
        key = (row.model, row.length, row.w)
        scale = by_curve.get(key, math.nan)
        norm = row.brightness / scale if scale and math.isfinite(row.brightness) else math.nan
        out.append(replace(row, brightness_norm=norm))
    return out


def figure_sweep(figure: int, overrides: dict | None = None) -> list[SweepRow]:
    """Run a whole figure preset sequentially and normalize the curves."""
    rows = [evaluate_point(spec) for spec in figure_points(figure, overrides)]
    return normalize_rows(rows)
