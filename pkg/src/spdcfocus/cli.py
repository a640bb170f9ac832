"""Command-line interface: validate, jsa, sweep, brightness.

Outputs are CSV (default) or JSON.  Every file starts with ``#`` comment
lines embedding the tool version and the resolved configuration, so results
are reproducible from the artifact alone; the figure renderer refuses files
without this provenance header.  Exit code is 0 only when no per-cell or
per-point failure occurred.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .brightness import total_brightness
from .config import ConfigError, RunConfig, load_config
from .geometry import solve_pm_angle, CollectionGeometry
from .optimize import (
    FIGURE_DEFAULTS,
    PointSpec,
    evaluate_point,
    figure_points,
    normalize_rows,
    ratio_objective,
)
from .thinlimit import psi_thin
from .units import TWO_PI_C, C_UM_FS
from .wavefunction import (
    paraxial_params,
    psi_factorized,
    psi_general,
    transverse_integrand_map,
)

SWEEP_COLUMNS = (
    "figure", "model", "axis", "axis_value", "alpha_rad", "w_um", "L_um",
    "r_star", "r_err", "R_star", "R_star_norm", "status",
)
JSA_COLUMNS = ("omega_i_radfs", "omega_s_radfs", "re_psi", "im_psi", "abs_psi")
MAP_COLUMNS = ("row_type", "k_ix_radum", "k_sx_radum", "value")


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.10g}"
    return str(x)


def _provenance_lines(kind: str, config_echo: dict, columns) -> list[str]:
    return [
        f"# spdcfocus {__version__} {kind}",
        "# config: " + json.dumps(config_echo, sort_keys=True, default=str),
        "# columns: " + ",".join(columns),
    ]


def _write_table(path: str | None, kind: str, config_echo: dict, columns, rows,
                 fmt: str) -> None:
    if fmt == "json":
        payload = {
            "tool": f"spdcfocus {__version__}",
            "kind": kind,
            "config": config_echo,
            "columns": list(columns),
            "rows": [dict(zip(columns, row)) for row in rows],
        }
        text = json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"
    else:
        buf = io.StringIO()
        for line in _provenance_lines(kind, config_echo, columns):
            buf.write(line + "\n")
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(x) for x in row) + "\n")
        text = buf.getvalue()
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _config_echo(config: RunConfig) -> dict:
    echo = {
        "crystal": config.crystal.name,
        "crystal_file": config.crystal_file or "bundled:bbo",
        "length_um": config.crystal.length,
        "cut_angle": config.cut_angle_mode,
        "pump_wavelength_um": config.pump_wavelength_um,
        "tau_p_fs": config.tau_p,
        "photon_waist_um": config.photon_waist_um,
        "waist_ratio": config.waist_ratio,
        "alpha_rad": config.alpha_rad,
        "phi_rad": config.phi_rad,
        "pm_type": config.pm_type,
        "model": config.model,
        "domain": config.domain_kind,
        "tolerance": config.rel_tol,
    }
    if config.filter_halfwidth:
        echo["filter_halfwidth_radfs"] = config.filter_halfwidth
    return echo


def cmd_validate(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    crystal = config.crystal
    omega_b, omega_t = crystal.window
    lam_b = TWO_PI_C / omega_t
    lam_t = TWO_PI_C / omega_b
    print(f"config OK: {args.config}")
    print(f"crystal: {crystal.name} (L = {crystal.length:g} um)")
    print(
        f"transmission window: {lam_b:.4g}-{lam_t:.4g} um "
        f"({omega_b:.6g}-{omega_t:.6g} rad/fs); wavelength bounds interpreted in um"
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        setup = config.build_setup()
    theta = setup.crystal.cut_angle
    print(f"phase-matching angle: {math.degrees(theta):.4f} deg ({config.pm_type})")
    half = 0.5 * config.omega_0
    bundle = paraxial_params(setup, half, half)
    lam_deg = 2.0 * config.pump_wavelength_um
    print(f"paraxial margin: photon waist = {config.photon_waist_um / lam_deg:.1f} lambda, "
          f"pump waist = {config.waist_ratio * config.photon_waist_um / config.pump_wavelength_um:.1f} lambda")
    print("thin-crystal validity at the central frequencies:")
    names = ("pump ", "idler", "signal")
    for a, name in enumerate(names):
        xi = bundle.xi[a].reshape(2)
        nu = bundle.nu[a].reshape(2)
        print(f"  {name}: xi = ({xi[0]:.3g}, {xi[1]:.3g})  nu = ({nu[0]:.3g}, {nu[1]:.3g})")
    a_coef = bundle.a_coef.reshape(2)
    xi_sum = bundle.xi_sum.reshape(2)
    print(f"  aggregate: xi_mu = ({xi_sum[0]:.3g}, {xi_sum[1]:.3g})  "
          f"A_mu = ({a_coef[0]:.3g}, {a_coef[1]:.3g})")
    thin_ok = float(np.max(np.abs(bundle.xi))) < 0.1 and float(np.max(a_coef)) < 0.1
    print(f"  thin-crystal approximation {'looks valid' if thin_ok else 'NOT valid'} here")
    if config.alpha_rad > 0.2:
        print("warning: collection angle beyond small-angle validity (0.2 rad)")
    return 0


def _jsa_evaluator(config: RunConfig, setup):
    if config.model == "thin-sinc" or config.model == "thin-perfect-pm":
        return lambda oi, os_: psi_thin(setup, oi, os_)
    if config.model == "general":
        return lambda oi, os_: psi_general(setup, oi, os_, rtol=config.psi_rtol)
    return lambda oi, os_: psi_factorized(setup, oi, os_, rtol=config.psi_rtol)


def cmd_jsa(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        setup = config.build_setup()
    echo = _config_echo(config)

    if args.figure == 2:
        half = 0.5 * config.omega_0
        data = transverse_integrand_map(
            setup, half / 1.05, half / 0.95, n=args.points or 201
        )
        rows = [
            ("kbar", data["kbar_ix"], data["kbar_sx"], ""),
            ("k0", data["k0_ix"], data["k0_sx"], ""),
        ]
        for i, kix in enumerate(data["k_ix"]):
            for j, ksx in enumerate(data["k_sx"]):
                rows.append(("cell", float(kix), float(ksx), float(data["map"][i, j])))
        _write_table(args.out, "transverse-map", echo, MAP_COLUMNS, rows, args.format)
        return 0

    half = 0.5 * config.omega_0
    sigma = 0.5 / config.tau_p
    span = config.jsa.span_sigma * sigma
    n = args.points or config.jsa.points
    omega = half + np.linspace(-span, span, n)
    grid_i, grid_s = np.meshgrid(omega, omega, indexing="ij")
    evaluator = _jsa_evaluator(config, setup)
    failures = 0
    try:
        amp = np.asarray(evaluator(grid_i, grid_s), dtype=complex)
    except Exception as exc:
        amp = np.full(grid_i.shape, np.nan, dtype=complex)
        failures = grid_i.size
        print(f"jsa: evaluation failed: {exc}", file=sys.stderr)
    rows = []
    for a in range(n):
        for b in range(n):
            value = amp[a, b]
            rows.append(
                (float(grid_i[a, b]), float(grid_s[a, b]),
                 float(value.real), float(value.imag), float(abs(value)))
            )
    failures += int(np.count_nonzero(~np.isfinite(amp)))
    _write_table(args.out, "jsa-grid", echo, JSA_COLUMNS, rows, args.format)
    if failures:
        print(f"jsa: {failures} cell(s) failed", file=sys.stderr)
        return 1
    return 0


def _parse_overrides(pairs) -> dict:
    overrides = {}
    for pair in pairs or ():
        key, _, value = pair.partition("=")
        if not value:
            raise SystemExit(f"--set expects key=value, got {pair!r}")
        if key in ("w_list", "L_list", "alpha_deg_list", "r_bracket"):
            overrides[key] = tuple(float(x) for x in value.split(","))
        elif key in ("tau_p", "pump_wavelength_um", "phi", "r_xtol", "rel_tol"):
            overrides[key] = float(value)
        else:
            overrides[key] = value
    return overrides


def _sweep_rows_to_table(rows, axis: str):
    table = []
    failures = 0
    for row in rows:
        axis_value = {"alpha": row.alpha, "w": row.w, "r": row.r_star}[axis]
        if row.status != "ok":
            failures += 1
        table.append(
            (row.figure, row.model, axis, axis_value, row.alpha, row.w, row.length,
             row.r_star, row.r_err, row.brightness, row.brightness_norm, row.status)
        )
    return table, failures


def _run_points(points, workers: int):
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(evaluate_point, points))
    return [evaluate_point(spec) for spec in points]


def cmd_sweep(args) -> int:
    overrides = _parse_overrides(args.set)
    if args.tolerance is not None:
        overrides["rel_tol"] = args.tolerance
    if args.figure is not None:
        points = figure_points(args.figure, overrides)
        rows = normalize_rows(_run_points(points, args.workers))
        echo = {"figure": args.figure, "overrides": overrides}
        axis = "w" if args.figure in (7, 8) else "alpha"
        table, failures = _sweep_rows_to_table(rows, axis)
        _write_table(args.out, f"figure-{args.figure}-sweep", echo, SWEEP_COLUMNS,
                     table, args.format)
        if failures:
            print(f"sweep: {failures} point(s) failed", file=sys.stderr)
        return 1 if failures else 0

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    if config.sweep is None:
        print("config has no [sweep] section and no --figure given", file=sys.stderr)
        return 1
    spec = config.sweep
    grid = np.linspace(spec.start, spec.stop, spec.points)
    echo = _config_echo(config)
    echo["sweep"] = {"axis": spec.axis, "start": spec.start, "stop": spec.stop,
                     "points": spec.points}
    rel_tol = args.tolerance if args.tolerance is not None else config.rel_tol

    if spec.axis == "r":
        objective = ratio_objective(
            config.model, config.alpha_rad, config.photon_waist_um,
            config.crystal.length, crystal=config.crystal, tau_p=config.tau_p,
            pump_wavelength_um=config.pump_wavelength_um, phi=config.phi_rad,
            pm_type=config.pm_type,
            theta=None if config.cut_angle_mode == "solve" else config.cut_angle_mode,
            rel_tol=rel_tol,
        )
        table = []
        failures = 0
        values = []
        for r in grid:
            try:
                values.append((float(r), objective(float(r)), "ok"))
            except Exception as exc:
                values.append((float(r), math.nan, str(exc)))
                failures += 1
        peak = max((v for _, v, _ in values if math.isfinite(v)), default=math.nan)
        for r, value, status in values:
            table.append(
                ("", config.model, "r", r, config.alpha_rad, config.photon_waist_um,
                 config.crystal.length, r, 0.0, value,
                 value / peak if math.isfinite(value) else math.nan, status)
            )
        _write_table(args.out, "ratio-sweep", echo, SWEEP_COLUMNS, table, args.format)
        if failures:
            print(f"sweep: {failures} point(s) failed", file=sys.stderr)
        return 1 if failures else 0

    points = []
    theta_pin = None if config.cut_angle_mode == "solve" else float(config.cut_angle_mode)
    for value in grid:
        alpha = float(value) if spec.axis == "alpha" else config.alpha_rad
        w = float(value) if spec.axis == "w" else config.photon_waist_um
        theta = theta_pin
        if theta is None and config.model != "thin-perfect-pm":
            theta = solve_pm_angle(
                config.crystal, config.omega_0,
                CollectionGeometry.symmetric(alpha, config.phi_rad), config.pm_type,
            )
        points.append(
            PointSpec(
                figure=0, model=config.model, alpha=alpha, w=w,
                length=config.crystal.length, tau_p=config.tau_p,
                pump_wavelength_um=config.pump_wavelength_um, phi=config.phi_rad,
                pm_type=config.pm_type, theta=theta, rel_tol=rel_tol,
                crystal_file=config.crystal_file,
            )
        )
    rows = normalize_rows(_run_points(points, args.workers))
    table, failures = _sweep_rows_to_table(rows, spec.axis)
    _write_table(args.out, f"{spec.axis}-sweep", echo, SWEEP_COLUMNS, table, args.format)
    if failures:
        print(f"sweep: {failures} point(s) failed", file=sys.stderr)
    return 1 if failures else 0


def cmd_brightness(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    rel_tol = args.tolerance if args.tolerance is not None else config.rel_tol
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        setup = config.build_setup()
    domain = config.domain()
    if config.model in ("thin-perfect-pm", "walkoff-closed-form"):
        objective = ratio_objective(
            config.model, config.alpha_rad, config.photon_waist_um,
            config.crystal.length, crystal=config.crystal, tau_p=config.tau_p,
            pump_wavelength_um=config.pump_wavelength_um,
            theta=setup.crystal.cut_angle, rel_tol=rel_tol,
        )
        value, err, evals = objective(config.waist_ratio), 0.0, 0
        status = "closed-form"
    else:
        evaluator = _jsa_evaluator(config, setup)
        v_sigma = None
        if config.alpha_rad > 0:
            wbar = (config.waist_ratio * config.photon_waist_um
                    / math.sqrt(1.0 + 2.0 * config.waist_ratio**2))
            v_sigma = C_UM_FS / (wbar * config.alpha_rad)
        result = total_brightness(
            evaluator, domain, config.omega_0, config.tau_p,
            v_sigma=v_sigma, rel_tol=rel_tol,
        )
        value, err, evals, status = (result.value, result.abs_error,
                                     result.evaluations, result.status)
    payload = {
        "tool": f"spdcfocus {__version__}",
        "kind": "brightness",
        "config": _config_echo(config),
        "value": value,
        "abs_error": err,
        "evaluations": evals,
        "domain": domain.describe(),
        "status": status,
        "note": "arbitrary units; only ratios and optima are physical",
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdcfocus",
        description="Biphoton spectra and optimal focusing for SPDC sources",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="schema and physics sanity report")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(func=cmd_validate)

    p_jsa = sub.add_parser("jsa", help="joint-spectral-amplitude grid (CSV/JSON)")
    p_jsa.add_argument("--config", required=True)
    p_jsa.add_argument("--figure", type=int, choices=[2], default=None,
                       help="2: transverse-integrand map mode")
    p_jsa.add_argument("--points", type=int, default=None)
    p_jsa.add_argument("--out", default=None)
    p_jsa.add_argument("--format", choices=["csv", "json"], default="csv")
    p_jsa.set_defaults(func=cmd_jsa)

    p_sweep = sub.add_parser("sweep", help="optimal-ratio / brightness sweeps")
    p_sweep.add_argument("--config", default=None)
    p_sweep.add_argument("--figure", type=int, choices=sorted(FIGURE_DEFAULTS),
                         default=None)
    p_sweep.add_argument("--set", action="append", metavar="KEY=VALUE",
                         help="override a preset field, e.g. w_list=10,30")
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.add_argument("--tolerance", type=float, default=None)
    p_sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sweep.set_defaults(func=cmd_sweep)

    p_br = sub.add_parser("brightness", help="single integrated brightness value")
    p_br.add_argument("--config", required=True)
    p_br.add_argument("--out", default=None)
    p_br.add_argument("--tolerance", type=float, default=None)
    p_br.set_defaults(func=cmd_brightness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and args.config is None and args.figure is None:
        parser.error("sweep needs --config or --figure")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
