"""Total collection brightness: |Psi|^2 integrated over a frequency domain.

The integration runs in rotated coordinates u = omega_i + omega_s,
v = omega_i - omega_s, where the pump envelope constrains u and the
collection/window constraints bound v, so tensor Gauss-Legendre converges
quickly.  Nested grid doubling provides the error estimate; the reported
``abs_error`` is the change over the last doubling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from ._quad import gauss_legendre

from .dispersion import CrystalModel
from .zkernel import QuadratureError

_BASE_NU = 16
_BASE_NV = 32


@dataclass(frozen=True)
class FrequencyDomain:
    """Integration domain for the brightness integral.

    ``window`` mode enforces omega_b <= omega_i, omega_s and
    omega_i + omega_s <= omega_t; ``filter`` mode enforces
    |omega_(i,s) - center| <= delta.
    """

    kind: str
    omega_b: float = 0.0
    omega_t: float = math.inf
    center: float = 0.0
    delta: float = 0.0

    @classmethod
    def window(cls, omega_b: float, omega_t: float) -> "FrequencyDomain":
        if not 0 < omega_b < omega_t:
            raise ValueError("need 0 < omega_b < omega_t")
        return cls(kind="window", omega_b=omega_b, omega_t=omega_t)

    @classmethod
    def from_crystal(cls, crystal: CrystalModel) -> "FrequencyDomain":
        return cls.window(*crystal.window)

    @classmethod
    def spectral_filter(cls, center: float, delta: float) -> "FrequencyDomain":
        if delta <= 0 or center <= delta:
            raise ValueError("need 0 < delta < center")
        return cls(kind="filter", center=center, delta=delta)

    def describe(self) -> str:
        if self.kind == "window":
            return f"window[{self.omega_b:.6g},{self.omega_t:.6g}]"
        return f"filter[{self.center:.6g}+-{self.delta:.6g}]"


@dataclass
class BrightnessResult:
    """Integrated brightness (arbitrary units), with convergence metadata."""

    value: float
    abs_error: float
    evaluations: int
    domain: str
    converged: bool = True
    status: str = "ok"

    def __post_init__(self):
        if self.converged and not (self.value >= 0 and self.abs_error >= 0):
            raise ValueError("brightness and its error estimate must be non-negative")


def _u_interval(domain: FrequencyDomain, omega_0: float, tau_p: float):
    sigma_u = 0.5 / tau_p
    lo = omega_0 - 8.0 * sigma_u
    hi = omega_0 + 8.0 * sigma_u
    if domain.kind == "window":
        lo = max(lo, 2.0 * domain.omega_b)
        hi = min(hi, domain.omega_t)
    else:
        lo = max(lo, 2.0 * domain.center - 2.0 * domain.delta)
        hi = min(hi, 2.0 * domain.center + 2.0 * domain.delta)
    if hi <= lo:
        raise ValueError(
            f"empty integration domain: pump centred at {omega_0:.6g} rad/fs "
            f"does not overlap {domain.describe()}"
        )
    return lo, hi


def _v_halfwidth(domain: FrequencyDomain, u: np.ndarray, v_sigma: float | None):
    if domain.kind == "window":
        half = u - 2.0 * domain.omega_b
    else:
        half = 2.0 * domain.delta - np.abs(u - 2.0 * domain.center)
    half = np.maximum(half, 0.0)
    if v_sigma is not None and math.isfinite(v_sigma):
        half = np.minimum(half, 8.0 * v_sigma)
    return half


def _u_panels(domain: FrequencyDomain, omega_0: float, tau_p: float,
              v_sigma: float | None):
    """Sub-intervals of the u range, split where the v bound has a kink."""
    lo, hi = _u_interval(domain, omega_0, tau_p)
    breaks = []
    if domain.kind == "filter":
        breaks.append(2.0 * domain.center)
    elif v_sigma is not None and math.isfinite(v_sigma):
        breaks.append(2.0 * domain.omega_b + 8.0 * v_sigma)
    edges = [lo] + sorted(b for b in breaks if lo < b < hi) + [hi]
    return list(zip(edges[:-1], edges[1:]))


def total_brightness(
    psi,
    domain: FrequencyDomain,
    omega_0: float,
    tau_p: float,
    v_sigma: float | None = None,
    rel_tol: float = 1e-6,
    max_evals: int = 2**22,
) -> BrightnessResult:
    """Integrate |psi(omega_i, omega_s)|^2 over the domain.

    ``psi`` must accept broadcastable arrays of frequencies.  ``v_sigma``
    optionally gives the transverse-suppression width c/(wbar*alpha) of the
    integrand in v; the v range is then truncated at 8 of them.  Raises
    QuadratureError (carrying the partial value and estimate) when the
    refinement cap is hit before the tolerance.
    """
    panels = _u_panels(domain, omega_0, tau_p, v_sigma)
    value_prev = None
    value = err = math.nan
    evaluations = 0
    level = 0
    while True:
        n_u = _BASE_NU * 2**level
        n_v = _BASE_NV * 2**level
        if len(panels) * n_u * n_v > max_evals:
            raise QuadratureError(
                f"brightness quadrature exceeded {max_evals} evaluations "
                f"(last value {value:.6g}, estimate {err:.2g})",
                value=value,
                abserr=err,
            )
        xu, wu = gauss_legendre(n_u)
        xv, wv = gauss_legendre(n_v)
        value = 0.0
        for u_lo, u_hi in panels:
            u = 0.5 * (u_hi - u_lo) * xu + 0.5 * (u_hi + u_lo)
            half = _v_halfwidth(domain, u, v_sigma)
            v = half[:, None] * xv[None, :]
            omega_i = 0.5 * (u[:, None] + v)
            omega_s = 0.5 * (u[:, None] - v)
            density = np.abs(psi(omega_i, omega_s)) ** 2
            inner = density @ wv
            value += float(0.5 * 0.5 * (u_hi - u_lo) * np.dot(wu, half * inner))
            evaluations += n_u * n_v
        if value_prev is not None:
            err = abs(value - value_prev)
            if err <= rel_tol * max(abs(value), 1e-300):
                return BrightnessResult(
                    value=value,
                    abs_error=err,
                    evaluations=evaluations,
                    domain=domain.describe(),
                )
        value_prev = value
        level += 1


def brightness_sweep(
    psi_factory,
    domain: FrequencyDomain,
    grid,
    omega_0: float,
    tau_p: float,
    v_sigma=None,
    rel_tol: float = 1e-6,
    axis_name: str = "param",
):
    """Evaluate the brightness at each grid point of a one-parameter family.

    ``psi_factory(param)`` returns the amplitude evaluator for that point;
    ``v_sigma`` may be a constant or a callable of the parameter.  Failures
    are collected per point (status carries the message) and the sweep
    continues.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ValueError("empty sweep grid")
    results = []
    for param in grid:
        sigma = v_sigma(param) if callable(v_sigma) else v_sigma
        try:
            res = total_brightness(
                psi_factory(param), domain, omega_0, tau_p,
                v_sigma=sigma, rel_tol=rel_tol,
            )
        except Exception as exc:  # sweep must survive per-point failures
            res = BrightnessResult(
                value=math.nan,
                abs_error=math.nan,
                evaluations=0,
                domain=domain.describe(),
                converged=False,
                status=f"{axis_name}={param:.6g}: {exc}",
            )
        results.append((float(param), res))
    return results
