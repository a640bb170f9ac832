import math
import warnings

import numpy as np
import pytest

from spdcfocus import QuadratureError, bbo, degenerate_setup, psi_factorized
from spdcfocus.brightness import BrightnessResult, FrequencyDomain, brightness_sweep, total_brightness
from spdcfocus.thinlimit import ThinConfig, brightness_exact_thin, psi_thin
from spdcfocus.units import TWO_PI_C

C = 0.299792458
OMEGA_0 = TWO_PI_C / 0.405
HALF = OMEGA_0 / 2
TAU = 100.0
WINDOW_DOMAIN = FrequencyDomain.from_crystal(bbo())


def test_separable_gaussian_analytic_value():
    # psi = exp(-a (u - w0)^2 - b v^2): the integral factorizes exactly
    a_coef, b_coef = 2.0 * TAU**2, 900.0

    def psi(omega_i, omega_s):
        u = omega_i + omega_s
        v = omega_i - omega_s
        return np.exp(-a_coef * (u - OMEGA_0) ** 2 - b_coef * v**2)

    result = total_brightness(psi, WINDOW_DOMAIN, OMEGA_0, TAU,
                              v_sigma=1.0 / math.sqrt(2 * b_coef), rel_tol=1e-9)
    analytic = 0.5 * math.sqrt(math.pi / (2 * a_coef)) * math.sqrt(math.pi / (2 * b_coef))
    assert result.value == pytest.approx(analytic, rel=1e-8)
    assert result.converged


def test_thin_sinc_free_amplitude_matches_closed_quadrature():
    # amplitude built from the thin parts with sinc = 1 must integrate to the
    # erf-weighted closed quadrature
    w, r, alpha = 30.0, 0.6, math.radians(1.5)
    cfg = ThinConfig(w=w, alpha=alpha, tau_p=TAU, omega_0=OMEGA_0,
                     window=bbo().window, length=100.0)
    wbar = cfg.wbar(r)
    from spdcfocus.wavefunction import pump_spectral_amplitude

    def psi(omega_i, omega_s):
        suppress = np.exp(-wbar**2 * alpha**2 * (omega_i - omega_s) ** 2 / (4 * C**2))
        return (
            4.0 * math.sqrt(2 * math.pi) * cfg.length
            * pump_spectral_amplitude(omega_i + omega_s, OMEGA_0, TAU)
            * (wbar**2 / (r * w**3)) * suppress
        )

    result = total_brightness(psi, WINDOW_DOMAIN, OMEGA_0, TAU,
                              v_sigma=C / (wbar * alpha), rel_tol=1e-8)
    oracle = brightness_exact_thin(r, cfg)
    assert result.value == pytest.approx(oracle, rel=5e-3)


def test_filter_domain_never_samples_outside():
    delta = 0.004
    domain = FrequencyDomain.spectral_filter(HALF, delta)
    seen = []

    def recorder(omega_i, omega_s):
        seen.append((np.min(omega_i), np.max(omega_i), np.min(omega_s), np.max(omega_s)))
        return np.ones_like(omega_i)

    total_brightness(recorder, domain, OMEGA_0, TAU, rel_tol=1e-6)
    lo, hi = HALF - delta, HALF + delta
    for mins in seen:
        assert mins[0] >= lo - 1e-12 and mins[1] <= hi + 1e-12
        assert mins[2] >= lo - 1e-12 and mins[3] <= hi + 1e-12


def test_swap_symmetry_of_result():
    setup = degenerate_setup(bbo(100.0), 0.405, TAU, 40.0, 0.7, math.radians(2.0))
    wbar = 0.7 * 40.0 / math.sqrt(1 + 2 * 0.7**2)

    def psi(omega_i, omega_s):
        return psi_factorized(setup, omega_i, omega_s)

    def psi_swapped(omega_i, omega_s):
        return psi_factorized(setup, omega_s, omega_i)

    kw = dict(v_sigma=C / (wbar * math.radians(2.0)), rel_tol=1e-7)
    a = total_brightness(psi, WINDOW_DOMAIN, OMEGA_0, TAU, **kw)
    b = total_brightness(psi_swapped, WINDOW_DOMAIN, OMEGA_0, TAU, **kw)
    assert a.value == pytest.approx(b.value, rel=1e-7)


def test_error_estimate_bounds_next_refinement():
    # quadrature honesty: the reported estimate must bound the change seen
    # when the tolerance is pushed one refinement further
    setup = degenerate_setup(bbo(500.0), 0.405, TAU, 30.0, 0.8, 0.0)

    def psi(omega_i, omega_s):
        return psi_factorized(setup, omega_i, omega_s)

    coarse = total_brightness(psi, WINDOW_DOMAIN, OMEGA_0, TAU, rel_tol=1e-4)
    fine = total_brightness(psi, WINDOW_DOMAIN, OMEGA_0, TAU, rel_tol=1e-8)
    assert abs(fine.value - coarse.value) <= coarse.abs_error
    assert fine.converged and coarse.converged


def test_filter_monotone_in_width():
    setup = degenerate_setup(bbo(100.0), 0.405, TAU, 40.0, 0.7, math.radians(1.0))

    def psi(omega_i, omega_s):
        return psi_thin(setup, omega_i, omega_s)

    values = []
    for delta in (0.002, 0.004, 0.008, 0.016):
        domain = FrequencyDomain.spectral_filter(HALF, delta)
        values.append(total_brightness(psi, domain, OMEGA_0, TAU, rel_tol=1e-7).value)
    assert np.all(np.diff(values) > 0)


def test_non_convergence_raises_with_partial_value():
    def nasty(omega_i, omega_s):
        return np.cos(5e4 * (omega_i - omega_s))

    with pytest.raises(QuadratureError) as excinfo:
        total_brightness(nasty, WINDOW_DOMAIN, OMEGA_0, TAU, rel_tol=1e-12,
                         max_evals=2**14)
    assert excinfo.value.value is not None


def test_empty_domain_rejected():
    domain = FrequencyDomain.spectral_filter(HALF * 0.5, 0.001)
    with pytest.raises(ValueError, match="empty"):
        total_brightness(lambda a, b: a, domain, OMEGA_0, TAU)


def test_brightness_result_guards():
    with pytest.raises(ValueError):
        BrightnessResult(value=-1.0, abs_error=0.0, evaluations=0, domain="x")


def test_sweep_constant_amplitude_and_failure_collection():
    calls = []

    def factory(param):
        if param == 2.0:
            def boom(omega_i, omega_s):
                raise RuntimeError("synthetic failure")
            return boom
        calls.append(param)
        return lambda oi, os_: np.exp(-4.0 * TAU**2 * (oi + os_ - OMEGA_0) ** 2)

    results = brightness_sweep(factory, WINDOW_DOMAIN, [1.0, 2.0, 3.0], OMEGA_0, TAU,
                               rel_tol=1e-7)
    assert len(results) == 3
    ok = [res for _, res in results if res.converged]
    bad = [res for _, res in results if not res.converged]
    assert len(ok) == 2 and len(bad) == 1
    assert "synthetic failure" in bad[0].status
    assert ok[0].value == pytest.approx(ok[1].value, rel=1e-9)


def test_sweep_empty_grid_rejected():
    with pytest.raises(ValueError, match="empty"):
        brightness_sweep(lambda p: (lambda a, b: a), WINDOW_DOMAIN, [], OMEGA_0, TAU)
