import math

import numpy as np
import pytest

from spdcfocus import (
    ConditioningError,
    CrystalModel,
    EvanescentWaveError,
    DispersionDomainError,
    Polarization,
    SellmeierFit,
    bbo,
    index_at_angle,
    kz,
    kz_jet,
    refractive_indices,
    walkoff_slope,
)
from spdcfocus.units import TWO_PI_C

OMEGA_405 = TWO_PI_C / 0.405
OMEGA_810 = TWO_PI_C / 0.810

# Hand-evaluated from the bundled index fit (n^2 = a + b/(lam^2-c) - d lam^2)
# at 0.405 um and 0.810 um; frozen before the implementation existed.
N_O_405 = 1.691886895977
N_E_405 = 1.567124145905
N_O_810 = 1.660258317317


def test_bbo_indices_match_hand_evaluation():
    n_o, n_e = refractive_indices(OMEGA_405, bbo())
    assert n_o == pytest.approx(N_O_405, abs=1e-9)
    assert n_e == pytest.approx(N_E_405, abs=1e-9)
    n_o_red, _ = refractive_indices(OMEGA_810, bbo())
    assert n_o_red == pytest.approx(N_O_810, abs=1e-9)
    # published-fit ballpark (values quoted to three decimals in the literature)
    assert n_o == pytest.approx(1.692, abs=1.5e-3)
    assert n_e == pytest.approx(1.567, abs=1.5e-3)
    assert n_o_red == pytest.approx(1.661, abs=1.5e-3)


def _constant_crystal(n_o=1.5, n_e=1.4, **kw):
    defaults = dict(
        sellmeier_o=SellmeierFit.constant(n_o),
        sellmeier_e=SellmeierFit.constant(n_e),
        window=(0.5, 10.0),
        length=100.0,
        cut_angle=0.4,
        name="toy",
    )
    defaults.update(kw)
    return CrystalModel(**defaults)


def test_dispersionless_crystal_returns_constants():
    crystal = _constant_crystal()
    for omega in (0.6, 2.0, 9.5):
        n_o, n_e = refractive_indices(omega, crystal)
        assert n_o == pytest.approx(1.5, abs=1e-15)
        assert n_e == pytest.approx(1.4, abs=1e-15)


def test_out_of_window_frequency_rejected():
    with pytest.raises(DispersionDomainError):
        refractive_indices(0.1, bbo())
    with pytest.raises(DispersionDomainError):
        refractive_indices(20.0, bbo())


def test_index_at_angle_limits():
    crystal = bbo()
    n_o, n_e = refractive_indices(OMEGA_405, crystal)
    assert index_at_angle(OMEGA_405, 0.0, crystal) == pytest.approx(n_o, rel=1e-14)
    assert index_at_angle(OMEGA_405, math.pi / 2, crystal) == pytest.approx(n_e, rel=1e-14)


def test_index_at_angle_bounded_by_principal_indices():
    crystal = bbo()
    for omega in np.linspace(*crystal.window, 7):
        n_o, n_e = refractive_indices(omega, crystal)
        n_th = index_at_angle(omega, np.linspace(0, math.pi / 2, 50), crystal)
        assert np.all(n_th >= min(n_o, n_e) - 1e-12)
        assert np.all(n_th <= max(n_o, n_e) + 1e-12)


def test_type_one_angle_reproduces_degenerate_index():
    # independent oracle: bisection on n_theta(omega_0) - n_o(omega_0/2)
    crystal = bbo()
    n_target, _ = refractive_indices(OMEGA_810, crystal)
    lo, hi = 0.0, math.pi / 2
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if index_at_angle(OMEGA_405, mid, crystal) > n_target:
            lo = mid
        else:
            hi = mid
    theta = 0.5 * (lo + hi)
    assert theta == pytest.approx(0.5029315890589376, abs=1e-9)
    assert index_at_angle(OMEGA_405, theta, crystal) == pytest.approx(n_target, rel=1e-12)


def test_kz_ordinary_on_axis():
    crystal = bbo()
    n_o, _ = refractive_indices(OMEGA_405, crystal)
    value = kz((0.0, 0.0), OMEGA_405, Polarization.ORDINARY, crystal)
    assert value == pytest.approx(n_o * OMEGA_405 / 0.299792458, rel=1e-14)


def test_kz_extraordinary_theta_zero_on_axis():
    crystal = bbo().with_cut_angle(0.0)
    n_o, _ = refractive_indices(OMEGA_405, crystal)
    value = kz((0.0, 0.0), OMEGA_405, Polarization.EXTRAORDINARY, crystal)
    assert value == pytest.approx(n_o * OMEGA_405 / 0.299792458, rel=1e-14)


def _ellipsoid_kz_oracle(kx, ky, omega, theta, crystal):
    """Root of the rotated index-ellipsoid relation, solved by bisection."""
    n_o, n_e = refractive_indices(omega, crystal)
    w_c = omega / 0.299792458

    def residual(kz_val):
        kzp = math.cos(theta) * kz_val + math.sin(theta) * ky
        kyp = -math.sin(theta) * kz_val + math.cos(theta) * ky
        return kzp**2 / n_o**2 + (kyp**2 + kx**2) / n_e**2 - w_c**2

    lo, hi = 0.0, 2.0 * n_o * w_c
    assert residual(lo) < 0 < residual(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if residual(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_kz_extraordinary_matches_ellipsoid_root():
    theta = math.radians(29.0)
    crystal = bbo().with_cut_angle(theta)
    value = kz((0.0, 0.1), OMEGA_405, Polarization.EXTRAORDINARY, crystal)
    oracle = _ellipsoid_kz_oracle(0.0, 0.1, OMEGA_405, theta, crystal)
    assert value == pytest.approx(oracle, rel=1e-10)
    # and at a skew point with both components
    value2 = kz((0.25, -0.4), OMEGA_405, Polarization.EXTRAORDINARY, crystal)
    oracle2 = _ellipsoid_kz_oracle(0.25, -0.4, OMEGA_405, theta, crystal)
    assert value2 == pytest.approx(oracle2, rel=1e-10)


def test_kz_ordinary_symmetries():
    crystal = bbo()
    rng = np.random.default_rng(7)
    for _ in range(25):
        kx, ky = rng.uniform(-1.0, 1.0, size=2)
        base = kz((kx, ky), OMEGA_405, Polarization.ORDINARY, crystal)
        assert kz((ky, kx), OMEGA_405, Polarization.ORDINARY, crystal) == pytest.approx(base, rel=1e-14)
        assert kz((-kx, ky), OMEGA_405, Polarization.ORDINARY, crystal) == pytest.approx(base, rel=1e-14)
        assert kz((kx, -ky), OMEGA_405, Polarization.ORDINARY, crystal) == pytest.approx(base, rel=1e-14)


def test_kz_evanescent_rejected():
    crystal = bbo()
    with pytest.raises(EvanescentWaveError):
        kz((50.0, 0.0), OMEGA_810, Polarization.ORDINARY, crystal)


def test_kz_jet_ordinary_origin():
    crystal = bbo()
    n_o, _ = refractive_indices(OMEGA_810, crystal)
    kz_val, k1, k2 = kz_jet((0.0, 0.0), OMEGA_810, Polarization.ORDINARY, crystal)
    np.testing.assert_allclose(k1, [0.0, 0.0], atol=1e-15)
    expected = -0.299792458 / (n_o * OMEGA_810)
    np.testing.assert_allclose(k2, expected * np.eye(2), rtol=1e-13)


def test_kz_jet_extraordinary_origin_walkoff():
    theta = math.radians(28.8)
    crystal = bbo().with_cut_angle(theta)
    _, k1, k2 = kz_jet((0.0, 0.0), OMEGA_405, Polarization.EXTRAORDINARY, crystal)
    beta = walkoff_slope(OMEGA_405, crystal)
    assert k1[0] == pytest.approx(0.0, abs=1e-15)
    assert k1[1] == pytest.approx(beta, rel=1e-12)
    assert beta > 0  # negative uniaxial crystal, 0 < theta < pi/2
    # K2 symmetric negative definite at the origin
    assert k2[0, 1] == k2[1, 0]
    eigvals = np.linalg.eigvalsh(k2)
    assert np.all(eigvals < 0)


@pytest.mark.parametrize("pol", [Polarization.ORDINARY, Polarization.EXTRAORDINARY])
def test_kz_jet_matches_finite_differences(pol):
    # First differences use the 1e-5 rad/um step; second differences need a
    # larger one (2e-3) or float64 roundoff in the difference quotient alone
    # exceeds the 1e-6 tolerance (kz ~ 12 rad/um, eps*kz/h^2 ~ 2e-5 at 1e-5).
    theta = math.radians(29.0)
    crystal = bbo().with_cut_angle(theta)
    rng = np.random.default_rng(42)
    h1 = 1e-5
    h2 = 2e-3
    n_checked = 0
    for _ in range(120):
        omega = rng.uniform(1.2, 6.0)
        n_o, _ = refractive_indices(omega, crystal)
        k_max = 0.05 * n_o * omega / 0.299792458
        kx, ky = rng.uniform(-k_max, k_max, size=2)
        kz_val, k1, k2 = kz_jet((kx, ky), omega, pol, crystal)

        def f(dx, dy):
            return kz((kx + dx, ky + dy), omega, pol, crystal)

        fd1 = np.array(
            [
                (f(h1, 0) - f(-h1, 0)) / (2 * h1),
                (f(0, h1) - f(0, -h1)) / (2 * h1),
            ]
        )
        fd2 = np.empty((2, 2))
        fd2[0, 0] = (f(h2, 0) - 2 * f(0, 0) + f(-h2, 0)) / h2**2
        fd2[1, 1] = (f(0, h2) - 2 * f(0, 0) + f(0, -h2)) / h2**2
        fd2[0, 1] = fd2[1, 0] = (
            f(h2, h2) - f(h2, -h2) - f(-h2, h2) + f(-h2, -h2)
        ) / (4 * h2**2)
        scale1 = max(float(np.max(np.abs(k1))), 1e-3)
        np.testing.assert_allclose(k1, fd1, rtol=1e-6, atol=1e-6 * scale1)
        scale2 = np.max(np.abs(k2))
        np.testing.assert_allclose(k2, fd2, rtol=1e-6, atol=1e-6 * scale2)
        n_checked += 1
    assert n_checked >= 100


def test_kz_jet_near_evanescent_guard():
    crystal = bbo()
    n_o, _ = refractive_indices(OMEGA_810, crystal)
    k_edge = 0.9999999 * n_o * OMEGA_810 / 0.299792458
    with pytest.raises(ConditioningError):
        kz_jet((k_edge, 0.0), OMEGA_810, Polarization.ORDINARY, crystal)


def test_crystal_model_invariants():
    with pytest.raises(ValueError):
        _constant_crystal(window=(5.0, 1.0))
    with pytest.raises(ValueError):
        _constant_crystal(length=-1.0)
    with pytest.raises(ValueError):
        _constant_crystal(poling_period=-2.0)
    with pytest.raises(ValueError):
        _constant_crystal(poling_order=1)  # order without a period


def test_poling_wavevector():
    crystal = _constant_crystal(poling_period=3.5, poling_order=-1)
    assert crystal.poling_wavevector == pytest.approx(-2 * math.pi / 3.5)
    assert _constant_crystal().poling_wavevector == 0.0


def test_load_crystal_rejects_unphysical_fit(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text(
        """
name = "bad"
[sellmeier.ordinary]
a = 0.5
b = 0.0
c = 0.0
d = 0.0
[sellmeier.extraordinary]
a = 2.0
b = 0.0
c = 0.0
d = 0.0
[transmission]
min_wavelength = "0.2 um"
max_wavelength = "2.2 um"
[geometry]
length = "100 um"
"""
    )
    from spdcfocus import load_crystal

    with pytest.raises(ValueError, match="physical range"):
        load_crystal(bad)


def test_load_crystal_missing_field(tmp_path):
    bad = tmp_path / "missing.toml"
    bad.write_text("name = 'x'\n[sellmeier.ordinary]\na = 2.0\n")
    from spdcfocus import load_crystal

    with pytest.raises(ValueError, match="missing"):
        load_crystal(bad)
