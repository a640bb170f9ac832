"""Biphoton amplitude evaluators in the paraxial approximation.

Three routes to the joint spectral amplitude Psi(omega_i, omega_s), all with
the overall normalization constant set to 1:

* :func:`psi_factorized` - emission in the (x,z) or (y,z) plane, where the
  transverse Gaussian integral factorizes per axis (the production path);
* :func:`psi_general` - any emission azimuth, via the 4x4 mode-overlap and
  mismatch matrices;
* :func:`brute_force_phi` - direct quadrature of the unexpanded transverse
  integral, kept slow and independent as the reference oracle.

The longitudinal (Z) integral common to the first two is
int_{-1}^{1} dZ e^{-i L dkz Z / 2} prod_mu exp(-Z^2 Q_mu/F_mu) / sqrt(F_mu).
Both evaluators reduce it to the canonical kernel form
exp(-(Z^2/2) sum_j c_j/(1+i mu_j Z)) / prod_j sqrt(1+i mu_j Z) with real
mu_j, c_j, obtained from a symmetric eigenproblem; each factor 1 + i mu_j Z
stays in the right complex half-plane, which pins the square-root branch
continuously from Z = 0 (F_mu(0) = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quad import gauss_legendre
from .dispersion import kz, kz_jet
from .geometry import SourceSetup, collection_wavevectors
from .zkernel import ensure_converged, z_overlap_batch

_P, _I, _S = 0, 1, 2  # beam indices: pump, idler, signal


def pump_spectral_amplitude(omega_p, omega_0: float, tau_p: float):
    """Normalized Gaussian pump spectrum; int |A|^2 domega = 1."""
    if tau_p <= 0:
        raise ValueError("tau_p must be positive")
    x = np.asarray(omega_p, dtype=float) - omega_0
    return (2.0 * tau_p**2 / math.pi) ** 0.25 * np.exp(-(tau_p**2) * x**2)


@dataclass(frozen=True)
class JsaSample:
    """One sampled point of the joint spectral amplitude."""

    omega_i: float
    omega_s: float
    amplitude: complex


@dataclass(frozen=True)
class ParaxialBundle:
    """Per-beam, per-axis expansion data at fixed (omega_i, omega_s).

    Beam index order is (pump, idler, signal); axis order (x, y).  Arrays
    broadcast over the frequency inputs: ``kbar``, ``xi``, ``nu`` have shape
    (3, ..., 2), the aggregates (..., 2).
    """

    omega_i: np.ndarray
    omega_s: np.ndarray
    length: float
    waists: np.ndarray        # beam waists w[a, mu], (3, 2) [um]
    wbar: np.ndarray          # effective waist per axis [um]
    k0_sum: np.ndarray        # k0_i + k0_s, (..., 2) [rad/um]
    kbar: np.ndarray          # expansion centers, (3, ..., 2)
    xi: np.ndarray            # focal parameters, (3, ..., 2)
    nu: np.ndarray            # deviation (walk-off) parameters, (3, ..., 2)
    delta2_is: np.ndarray     # pairwise walk-off mismatch, (..., 2)
    delta2_ps: np.ndarray
    delta2_pi: np.ndarray
    a_coef: np.ndarray        # Q_mu(Z) = a_coef - i b_coef Z
    b_coef: np.ndarray
    xi_sum: np.ndarray        # F_mu(Z) = 1 + i xi_sum Z + c_coef Z^2
    c_coef: np.ndarray
    dkz: np.ndarray           # central phase mismatch [rad/um]

    def q_param(self, a: int, mu: int, z):
        """Complex beam parameter q_{a,mu}(Z) = w^2 (1 - i Z xi) [um^2]."""
        w = self.waists[a, mu]
        return w**2 * (1.0 - 1j * np.asarray(z) * self.xi[a, ..., mu])

    def big_q(self, z):
        return self.a_coef - 1j * self.b_coef * np.asarray(z)

    def big_f(self, z):
        z = np.asarray(z)
        return 1.0 + 1j * self.xi_sum * z + self.c_coef * z**2


def effective_waists(setup: SourceSetup) -> np.ndarray:
    """Per-axis effective waist: 1/wbar^2 = sum_a 1/w_a^2."""
    w = setup.waists()
    return 1.0 / np.sqrt(np.sum(1.0 / w**2, axis=0))


def expansion_center(setup: SourceSetup, omega_i, omega_s):
    """Maximum of the transverse Gaussian product: (kbar_i, kbar_s, kbar_p).

    kbar_a = k0_a - (wbar/w_a)^2 (k0_i + k0_s); the pump center is their sum.
    Shapes (..., 2).
    """
    omega_i = np.asarray(omega_i, dtype=float)
    omega_s = np.asarray(omega_s, dtype=float)
    k0_i, k0_s = collection_wavevectors(setup, omega_i, omega_s)
    wbar2 = effective_waists(setup) ** 2
    w = setup.waists()
    k0_sum = k0_i + k0_s
    kbar_i = k0_i - (wbar2 / w[_I] ** 2) * k0_sum
    kbar_s = k0_s - (wbar2 / w[_S] ** 2) * k0_sum
    return kbar_i, kbar_s, kbar_i + kbar_s


def paraxial_params(setup: SourceSetup, omega_i, omega_s) -> ParaxialBundle:
    """Second-order expansion data of the longitudinal wavevectors at kbar."""
    omega_i = np.asarray(omega_i, dtype=float)
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i, omega_s = np.broadcast_arrays(omega_i, omega_s)
    omega_p = omega_i + omega_s

    crystal = setup.crystal
    length = crystal.length
    w = setup.waists()
    wbar = effective_waists(setup)
    k0_i, k0_s = collection_wavevectors(setup, omega_i, omega_s)
    k0_sum = k0_i + k0_s
    kbar_i, kbar_s, kbar_p = expansion_center(setup, omega_i, omega_s)

    beams = setup.beams()
    omegas = (omega_p, omega_i, omega_s)
    kbars = (kbar_p, kbar_i, kbar_s)
    kz_c, k1, k2 = [], [], []
    for beam, om, kb in zip(beams, omegas, kbars):
        kz_a, k1_a, k2_a = kz_jet((kb[..., 0], kb[..., 1]), om, beam.polarization, crystal)
        kz_c.append(kz_a)
        k1.append(k1_a)
        k2.append(k2_a)

    shape = omega_i.shape
    xi = np.empty((3,) + shape + (2,))
    nu = np.empty((3,) + shape + (2,))
    for a in range(3):
        diag = np.stack([k2[a][..., 0, 0], k2[a][..., 1, 1]], axis=-1)
        xi[a] = -(length / w[a] ** 2) * diag
        nu[a] = -(length / (2.0 * w[a])) * k1[a]

    def delta2(a: int, b: int):
        return wbar**2 * (nu[a] / w[b] - nu[b] / w[a]) ** 2

    d_is = delta2(_I, _S)
    d_ps = delta2(_P, _S)
    d_pi = delta2(_P, _I)
    a_coef = d_is + d_ps + d_pi
    b_coef = d_is * xi[_P] - d_ps * xi[_I] - d_pi * xi[_S]
    frac = wbar**2 / w**2  # (3, 2)
    xi_sum = (
        xi[_I] * (1.0 - frac[_I])
        + xi[_S] * (1.0 - frac[_S])
        - xi[_P] * (1.0 - frac[_P])
    )
    c_coef = wbar**2 * (
        xi[_S] * xi[_P] / w[_I] ** 2
        + xi[_I] * xi[_P] / w[_S] ** 2
        - xi[_I] * xi[_S] / w[_P] ** 2
    )
    dkz = crystal.poling_wavevector + kz_c[_P] - kz_c[_I] - kz_c[_S]

    return ParaxialBundle(
        omega_i=omega_i,
        omega_s=omega_s,
        length=length,
        waists=w,
        wbar=wbar,
        k0_sum=k0_sum,
        kbar=np.stack(kbars, axis=0),
        xi=xi,
        nu=nu,
        delta2_is=d_is,
        delta2_ps=d_ps,
        delta2_pi=d_pi,
        a_coef=a_coef,
        b_coef=b_coef,
        xi_sum=xi_sum,
        c_coef=c_coef,
        dkz=np.asarray(dkz),
    )


def _sqrtm_2x2_spd(m: np.ndarray) -> np.ndarray:
    """Principal square root of a symmetric positive-definite 2x2 matrix."""
    s = math.sqrt(m[0, 0] * m[1, 1] - m[0, 1] ** 2)
    t = math.sqrt(m[0, 0] + m[1, 1] + 2.0 * s)
    return (m + s * np.eye(2)) / t


def _inv_2x2(m: np.ndarray) -> np.ndarray:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det


def _axis_kernel_data(setup: SourceSetup, bundle: ParaxialBundle, axis: int):
    """(mu_1, mu_2, c_1, c_2) for one axis of the factorized Z integrand.

    Writes the 2x2 overlap matrix M2 = C2 + i (LZ/2) D2 as
    C2^(1/2) (1 + iZ S) C2^(1/2) and diagonalizes the symmetric S; F_mu then
    factors into (1+i mu_1 Z)(1+i mu_2 Z) and the walk-off exponent into
    -(Z^2/2) sum_j c_j/(1+i mu_j Z).
    """
    w = setup.waists()[:, axis]
    length = bundle.length
    c2 = 0.5 * np.array(
        [
            [w[_P] ** 2 + w[_I] ** 2, w[_P] ** 2],
            [w[_P] ** 2, w[_P] ** 2 + w[_S] ** 2],
        ]
    )
    g = _inv_2x2(_sqrtm_2x2_spd(c2))

    # D2 diagonal-in-(i,s) entries from the focal parameters: K2_a = -xi_a w_a^2 / L
    k2_p = -bundle.xi[_P, ..., axis] * w[_P] ** 2 / length
    k2_i = -bundle.xi[_I, ..., axis] * w[_I] ** 2 / length
    k2_s = -bundle.xi[_S, ..., axis] * w[_S] ** 2 / length
    d11 = k2_p - k2_i
    d12 = k2_p
    d22 = k2_p - k2_s
    # m0 from the deviation parameters: M1 = i Z (w_i nu_i - w_p nu_p, ...)
    m1 = w[_I] * bundle.nu[_I, ..., axis] - w[_P] * bundle.nu[_P, ..., axis]
    m2 = w[_S] * bundle.nu[_S, ..., axis] - w[_P] * bundle.nu[_P, ..., axis]

    half_l = 0.5 * length
    gd11 = g[0, 0] * d11 + g[0, 1] * d12
    gd12 = g[0, 0] * d12 + g[0, 1] * d22
    gd21 = g[1, 0] * d11 + g[1, 1] * d12
    gd22 = g[1, 0] * d12 + g[1, 1] * d22
    s11 = half_l * (gd11 * g[0, 0] + gd12 * g[0, 1])
    s12 = half_l * (gd11 * g[0, 1] + gd12 * g[1, 1])
    s22 = half_l * (gd21 * g[0, 1] + gd22 * g[1, 1])

    # Jacobi rotation of the symmetric 2x2
    theta = 0.5 * np.arctan2(2.0 * s12, s11 - s22)
    ct, st = np.cos(theta), np.sin(theta)
    mu1 = ct**2 * s11 + 2.0 * ct * st * s12 + st**2 * s22
    mu2 = st**2 * s11 - 2.0 * ct * st * s12 + ct**2 * s22

    gm1 = g[0, 0] * m1 + g[0, 1] * m2
    gm2 = g[1, 0] * m1 + g[1, 1] * m2
    c1 = (ct * gm1 + st * gm2) ** 2
    c2_ = (-st * gm1 + ct * gm2) ** 2
    return mu1, mu2, c1, c2_


def _in_plane(setup: SourceSetup) -> bool:
    geo = setup.geometry
    if max(geo.alpha_i, geo.alpha_s) == 0.0:
        return True
    return abs(math.sin(2.0 * geo.phi)) < 1e-12


def _factorized_prefactor(setup: SourceSetup, bundle: ParaxialBundle):
    w = setup.waists()
    wbar = bundle.wbar
    gauss = np.exp(-np.sum(wbar**2 * bundle.k0_sum**2, axis=-1) / 4.0)
    waist_factor = np.prod(wbar / np.sqrt(w[_P] * w[_I] * w[_S]))
    pump = pump_spectral_amplitude(
        bundle.omega_i + bundle.omega_s, setup.omega_0, setup.tau_p
    )
    return 2.0 * math.sqrt(2.0 * math.pi) * bundle.length * waist_factor * gauss * pump


def psi_factorized(setup: SourceSetup, omega_i, omega_s, rtol: float = 1e-8):
    """Paraxial amplitude for emission in the (x,z) or (y,z) plane.

    Accepts scalar or broadcastable array frequencies [rad/fs]; returns the
    complex amplitude with matching shape.
    """
    if not _in_plane(setup):
        raise ValueError(
            "factorized amplitude needs emission in the (x,z) or (y,z) plane; "
            "use psi_general for other azimuths"
        )
    bundle = paraxial_params(setup, omega_i, omega_s)
    mu1x, mu2x, c1x, c2x = _axis_kernel_data(setup, bundle, axis=0)
    mu1y, mu2y, c1y, c2y = _axis_kernel_data(setup, bundle, axis=1)

    shape = bundle.dkz.shape
    phase = (0.5 * bundle.length * bundle.dkz).ravel()
    mu = np.stack([np.broadcast_to(m, shape).ravel() for m in (mu1x, mu2x, mu1y, mu2y)], axis=-1)
    cc = np.stack([np.broadcast_to(c, shape).ravel() for c in (c1x, c2x, c1y, c2y)], axis=-1)
    values, abserr, _ = z_overlap_batch(phase, mu, cc, rtol=rtol)
    ensure_converged(values, abserr, rtol, what="factorized Z integral")

    result = _factorized_prefactor(setup, bundle) * values.reshape(shape)
    return result if shape else complex(result)


def psi_general(setup: SourceSetup, omega_i, omega_s, rtol: float = 1e-8):
    """Paraxial amplitude for an arbitrary emission azimuth (4x4 matrix form)."""
    omega_i = np.asarray(omega_i, dtype=float)
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i, omega_s = np.broadcast_arrays(omega_i, omega_s)
    omega_p = omega_i + omega_s
    crystal = setup.crystal
    length = crystal.length
    w = setup.waists()

    k0_i, k0_s = collection_wavevectors(setup, omega_i, omega_s)
    k0_sum = k0_i + k0_s
    kbar_i, kbar_s, kbar_p = expansion_center(setup, omega_i, omega_s)

    jets = {}
    for a, (beam, om, kb) in enumerate(
        zip(setup.beams(), (omega_p, omega_i, omega_s), (kbar_p, kbar_i, kbar_s))
    ):
        jets[a] = kz_jet((kb[..., 0], kb[..., 1]), om, beam.polarization, crystal)

    shape = omega_i.shape
    dkz = crystal.poling_wavevector + jets[_P][0] - jets[_I][0] - jets[_S][0]

    # constant 4x4 overlap matrix, variable order (i_x, s_x, i_y, s_y)
    c2 = np.zeros((4, 4))
    for axis, sl in ((0, slice(0, 2)), (1, slice(2, 4))):
        wp2, wi2, ws2 = w[_P, axis] ** 2, w[_I, axis] ** 2, w[_S, axis] ** 2
        c2[sl, sl] = 0.5 * np.array([[wp2 + wi2, wp2], [wp2, wp2 + ws2]])
    eigval, eigvec = np.linalg.eigh(c2)
    g = eigvec @ np.diag(1.0 / np.sqrt(eigval)) @ eigvec.T  # C2^(-1/2)
    det_c2 = float(np.linalg.det(c2))

    def d2_entry(mu_axis, nu_axis, row, col):
        """Mismatch Hessian block entry for beams (row, col) in (i, s) order."""
        k2p = jets[_P][2][..., mu_axis, nu_axis]
        if row == 0 and col == 0:
            return k2p - jets[_I][2][..., mu_axis, nu_axis]
        if row == 1 and col == 1:
            return k2p - jets[_S][2][..., mu_axis, nu_axis]
        return k2p

    d2 = np.zeros(shape + (4, 4))
    for bi, mu_axis in ((0, 0), (1, 1)):
        for bj, nu_axis in ((0, 0), (1, 1)):
            for row in range(2):
                for col in range(2):
                    d2[..., 2 * bi + row, 2 * bj + col] = d2_entry(mu_axis, nu_axis, row, col)

    m0 = np.stack(
        [
            0.5 * length * (jets[_P][1][..., 0] - jets[_I][1][..., 0]),
            0.5 * length * (jets[_P][1][..., 0] - jets[_S][1][..., 0]),
            0.5 * length * (jets[_P][1][..., 1] - jets[_I][1][..., 1]),
            0.5 * length * (jets[_P][1][..., 1] - jets[_S][1][..., 1]),
        ],
        axis=-1,
    )

    s_mat = 0.5 * length * np.einsum("ab,...bc,cd->...ad", g, d2, g)
    mu, u = np.linalg.eigh(s_mat)
    gm = np.einsum("ab,...b->...a", g, m0)
    cc = np.einsum("...bj,...b->...j", u, gm) ** 2

    phase = (0.5 * length * np.asarray(dkz)).ravel()
    values, abserr, _ = z_overlap_batch(
        phase, mu.reshape(-1, 4), cc.reshape(-1, 4), rtol=rtol
    )
    ensure_converged(values, abserr, rtol, what="general Z integral")

    wbar = effective_waists(setup)
    gauss = np.exp(-np.sum(wbar**2 * k0_sum**2, axis=-1) / 4.0)
    mode_norm = np.prod([math.sqrt(w[a, 0] * w[a, 1] / (2.0 * math.pi)) for a in range(3)])
    prefactor = (
        0.5 * length * (2.0 * math.pi) ** 2 * mode_norm / math.sqrt(det_c2) * gauss
    )
    pump = pump_spectral_amplitude(omega_p, setup.omega_0, setup.tau_p)
    result = prefactor * pump * values.reshape(shape)
    return result if shape else complex(result)


def psi_jsa_samples(setup: SourceSetup, omega_i, omega_s, evaluator=psi_factorized):
    """Evaluate and wrap amplitudes into JsaSample records (CLI convenience)."""
    amps = np.atleast_1d(evaluator(setup, omega_i, omega_s))
    oi = np.broadcast_to(np.asarray(omega_i, dtype=float), amps.shape)
    os_ = np.broadcast_to(np.asarray(omega_s, dtype=float), amps.shape)
    return [
        JsaSample(float(a), float(b), complex(c))
        for a, b, c in zip(oi.ravel(), os_.ravel(), amps.ravel())
    ]


def _mode_function(k, k0, waists):
    """Gaussian transverse mode of one beam, both axes (unnormalized exponent)."""
    return np.exp(
        -(waists[0] ** 2 / 4.0) * (k[0] - k0[0]) ** 2
        - (waists[1] ** 2 / 4.0) * (k[1] - k0[1]) ** 2
    )


def _mode_norm(waists):
    return math.sqrt(waists[0] * waists[1] / (2.0 * math.pi))


def _marginal_sigmas(setup: SourceSetup, axis: int):
    """Marginal standard deviations of (delta_i, delta_s) under the Gaussian product."""
    w = setup.waists()[:, axis]
    c2 = 0.5 * np.array(
        [
            [w[_P] ** 2 + w[_I] ** 2, w[_P] ** 2],
            [w[_P] ** 2, w[_P] ** 2 + w[_S] ** 2],
        ]
    )
    cov = _inv_2x2(c2)
    return math.sqrt(cov[0, 0]), math.sqrt(cov[1, 1])


def brute_force_phi(
    setup: SourceSetup,
    omega_i: float,
    omega_s: float,
    resolution: int = 48,
    box_sigmas: float = 6.5,
):
    """Reference amplitude: direct 4-D quadrature of the transverse integral.

    The Z integral of the phase factor is taken analytically
    (2 sinc(L dkz / 2)); no paraxial expansion is made, every point uses
    exact k_z calls.  Returns ``(value, error_estimate)`` where the estimate
    compares the quadrature at ``resolution`` and 2x``resolution`` nodes per
    dimension.
    """
    value_hi = _brute_force_at(setup, omega_i, omega_s, 2 * resolution, box_sigmas)
    value_lo = _brute_force_at(setup, omega_i, omega_s, resolution, box_sigmas)
    err = abs(value_hi - value_lo)
    return value_hi, err


def _brute_force_at(setup, omega_i, omega_s, n, box_sigmas):
    omega_p = omega_i + omega_s
    crystal = setup.crystal
    w = setup.waists()
    kbar_i, kbar_s, _ = expansion_center(setup, omega_i, omega_s)
    k0_i, k0_s = collection_wavevectors(setup, omega_i, omega_s)
    kbar_i, kbar_s = kbar_i.reshape(2), kbar_s.reshape(2)
    k0_i, k0_s = k0_i.reshape(2), k0_s.reshape(2)

    nodes, weights = gauss_legendre(n)

    def grid(center, sigma):
        return center + box_sigmas * sigma * nodes, box_sigmas * sigma * weights

    six, ssx = _marginal_sigmas(setup, 0)
    siy, ssy = _marginal_sigmas(setup, 1)
    kix, wix = grid(kbar_i[0], six)
    ksx, wsx = grid(kbar_s[0], ssx)
    kiy, wiy = grid(kbar_i[1], siy)
    ksy, wsy = grid(kbar_s[1], ssy)

    pol_p = setup.pump.polarization
    pol_i = setup.idler.polarization
    pol_s = setup.signal.polarization
    norm = _mode_norm(w[_P]) * _mode_norm(w[_I]) * _mode_norm(w[_S])
    length = crystal.length

    total = 0.0 + 0.0j
    # chunk over k_ix to keep the 4-D tensor in memory as n^3 slabs
    for a in range(n):
        ki_x = kix[a]
        ky_i = kiy.reshape(n, 1, 1)
        kx_s = ksx.reshape(1, n, 1)
        ky_s = ksy.reshape(1, 1, n)

        kz_i = kz((ki_x, ky_i), omega_i, pol_i, crystal)
        kz_s = kz((kx_s, ky_s), omega_s, pol_s, crystal)
        kz_p = kz((ki_x + kx_s, ky_i + ky_s), omega_p, pol_p, crystal)
        dkz = crystal.poling_wavevector + kz_p - kz_i - kz_s

        u_i = _mode_function((ki_x, ky_i), k0_i, w[_I])
        u_s = _mode_function((kx_s, ky_s), k0_s, w[_S])
        u_p = _mode_function((ki_x + kx_s, ky_i + ky_s), (0.0, 0.0), w[_P])
        f = u_p * u_i * u_s * np.sinc(0.5 * length * dkz / math.pi)
        total += wix[a] * np.einsum("i,j,k,ijk->", wiy, wsx, wsy, f)

    pump = float(pump_spectral_amplitude(omega_p, setup.omega_0, setup.tau_p))
    return length * norm * pump * complex(total)


def transverse_integrand_map(
    setup: SourceSetup,
    omega_i: float,
    omega_s: float,
    n: int = 201,
    box_sigmas: float = 5.0,
):
    """Normalized |integrand|(k_ix, k_sx) map at k_iy = k_sy = 0.

    The modulus of the transverse integrand is the Gaussian mode product,
    independent of Z.  Returns a dict with the axes, the map and the
    expansion-center / collection markers.
    """
    kbar_i, kbar_s, _ = expansion_center(setup, omega_i, omega_s)
    k0_i, k0_s = collection_wavevectors(setup, omega_i, omega_s)
    kbar_i, kbar_s = kbar_i.reshape(2), kbar_s.reshape(2)
    k0_i, k0_s = k0_i.reshape(2), k0_s.reshape(2)
    six, ssx = _marginal_sigmas(setup, 0)
    w = setup.waists()

    kix = kbar_i[0] + box_sigmas * six * np.linspace(-1.0, 1.0, n)
    ksx = kbar_s[0] + box_sigmas * ssx * np.linspace(-1.0, 1.0, n)
    gi = np.exp(-(w[_I, 0] ** 2 / 4.0) * (kix - k0_i[0]) ** 2)
    gs = np.exp(-(w[_S, 0] ** 2 / 4.0) * (ksx - k0_s[0]) ** 2)
    gp = np.exp(-(w[_P, 0] ** 2 / 4.0) * (kix[:, None] + ksx[None, :]) ** 2)
    amp = gi[:, None] * gs[None, :] * gp
    amp /= np.max(amp)
    return {
        "k_ix": kix,
        "k_sx": ksx,
        "map": amp,
        "kbar_ix": float(kbar_i[0]),
        "kbar_sx": float(kbar_s[0]),
        "k0_ix": float(k0_i[0]),
        "k0_sx": float(k0_s[0]),
    }
