# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled adaptive Gauss-Legendre kernel for the longitudinal overlap integral.

Same contract as ``_zcore_py.z_overlap_batch``; scalar inner loops instead of
vectorized temporaries.  The integrand factors 1 + i*mu*Z stay in the right
complex half-plane, so per-factor principal square roots give the branch
continuous from Z = 0.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, fabs, log2, sqrt

cnp.import_array()

BACKEND = "compiled"

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex csqrt(double complex)
    double cabs(double complex)

cdef double[16] NODES
cdef double[16] WEIGHTS
_n16, _w16 = np.polynomial.legendre.leggauss(16)
for _q in range(16):
    NODES[_q] = _n16[_q]
    WEIGHTS[_q] = _w16[_q]

cdef double complex CI = 1j


cdef double complex _panel_sum(double phase, double* mu, double* cc, long n_panels) nogil:
    cdef double complex total = 0.0
    cdef double half = 1.0 / n_panels
    cdef long k
    cdef int q, j
    cdef double z, center, z2h
    cdef double complex t, expo, denom
    for k in range(n_panels):
        center = -1.0 + (2.0 * k + 1.0) * half
        for q in range(16):
            z = center + half * NODES[q]
            expo = -CI * (phase * z)
            z2h = 0.5 * z * z
            denom = 1.0
            for j in range(4):
                t = 1.0 + CI * (mu[j] * z)
                expo = expo - z2h * cc[j] / t
                denom = denom * csqrt(t)
            total = total + (half * WEIGHTS[q]) * (cexp(expo) / denom)
    return total


cdef long _initial_panels(double phase, double* mu, double* cc, long max_panels) nogil:
    cdef double osc = fabs(phase) / 3.141592653589793
    cdef double peak = sqrt(cc[0] + cc[1] + cc[2] + cc[3])
    cdef double mumax = 0.0
    cdef int j
    for j in range(4):
        if fabs(mu[j]) > mumax:
            mumax = fabs(mu[j])
    cdef double scale = 1.0
    if osc / 3.0 > scale:
        scale = osc / 3.0
    if peak / 2.0 > scale:
        scale = peak / 2.0
    if mumax / 3.0 > scale:
        scale = mumax / 3.0
    cdef long p0 = <long> (2.0 ** ceil(log2(scale)))
    if p0 < 1:
        p0 = 1
    cdef long cap = max_panels // 4
    if cap < 1:
        cap = 1
    if p0 > cap:
        p0 = cap
    return p0


def z_overlap_batch(phase, mu, cc, double rtol=1e-8, long max_panels=256,
                    double atol=1e-12):
    """Batched adaptive quadrature; see ``_zcore_py.z_overlap_batch``."""
    phase_arr = np.ascontiguousarray(np.atleast_1d(np.asarray(phase, dtype=np.float64)))
    cdef Py_ssize_t n = phase_arr.shape[0]
    mu_arr = np.ascontiguousarray(np.asarray(mu, dtype=np.float64).reshape(n, 4))
    cc_arr = np.ascontiguousarray(np.asarray(cc, dtype=np.float64).reshape(n, 4))

    values = np.zeros(n, dtype=np.complex128)
    abserr = np.full(n, np.inf, dtype=np.float64)
    panels = np.zeros(n, dtype=np.int64)

    cdef double[::1] ph = phase_arr
    cdef double[:, ::1] mv = mu_arr
    cdef double[:, ::1] cv = cc_arr
    cdef double complex[::1] out = values
    cdef double[::1] err = abserr
    cdef long[::1] pan = panels

    cdef Py_ssize_t i
    cdef long p, pmax = max_panels
    cdef double complex prev, curr
    cdef double change, tol
    with nogil:
        for i in range(n):
            p = _initial_panels(ph[i], &mv[i, 0], &cv[i, 0], pmax)
            prev = _panel_sum(ph[i], &mv[i, 0], &cv[i, 0], p)
            while p < pmax:
                p = 2 * p
                curr = _panel_sum(ph[i], &mv[i, 0], &cv[i, 0], p)
                change = cabs(curr - prev)
                prev = curr
                tol = rtol * cabs(curr) + atol
                if change <= tol:
                    err[i] = change
                    break
                err[i] = change
            out[i] = prev
            pan[i] = p
    return values, abserr, panels
