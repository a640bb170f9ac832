"""NumPy implementation of the longitudinal overlap quadrature.

Evaluates, for a batch of parameter sets,

    I = int_{-1}^{1} dZ exp(-i*phase*Z)
        * exp(-(Z^2/2) * sum_j cc_j / (1 + i*mu_j*Z))
        / prod_j sqrt(1 + i*mu_j*Z)

with real mu_j and cc_j >= 0 (j = 1..4).  Each factor 1 + i*mu_j*Z stays in
the right complex half-plane, so the per-factor principal square root is the
branch continuous from Z = 0; no unwrapping is needed.

Composite Gauss-Legendre with 16-node panels; the panel count starts at the
oscillation/peak scale of the integrand and doubles until the relative change
drops below ``rtol`` (the reported error is the last change).
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss

BACKEND = "python"

_NODES, _WEIGHTS = leggauss(16)
_ROW_BLOCK_VALUES = 4_000_000  # cap on rows*nodes complex temporaries per block


def initial_panels(phase, mu, cc, max_panels):
    """Heuristic starting panel count (power of two) per batch element."""
    osc = np.abs(phase) / np.pi
    peak = np.sqrt(np.sum(cc, axis=-1))
    scale = np.maximum.reduce([np.ones_like(osc), osc / 3.0, peak / 2.0,
                               np.max(np.abs(mu), axis=-1) / 3.0])
    p0 = 2 ** np.ceil(np.log2(scale)).astype(np.int64)
    return np.minimum(p0, max(1, max_panels // 4)).astype(np.int64)


def _panel_grid(n_panels: int):
    half = 1.0 / n_panels
    centers = -1.0 + (2.0 * np.arange(n_panels) + 1.0) * half
    z = (centers[:, None] + half * _NODES[None, :]).ravel()
    w = np.tile(half * _WEIGHTS, n_panels)
    return z, w


def _integrate_rows(phase, mu, cc, z, w):
    """Quadrature sum for a set of rows on a fixed node grid."""
    out = np.empty(phase.shape[0], dtype=complex)
    rows_per_block = max(1, _ROW_BLOCK_VALUES // max(1, z.size))
    for start in range(0, phase.shape[0], rows_per_block):
        sl = slice(start, start + rows_per_block)
        t = 1.0 + 1j * mu[sl, :, None] * z[None, None, :]
        expo = -1j * phase[sl, None] * z[None, :]
        expo = expo - 0.5 * z[None, :] ** 2 * np.sum(cc[sl, :, None] / t, axis=1)
        denom = np.sqrt(t[:, 0]) * np.sqrt(t[:, 1]) * np.sqrt(t[:, 2]) * np.sqrt(t[:, 3])
        out[sl] = (np.exp(expo) / denom) @ w
    return out


def z_overlap_batch(phase, mu, cc, rtol: float = 1e-8, max_panels: int = 256,
                    atol: float = 1e-12):
    """Batched adaptive quadrature.

    Parameters are arrays of shape (n,), (n, 4) and (n, 4); returns
    ``(values, abserr, panels)`` where ``panels`` is the final panel count and
    ``abserr`` the change over the last doubling (inf if never refined).
    The integrand modulus is bounded by 1, so the absolute floor ``atol``
    is meaningful for entries whose integral nearly cancels.  Entries that
    hit ``max_panels`` without converging keep their last error.
    """
    phase = np.atleast_1d(np.asarray(phase, dtype=float))
    n = phase.shape[0]
    mu = np.asarray(mu, dtype=float).reshape(n, 4)
    cc = np.asarray(cc, dtype=float).reshape(n, 4)

    values = np.zeros(n, dtype=complex)
    abserr = np.full(n, np.inf)
    panels = np.zeros(n, dtype=np.int64)

    p0 = initial_panels(phase, mu, cc, max_panels)
    active = np.ones(n, dtype=bool)
    level = 1
    while level <= max_panels:
        rows = active & (p0 <= level)
        if rows.any():
            z, w = _panel_grid(level)
            current = _integrate_rows(phase[rows], mu[rows], cc[rows], z, w)
            started = panels[rows] > 0
            change = np.abs(current - values[rows])
            err = np.where(started, change, np.inf)
            values[rows] = current
            abserr[rows] = err
            panels[rows] = level
            done = err <= rtol * np.abs(current) + atol
            idx = np.flatnonzero(rows)
            active[idx[done]] = False
        if not active.any():
            break
        level *= 2
    return values, abserr, panels
