"""Backend selection for the longitudinal overlap quadrature.

Prefers the compiled extension; falls back to the NumPy implementation when
the extension was not built.  ``BACKEND`` names the choice, and
``z_overlap_batch`` is the selected callable (see ``_zcore_py`` for the
contract).  Set the environment variable SPDCFOCUS_FORCE_PYTHON_KERNEL=1 to
skip the extension, e.g. for benchmarking.
"""

from __future__ import annotations

import os

import numpy as np

from . import _zcore_py

if os.environ.get("SPDCFOCUS_FORCE_PYTHON_KERNEL"):
    _impl = _zcore_py
else:
    try:
        from . import _zcore as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _zcore_py

BACKEND: str = _impl.BACKEND
z_overlap_batch = _impl.z_overlap_batch


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge; carries the error estimate."""

    def __init__(self, message: str, value=None, abserr=None):
        super().__init__(message)
        self.value = value
        self.abserr = abserr


def ensure_converged(values, abserr, rtol: float, what: str = "Z integral",
                     atol: float = 1e-12):
    """Raise QuadratureError when any batch entry missed the tolerance."""
    scale = np.maximum(np.abs(values), 1e-300)
    bad = abserr > 10.0 * (rtol * scale + atol)
    if np.any(bad):
        worst = float(np.max(abserr[bad] / scale[bad]))
        raise QuadratureError(
            f"{what}: {int(np.count_nonzero(bad))} point(s) not converged "
            f"(worst relative error estimate {worst:.2e}, requested {rtol:.1e})",
            value=values,
            abserr=abserr,
        )
