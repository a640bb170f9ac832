"""spdcfocus: biphoton spectra and optimal focusing for SPDC pair sources.

Computes the two-photon joint spectral amplitude of a spontaneous
parametric down-conversion source in the paraxial approximation, integrates
it into a collection brightness for single-mode-fiber coupling, and
optimizes pump/collection focusing parameters.  All brightness values carry
an arbitrary overall normalization; ratios and optimum locations are the
meaningful outputs.
"""

from .dispersion import (
    ConditioningError,
    CrystalModel,
    DispersionDomainError,
    EvanescentWaveError,
    Polarization,
    SellmeierFit,
    bbo,
    index_at_angle,
    kz,
    kz_jet,
    load_crystal,
    refractive_indices,
    walkoff_slope,
)
from .geometry import (
    Beam,
    CollectionGeometry,
    ParaxialValidityError,
    PhaseMatchingError,
    SourceSetup,
    collection_wavevectors,
    degenerate_setup,
    phase_mismatch,
    solve_pm_angle,
)
from .wavefunction import (
    JsaSample,
    ParaxialBundle,
    brute_force_phi,
    expansion_center,
    paraxial_params,
    psi_factorized,
    psi_general,
    pump_spectral_amplitude,
)
from .zkernel import BACKEND as KERNEL_BACKEND
from .zkernel import QuadratureError

__version__ = "0.1.0"

__all__ = [
    "Beam",
    "CollectionGeometry",
    "ConditioningError",
    "CrystalModel",
    "DispersionDomainError",
    "EvanescentWaveError",
    "JsaSample",
    "KERNEL_BACKEND",
    "ParaxialBundle",
    "ParaxialValidityError",
    "PhaseMatchingError",
    "Polarization",
    "QuadratureError",
    "SellmeierFit",
    "SourceSetup",
    "bbo",
    "brute_force_phi",
    "collection_wavevectors",
    "degenerate_setup",
    "expansion_center",
    "index_at_angle",
    "kz",
    "kz_jet",
    "load_crystal",
    "paraxial_params",
    "phase_mismatch",
    "psi_factorized",
    "psi_general",
    "pump_spectral_amplitude",
    "refractive_indices",
    "solve_pm_angle",
    "walkoff_slope",
    "__version__",
]
