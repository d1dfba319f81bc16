"""Exact phase-space maps of splitting integrators on the harmonic oscillator.

Any composition of drifts, kicks, and force-gradient kicks acts on the
oscillator as a 2x2 symplectic matrix. This package builds that matrix
exactly (numerically or as truncated power series in x = eps*omega), solves
the N-step evolution in closed form, extracts the modified (shadow)
Hamiltonian with its effective mass and spring constant, and benchmarks
schemes through their phase-error coefficients, all cross-checked by direct
brute-force iteration.
"""

from .series import Series, asin
from .schemes import (
    DRIFT, KICK, GKICK, Step, Scheme, SchemeError, SchemeFileError,
    adjoint, get_scheme, has_exact_coefficients, is_symmetric, load_scheme,
    registry, registry_names, save_scheme, scheme_to_dict, DATA_DIR_ENV,
)
from .phasemap import (
    PhaseMatrix, Regime, RegimeError, SpectralData, invariant_quadratic_form,
    modified_hamiltonian, propagate_closed_form, scheme_matrix,
    scheme_series_matrix, spectral, step_matrix, step_series_matrix,
)
from .analysis import (
    AnalysisError, ConvergenceStudy, PhaseErrorReport, StabilityLimit,
    analyze, convergence_study, effective_param_series, normalized_coefficient,
    omega_a_series, order_coefficient, phase_error, stability_limit,
)
from .sim import PortraitFit, TrajectoryRecord, iterate, phase_drift, portrait

__version__ = "0.1.0"

__all__ = [
    "Series", "asin",
    "DRIFT", "KICK", "GKICK", "Step", "Scheme", "SchemeError",
    "SchemeFileError", "adjoint", "get_scheme", "has_exact_coefficients",
    "is_symmetric", "load_scheme", "registry", "registry_names",
    "save_scheme", "scheme_to_dict", "DATA_DIR_ENV",
    "PhaseMatrix", "Regime", "RegimeError", "SpectralData",
    "invariant_quadratic_form", "modified_hamiltonian",
    "propagate_closed_form", "scheme_matrix", "scheme_series_matrix",
    "spectral", "step_matrix", "step_series_matrix",
    "AnalysisError", "ConvergenceStudy", "PhaseErrorReport", "StabilityLimit",
    "analyze", "convergence_study", "effective_param_series",
    "normalized_coefficient", "omega_a_series", "order_coefficient",
    "phase_error", "stability_limit",
    "PortraitFit", "TrajectoryRecord", "iterate", "phase_drift", "portrait",
    "__version__",
]
