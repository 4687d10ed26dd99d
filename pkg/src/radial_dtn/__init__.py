"""DtN spectra, stability constants and range geometry for one-step radial potentials."""
from .bessel import (
    SeriesTolerance,
    bessel_j,
    bessel_j_prime,
    check_lemma1_bounds,
    check_lemma2_integrals,
    remainder_s,
)
from .dtn import (
    ZERO,
    Potential,
    SpectralDistance,
    Spectrum,
    dtn_distance,
    eigenvalue_c0,
    eigenvalue_cn,
    operator_norm,
    potential_distance_l1,
    potential_distance_linf,
    spectrum,
)
from .analysis import (
    GridSpec,
    InjectivityReport,
    RangePoint,
    StabilityReport,
    boundary_curves,
    coefficient_ranges,
    gradient_norms,
    injectivity_check,
    instability_sequence,
    invert,
    level_sets,
    range_map,
    stability_constant,
    stability_curves,
    stability_scan,
)
from .oracle import IntegratorConfig, convergence_study, solve_radial
from .exceptions import ConvergenceError, DomainError

__all__ = [name for name in dir() if not name.startswith("_")]
