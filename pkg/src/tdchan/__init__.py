"""Transpose depolarizing channels and their two-copy entropy structure."""

from .channel import (
    Channel,
    DensityMatrix,
    KrausSet,
    apply,
    apply_two_copies,
    channel_kraus,
    decompose,
    kraus_set,
    new_channel,
    pure_state,
    t_range,
)
from .entropy import (
    EntropyReport,
    OptimizerConfig,
    additivity_gap,
    entropy_of,
    entropy_split,
    min_entropy_closed_form,
    min_output_entropy,
    minimize_simplex_entropy,
    simplex_output_entropy,
    von_neumann_entropy,
)
from .errors import TdchanError
from .majorization import (
    GammaRoots,
    NuVector,
    elem_sym,
    lambda_to_nu,
    majorizes,
    partial_phi_k,
    phi_k,
    scaled_secular_roots,
    schur_defect,
    sympol_defect,
    t_transform,
)
from .spectrum import (
    SchmidtVector,
    Spectrum,
    full_spectrum,
    offdiag_eigenvalues,
    secular_roots,
    sigma12,
)
from .verification import (
    ScanReport,
    default_t_grid,
    extreme_point_defect,
    final_polynomial,
    first_term_value,
    k0_defect,
    main_inequality_lhs,
    polytope_vertices,
    run_scan,
    sample_polytope,
    second_term_value,
)

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "DensityMatrix",
    "EntropyReport",
    "GammaRoots",
    "KrausSet",
    "NuVector",
    "OptimizerConfig",
    "ScanReport",
    "SchmidtVector",
    "Spectrum",
    "TdchanError",
    "additivity_gap",
    "apply",
    "apply_two_copies",
    "channel_kraus",
    "decompose",
    "default_t_grid",
    "elem_sym",
    "entropy_of",
    "entropy_split",
    "extreme_point_defect",
    "final_polynomial",
    "first_term_value",
    "full_spectrum",
    "k0_defect",
    "kraus_set",
    "lambda_to_nu",
    "main_inequality_lhs",
    "majorizes",
    "min_entropy_closed_form",
    "min_output_entropy",
    "minimize_simplex_entropy",
    "new_channel",
    "offdiag_eigenvalues",
    "partial_phi_k",
    "phi_k",
    "polytope_vertices",
    "pure_state",
    "run_scan",
    "sample_polytope",
    "scaled_secular_roots",
    "schur_defect",
    "second_term_value",
    "secular_roots",
    "sigma12",
    "simplex_output_entropy",
    "sympol_defect",
    "t_range",
    "t_transform",
    "von_neumann_entropy",
]
