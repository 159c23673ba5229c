"""Separability of Bell-diagonal qudit states with maximal abelian symmetry."""

from .classify import (
    Evidence,
    EvidenceKind,
    NotSeparableError,
    SeparableEnsemble,
    Verdict,
    VerdictKind,
    classify_fam,
    classify_famg,
    necessary_conditions_famg,
    phase_ensemble,
    ppt_analytic,
    ppt_numeric,
    separable_analytic,
    separable_decomposition,
    sufficient_separability_famg,
)
from .estimators import BellDiagonalClassifier, PartialTransposeFeatures
from .states import (
    BellSpectrum,
    FamGWeights,
    FamUUWeights,
    FamWeights,
    abelian_unitary,
    bell_diagonal,
    bell_projector,
    check_symmetry,
    epsilon_family,
    fam_g_state,
    fam_state,
    fam_uu_state,
    horodecki_family,
    isotropic_state,
    isotropic_weights,
    max_entangled,
    pi_state,
    shift_operator,
    weyl_unitary,
)
from .witnesses import (
    DetectionResult,
    WitnessSpec,
    detect,
    evaluate,
    product_positivity_check,
    reduction_witness,
    witness_matrix,
)

__version__ = "0.1.0"
