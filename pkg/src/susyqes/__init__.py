"""Supersymmetric construction of quasi-exactly and conditionally-exactly solvable potentials."""
from .ces import (
    CesModel,
    SolvableBase,
    ces_model,
    ces_potential,
    dual_superpotential,
    epsilon_k,
    exact_spectrum,
    example1_model,
    example2_model,
    phi_from_dual,
    phi_ode_residual,
    shape_invariance_residual,
)
from .genfunc import (
    AdmissibilityReport,
    GeneratorFunction,
    HermiteOdd,
    HermiteRatio,
    Monomial,
    PseudoHermite,
    SinhFamily,
    check_admissible,
    eval_with_derivs,
    pseudo_hermite,
)
from .oracle import Grid, SpectralResult, TridiagonalOperator, discretize, lowest_eigenpairs, overlap, solve, sturm_count
from .susy import (
    EigenPair,
    PartnerPotentials,
    Superpotential,
    apply_B,
    eigenpair_from_phi,
    node_count,
    partner_potentials,
    riccati_residual,
    superpotentials_from_phi,
    unbroken_susy_check,
    wplus_from_wminus,
)

__version__ = "0.1.0"
