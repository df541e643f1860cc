"""Numerical toolkit for de Branges spaces built on Hermite-Biehler functions.

The package evaluates product-form Hermite-Biehler functions and their phase
machinery, verifies the generalized Hormander lower bound, computes the
embedding-norm bounds built from K(p) and the phase-derivative supremum,
evaluates reproducing kernels, and solves point-evaluation extremal problems
on finite-dimensional polynomial de Branges spaces.
"""

from .hb_core import (
    Combination,
    HBSpec,
    Kernel,
    MembershipError,
    PhaseProfile,
    RealPolynomial,
    RotationRealPart,
    SpecError,
    eval_AB,
    eval_E,
    hb_bar_check,
    level_crossings,
    phase,
    phase_derivative,
    phase_derivative_sup,
    theta,
)
from .numerics import QuadratureScheme, integrate, log_gamma, monotone_solve, sup_on_window
from .bounds import (
    C2_exact,
    K_p_closed,
    K_p_quadrature,
    asymptotic_check,
    embedding_bound,
    interval_energy,
    kernel_eval,
    nonasymptotic_bound_pth_power,
)
from .hormander import (
    BracketUnavailableError,
    HormanderReport,
    MaxAtInfinityError,
    WrongSignError,
    bracket_A_zeros,
    bracket_B_zeros,
    local_expansion_check,
    locate_extremum,
    verify_sign_free,
    verify_theorem1,
)
from .extremal import (
    ExtremalProblem,
    ExtremalSolution,
    KernelNodeBasis,
    PolynomialBasis,
    extract_zeros,
    mean_type_diagnostic,
    orthogonality_residual,
    plateau_interval,
    problem_from_dict,
    problem_to_dict,
    separation_report,
    solve,
    symmetrize_real,
)

__version__ = "0.1.0"
