"""Closed-form spectra and wavefunctions for deformed shape-invariant potentials
with a position-dependent effective mass, verified against an in-repo matrix
oracle."""

from .core import (
    AmbiguityParams,
    ChainError,
    ConvergenceError,
    DeformingFunction,
    DegenerateClass,
    DomainError,
    Grid,
    Interval,
    NoRealRoot,
    NonPositiveError,
    NotFound,
    ParameterError,
    PdemError,
    RangeError,
    SingularPoint,
    SingularPotential,
    ZeroNorm,
    ambiguity_reduce,
    deforming_eval,
    positivity_check,
)
from .ordering import OrderingContext, recover_initial_potential, v_tilde_eval, vonroos_apply
from .si_engine import (
    ChainProblem,
    ParameterChain,
    SuperpotentialClass,
    partner_potential,
    si_residual,
    solve_chain,
    w_eval,
)
from .catalog import (
    CatalogEntry,
    CountingResult,
    bound_state_count,
    closed_energy,
    ground_state_closed,
    list_entries,
    lookup,
)
from .oracle import (
    Spectrum,
    TridiagonalOperator,
    discretize_deformed,
    discretize_vonroos,
    eigenpairs,
    equivalence_check,
    quadrature,
    sturm_count,
)
from .wavefunctions import (
    AdmissibilityVerdict,
    DeformedPolynomial,
    admissibility_check,
    excited_state_eval,
    ground_state_numeric,
    normalize,
    polynomial_chain,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
