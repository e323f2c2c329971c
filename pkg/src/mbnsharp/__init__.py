"""Sharp constants in weighted polynomial inequalities.

Computes the normalized supremum of |P^(N)(0)| over degree-n polynomials
with unit weighted L_p norm, for exponential weights on bounded and
unbounded intervals, and reproduces the convergence of these constants to
the corresponding limit constants for entire functions of exponential type.
"""

from .weights import (
    WeightSpec,
    ClassReport,
    WeightDomainError,
    UndefinedWeightError,
    WeightClassError,
    freud,
    erdos_exp,
    bounded_rational,
    unweighted,
    custom,
    parse_weight,
    eval_W,
    eval_T,
    validate_class,
)
from .quadrature import (
    QuadratureRule,
    QuadratureError,
    build_rule,
    weighted_Lp_norm,
    mrs_integrand_a,
    mrs_b_integral,
)
from .mrs import MRSNumbers, BracketingError, compute_a_n, compute_b_n, mrs_table
from .reference import (
    EValue,
    GORBACHEV_BAND,
    chebyshev_derivative_at_zero,
    markov_constant,
    reference_E,
)
from .solvers import (
    Polynomial,
    SharpConstantQuery,
    SharpConstantResult,
    SolverError,
    OrthonormalBasis,
    restricted_domain,
    solve,
    solve_p2,
    solve_pinf,
    solve_general_p,
    gram_route_value,
)
from .lab import (
    SweepRow,
    InvariantReport,
    DiagnosticReport,
    CSV_HEADER,
    sweep,
    verify_invariants,
    coefficient_growth_diagnostic,
    extrapolate_limit,
    rows_to_csv,
    rows_from_csv,
)

__version__ = "0.1.0"
