"""Certified approximate maximization of polynomials over the mixed-integer
points of bounded rational polytopes, entirely in exact rational arithmetic."""

from .errors import (
    InfeasibleError,
    MipolyError,
    NegativeObjectiveError,
    RefusedSizeError,
    UnboundedError,
)
from .instances import Instance, generate_an1, generate_parity, load_instance
from .integer_opt import (
    BoundsPair,
    MomentVector,
    OracleResult,
    bisection_solve,
    bounds,
    choose_k,
    lattice_points,
    moment_sum,
    moment_vector,
    oracle_optimize,
)
from .mixed_opt import (
    ConstancyResult,
    GridPlan,
    GridProblem,
    RangeState,
    fptas_maximize,
    grid_problem,
    is_constant,
    make_grid_plan,
    range_bounds,
    upper_bound,
    weak_maximize,
)
from .polynomials import CoeffStats, Polynomial, clear_denominators, lipschitz_constant, scale_substitute
from .polytopes import (
    MixedPoint,
    Polytope,
    PolytopeSummary,
    caratheodory_round,
    enumerate_grid_points,
    integral_scaling_factor,
    lp_extreme,
    mixed_round,
    slice_vertices,
    validate,
    vertices,
)
from .solution import Guarantee, Solution, replay_inequalities

__all__ = [
    "BoundsPair",
    "CoeffStats",
    "ConstancyResult",
    "GridPlan",
    "GridProblem",
    "Guarantee",
    "InfeasibleError",
    "Instance",
    "MipolyError",
    "MixedPoint",
    "MomentVector",
    "NegativeObjectiveError",
    "OracleResult",
    "Polynomial",
    "Polytope",
    "PolytopeSummary",
    "RangeState",
    "RefusedSizeError",
    "Solution",
    "UnboundedError",
    "bisection_solve",
    "bounds",
    "caratheodory_round",
    "choose_k",
    "clear_denominators",
    "enumerate_grid_points",
    "fptas_maximize",
    "generate_an1",
    "generate_parity",
    "grid_problem",
    "integral_scaling_factor",
    "is_constant",
    "lattice_points",
    "lipschitz_constant",
    "load_instance",
    "lp_extreme",
    "make_grid_plan",
    "mixed_round",
    "moment_sum",
    "moment_vector",
    "oracle_optimize",
    "range_bounds",
    "replay_inequalities",
    "scale_substitute",
    "slice_vertices",
    "upper_bound",
    "validate",
    "vertices",
    "weak_maximize",
]
