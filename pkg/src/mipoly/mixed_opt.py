"""Mixed-integer drivers: certified grid plans, the approximation schemes,
constancy decision and range bracketing.

The route to a (1 - eps) guarantee for a non-negative objective:

  1. clear denominators, so grid values become multiples of a known unit;
  2. compute a grid plan: a step bound delta and a grid denominator m such
     that some grid point lies within delta of the true optimizer and the
     objective moves by at most half the allowed error over that step;
  3. scale the grid problem to a pure-integer instance and run the
     integer engine at tolerance eps/2;
  4. map the point back.  The two half-tolerances compose to (1 - eps).

For sign-indefinite objectives, iterated range bracketing first pins the
objective's range to constant relative quality; the shifted objective is
then non-negative and the scheme above applies, with the error measured
against the range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleError, MipolyError, RefusedSizeError, UnboundedError
from .exact import RatLike, ceil_log2, format_rational
from .integer_opt import EngineResult, bisect_on_values
from .polynomials import Polynomial, clear_denominators, lipschitz_constant, scale_substitute
from .polytopes import (
    MixedPoint,
    Polytope,
    PolytopeSummary,
    enumerate_grid_points,
    integral_scaling_factor,
    scaled_grid_points,
    validate,
)
from .solution import Guarantee, Inequality, Solution

DEFAULT_MAX_GRID_POINTS = 200_000


# -- plan and grid-problem types ------------------------------------------------


@dataclass(frozen=True)
class GridPlan:
    """Certified parameters instantiating the approximation guarantee.

    delta is the allowed rounding distance, m the grid denominator; both
    are None/degenerate when the objective is constant or there are no
    continuous variables.
    """

    epsilon: Fraction
    M: int
    Delta: int
    C: Fraction
    r: int
    D: int
    L: Fraction
    delta: Fraction | None
    m: int

    def to_json(self) -> dict:
        return {
            "epsilon": format_rational(self.epsilon),
            "M": self.M,
            "Delta": self.Delta,
            "C": format_rational(self.C),
            "r": self.r,
            "D": self.D,
            "L": format_rational(self.L),
            "delta": None if self.delta is None else format_rational(self.delta),
            "m": self.m,
        }


@dataclass(frozen=True)
class GridProblem:
    """Pure-integer form of a grid problem, with the map back to source space.

    Constraints are A t + (m B) z <= m b over integer (t, z); the
    objective satisfies objective(m x, z) = m**D * f(x, z).
    """

    polytope: Polytope
    objective: Polynomial
    m: int
    source_d1: int
    degree: int

    def to_source_point(self, point: tuple[int, ...]) -> MixedPoint:
        x = tuple(Fraction(c, self.m) for c in point[: self.source_d1])
        return MixedPoint(x, tuple(point[self.source_d1 :]), self.m)


@dataclass(frozen=True)
class RangeState:
    """One step of range bracketing: L_i <= f_min <= f_max <= U_i."""

    i: int
    L: Fraction
    U: Fraction

    def to_json(self) -> dict:
        return {"i": self.i, "L": format_rational(self.L), "U": format_rational(self.U)}


@dataclass(frozen=True)
class ConstancyResult:
    """Verdict of the finite constancy test, with a witness when non-constant."""

    constant: bool
    grid_m: int
    sample: MixedPoint
    value: Fraction | None = None
    witness: tuple[MixedPoint, MixedPoint] | None = None
    witness_values: tuple[Fraction, Fraction] | None = None


# -- plan construction ----------------------------------------------------------


def _require_integer_coefficients(f: Polynomial, where: str) -> None:
    if any(c.denominator != 1 for c in f.terms.values()):
        raise ValueError(f"{where} requires integer coefficients; clear denominators first")


def _check_epsilon(epsilon: RatLike) -> Fraction:
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    return eps


def _checked_summary(P: Polytope) -> PolytopeSummary:
    summary = validate(P)
    if not summary.bounded:
        raise UnboundedError("the constraint system is unbounded")
    if not summary.feasible:
        raise InfeasibleError("the polytope is empty")
    return summary


def grid_problem(P: Polytope, f: Polynomial, m: int) -> GridProblem:
    """Scale the 1/m grid problem into a pure-integer instance.

    (x, z) -> (m x, z) is a bijection between grid-feasible points of P
    and integer points of the returned polytope; objective values scale
    by exactly m**D.
    """
    if m < 1:
        raise ValueError("grid denominator must be positive")
    _require_integer_coefficients(f, "grid_problem")
    if f.dims != P.dim:
        raise ValueError("objective dimension mismatch")
    scaled = scale_substitute(f, m, P.d1)
    B_rows = [ra + tuple(m * v for v in rb) for ra, rb in zip(P.A, P.B)]
    integral = Polytope(
        0,
        P.dim,
        [()] * P.num_rows,
        B_rows,
        [m * bi for bi in P.b],
    )
    return GridProblem(
        polytope=integral,
        objective=scaled,
        m=m,
        source_d1=P.d1,
        degree=f.total_degree,
    )


def make_grid_plan(
    P: Polytope, f: Polynomial, epsilon: RatLike, summary: PolytopeSummary | None = None
) -> GridPlan:
    """Certified (delta, m) for approximating the mixed optimum on a 1/m grid.

    For a non-constant integer objective the plan guarantees both that a
    grid point lies within delta of the optimizer and that the objective
    changes by at most (eps/2) times a certified lower bound on the
    optimum over that distance.  Constant objectives and pure-integer
    instances degenerate gracefully.
    """
    eps = _check_epsilon(epsilon)
    _require_integer_coefficients(f, "make_grid_plan")
    if summary is None:
        summary = _checked_summary(P)
    stats = f.coeff_stats()
    Delta = integral_scaling_factor(P)
    M = summary.M
    L = lipschitz_constant(stats, M)
    d1 = P.d1
    if d1 == 0:
        return GridPlan(eps, M, Delta, stats.C, stats.r, stats.D, L, None, 1)
    if L == 0:
        # constant objective: any slice-deciding grid works
        m = Delta * max(1, (stats.D + 1) * d1)
        return GridPlan(eps, M, Delta, stats.C, stats.r, stats.D, L, None, m)
    base = Fraction((stats.D * d1 * Delta) ** stats.D)
    delta = eps / (2 * base * L)
    ceil_term = math.ceil(Fraction(4) / eps * base * L * d1 * M)
    m = Delta * max(1, ceil_term)
    return GridPlan(eps, M, Delta, stats.C, stats.r, stats.D, L, delta, m)


def grid_size_estimate(summary: PolytopeSummary, d1: int, m: int) -> int:
    """Upper estimate of |P on the 1/m grid| from the coordinate box."""
    estimate = 1
    for i, (lo, hi) in enumerate(summary.box):
        width = hi - lo
        estimate *= m * width + 1 if i < d1 else width + 1
    return estimate


# -- shared grid cache -----------------------------------------------------------


@dataclass
class _GridCache:
    """Enumerated scaled grid with base objective values, reused across calls."""

    problem: GridProblem
    points: list[tuple[int, ...]]
    base_values: list[int]  # m**D * f at each point

    @property
    def unit(self) -> int:
        """Grid values of f are integer multiples of 1/unit."""
        return self.problem.m**self.problem.degree

    def first_point(self) -> MixedPoint:
        return self.problem.to_source_point(self.points[0])


def _build_cache(
    P: Polytope, f_int: Polynomial, m: int, summary: PolytopeSummary
) -> _GridCache:
    gp = grid_problem(P, f_int, m)
    points: list[tuple[int, ...]] = []
    values: list[int] = []
    for t, z in scaled_grid_points(P, m, summary):
        point = t + z
        points.append(point)
        values.append(gp.objective.evaluate_int(point))
    return _GridCache(problem=gp, points=points, base_values=values)


# -- constancy -------------------------------------------------------------------


def is_constant(
    P: Polytope, f: Polynomial, summary: PolytopeSummary | None = None
) -> ConstancyResult:
    """Decide whether f is constant on the mixed-integer feasible set.

    Constancy on the full set is equivalent to constancy on a finite grid
    whose denominator is Delta * max(1, (D + 1) * d1); the scan stops at
    the first pair of differing values.  For a non-constant objective the
    witness gap is at least m**(-D) divided by the denominator-clearing
    multiplier of f.
    """
    if summary is None:
        summary = _checked_summary(P)
    if f.dims != P.dim:
        raise ValueError("objective dimension mismatch")
    f_int, _ = clear_denominators(f)
    D = f_int.total_degree
    m = integral_scaling_factor(P) * max(1, (D + 1) * P.d1)
    first: MixedPoint | None = None
    first_value: Fraction | None = None
    for point in enumerate_grid_points(P, m, summary):
        value = f.evaluate(point.coords)
        if first is None:
            first, first_value = point, value
        elif value != first_value:
            return ConstancyResult(
                constant=False,
                grid_m=m,
                sample=first,
                witness=(first, point),
                witness_values=(first_value, value),
            )
    if first is None:
        raise InfeasibleError(
            "no mixed-integer feasible points; constancy is undefined"
        )
    return ConstancyResult(constant=True, grid_m=m, sample=first, value=first_value)


# -- non-negative FPTAS ------------------------------------------------------------


def _engine_inequality_json(engine: EngineResult, epsilon: Fraction) -> list[dict]:
    return [iq.to_json() for iq in engine.inequalities(epsilon)]


def _constant_solution(
    sample: MixedPoint, f: Polynomial, epsilon: Fraction, grid_m: int
) -> Solution:
    value = f.evaluate(sample.coords)
    certificate = {
        "constant": True,
        "grid_m": grid_m,
        "inequalities": [],
    }
    return Solution(sample, value, Guarantee("constant", epsilon), certificate)


def fptas_maximize(
    P: Polytope,
    f: Polynomial,
    epsilon: RatLike,
    *,
    grid_m: int | None = None,
    max_grid_points: int = DEFAULT_MAX_GRID_POINTS,
) -> Solution:
    """(1 - epsilon)-maximizer of a non-negative objective over P's mixed points.

    Requires f >= 0 on the feasible set (negative values discovered along
    the way raise NegativeObjectiveError).  When the certified grid would
    exceed max_grid_points the call refuses with RefusedSizeError unless
    grid_m overrides the plan; override runs are uncertified against the
    true optimum but still certified against their own grid.
    """
    eps = _check_epsilon(epsilon)
    if f.dims != P.dim:
        raise ValueError("objective dimension mismatch")
    summary = _checked_summary(P)
    f_int, mult = clear_denominators(f)

    constancy = is_constant(P, f, summary)
    if constancy.constant:
        return _constant_solution(constancy.sample, f, eps, constancy.grid_m)

    plan = make_grid_plan(P, f_int, eps, summary)
    certified = grid_m is None
    m = plan.m if certified else grid_m
    if m < 1:
        raise ValueError("grid override must be positive")
    estimate = grid_size_estimate(summary, P.d1, m)
    if certified and estimate > max_grid_points:
        raise RefusedSizeError(m, estimate, max_grid_points)

    cache = _build_cache(P, f_int, m, summary)
    if not cache.points:
        # cannot happen for certified m (a multiple of Delta); an override
        # grid may genuinely miss every slice
        raise InfeasibleError(f"the 1/{m} grid contains no feasible point")
    engine = bisect_on_values(cache.points, cache.base_values, eps / 2)
    point = cache.problem.to_source_point(engine.point)
    value = f.evaluate(point.coords)
    scale = mult * cache.unit
    if value * scale != engine.value:
        raise MipolyError("scaled engine value disagrees with direct evaluation")

    inequalities: list[Inequality] = []
    if certified and plan.delta is not None:
        base = Fraction((plan.D * P.d1 * plan.Delta) ** plan.D)
        inequalities.append(
            Inequality(
                "grid_covers_rounding_threshold",
                Fraction(m),
                ">=",
                plan.Delta * 2 * P.d1 * plan.M / plan.delta,
            )
        )
        inequalities.append(
            Inequality(
                "step_error_within_budget",
                plan.L * plan.delta,
                "<=",
                eps / 2 / base,
            )
        )
    inequalities.extend(engine.inequalities(eps / 2))
    inequalities.append(
        Inequality("value_consistent_with_engine", value * scale, "==", Fraction(engine.value))
    )
    inequalities.append(
        Inequality(
            "half_tolerances_compose",
            (1 - eps / 2) ** 2,
            ">=",
            1 - eps,
        )
    )
    certificate = {
        "certified": certified,
        "plan": plan.to_json(),
        "grid_m": m,
        "multiplier": mult,
        "engine": engine.to_json(),
        "inequalities": [iq.to_json() for iq in inequalities],
    }
    return Solution(point, value, Guarantee("fptas", eps), certificate)


def upper_bound(
    P: Polytope,
    f: Polynomial,
    delta: RatLike,
    *,
    grid_m: int | None = None,
    max_grid_points: int = DEFAULT_MAX_GRID_POINTS,
) -> Fraction:
    """Upper bound u with f_max <= u <= (1 + delta) * f_max, f non-negative."""
    d = Fraction(delta)
    if d <= 0:
        raise ValueError("delta must be positive")
    eps = d / (1 + d)
    sol = fptas_maximize(P, f, eps, grid_m=grid_m, max_grid_points=max_grid_points)
    return (1 + d) * sol.value


# -- range bracketing ---------------------------------------------------------------


@dataclass
class _RangeMachine:
    """Shared state for the bracketing iterations of one instance.

    The grid plan is computed once from the non-constant part of the
    objective: shifting by a constant changes neither the step bound nor
    the grid, so every iteration reuses the same cache.
    """

    P: Polytope
    summary: PolytopeSummary
    f_int: Polynomial
    f_nc: Polynomial
    delta: Fraction
    eps_inner: Fraction
    plan: GridPlan | None
    cache: _GridCache | None
    constant_value: Fraction | None
    sample: MixedPoint

    def upper_for_shifted(self, sign: int, shift: Fraction) -> Fraction:
        """u with g_max <= u <= (1 + delta) * g_max for g = sign * f + shift.

        g must be non-negative on the feasible set, which the bracketing
        invariants guarantee.
        """
        if self.constant_value is not None:
            g_max = sign * self.constant_value + shift
            return (1 + self.delta) * g_max
        assert self.cache is not None
        unit = self.cache.unit
        shift_scaled = shift * unit
        mult = shift_scaled.denominator
        term = int(shift_scaled * mult)
        values = [mult * sign * base + term for base in self.cache.base_values]
        engine = bisect_on_values(self.cache.points, values, self.eps_inner / 2)
        g_value = Fraction(engine.value, mult * unit)
        return (1 + self.delta) * g_value


def _make_range_machine(
    P: Polytope,
    f_int: Polynomial,
    delta: Fraction,
    summary: PolytopeSummary,
    max_grid_points: int,
) -> _RangeMachine:
    eps_inner = delta / (1 + delta)
    f_nc = f_int.drop_constant_term()
    if f_nc.is_zero():
        Delta = integral_scaling_factor(P)
        sample = next(enumerate_grid_points(P, Delta, summary), None)
        if sample is None:
            raise InfeasibleError("no mixed-integer feasible points")
        return _RangeMachine(
            P, summary, f_int, f_nc, delta, eps_inner,
            plan=None, cache=None,
            constant_value=f_int.constant_term(), sample=sample,
        )
    plan = make_grid_plan(P, f_nc, eps_inner, summary)
    estimate = grid_size_estimate(summary, P.d1, plan.m)
    if estimate > max_grid_points:
        raise RefusedSizeError(plan.m, estimate, max_grid_points)
    cache = _build_cache(P, f_int, plan.m, summary)
    if not cache.points:
        raise InfeasibleError("no mixed-integer feasible points")
    return _RangeMachine(
        P, summary, f_int, f_nc, delta, eps_inner,
        plan=plan, cache=cache, constant_value=None, sample=cache.first_point(),
    )


def _initial_bracket(f_int: Polynomial, summary: PolytopeSummary) -> tuple[Fraction, Fraction]:
    stats = f_int.coeff_stats()
    M_eff = max(summary.M, 1)
    U0 = stats.r * stats.C * Fraction(M_eff) ** stats.D
    return -U0, U0


def _range_states(machine: _RangeMachine, n: int) -> list[RangeState]:
    L, U = _initial_bracket(machine.f_int, machine.summary)
    states = [RangeState(0, L, U)]
    for i in range(n):
        upper_of_g = machine.upper_for_shifted(+1, -L)
        U_next = L + upper_of_g
        upper_of_h = machine.upper_for_shifted(-1, U)
        L_next = U - upper_of_h
        L, U = L_next, U_next
        states.append(RangeState(i + 1, L, U))
    return states


def range_bounds(
    P: Polytope,
    f: Polynomial,
    delta: RatLike,
    n: int,
    *,
    max_grid_points: int = DEFAULT_MAX_GRID_POINTS,
) -> list[RangeState]:
    """Bracketing sequence [L_i, U_i] around the objective's range on P.

    Every state satisfies L_i <= f_min <= f_max <= U_i, and consecutive
    widths contract: U_{i+1} - L_{i+1} <= delta (U_i - L_i) plus
    (1 + delta) times the true range.  The same grid is reused across
    iterations.  f must have integer coefficients.
    """
    d = Fraction(delta)
    if not 0 < d < 1:
        raise ValueError("delta must lie strictly between 0 and 1")
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    _require_integer_coefficients(f, "range_bounds")
    if f.dims != P.dim:
        raise ValueError("objective dimension mismatch")
    summary = _checked_summary(P)
    machine = _make_range_machine(P, f, d, summary, max_grid_points)
    return _range_states(machine, n)


# -- weak (range-relative) scheme ----------------------------------------------------


def weak_maximize(
    P: Polytope,
    f: Polynomial,
    epsilon: RatLike,
    *,
    max_grid_points: int = DEFAULT_MAX_GRID_POINTS,
) -> Solution:
    """Maximizer within epsilon of optimal, measured against the range of f.

    Works for arbitrary (sign-indefinite) objectives: range bracketing
    with internal ratio 1/2 either certifies that f is constant on the
    feasible set or produces a lower bound L_n whose shift makes f
    non-negative; the non-negative scheme then runs at the budgeted
    tolerance 2/7 * epsilon, which composes to the range-relative bound.
    """
    eps = _check_epsilon(epsilon)
    if f.dims != P.dim:
        raise ValueError("objective dimension mismatch")
    summary = _checked_summary(P)
    f_int, mult = clear_denominators(f)
    delta = Fraction(1, 2)
    machine = _make_range_machine(P, f_int, delta, summary, max_grid_points)

    stats = f_int.coeff_stats()
    Delta = integral_scaling_factor(P)
    m_c = Delta * max(1, (stats.D + 1) * P.d1)

    if machine.constant_value is not None:
        return _constant_solution(machine.sample, f, eps, m_c)

    L0, U0 = _initial_bracket(f_int, summary)
    n = ceil_log2(2 * Fraction(m_c) ** stats.D * (U0 - L0))
    states = _range_states(machine, n)
    L_n, U_n = states[-1].L, states[-1].U
    gate = Fraction(1, 2 * m_c**stats.D)
    if U_n - L_n <= gate:
        solution = _constant_solution(machine.sample, f, eps, m_c)
        solution.certificate.update(
            {
                "range_iterations": n,
                "L_n": format_rational(L_n),
                "U_n": format_rational(U_n),
                "gate": format_rational(gate),
            }
        )
        return solution

    eps_prime = eps * Fraction(2, 7)
    final_plan = make_grid_plan(P, machine.f_nc, eps_prime, summary)
    estimate = grid_size_estimate(summary, P.d1, final_plan.m)
    if estimate > max_grid_points:
        raise RefusedSizeError(final_plan.m, estimate, max_grid_points)
    cache = _build_cache(P, f_int, final_plan.m, summary)
    if not cache.points:
        raise InfeasibleError("no mixed-integer feasible points")

    unit = cache.unit
    shift_scaled = -L_n * unit
    shift_mult = shift_scaled.denominator
    term = int(shift_scaled * shift_mult)
    values = [shift_mult * base + term for base in cache.base_values]
    engine = bisect_on_values(cache.points, values, eps_prime / 2)
    point = cache.problem.to_source_point(engine.point)
    value = f.evaluate(point.coords)

    shifted_value = Fraction(engine.value, shift_mult * unit)
    if (value * mult - L_n) != shifted_value:
        raise MipolyError("shifted engine value disagrees with direct evaluation")

    inequalities = [
        Inequality("range_ordered", L_n, "<=", U_n),
        Inequality("range_gate_shows_nonconstant", U_n - L_n, ">", gate),
        Inequality(
            "weak_budget_composes",
            eps_prime * Fraction(7, 2),
            "<=",
            eps,
        ),
        *engine.inequalities(eps_prime / 2),
        Inequality(
            "value_consistent_with_engine",
            (value * mult - L_n) * shift_mult * unit,
            "==",
            Fraction(engine.value),
        ),
    ]
    certificate = {
        "certified": True,
        "plan": final_plan.to_json(),
        "range_plan": machine.plan.to_json() if machine.plan else None,
        "grid_m": final_plan.m,
        "multiplier": mult,
        "range_iterations": n,
        "L_n": format_rational(L_n),
        "U_n": format_rational(U_n),
        "gate": format_rational(gate),
        "engine": engine.to_json(),
        "inequalities": [iq.to_json() for iq in inequalities],
    }
    return Solution(point, value, Guarantee("weak", eps), certificate)
