"""Pure-integer optimization engine: moment sums, power-mean bounds, bisection.

For a non-negative integer objective f on the lattice points of a polytope,
the k-th moment sum S_k = sum of f(p)**k squeezes the maximum f* between

    L_k = ceil((S_k / N) ** (1/k))   and   U_k = floor(S_k ** (1/k)),

where N is the number of lattice points.  Both roots are evaluated by
exact integer k-th root extraction, never by floating point.  Picking k
so that N <= (1 + eps)**k makes L_k a (1 - eps)-approximation of f*, and
bisection of the bounding box recovers a point achieving at least L_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InfeasibleError, NegativeObjectiveError
from .exact import RatLike, format_rational, kth_root_ceil, kth_root_floor
from .polynomials import Polynomial
from .polytopes import MixedPoint, Polytope, scaled_grid_points
from .solution import Guarantee, Inequality, Solution

PointSource = Polytope | Iterable[Sequence[RatLike]]


@dataclass(frozen=True)
class MomentVector:
    """Lattice point count N and the moment sums k -> sum of f**k."""

    N: int
    values: dict[int, Fraction]


@dataclass(frozen=True)
class BoundsPair:
    """Certified enclosure L_k <= f* <= U_k from the k-th moment sum."""

    k: int
    L: int
    U: int


@dataclass(frozen=True)
class EngineResult:
    """Outcome of a bisection run, with the root bounds it was checked against."""

    index: int
    point: tuple[int, ...]
    value: int
    L_root: int
    U_root: int
    k: int
    N: int
    fallback_used: bool

    def inequalities(self, epsilon: Fraction) -> list[Inequality]:
        """The replayable claims backing the (1 - eps) guarantee."""
        one_plus = 1 + epsilon
        return [
            Inequality("count_within_tolerance", Fraction(self.N), "<=", one_plus**self.k),
            Inequality("bounds_ordered", Fraction(self.L_root), "<=", Fraction(self.U_root)),
            Inequality(
                "value_at_least_lower_bound",
                Fraction(self.value),
                ">=",
                Fraction(self.L_root),
            ),
            Inequality(
                "lower_bound_near_upper",
                one_plus * self.L_root,
                ">=",
                Fraction(self.U_root),
            ),
            Inequality(
                "value_near_upper_bound",
                Fraction(self.value) * one_plus,
                ">=",
                Fraction(self.U_root),
            ),
        ]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "N": self.N,
            "L": format_rational(self.L_root),
            "U": format_rational(self.U_root),
            "value": format_rational(self.value),
            "fallback_used": self.fallback_used,
        }


def lattice_points(P: Polytope) -> list[tuple[int, ...]]:
    """All points of P with every coordinate integral, in lexicographic order."""
    return [t + z for t, z in scaled_grid_points(P, 1)]


def _resolve_points(source: PointSource) -> list[tuple[Fraction, ...]]:
    if isinstance(source, Polytope):
        return [tuple(Fraction(c) for c in pt) for pt in lattice_points(source)]
    resolved = []
    for item in source:
        if isinstance(item, MixedPoint):
            resolved.append(item.coords)
        else:
            resolved.append(tuple(Fraction(c) for c in item))
    return resolved


def moment_sum(source: PointSource, f: Polynomial, k: int) -> Fraction:
    """Exact sum of f(p)**k over the points; 0 for an empty set."""
    if k < 0:
        raise ValueError("moment order must be non-negative")
    total = Fraction(0)
    for pt in _resolve_points(source):
        total += f.evaluate(pt) ** k
    return total


def moment_vector(source: PointSource, f: Polynomial, ks: Sequence[int]) -> MomentVector:
    """Count and moment sums for several orders in one enumeration pass."""
    points = _resolve_points(source)
    values = [f.evaluate(pt) for pt in points]
    sums = {int(k): sum((v**k for v in values), Fraction(0)) for k in ks}
    return MomentVector(N=len(points), values=sums)


def bounds(P: Polytope, f: Polynomial, k: int) -> BoundsPair:
    """Power-mean enclosure of the maximum of f over the lattice points of P.

    f must have integer coefficients and be non-negative on the lattice
    points (a documented precondition; only arithmetic impossibilities
    are reported, via NegativeObjectiveError).
    """
    if k < 1:
        raise ValueError("bound order k must be positive")
    points = lattice_points(P)
    if not points:
        raise InfeasibleError("no lattice points in the polytope")
    values = [f.evaluate_int(pt) for pt in points]
    total = sum(v**k for v in values)
    if total < 0:
        raise NegativeObjectiveError(
            "moment sum is negative; the objective is not non-negative here"
        )
    return BoundsPair(
        k=k,
        L=kth_root_ceil(Fraction(total, len(points)), k),
        U=kth_root_floor(total, k),
    )


def choose_k(epsilon: RatLike, N: int) -> int:
    """Smallest k >= 1 with N <= (1 + epsilon)**k, by exact comparison."""
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    if N < 1:
        raise ValueError("N must be positive")
    k = 1
    power = 1 + eps
    while power < N:
        power *= 1 + eps
        k += 1
    return k


def bisect_on_values(
    points: Sequence[tuple[int, ...]],
    values: Sequence[int],
    epsilon: RatLike,
) -> EngineResult:
    """Bisection over integer points with known non-negative integer values.

    The box of the remaining points is split along its longest axis and
    the search descends into the half with the larger power-mean lower
    bound L_k (ties go to the lexicographically smaller half).  The mean
    of a region lies between the means of its two parts, so L_k never
    decreases along the path; the surviving point therefore achieves at
    least the root L_k, which is within the (1 - eps) factor of the
    maximum by the choice of k.
    """
    eps = Fraction(epsilon)
    N = len(points)
    if N == 0:
        raise InfeasibleError("no points to bisect")
    for v in values:
        if v < 0:
            raise NegativeObjectiveError(
                f"objective value {v} is negative on an enumerated point"
            )
    k = choose_k(eps, N)
    powers = [v**k for v in values]
    total = sum(powers)
    U_root = kth_root_floor(total, k)
    L_root = kth_root_ceil(Fraction(total, N), k)

    dim = len(points[0])
    idxs = list(range(N))
    while len(idxs) > 1:
        lows = [min(points[i][a] for i in idxs) for a in range(dim)]
        highs = [max(points[i][a] for i in idxs) for a in range(dim)]
        axis = max(range(dim), key=lambda a: highs[a] - lows[a])
        mid = (lows[axis] + highs[axis]) // 2
        lower = [i for i in idxs if points[i][axis] <= mid]
        upper = [i for i in idxs if points[i][axis] > mid]
        # the box is tight, so both halves are nonempty
        L_low = kth_root_ceil(Fraction(sum(powers[i] for i in lower), len(lower)), k)
        L_up = kth_root_ceil(Fraction(sum(powers[i] for i in upper), len(upper)), k)
        idxs = lower if L_low >= L_up else upper

    best = idxs[0]
    fallback = False
    if values[best] < L_root:
        # unreachable given the descent invariant; kept as a hard safety net
        fallback = True
        best = max(range(N), key=lambda i: (values[i], [-c for c in points[i]]))
    return EngineResult(
        index=best,
        point=points[best],
        value=values[best],
        L_root=L_root,
        U_root=U_root,
        k=k,
        N=N,
        fallback_used=fallback,
    )


def bisection_solve(P: Polytope, f: Polynomial, epsilon: RatLike) -> Solution:
    """Point of P's lattice with value at least (1 - epsilon) times the maximum.

    f must have integer coefficients and be non-negative on the lattice
    points; epsilon lies strictly between 0 and 1.
    """
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    points = lattice_points(P)
    if not points:
        raise InfeasibleError("no lattice points in the polytope")
    values = [f.evaluate_int(pt) for pt in points]
    result = bisect_on_values(points, values, eps)
    pt = result.point
    mixed = MixedPoint(
        tuple(Fraction(c) for c in pt[: P.d1]), pt[P.d1 :], 1
    )
    certificate = {
        "engine": result.to_json(),
        "inequalities": [iq.to_json() for iq in result.inequalities(eps)],
    }
    return Solution(
        point=mixed,
        value=Fraction(result.value),
        guarantee=Guarantee("fptas", eps),
        certificate=certificate,
    )


@dataclass(frozen=True)
class OracleResult:
    """Exact maximum and minimum from brute-force enumeration."""

    max: Solution
    min: Solution


def oracle_optimize(points: Iterable[MixedPoint], f: Polynomial) -> OracleResult:
    """Exact argmax and argmin over an enumerated stream of points.

    Ties are broken toward the lexicographically smallest point, so the
    result does not depend on the stream order.
    """
    best_max: tuple[Fraction, MixedPoint] | None = None
    best_min: tuple[Fraction, MixedPoint] | None = None
    for point in points:
        value = f.evaluate(point.coords)
        if (
            best_max is None
            or value > best_max[0]
            or (value == best_max[0] and point.coords < best_max[1].coords)
        ):
            best_max = (value, point)
        if (
            best_min is None
            or value < best_min[0]
            or (value == best_min[0] and point.coords < best_min[1].coords)
        ):
            best_min = (value, point)
    if best_max is None or best_min is None:
        raise InfeasibleError("cannot optimize over an empty point stream")
    return OracleResult(
        max=Solution(best_max[1], best_max[0], Guarantee("oracle", Fraction(0))),
        min=Solution(best_min[1], best_min[0], Guarantee("oracle", Fraction(0))),
    )
