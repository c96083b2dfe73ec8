"""Exact polyhedral geometry for systems A x + B z <= b.

The first d1 variables are continuous, the remaining d2 are integer.
All constraint data is integral and all computations are exact: linear
programs are solved by enumerating basic solutions, which is polynomial
because the dimension is fixed and small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

from .errors import InfeasibleError, MipolyError, UnboundedError
from .exact import RatLike, det, format_rational, lcm_all

Row = tuple[int, ...]
Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class MixedPoint:
    """A point with continuous part on a 1/m grid and integral part z."""

    x: tuple[Fraction, ...]
    z: tuple[int, ...]
    grid_denominator: int

    def __post_init__(self):
        if self.grid_denominator < 1:
            raise ValueError("grid denominator must be positive")
        for xi in self.x:
            if (xi * self.grid_denominator).denominator != 1:
                raise ValueError(f"{xi} is not on the 1/{self.grid_denominator} grid")

    @property
    def coords(self) -> Point:
        return tuple(self.x) + tuple(Fraction(zi) for zi in self.z)

    def to_json(self) -> dict:
        return {
            "x": [format_rational(xi) for xi in self.x],
            "z": list(self.z),
            "grid_denominator": self.grid_denominator,
        }


class Polytope:
    """H-representation A x + B z <= b with integer data."""

    __slots__ = ("d1", "d2", "A", "B", "b")

    def __init__(
        self,
        d1: int,
        d2: int,
        A: Sequence[Sequence[int]],
        B: Sequence[Sequence[int]],
        b: Sequence[int],
    ):
        if d1 < 0 or d2 < 0 or d1 + d2 == 0:
            raise ValueError("need at least one variable")
        rows = len(b)
        A = tuple(tuple(int(v) for v in row) for row in A)
        B = tuple(tuple(int(v) for v in row) for row in B)
        bb = tuple(int(v) for v in b)
        if len(A) != rows or len(B) != rows:
            raise ValueError("A, B and b must have the same number of rows")
        for row in A:
            if len(row) != d1:
                raise ValueError(f"A row {list(row)} has {len(row)} entries, expected {d1}")
        for row in B:
            if len(row) != d2:
                raise ValueError(f"B row {list(row)} has {len(row)} entries, expected {d2}")
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", d2)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "b", bb)

    def __setattr__(self, name, value):
        raise AttributeError("Polytope is immutable")

    @property
    def dim(self) -> int:
        return self.d1 + self.d2

    @property
    def num_rows(self) -> int:
        return len(self.b)

    def full_rows(self) -> list[Row]:
        """Rows of the combined matrix [A | B]."""
        return [ra + rb for ra, rb in zip(self.A, self.B)]

    def contains(self, point: Sequence[RatLike]) -> bool:
        """Exact feasibility check of a full-dimensional point."""
        if len(point) != self.dim:
            raise ValueError("point dimension mismatch")
        values = [Fraction(v) for v in point]
        for row, rhs in zip(self.full_rows(), self.b):
            if sum(c * v for c, v in zip(row, values)) > rhs:
                return False
        return True

    def contains_mixed(self, point: MixedPoint) -> bool:
        return (
            len(point.x) == self.d1
            and len(point.z) == self.d2
            and self.contains(point.coords)
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polytope)
            and (self.d1, self.d2, self.A, self.B, self.b)
            == (other.d1, other.d2, other.A, other.B, other.b)
        )

    def __hash__(self) -> int:
        return hash((self.d1, self.d2, self.A, self.B, self.b))

    def __repr__(self) -> str:
        return f"Polytope(d1={self.d1}, d2={self.d2}, rows={self.num_rows})"


@dataclass(frozen=True)
class PolytopeSummary:
    """Output of validate(): status flags, coordinate box and its radius M.

    box holds per-coordinate integer bounds (floor of the exact minimum,
    ceiling of the exact maximum); M is the largest absolute bound.  Both
    are only meaningful when the polytope is feasible and bounded.
    """

    feasible: bool
    bounded: bool
    M: int
    box: tuple[tuple[int, int], ...]


# -- exact linear algebra ----------------------------------------------------


def _solve_square(matrix: list[Sequence[RatLike]], rhs: Sequence[RatLike]) -> Point | None:
    """Solve a square system exactly; None when singular."""
    n = len(matrix)
    aug = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return tuple(aug[r][n] for r in range(n))


def _solve_system(matrix: list[Sequence[RatLike]], rhs: Sequence[RatLike]) -> list[Fraction] | None:
    """One exact solution of a general (possibly non-square) system, or None.

    Free variables are set to zero; None means the system is inconsistent.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(matrix, rhs)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(cols):
        pivot = next((r for r in range(row, rows) if aug[r][col] != 0), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(rows):
            if r != row and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[row])]
        pivots.append((row, col))
        row += 1
        if row == rows:
            break
    for r in range(row, rows):
        if aug[r][cols] != 0:
            return None
    solution = [Fraction(0)] * cols
    for r, c in pivots:
        solution[c] = aug[r][cols]
    return solution


def _basic_solutions(rows: list[Row], rhs: Sequence[RatLike], dim: int) -> Iterator[Point]:
    """All solutions of nonsingular dim-row subsystems (candidate vertices)."""
    if dim == 0:
        yield ()
        return
    for subset in combinations(range(len(rows)), dim):
        sol = _solve_square([rows[i] for i in subset], [rhs[i] for i in subset])
        if sol is not None:
            yield sol


def _feasible(point: Point, rows: list[Row], rhs: Sequence[RatLike]) -> bool:
    return all(
        sum(c * v for c, v in zip(row, point)) <= r for row, r in zip(rows, rhs)
    )


def _system_vertices(rows: list[Row], rhs: Sequence[RatLike], dim: int) -> list[Point]:
    """Deduplicated feasible basic solutions, in lexicographic order."""
    if dim == 0:
        return [()] if all(Fraction(r) >= 0 for r in rhs) else []
    seen = set()
    for candidate in _basic_solutions(rows, rhs, dim):
        if candidate not in seen and _feasible(candidate, rows, rhs):
            seen.add(candidate)
    return sorted(seen)


def _box_rows(dim: int, radius: int) -> tuple[list[Row], list[int]]:
    rows: list[Row] = []
    rhs: list[int] = []
    for i in range(dim):
        unit = [0] * dim
        unit[i] = 1
        rows.append(tuple(unit))
        rhs.append(radius)
        unit = [0] * dim
        unit[i] = -1
        rows.append(tuple(unit))
        rhs.append(radius)
    return rows, rhs


# -- validation, vertices and LP ---------------------------------------------


def vertices(P: Polytope) -> list[Point]:
    """Vertices of a bounded P, in lexicographic order."""
    return _system_vertices(P.full_rows(), P.b, P.dim)


@lru_cache(maxsize=None)
def validate(P: Polytope) -> PolytopeSummary:
    """Feasibility, boundedness and the integer coordinate box of P.

    Boundedness is decided exactly: the recession cone {u : [A|B] u <= 0}
    is trivial iff its intersection with the unit box has no nonzero
    vertex.  For unbounded systems, feasibility is decided inside a box
    large enough (by a Hadamard-type bound) to contain a point of any
    nonempty face.
    """
    rows = P.full_rows()
    dim = P.dim
    cone_rows = rows + _box_rows(dim, 1)[0]
    cone_rhs = [0] * len(rows) + _box_rows(dim, 1)[1]
    zero = (Fraction(0),) * dim
    bounded = all(v == zero for v in _system_vertices(cone_rows, cone_rhs, dim))

    if bounded:
        verts = vertices(P)
        if not verts:
            return PolytopeSummary(feasible=False, bounded=True, M=0, box=())
        box = []
        for i in range(dim):
            values = [v[i] for v in verts]
            box.append((math.floor(min(values)), math.ceil(max(values))))
        M = max((max(abs(lo), abs(hi)) for lo, hi in box), default=0)
        return PolytopeSummary(feasible=True, bounded=True, M=M, box=tuple(box))

    # Unbounded: decide feasibility inside a Hadamard-sized box.
    entries = [abs(v) for row in rows for v in row] + [abs(v) for v in P.b] + [1]
    radius = dim**dim * max(entries) ** dim + 1
    box_r, box_rhs = _box_rows(dim, radius)
    feasible = bool(_system_vertices(rows + box_r, list(P.b) + box_rhs, dim))
    return PolytopeSummary(feasible=feasible, bounded=False, M=0, box=())


def lp_extreme(
    P: Polytope, objective: Sequence[RatLike], sense: str = "max"
) -> tuple[Fraction, Point]:
    """Exact linear optimum over P by enumeration of basic solutions.

    Returns (optimal value, lexicographically smallest optimizer).
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    if len(objective) != P.dim:
        raise ValueError("objective dimension mismatch")
    summary = validate(P)
    if not summary.feasible:
        raise InfeasibleError("polytope is empty")
    if not summary.bounded:
        raise UnboundedError("polyhedron is unbounded")
    cost = [Fraction(c) for c in objective]
    best: tuple[Fraction, Point] | None = None
    for v in vertices(P):
        value = sum(c * x for c, x in zip(cost, v))
        key = value if sense == "max" else -value
        if best is None or key > best[0] or (key == best[0] and v < best[1]):
            best = (key, v)
    assert best is not None
    value = best[0] if sense == "max" else -best[0]
    return value, best[1]


# -- scaling factor and slices -------------------------------------------------


def integral_scaling_factor(P: Polytope) -> int:
    """Scaling factor turning every integral slice of P into an integral polytope.

    The lcm of |det| over all nonsingular d1 x d1 row submatrices of A:
    slice vertices solve square subsystems of A, so by Cramer's rule their
    coordinates have denominators dividing those determinants.  1 when
    d1 = 0 or no nonsingular submatrix exists.
    """
    d1 = P.d1
    if d1 == 0:
        return 1
    dets = []
    for subset in combinations(range(P.num_rows), d1):
        value = det([P.A[i] for i in subset])
        if value != 0:
            dets.append(value)
    return lcm_all(dets)


def slice_vertices(P: Polytope, z: Sequence[int]) -> list[Point]:
    """Vertices of the continuous slice {x : A x <= b - B z}; [] when empty.

    For d1 = 0 the slice is the single empty point when z is feasible.
    """
    if len(z) != P.d2:
        raise ValueError("slice coordinate dimension mismatch")
    zz = [int(v) for v in z]
    rhs = [
        bi - sum(c * v for c, v in zip(row, zz)) for row, bi in zip(P.B, P.b)
    ]
    return _system_vertices(list(P.A), rhs, P.d1)


# -- grid enumeration ----------------------------------------------------------


def scaled_grid_points(
    P: Polytope, m: int, summary: PolytopeSummary | None = None
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Integer pairs (t, z) with (t/m, z) in P, in lexicographic (z, t) order.

    The integer form of grid enumeration: slices are located through their
    vertex bounds, grid layers are scanned per dimension, and membership
    is checked in pure integer arithmetic via A t <= m (b - B z).
    """
    if m < 1:
        raise ValueError("grid denominator must be positive")
    if summary is None:
        summary = validate(P)
    if not summary.bounded:
        raise UnboundedError("cannot enumerate an unbounded polyhedron")
    if not summary.feasible:
        return
    d1 = P.d1
    z_ranges = [range(lo, hi + 1) for lo, hi in summary.box[d1:]]
    for z in product(*z_ranges):
        rhs = [
            bi - sum(c * v for c, v in zip(row, z)) for row, bi in zip(P.B, P.b)
        ]
        if d1 == 0:
            if all(r >= 0 for r in rhs):
                yield (), z
            continue
        verts = _system_vertices(list(P.A), rhs, d1)
        if not verts:
            continue
        scaled_rhs = [m * r for r in rhs]
        t_ranges = []
        for i in range(d1):
            values = [v[i] for v in verts]
            t_ranges.append(range(math.ceil(m * min(values)), math.floor(m * max(values)) + 1))
        for t in product(*t_ranges):
            if all(
                sum(c * v for c, v in zip(row, t)) <= r
                for row, r in zip(P.A, scaled_rhs)
            ):
                yield t, z


def enumerate_grid_points(
    P: Polytope, m: int, summary: PolytopeSummary | None = None
) -> Iterator[MixedPoint]:
    """Stream P's points with x on the 1/m grid and z integral, each once."""
    for t, z in scaled_grid_points(P, m, summary):
        yield MixedPoint(tuple(Fraction(ti, m) for ti in t), z, m)


# -- grid rounding -------------------------------------------------------------


def convex_multipliers(
    verts: Sequence[Point], target: Point
) -> list[tuple[Point, Fraction]] | None:
    """Express target as a convex combination of at most n+1 of the vertices.

    Searches subsets in ascending size and lexicographic order, so the
    result is deterministic; a feasible subset of size <= n+1 exists for
    any point of the convex hull.  Returns (vertex, multiplier) pairs with
    positive multipliers, or None when target is outside the hull.
    """
    n = len(target)
    ordered = sorted(set(tuple(Fraction(c) for c in v) for v in verts))
    goal = list(target) + [Fraction(1)]
    for size in range(1, min(len(ordered), n + 1) + 1):
        for subset in combinations(ordered, size):
            columns = [[v[i] for v in subset] for i in range(n)]
            columns.append([Fraction(1)] * size)
            lam = _solve_system(columns, goal)
            if lam is not None and all(l >= 0 for l in lam):
                # the multipliers sum to 1, so at least one is positive
                return [(v, l) for v, l in zip(subset, lam) if l > 0]
    return None


def caratheodory_round(
    verts: Sequence[Point], x_star: Sequence[RatLike], k: int
) -> Point:
    """Round a hull point onto the 1/k grid without leaving the hull.

    The convex multipliers of x_star are floored to multiples of 1/k and
    the first (lexicographically smallest) vertex of the support absorbs
    the residual, so the result stays a convex combination.  For integral
    vertices bounded by M in absolute value, the output is in the 1/k
    grid and within 2*n*M/k of x_star in the sup norm.
    """
    if k < 1:
        raise ValueError("grid parameter k must be positive")
    target = tuple(Fraction(v) for v in x_star)
    n = len(target)
    for v in verts:
        for coord in v:
            if Fraction(coord).denominator != 1:
                raise ValueError("caratheodory_round requires integral vertices")
    support = convex_multipliers(verts, target)
    if support is None:
        raise ValueError("target point is not in the convex hull of the vertices")
    rounded = [Fraction(math.floor(k * lam), k) for _, lam in support]
    rounded[0] = 1 - sum(rounded[1:])
    point = [Fraction(0)] * n
    for (vertex, _), lam in zip(support, rounded):
        for i in range(n):
            point[i] += lam * vertex[i]
    return tuple(point)


def mixed_round(
    P: Polytope,
    Delta: int,
    x_star: Sequence[RatLike],
    z_star: Sequence[int],
    delta: RatLike,
    m: int,
) -> MixedPoint:
    """Round the continuous part of a feasible point onto the 1/m grid.

    Requires m = k * Delta with k >= (2/delta) * d1 * M; the result stays
    feasible, lies on the grid, and moves each continuous coordinate by at
    most delta.  Rounding happens inside the slice at z_star, scaled by
    Delta so that its vertices are integral.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if Delta < 1 or m < 1 or m % Delta != 0:
        raise ValueError("m must be a positive multiple of Delta")
    x = tuple(Fraction(v) for v in x_star)
    z = tuple(int(v) for v in z_star)
    if len(x) != P.d1 or len(z) != P.d2:
        raise ValueError("point dimension mismatch")
    if not P.contains(x + tuple(Fraction(v) for v in z)):
        raise ValueError("(x_star, z_star) is not feasible")
    summary = validate(P)
    k = m // Delta
    if Fraction(k) < Fraction(2) * P.d1 * summary.M / delta:
        raise ValueError(
            f"grid too coarse: k={k} is below the rounding threshold "
            f"{format_rational(Fraction(2) * P.d1 * summary.M / delta)}"
        )
    if P.d1 == 0:
        return MixedPoint((), z, m)
    verts = slice_vertices(P, z)
    scaled_verts = []
    for v in verts:
        scaled = tuple(Delta * c for c in v)
        if any(c.denominator != 1 for c in scaled):
            raise MipolyError(
                "slice vertices did not become integral under Delta scaling"
            )
        scaled_verts.append(scaled)
    scaled_target = tuple(Delta * c for c in x)
    rounded = caratheodory_round(scaled_verts, scaled_target, k)
    new_x = tuple(c / Delta for c in rounded)
    result = MixedPoint(new_x, z, m)
    if not P.contains_mixed(result):
        raise MipolyError("rounded point left the polytope")
    if max((abs(a - b) for a, b in zip(new_x, x)), default=Fraction(0)) > delta:
        raise MipolyError("rounded point moved farther than delta")
    return result
