import random
from fractions import Fraction

import pytest

from mipoly import (
    InfeasibleError,
    NegativeObjectiveError,
    Polynomial,
    Polytope,
    RefusedSizeError,
    clear_denominators,
    enumerate_grid_points,
    fptas_maximize,
    generate_an1,
    generate_parity,
    grid_problem,
    is_constant,
    lattice_points,
    make_grid_plan,
    oracle_optimize,
    range_bounds,
    replay_inequalities,
    upper_bound,
    weak_maximize,
)

from helpers import box_polytope, random_affine_x_instance, true_range_oracle


@pytest.fixture(scope="module")
def parity():
    inst = generate_parity()
    return inst.polytope, inst.objective


def test_grid_problem_example(parity):
    P, f = parity
    gp = grid_problem(P, f, 2)
    assert gp.objective == Polynomial(2, {(1, 0): -1, (0, 1): 4})
    pts = lattice_points(gp.polytope)
    assert pts == [(0, 0), (1, 0), (1, 1), (2, 0)]
    best = max(gp.objective.evaluate_int(p) for p in pts)
    assert best == 3  # 2**D * (3/2)
    back = gp.to_source_point((1, 1))
    assert back.x == (Fraction(1, 2),) and back.z == (1,)


def test_grid_problem_identity_at_m1(parity):
    P, f = parity
    gp = grid_problem(P, f, 1)
    assert gp.objective == f
    assert gp.polytope.b == P.b
    assert gp.polytope.B == tuple(ra + rb for ra, rb in zip(P.A, P.B))


def test_grid_problem_bijection(parity):
    P, f = parity
    for m in (1, 2, 3, 5):
        gp = grid_problem(P, f, m)
        degree = f.total_degree
        grid = list(enumerate_grid_points(P, m))
        scaled = {tuple(int(xi * m) for xi in p.x) + p.z for p in grid}
        assert scaled == set(lattice_points(gp.polytope))
        for p in grid:
            image = tuple(int(xi * m) for xi in p.x) + p.z
            assert gp.objective.evaluate_int(image) == m**degree * f.evaluate(p.coords)


def test_make_grid_plan_example(parity):
    P, f = parity
    plan = make_grid_plan(P, f + 1, Fraction(1, 2))
    assert (plan.C, plan.r, plan.D) == (2, 3, 1)
    assert plan.M == 1 and plan.Delta == 2
    assert plan.L == 6
    assert plan.delta == Fraction(1, 48)
    assert plan.m == 192


def test_make_grid_plan_degenerate_cases(parity):
    P, _ = parity
    const = Polynomial.constant(2, 5)
    plan = make_grid_plan(P, const, Fraction(1, 2))
    assert plan.L == 0 and plan.delta is None
    assert plan.m == 2 * max(1, (0 + 1) * 1)

    pure = box_polytope(0, 2, [(0, 1), (0, 2)])
    plan = make_grid_plan(pure, Polynomial(2, {(1, 1): 3}), Fraction(1, 3))
    assert plan.m == 1 and plan.delta is None

    with pytest.raises(ValueError):
        make_grid_plan(P, const, Fraction(3, 2))
    with pytest.raises(ValueError):
        make_grid_plan(P, Polynomial(2, {(1, 0): Fraction(1, 2)}), Fraction(1, 2))


def test_fptas_on_parity(parity):
    P, f = parity
    sol = fptas_maximize(P, f + 1, Fraction(1, 2))
    assert sol.value == Fraction(5, 2)
    assert sol.point.x == (Fraction(1, 2),) and sol.point.z == (1,)
    assert sol.guarantee.kind == "fptas"
    assert sol.certificate["certified"] is True
    assert replay_inequalities(sol.certificate["inequalities"]) == []


def test_fptas_single_point_and_constant():
    single = box_polytope(0, 1, [(3, 3)])
    f = Polynomial(1, {(1,): 2})
    sol = fptas_maximize(single, f, Fraction(1, 2))
    assert sol.value == 6 and sol.point.z == (3,)

    const = Polynomial.constant(1, 9)
    sol = fptas_maximize(single, const, Fraction(1, 4))
    assert sol.guarantee.kind == "constant"
    assert sol.value == 9


def test_fptas_rejects_bad_input(parity):
    P, f = parity
    with pytest.raises(ValueError):
        fptas_maximize(P, f, Fraction(2))
    empty = Polytope(0, 1, [[], []], [[1], [-1]], [0, -1])
    with pytest.raises(InfeasibleError):
        fptas_maximize(empty, Polynomial(1, {(1,): 1}), Fraction(1, 2))

    seg = box_polytope(0, 1, [(1, 2)])
    with pytest.raises(NegativeObjectiveError):
        fptas_maximize(seg, Polynomial(1, {(1,): -1}), Fraction(1, 2))


def test_fptas_empty_mixed_region():
    # z is forced to 1/2: the polytope is nonempty but has no integral point
    P = Polytope(1, 1, [[1], [-1], [0], [0]], [[0], [0], [2], [-2]], [1, 0, 1, -1])
    with pytest.raises(InfeasibleError):
        fptas_maximize(P, Polynomial(2, {(1, 0): 1}), Fraction(1, 2))


def test_fptas_refusal_and_override():
    seg = box_polytope(1, 0, [(0, 1)])
    steep = Polynomial(1, {(1,): 10**6})
    with pytest.raises(RefusedSizeError) as info:
        fptas_maximize(seg, steep, Fraction(1, 2))
    assert info.value.estimate > 200_000

    sol = fptas_maximize(seg, steep, Fraction(1, 2), grid_m=4)
    assert sol.value == 10**6
    assert sol.certificate["certified"] is False
    assert replay_inequalities(sol.certificate["inequalities"]) == []


def test_is_constant_examples(parity):
    P, f = parity
    assert is_constant(P, Polynomial.constant(2, 7)).constant

    verdict = is_constant(P, f)
    assert not verdict.constant
    v1, v2 = verdict.witness_values
    assert v1 != v2

    seg = box_polytope(1, 0, [(0, 1)])
    verdict = is_constant(seg, Polynomial(1, {(1,): 1}))
    assert not verdict.constant
    assert verdict.grid_m == 2
    gap = abs(verdict.witness_values[0] - verdict.witness_values[1])
    assert gap >= Fraction(1, 2)

    empty = Polytope(0, 1, [[], []], [[1], [-1]], [0, -1])
    with pytest.raises(InfeasibleError):
        is_constant(empty, Polynomial.constant(1, 1))


def test_is_constant_gap_invariant():
    rng = random.Random(41)
    checked = 0
    while checked < 15:
        P, f = random_affine_x_instance(rng)
        f_int, mult = clear_denominators(f)
        verdict = is_constant(P, f)
        if verdict.constant:
            continue
        checked += 1
        gap = abs(verdict.witness_values[0] - verdict.witness_values[1])
        m, D = verdict.grid_m, f_int.total_degree
        assert gap >= Fraction(1, m**D) / mult


def test_is_constant_detects_semantic_constants():
    # x + z is constant on the slice-less region where x + z = 1 is forced
    P = Polytope(
        1, 1, [[1], [-1], [0], [0]], [[1], [-1], [1], [-1]], [1, -1, 1, 0]
    )
    f = Polynomial(2, {(1, 0): 1, (0, 1): 1})
    verdict = is_constant(P, f)
    assert verdict.constant and verdict.value == 1


def test_upper_bound_examples(parity):
    single = box_polytope(0, 1, [(1, 1)])
    f5 = Polynomial(1, {(1,): 5})
    assert upper_bound(single, f5, Fraction(1, 5)) == 6

    zero = Polynomial.zero(1)
    assert upper_bound(single, zero, Fraction(1, 2)) == 0

    P, f = parity
    u = upper_bound(P, f + 1, Fraction(1))
    assert Fraction(5, 2) <= u <= 5
    with pytest.raises(ValueError):
        upper_bound(P, f + 1, Fraction(0))


def test_range_bounds_zero_objective(parity):
    P, _ = parity
    states = range_bounds(P, Polynomial.zero(2), Fraction(1, 2), 4)
    assert all(s.L == 0 and s.U == 0 for s in states)


def test_range_bounds_constant_contracts():
    P = box_polytope(1, 1, [(0, 2), (0, 1)])
    c = Polynomial.constant(2, 3)
    states = range_bounds(P, c, Fraction(1, 2), 6)
    width0 = states[0].U - states[0].L
    for s in states:
        assert s.L <= 3 <= s.U
        assert s.U - s.L <= Fraction(1, 2) ** s.i * width0


def test_range_bounds_parity(parity):
    P, f = parity
    states = range_bounds(P, f, Fraction(1, 2), 5)
    oracle = true_range_oracle(P, f)
    # the segment vertices and the point slice are on the m=2 grid, so the
    # m=1..2 oracle range is the true range here
    f_max = Fraction(3, 2)
    f_min = Fraction(-1)
    assert oracle.max.value <= f_max and oracle.min.value >= f_min
    rng = f_max - f_min
    for a, b in zip(states, states[1:]):
        assert a.L <= f_min <= f_max <= a.U
        assert b.U - b.L <= Fraction(1, 2) * (a.U - a.L) + Fraction(3, 2) * rng


def test_range_bounds_denominator_discipline(parity):
    P, f = parity
    states = range_bounds(P, f, Fraction(1, 2), 5)
    # iterate values are delta-combinations of grid values: denominators
    # divide denom(delta)**i * m**D
    m, D = 192, 1
    for s in states:
        bound = 2**s.i * m**D
        assert bound % s.L.denominator == 0
        assert bound % s.U.denominator == 0


def test_range_bounds_rejects_bad_input(parity):
    P, f = parity
    with pytest.raises(ValueError):
        range_bounds(P, f, Fraction(3, 2), 2)
    with pytest.raises(ValueError):
        range_bounds(P, Polynomial(2, {(1, 0): Fraction(1, 2)}), Fraction(1, 2), 2)


def test_weak_maximize_an1():
    inst = generate_an1(2, 7, 10)
    oracle = true_range_oracle(inst.polytope, inst.objective)
    assert oracle.max.value == 0
    sol = weak_maximize(inst.polytope, inst.objective, Fraction(1, 4))
    assert sol.guarantee.kind == "weak"
    assert abs(sol.value - oracle.max.value) <= Fraction(1, 4) * (
        oracle.max.value - oracle.min.value
    )
    assert replay_inequalities(sol.certificate["inequalities"]) == []


def test_weak_maximize_infeasible_an1():
    # 3 is not a quadratic residue mod 5: the maximum stays below zero
    inst = generate_an1(3, 5, 6)
    oracle = true_range_oracle(inst.polytope, inst.objective)
    assert oracle.max.value < 0
    sol = weak_maximize(inst.polytope, inst.objective, Fraction(1, 8))
    assert abs(sol.value - oracle.max.value) <= Fraction(1, 8) * (
        oracle.max.value - oracle.min.value
    )


def test_weak_maximize_constant(parity):
    P, _ = parity
    sol = weak_maximize(P, Polynomial.constant(2, -3), Fraction(1, 2))
    assert sol.guarantee.kind == "constant"
    assert sol.value == -3


def test_weak_cross_check_with_fptas(parity):
    P, f = parity
    fp = f + 1
    strong = fptas_maximize(P, fp, Fraction(1, 2))
    weak = weak_maximize(P, fp, Fraction(1, 2))
    f_max, f_min = Fraction(5, 2), Fraction(0)
    assert strong.value >= (1 - Fraction(1, 2)) * f_max
    assert abs(weak.value - f_max) <= Fraction(1, 2) * (f_max - f_min)
