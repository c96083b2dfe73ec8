import random
from fractions import Fraction

import pytest

from mipoly import (
    InfeasibleError,
    NegativeObjectiveError,
    Polynomial,
    Polytope,
    bisection_solve,
    bounds,
    choose_k,
    enumerate_grid_points,
    generate_parity,
    lattice_points,
    moment_sum,
    moment_vector,
    oracle_optimize,
)

from helpers import box_polytope, shifted_nonnegative_instance


@pytest.fixture(scope="module")
def segment():
    # z in {0, 1, 2}
    return box_polytope(0, 1, [(0, 2)])


def test_moment_sum_examples(segment):
    f = Polynomial(1, {(2,): 1})
    assert moment_sum(segment, f, 2) == 17
    assert moment_sum(segment, f, 0) == 3
    empty = Polytope(0, 1, [[], []], [[1], [-1]], [0, -1])
    assert moment_sum(empty, f, 5) == 0
    # explicit point streams work too
    assert moment_sum([(0,), (1,), (2,)], f, 2) == 17


def test_moment_vector(segment):
    f = Polynomial(1, {(2,): 1})
    mv = moment_vector(segment, f, [0, 1, 2])
    assert mv.N == 3
    assert mv.values == {0: 3, 1: 5, 2: 17}


def test_bounds_examples(segment):
    f = Polynomial(1, {(2,): 1})
    pair = bounds(segment, f, 2)
    assert (pair.L, pair.U) == (3, 4)
    pair = bounds(segment, f, 1)
    assert (pair.L, pair.U) == (2, 5)

    single = box_polytope(0, 1, [(0, 0)])
    const = Polynomial.constant(1, 5)
    for k in (1, 2, 3):
        pair = bounds(single, const, k)
        assert (pair.L, pair.U) == (5, 5)

    with pytest.raises(ValueError):
        bounds(segment, f, 0)
    with pytest.raises(InfeasibleError):
        bounds(Polytope(0, 1, [[], []], [[1], [-1]], [0, -1]), f, 1)


def test_choose_k_examples():
    assert choose_k(Fraction(1, 2), 1) == 1
    assert choose_k(Fraction(99, 100), 1) == 1
    assert choose_k(Fraction(1, 2), 3) == 3
    assert choose_k(Fraction(9, 10), 2) == 2
    with pytest.raises(ValueError):
        choose_k(Fraction(0), 3)
    with pytest.raises(ValueError):
        choose_k(Fraction(3, 2), 3)


def test_choose_k_is_minimal():
    rng = random.Random(31)
    for _ in range(50):
        eps = Fraction(rng.randint(1, 9), 10)
        N = rng.randint(1, 10**6)
        k = choose_k(eps, N)
        assert (1 + eps) ** k >= N
        if k > 1:
            assert (1 + eps) ** (k - 1) < N


def test_bisection_examples(segment):
    f = Polynomial(1, {(2,): 1})
    sol = bisection_solve(segment, f, Fraction(1, 2))
    assert sol.point.z == (2,) and sol.value == 4

    single = box_polytope(0, 1, [(3, 3)])
    sol = bisection_solve(single, Polynomial(1, {(1,): 2}), Fraction(1, 4))
    assert sol.point.z == (3,) and sol.value == 6

    const = Polynomial.constant(1, 7)
    sol = bisection_solve(segment, const, Fraction(1, 2))
    assert sol.value == 7

    with pytest.raises(InfeasibleError):
        bisection_solve(Polytope(0, 1, [[], []], [[1], [-1]], [0, -1]), f, Fraction(1, 2))


def test_bisection_rejects_negative_values(segment):
    f = Polynomial(1, {(1,): -1, (0,): 1})  # 1 - z is negative at z = 2
    with pytest.raises(NegativeObjectiveError):
        bisection_solve(segment, f, Fraction(1, 2))


def test_bounds_sandwich_random():
    rng = random.Random(32)
    produced = 0
    while produced < 30:
        made = shifted_nonnegative_instance(rng)
        if made is None:
            continue
        produced += 1
        P, f, f_star, _ = made
        for k in (1, 2, 3):
            pair = bounds(P, f, k)
            assert pair.L <= f_star <= pair.U


def test_bisection_guarantee_random():
    rng = random.Random(33)
    produced = 0
    while produced < 30:
        made = shifted_nonnegative_instance(rng)
        if made is None:
            continue
        produced += 1
        P, f, f_star, _ = made
        for eps in (Fraction(1, 2), Fraction(1, 4)):
            sol = bisection_solve(P, f, eps)
            assert sol.value >= (1 - eps) * f_star
            assert P.contains(sol.point.coords)


def test_oracle_examples():
    parity = generate_parity()
    res = oracle_optimize(enumerate_grid_points(parity.polytope, 2), parity.objective)
    assert res.max.value == Fraction(3, 2)
    assert res.max.point.x == (Fraction(1, 2),) and res.max.point.z == (1,)
    res = oracle_optimize(enumerate_grid_points(parity.polytope, 3), parity.objective)
    assert res.max.value == 0
    assert res.max.point.x == (Fraction(0),) and res.max.point.z == (0,)

    const = Polynomial.constant(2, 4)
    res = oracle_optimize(enumerate_grid_points(parity.polytope, 2), const)
    assert res.max.value == res.min.value == 4

    with pytest.raises(InfeasibleError):
        oracle_optimize(iter([]), const)


def test_lattice_points_treats_all_vars_integrally():
    parity = generate_parity()
    pts = lattice_points(parity.polytope)
    assert pts == [(0, 0), (1, 0)]
