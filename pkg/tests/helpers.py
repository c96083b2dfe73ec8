"""Shared corpus generators for the test suite.

All randomness is seeded at the call sites, so every test run sees the
same corpus.
"""

from __future__ import annotations

import random
from fractions import Fraction

from mipoly import (
    Instance,
    Polynomial,
    Polytope,
    enumerate_grid_points,
    lattice_points,
    oracle_optimize,
    validate,
)


def box_polytope(d1: int, d2: int, bounds: list[tuple[int, int]]) -> Polytope:
    """Axis-aligned integer box as an H-representation."""
    dim = d1 + d2
    assert len(bounds) == dim
    A, B, b = [], [], []
    for i, (lo, hi) in enumerate(bounds):
        for sign, rhs in ((1, hi), (-1, -lo)):
            row = [0] * dim
            row[i] = sign
            A.append(row[:d1])
            B.append(row[d1:])
            b.append(rhs)
    return Polytope(d1, d2, A, B, b)


def random_polynomial(
    rng: random.Random,
    dims: int,
    max_degree: int,
    max_coeff: int,
    max_terms: int,
    max_x_degree: int | None = None,
    d1: int = 0,
) -> Polynomial:
    """Random integer-coefficient polynomial; optionally degree-capped in x."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        while True:
            exps = [0] * dims
            budget = rng.randint(0, max_degree)
            for _ in range(budget):
                exps[rng.randrange(dims)] += 1
            if max_x_degree is None or sum(exps[:d1]) <= max_x_degree:
                break
        coeff = 0
        while coeff == 0:
            coeff = rng.randint(-max_coeff, max_coeff)
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + coeff
    return Polynomial(dims, terms)


def random_integer_box_instance(rng: random.Random, max_abs: int = 3) -> tuple[Polytope, Polynomial]:
    """Pure-integer box within [-max_abs, max_abs]^d with a random objective."""
    d = rng.randint(1, 2)
    bounds = []
    for _ in range(d):
        lo = rng.randint(-max_abs, max_abs)
        hi = rng.randint(lo, max_abs)
        bounds.append((lo, hi))
    P = box_polytope(0, d, bounds)
    f = random_polynomial(rng, d, max_degree=3, max_coeff=3, max_terms=4)
    return P, f


def shifted_nonnegative_instance(
    rng: random.Random,
) -> tuple[Polytope, Polynomial, Fraction, Fraction] | None:
    """Box instance with the objective shifted to be non-negative on the lattice.

    Returns (P, shifted f, oracle max of shifted f, oracle min == 0), or
    None when the objective is constant on the lattice (those degenerate
    to the all-zero objective under shifting and are skipped).
    """
    P, f = random_integer_box_instance(rng)
    points = list(enumerate_grid_points(P, 1))
    result = oracle_optimize(iter(points), f)
    if result.max.value == result.min.value:
        return None
    shifted = f - result.min.value
    return P, shifted, result.max.value - result.min.value, Fraction(0)


def random_mixed_polytope(rng: random.Random) -> Polytope:
    """Bounded, feasible polytope with 1-2 continuous and 0-1 integer variables.

    A box plus up to two extra random rows; resampled until the extra rows
    keep it feasible.
    """
    while True:
        d1 = rng.randint(1, 2)
        d2 = rng.randint(0, 1)
        dim = d1 + d2
        bounds = []
        for _ in range(dim):
            lo = rng.randint(-2, 1)
            hi = rng.randint(lo, 2)
            bounds.append((lo, hi))
        base = box_polytope(d1, d2, bounds)
        A = [list(row) for row in base.A]
        B = [list(row) for row in base.B]
        b = list(base.b)
        for _ in range(rng.randint(0, 2)):
            row = [rng.randint(-2, 2) for _ in range(dim)]
            if all(v == 0 for v in row):
                continue
            A.append(row[:d1])
            B.append(row[d1:])
            b.append(rng.randint(0, 4))
        P = Polytope(d1, d2, A, B, b)
        summary = validate(P)
        if summary.feasible and summary.bounded:
            return P


def random_affine_x_instance(rng: random.Random) -> tuple[Polytope, Polynomial]:
    """Box instance whose objective is affine in the continuous variables.

    Extremes of such objectives sit on integral box vertices, so the
    m = 1 grid oracle computes the true range over the mixed region.
    """
    d1 = rng.randint(0, 1)
    d2 = rng.randint(1, 2)
    dim = d1 + d2
    bounds = []
    for _ in range(dim):
        lo = rng.randint(-2, 0)
        hi = rng.randint(max(lo, 0), 2)
        bounds.append((lo, hi))
    P = box_polytope(d1, d2, bounds)
    f = random_polynomial(
        rng, dim, max_degree=2, max_coeff=2, max_terms=3, max_x_degree=1, d1=d1
    )
    return P, f


def true_range_oracle(P: Polytope, f: Polynomial):
    """Exact max/min for instances whose extremes lie on the integer grid."""
    points = list(enumerate_grid_points(P, 1))
    return oracle_optimize(iter(points), f)


def random_rational_point(rng: random.Random, span: int, denom: int) -> Fraction:
    return Fraction(rng.randint(-span * denom, span * denom), denom)
