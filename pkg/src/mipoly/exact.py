"""Exact integer and rational helpers used throughout the package.

Integers are plain Python ints (arbitrary precision), rationals are
``fractions.Fraction`` (always in lowest terms, positive denominator).
Nothing in this module, or anywhere else in the certified code path, uses
floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

RatLike = int | Fraction


def kth_root_floor(a: RatLike, k: int) -> int:
    """Largest integer t with t**k <= a, for a >= 0 and k >= 1.

    The root is found by binary search on integers; the initial bracket
    comes from the bit length of a's integer part, so no floating point
    is involved.
    """
    if k < 1:
        raise ValueError(f"root order must be >= 1, got {k}")
    a = Fraction(a)
    if a < 0:
        raise ValueError(f"cannot take an integer root of negative value {a}")
    p, q = a.numerator, a.denominator
    if p == 0:
        return 0
    # 2**(floor(n/k)+1) ** k >= 2**(n+1) > a, where n = (p//q).bit_length()
    lo = 0
    hi = 1 << ((p // q).bit_length() // k + 1)
    # invariant: lo**k <= a < hi**k
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**k * q <= p:
            lo = mid
        else:
            hi = mid
    return lo


def kth_root_ceil(a: RatLike, k: int) -> int:
    """Smallest integer t with t**k >= a, for a >= 0 and k >= 1."""
    t = kth_root_floor(a, k)
    if Fraction(t) ** k == a:
        return t
    return t + 1


def det(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination).

    Fraction-free: every intermediate quantity is an integer and every
    division is exact, so intermediate growth stays polynomial.
    """
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise ValueError("determinant requires a square matrix")
    if n == 0:
        return 1
    m = [[int(v) for v in row] for row in matrix]
    sign = 1
    prev = 1
    for i in range(n - 1):
        if m[i][i] == 0:
            pivot = next((j for j in range(i + 1, n) if m[j][i] != 0), None)
            if pivot is None:
                return 0
            m[i], m[pivot] = m[pivot], m[i]
            sign = -sign
        for j in range(i + 1, n):
            for c in range(i + 1, n):
                m[j][c] = (m[j][c] * m[i][i] - m[j][i] * m[i][c]) // prev
            m[j][i] = 0
        prev = m[i][i]
    return sign * m[n - 1][n - 1]


def lcm_all(values: Sequence[int]) -> int:
    """Positive lcm of the absolute values; 1 for an empty sequence.

    Zeros are rejected: callers filter out singular (zero-determinant)
    entries before asking for the lcm.
    """
    if any(v == 0 for v in values):
        raise ValueError("lcm_all does not accept zeros")
    return math.lcm(*(abs(v) for v in values)) if values else 1


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational from a string like '-3', '5/7'."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def format_rational(value: RatLike) -> str:
    """Render a rational as 'p/q', or just 'p' when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def ceil_log2(x: Fraction) -> int:
    """Smallest n >= 0 with 2**n >= x, by exact comparison."""
    if x <= 1:
        return 0
    n = 0
    power = 1
    while power < x:
        power *= 2
        n += 1
    return n
