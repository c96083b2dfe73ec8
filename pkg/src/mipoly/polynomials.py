"""Sparse multivariate polynomials over exact rationals.

A polynomial in d variables is a map from exponent tuples (length d,
non-negative ints) to nonzero Fraction coefficients.  The zero polynomial
stores no terms and has total degree 0, so the degenerate objective flows
through every formula without special cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import RatLike, format_rational, parse_rational

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class CoeffStats:
    """Largest absolute coefficient, monomial count and maximum total degree."""

    C: Fraction
    r: int
    D: int


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("dims", "_terms")

    def __init__(self, dims: int, terms: Mapping[Sequence[int], RatLike] | None = None):
        if dims < 0:
            raise ValueError("dims must be non-negative")
        clean: dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            key = tuple(int(e) for e in exps)
            if len(key) != dims:
                raise ValueError(f"exponent vector {key} has length {len(key)}, expected {dims}")
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            value = Fraction(coeff)
            if value != 0:
                clean[key] = value
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "_terms", clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dims: int) -> "Polynomial":
        return cls(dims, {})

    @classmethod
    def constant(cls, dims: int, value: RatLike) -> "Polynomial":
        return cls(dims, {(0,) * dims: Fraction(value)})

    @classmethod
    def variable(cls, dims: int, index: int) -> "Polynomial":
        if not 0 <= index < dims:
            raise ValueError(f"variable index {index} out of range for dims={dims}")
        exps = [0] * dims
        exps[index] = 1
        return cls(dims, {tuple(exps): Fraction(1)})

    # -- accessors ---------------------------------------------------------

    @property
    def terms(self) -> dict[Exponents, Fraction]:
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in lexicographic exponent order (canonical serialization order)."""
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        """True when no term has positive degree (includes the zero polynomial)."""
        return all(sum(e) == 0 for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.dims, Fraction(0))

    @property
    def total_degree(self) -> int:
        """Maximum total degree; 0 for the zero polynomial."""
        if not self._terms:
            return 0
        return max(sum(e) for e in self._terms)

    def coeff_stats(self) -> CoeffStats:
        coeffs = self._terms.values()
        largest = max((abs(c) for c in coeffs), default=Fraction(0))
        return CoeffStats(C=largest, r=len(self._terms), D=self.total_degree)

    def drop_constant_term(self) -> "Polynomial":
        return Polynomial(self.dims, {e: c for e, c in self._terms.items() if sum(e) != 0})

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            if other.dims != self.dims:
                raise ValueError("dimension mismatch between polynomials")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.dims, other)
        return None

    def __add__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for exps, coeff in rhs._terms.items():
            out[exps] = out.get(exps, Fraction(0)) + coeff
        return Polynomial(self.dims, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.dims, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in rhs._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return Polynomial(self.dims, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(self.dims, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.dims == other.dims
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self.dims, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"Polynomial({self.dims}, 0)"
        parts = [f"{format_rational(c)}*x^{list(e)}" for e, c in self.sorted_terms()]
        return f"Polynomial({self.dims}, {' + '.join(parts)})"

    # -- evaluation --------------------------------------------------------

    def evaluate(self, point: Sequence[RatLike]) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.dims:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.dims}")
        values = [Fraction(v) for v in point]
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            term = coeff
            for value, e in zip(values, exps):
                if e:
                    term *= value**e
            total += term
        return total

    def evaluate_int(self, point: Sequence[int]) -> int:
        """Value at an integer point of an integer-coefficient polynomial.

        Pure int arithmetic; used on hot enumeration paths.
        """
        if len(point) != self.dims:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.dims}")
        total = 0
        for exps, coeff in self._terms.items():
            if coeff.denominator != 1:
                raise ValueError("evaluate_int requires integer coefficients")
            term = coeff.numerator
            for value, e in zip(point, exps):
                if e:
                    term *= value**e
            total += term
        return total

    # -- serialization -----------------------------------------------------

    def to_terms(self) -> list[dict]:
        """Canonical term list: lex-sorted, no zero terms, 'p/q' coefficients."""
        return [
            {"exponents": list(exps), "coefficient": format_rational(coeff)}
            for exps, coeff in self.sorted_terms()
        ]

    @classmethod
    def from_terms(cls, dims: int, entries: Iterable[Mapping]) -> "Polynomial":
        terms: dict[Exponents, Fraction] = {}
        for entry in entries:
            exps = tuple(int(e) for e in entry["exponents"])
            coeff = entry["coefficient"]
            coeff = parse_rational(coeff) if isinstance(coeff, str) else Fraction(coeff)
            if exps in terms:
                raise ValueError(f"duplicate exponent vector {list(exps)} in term list")
            terms[exps] = coeff
        return cls(dims, terms)


def clear_denominators(p: Polynomial) -> tuple[Polynomial, int]:
    """Smallest positive integer multiplier making all coefficients integral.

    Returns (multiplier * p, multiplier).
    """
    multiplier = math.lcm(*(c.denominator for c in p._terms.values())) if p._terms else 1
    if multiplier == 1:
        return p, 1
    return p * Fraction(multiplier), multiplier


def scale_substitute(p: Polynomial, m: int, d1: int) -> Polynomial:
    """Absorb a 1/m scaling of the first d1 (continuous) variables.

    For an integer-coefficient p of total degree D, returns the
    integer-coefficient polynomial q with q(m*x, z) = m**D * p(x, z):
    the coefficient of each exponent vector a picks up the factor
    m**(D - sum of the first d1 entries of a).
    """
    if m < 1:
        raise ValueError("scaling denominator must be positive")
    if not 0 <= d1 <= p.dims:
        raise ValueError("continuous block size out of range")
    degree = p.total_degree
    out: dict[Exponents, Fraction] = {}
    for exps, coeff in p._terms.items():
        if coeff.denominator != 1:
            raise ValueError("scale_substitute requires integer coefficients")
        cont_degree = sum(exps[:d1])
        out[exps] = coeff * m ** (degree - cont_degree)
    return Polynomial(p.dims, out)


def lipschitz_constant(stats: CoeffStats, M: RatLike) -> Fraction:
    """Local Lipschitz bound C*r*D*max(M,1)**(D-1) on the box |x_i| <= M.

    Guarantees |f(x) - f(y)| <= L * max_i|x_i - y_i| whenever all
    coordinates of x and y have absolute value at most M.  Zero exactly
    when the polynomial is constant.  M below 1 is clamped to 1: the
    per-monomial estimate needs a bound that is monotone in the degree.
    """
    M = Fraction(M)
    if M < 0:
        raise ValueError("box bound M must be non-negative")
    if stats.D == 0:
        return Fraction(0)
    M_eff = max(M, Fraction(1))
    return stats.C * stats.r * stats.D * M_eff ** (stats.D - 1)
