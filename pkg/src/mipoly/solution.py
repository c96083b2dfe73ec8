"""Result types and replayable certificates.

Every solution carries a certificate: the plan parameters it was derived
from plus a list of concrete inequalities between exact rationals.  A
verifier can re-evaluate each inequality from the serialized report alone;
``replay_inequalities`` does exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import format_rational, parse_rational
from .polytopes import MixedPoint

GUARANTEE_KINDS = ("fptas", "weak", "oracle", "constant")


@dataclass(frozen=True)
class Guarantee:
    """What the returned value promises, and at which tolerance."""

    kind: str
    epsilon: Fraction | None = None

    def __post_init__(self):
        if self.kind not in GUARANTEE_KINDS:
            raise ValueError(f"unknown guarantee kind {self.kind!r}")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "epsilon": None if self.epsilon is None else format_rational(self.epsilon),
        }


@dataclass(frozen=True)
class Inequality:
    """One replayable claim: lhs <op> rhs with exact rational sides."""

    name: str
    lhs: Fraction
    op: str
    rhs: Fraction

    def holds(self) -> bool:
        if self.op == "<=":
            return self.lhs <= self.rhs
        if self.op == "<":
            return self.lhs < self.rhs
        if self.op == ">=":
            return self.lhs >= self.rhs
        if self.op == ">":
            return self.lhs > self.rhs
        if self.op == "==":
            return self.lhs == self.rhs
        raise ValueError(f"unknown relation {self.op!r}")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": format_rational(self.lhs),
            "op": self.op,
            "rhs": format_rational(self.rhs),
        }


@dataclass(frozen=True)
class Solution:
    """A feasible point, its exact objective value and the attached guarantee."""

    point: MixedPoint
    value: Fraction
    guarantee: Guarantee
    certificate: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "point": self.point.to_json(),
            "value": format_rational(self.value),
            "guarantee": self.guarantee.to_json(),
            "certificate": self.certificate,
        }


def replay_inequalities(entries: list[dict]) -> list[str]:
    """Re-check serialized certificate inequalities; return failure names."""
    failures = []
    for entry in entries:
        ineq = Inequality(
            name=entry["name"],
            lhs=parse_rational(entry["lhs"]),
            op=entry["op"],
            rhs=parse_rational(entry["rhs"]),
        )
        if not ineq.holds():
            failures.append(ineq.name)
    return failures
