"""Exception types shared across the package."""

from __future__ import annotations


class MipolyError(Exception):
    """Base class for solver-specific failures."""


class InfeasibleError(MipolyError):
    """The feasible set relevant to the request is empty."""


class UnboundedError(MipolyError):
    """The constraint system describes an unbounded polyhedron."""


class NegativeObjectiveError(MipolyError):
    """A grid value turned out negative although non-negativity was assumed.

    Raised instead of silently emitting a certificate whose hypotheses
    do not hold.
    """


class RefusedSizeError(MipolyError):
    """The certified grid would be too large to enumerate.

    Carries the computed grid denominator and the size estimate so the
    caller can either raise the budget or pass an explicit override.
    """

    def __init__(self, m: int, estimate: int, limit: int):
        self.m = m
        self.estimate = estimate
        self.limit = limit
        super().__init__(
            f"certified grid denominator {m} needs about {estimate} points "
            f"(limit {limit}); pass an explicit grid override to run uncertified"
        )
