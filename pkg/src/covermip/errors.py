"""Shared exception types."""


class CapExceededError(Exception):
    """An enumeration or table would exceed its configured size cap."""


class InfeasibleInstanceError(Exception):
    """The instance (or every subproblem of it) admits no feasible solution."""


class HypothesisError(ValueError):
    """Input violates a structural hypothesis required by a builder."""
