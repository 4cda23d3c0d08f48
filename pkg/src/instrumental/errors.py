"""Shared exception types."""

from __future__ import annotations

__all__ = ["CapacityError", "ConvergenceError"]


class CapacityError(RuntimeError):
    """An enumeration exceeded its configured capacity limit.

    Raised instead of grinding on: strategy spaces and intermediate ray lists
    grow combinatorially, and the caller is expected to either raise the limit
    deliberately or treat the result as out of reach.
    """


class ConvergenceError(RuntimeError):
    """An iterative numerical search failed to converge within its cap."""
