"""Least gradient problems on the unit disk."""

from ._core import (
    BoundaryData,
    Error,
    Solution,
    Tie,
    classify_json,
    select,
    solve,
    solve_json,
    verify,
)

__all__ = [
    "BoundaryData",
    "Error",
    "Solution",
    "Tie",
    "classify_json",
    "select",
    "solve",
    "solve_json",
    "verify",
]
