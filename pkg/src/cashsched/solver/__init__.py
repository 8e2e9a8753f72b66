"""Embedded exact solvers: simplex LP, branch-and-bound MILP, enumeration oracle."""

from .lp import LpSolution, solve_lp
from .milp import MilpSolution, SolveLimits, solve_milp

__all__ = ["LpSolution", "MilpSolution", "SolveLimits", "solve_lp", "solve_milp"]

from .oracle import (  # noqa: E402
    DecodeError,
    ObjectiveSpec,
    OracleRefused,
    enumerate_exhaustive,
    extract_schedule,
)

__all__ += ["DecodeError", "ObjectiveSpec", "OracleRefused", "enumerate_exhaustive", "extract_schedule"]
