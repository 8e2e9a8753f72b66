"""End-to-end solve of one method at one alpha-level.

After the scalarized MILP is solved, the schedule is held fixed and the
financing decisions are re-optimized for final cash without letting the
scalarized objective drop. The reported profit is therefore the best the
chosen schedule can earn, which is what a replay with optimized financing
reproduces.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .finance import FinancingDecisions, Ledger, Schedule, evaluate_ledger
from .model import (
    MilpModel,
    ModelBuilder,
    Objective,
    PayoffTable,
    ThConfig,
    build_model,
    build_th_model,
    build_weighted_sum,
    compute_payoff_table,
    membership,
)
from .project import Project
from .solver.lp import solve_lp
from .solver.milp import MilpSolution, SolveLimits, solve_milp
from .solver.oracle import extract_schedule

__all__ = ["METHODS", "MethodResult", "run_method", "payoff_table", "default_theta"]

METHODS = ("th", "weighted", "single-makespan", "single-profit")


@dataclass
class MethodResult:
    method: str
    alpha: float | None
    status: str
    objective: float = math.nan  # value of the optimized (possibly scalarized) objective
    objectives: dict[str, float] = field(default_factory=dict)
    memberships: dict[str, float] = field(default_factory=dict)
    lambda0: float = math.nan
    payoffs: PayoffTable | None = None
    schedule: Schedule | None = None
    decisions: FinancingDecisions | None = None
    ledger: Ledger | None = None
    solution: MilpSolution | None = field(default=None, repr=False)
    seconds: float = 0.0
    nodes: int = 0
    gap: float = math.nan

    @property
    def profit(self) -> float:
        return self.objectives.get("Z2", self.objectives.get("Z2L", math.nan))

    @property
    def makespan(self) -> float:
        return self.objectives.get("Z1", math.nan)


def default_theta(n_terms: int) -> tuple[float, ...]:
    return ThConfig.even(n_terms).theta


def payoff_table(p: Project, alpha: float | None, limits: SolveLimits | None = None,
                 base: MilpModel | None = None) -> PayoffTable:
    return compute_payoff_table(p, alpha, lambda m: solve_milp(m, limits), base=base)


def _polish(sol: MilpSolution, base: MilpModel) -> list[float]:
    """Re-optimize continuous variables with binaries and the objective held."""
    m = sol.model
    lb = [v.lb for v in m.variables]
    ub = [v.ub for v in m.variables]
    for j, v in enumerate(m.variables):
        if v.kind == "binary":
            lb[j] = ub[j] = round(sol.values[j])
    b = m.extended()
    primary = m.objectives[0]
    tol = 1e-9 * max(1.0, abs(sol.objective))
    if primary.sense == "max":
        b.add_row("hold_primary", primary.coeffs, ">=", sol.objective - primary.constant - tol)
    else:
        b.add_row("hold_primary", primary.coeffs, "<=", sol.objective - primary.constant + tol)
    profit = [o for o in base.objectives if o.label.startswith("Z2")]
    coeffs: dict[int, float] = {}
    for o in profit:
        for j, a in o.coeffs:
            coeffs[j] = coeffs.get(j, 0.0) + a
    b.objectives[:] = [Objective("profit", tuple(sorted(coeffs.items())), "max")]
    lp = solve_lp(b.freeze(), lb=lb, ub=ub)
    if lp.status != "optimal":
        return list(sol.values)
    return lp.values


def run_method(
    p: Project,
    alpha: float | None,
    method: str,
    *,
    gamma: float = 0.4,
    theta: Sequence[float] | None = None,
    weights: Sequence[float] | None = None,
    limits: SolveLimits | None = None,
    payoffs: PayoffTable | None = None,
    base: MilpModel | None = None,
    solver: Callable[[MilpModel, SolveLimits | None], MilpSolution] = solve_milp,
) -> MethodResult:
    """Solve ``method`` on ``p`` (crisp model when ``alpha`` is None)."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    t0 = time.perf_counter()
    base = base or build_model(p, alpha)
    n_obj = len(base.objectives)
    if method == "th":
        cfg = ThConfig(gamma, tuple(theta) if theta is not None else default_theta(n_obj))
        if len(cfg.theta) != n_obj:
            raise ValueError(f"theta needs {n_obj} weights, got {len(cfg.theta)}")
    if method == "weighted":
        weights = tuple(weights) if weights is not None else default_theta(n_obj)
        if len(weights) != n_obj:
            raise ValueError(f"weights need {n_obj} entries, got {len(weights)}")

    if method in ("th", "weighted"):
        if payoffs is None:
            payoffs = compute_payoff_table(p, alpha, lambda m: solver(m, limits), base=base)
        model = build_th_model(base, payoffs, cfg) if method == "th" else build_weighted_sum(base, payoffs, weights)
    elif method == "single-makespan":
        model = base
    else:
        model = base.with_objectives([base.objectives[1]] + [o for k, o in enumerate(base.objectives) if k != 1])

    sol = solver(model, limits)
    res = MethodResult(method, alpha, sol.status, solution=sol, payoffs=payoffs,
                       nodes=sol.nodes, gap=sol.gap)
    if not sol.has_incumbent:
        res.seconds = time.perf_counter() - t0
        return res
    res.objective = sol.objective
    values = _polish(sol, base)
    for o in base.objectives:
        res.objectives[o.label] = base.evaluate(o.label, values)
    if payoffs is not None:
        for o, pis, nis in zip(base.objectives, payoffs.pis, payoffs.nis):
            res.memberships[o.label] = membership(res.objectives[o.label], pis, nis, o.sense)
        res.lambda0 = min(res.memberships.values())
    res.schedule = extract_schedule(sol, p)
    idx = base.var_index
    Y = p.n_periods
    clean = lambda v: max(0.0, v)  # noqa: E731
    pa = tuple(clean(values[idx[f"PA_{y}"]]) for y in range(1, Y + 1))
    dp = tuple(clean(values[idx[f"DP_{y}"]]) for y in range(1, Y + 1))
    res.decisions = FinancingDecisions(
        ltl=clean(values[idx["LTL"]]),
        stl=tuple(clean(values[idx[f"STL_{y}"]]) for y in range(1, Y + 1)),
        pa=pa, dp=dp,
    )
    res.ledger = evaluate_ledger(res.schedule, res.decisions, p, copy="L", tol=1e-6)
    res.seconds = time.perf_counter() - t0
    return res
