"""Cash-flow ledger arithmetic for a fixed schedule and its financing LP."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .project import COPIES, ModeTerms, Project, mode_terms

__all__ = [
    "ScheduledActivity",
    "Schedule",
    "FinancingDecisions",
    "Ledger",
    "LEDGER_TERMS",
    "FinancingInfeasible",
    "compound_credit",
    "repay_debit",
    "schedule_violations",
    "daily_costs",
    "period_costs",
    "period_due",
    "evaluate_ledger",
    "optimize_financing",
]


@dataclass(frozen=True)
class ScheduledActivity:
    activity: str
    mode: int  # 1-based
    start: int
    completion: int


@dataclass(frozen=True)
class Schedule:
    """Mode, start and completion day per activity.

    ``alpha`` records the level the schedule was built for; ``None`` marks a
    crisp schedule.
    """

    items: tuple[ScheduledActivity, ...]
    alpha: float | None = None

    def entry(self, activity: str) -> ScheduledActivity:
        for it in self.items:
            if it.activity == activity:
                return it
        raise KeyError(activity)

    def makespan(self, p: Project) -> int:
        return self.entry(p.sink()).completion

    def completion_period(self, p: Project, activity: str) -> int:
        return p.periods.period_of(self.entry(activity).completion)


@dataclass(frozen=True)
class FinancingDecisions:
    ltl: float
    stl: tuple[float, ...]
    pa: tuple[float, ...]
    dp: tuple[float, ...]

    def __post_init__(self) -> None:
        if not len(self.stl) == len(self.pa) == len(self.dp):
            raise ValueError("stl, pa and dp must have one entry per period")
        for name, vals in (("ltl", (self.ltl,)), ("stl", self.stl), ("pa", self.pa), ("dp", self.dp)):
            if any(v < 0 or not math.isfinite(v) for v in vals):
                raise ValueError(f"{name} must be finite and non-negative: {vals}")

    @property
    def n_periods(self) -> int:
        return len(self.stl)


#: Itemized ledger terms in summation order. Debits are stored negated.
LEDGER_TERMS = (
    "capital",
    "long_loan",
    "short_loan",
    "payments",
    "excess_credit",
    "delay_credit",
    "resource_cost",
    "long_debit",
    "short_debit",
)


@dataclass(frozen=True)
class Ledger:
    """Per-period financial trace.

    ``items[y][k]`` is term ``LEDGER_TERMS[k]`` of period ``y + 1``; the
    period's cash flow is their left-to-right sum.
    """

    items: tuple[tuple[float, ...], ...]
    cf: tuple[float, ...]
    tbu: tuple[float, ...]
    stl: tuple[float, ...]
    pa: tuple[float, ...]
    dp: tuple[float, ...]
    due: tuple[float, ...]
    ltl: float = 0.0
    daily_cost: tuple[float, ...] = ()
    violations: tuple[str, ...] = field(default=(), compare=False)

    @property
    def n_periods(self) -> int:
        return len(self.cf)

    @property
    def final(self) -> float:
        return self.cf[-1] if self.cf else math.nan

    @property
    def feasible(self) -> bool:
        return not self.violations

    def term(self, name: str) -> tuple[float, ...]:
        k = LEDGER_TERMS.index(name)
        return tuple(row[k] for row in self.items)


class FinancingInfeasible(RuntimeError):
    def __init__(self, period: int, message: str = "") -> None:
        super().__init__(message or f"no financing keeps the cash floor in period {period}")
        self.period = period


def compound_credit(amount: float, rate: float, days: int) -> float:
    """``amount`` grown at a daily ``rate`` over ``days``."""
    if amount < 0:
        raise ValueError(f"amount must be non-negative, got {amount}")
    return amount * (1.0 + rate) ** days


def repay_debit(principal: float, rate: float, days: int) -> float:
    """Loan repayment debit, ``principal / (1 + rate)**days``."""
    if principal < 0:
        raise ValueError(f"principal must be non-negative, got {principal}")
    return principal / (1.0 + rate) ** days


def _sum_items(row: Sequence[float]) -> float:
    total = 0.0
    for v in row:
        total += v
    return total


def _terms(p: Project, alpha: float | None) -> list[list[ModeTerms]]:
    return [[mode_terms(m, alpha) for m in a.modes] for a in p.activities]


def schedule_violations(s: Schedule, p: Project) -> list[str]:
    """Precedence, duration and horizon violations of ``s``; empty when valid."""
    out: list[str] = []
    ids = {it.activity for it in s.items}
    for a in p.activities:
        if a.id not in ids:
            out.append(f"activity {a.id} is not scheduled")
    if out:
        return out
    terms = _terms(p, s.alpha)
    pos = p.index()
    T = p.horizon
    for it in s.items:
        if it.activity not in pos:
            out.append(f"unknown activity {it.activity}")
            continue
        i = pos[it.activity]
        if not 1 <= it.mode <= len(terms[i]):
            out.append(f"activity {it.activity}: mode {it.mode} does not exist")
            continue
        tm = terms[i][it.mode - 1]
        if it.start < 1 or it.completion > T:
            out.append(f"activity {it.activity}: days {it.start}..{it.completion} leave the horizon [1, {T}]")
        if not tm.done_lo <= it.completion - it.start <= tm.done_hi:
            out.append(f"activity {it.activity}: completion {it.completion} does not match start {it.start} "
                       f"and duration window [{tm.done_lo}, {tm.done_hi}]")
    if out:
        return out
    for a in p.activities:
        for q in a.predecessors:
            pi, si = s.entry(q), s.entry(a.id)
            lag = terms[pos[q]][pi.mode - 1].min_lag
            if si.start < pi.start + lag:
                out.append(f"precedence {q} -> {a.id} violated: {a.id} starts on day {si.start}, "
                           f"before {q} finishes (day {pi.start + lag})")
    return out


def daily_costs(s: Schedule, p: Project, copy: str = "L") -> list[float]:
    """Resource cost of every day of the horizon for one coefficient copy."""
    if copy not in COPIES:
        raise ValueError(f"copy must be one of {COPIES}")
    terms = _terms(p, s.alpha)
    pos = p.index()
    T = p.horizon
    K, L = p.n_renewable, p.n_nonrenewable
    ren = [[0.0] * (T + 1) for _ in range(K)]
    non = [[0.0] * (T + 1) for _ in range(L)]
    for it in s.items:
        tm = terms[pos[it.activity]][it.mode - 1]
        w = tm.window[copy]
        for day in range(it.start, min(T, it.start + w - 1) + 1):
            for k in range(K):
                ren[k][day] += tm.renewable[copy][k]
            for l in range(L):
                non[l][day] += tm.nonrenewable[copy][l]
    cr, cw = p.pricing.cr, p.pricing.cw
    out = []
    for t in range(1, T + 1):
        out.append(sum(cr[k] * ren[k][t] for k in range(K)) + sum(cw[l] * non[l][t] for l in range(L)))
    return out


def period_costs(s: Schedule, p: Project, copy: str = "L") -> list[float]:
    daily = daily_costs(s, p, copy)
    return [sum(daily[t - 1] for t in p.periods.days(y)) for y in range(1, p.n_periods + 1)]


def period_due(s: Schedule, p: Project, y: int) -> float:
    """Payments of activities completing inside period ``y``."""
    total = 0.0
    for a in p.activities:
        it = s.entry(a.id)
        if p.periods.first_day(y) <= it.completion <= p.periods.last_day(y):
            total += a.modes[it.mode - 1].payment
    return total


def evaluate_ledger(
    s: Schedule | None,
    d: FinancingDecisions,
    p: Project,
    *,
    copy: str = "L",
    tbu: Sequence[float] | None = None,
    tol: float = 1e-7,
) -> Ledger:
    """Replay the cash-flow recursion for fixed decisions.

    Per-period resource cost comes from the schedule unless ``tbu`` is given.
    Floor, cap and due mismatches are listed in ``Ledger.violations``; the
    numbers themselves are never altered.
    """
    Y = p.n_periods
    if d.n_periods != Y:
        raise ValueError(f"decisions cover {d.n_periods} periods, project has {Y}")
    violations: list[str] = []
    daily: tuple[float, ...] = ()
    if tbu is None:
        if s is None:
            raise ValueError("either a schedule or per-period costs are required")
        dl = daily_costs(s, p, copy)
        daily = tuple(dl)
        tbu = [sum(dl[t - 1] for t in p.periods.days(y)) for y in range(1, Y + 1)]
        for t, v in enumerate(dl, start=1):
            if v > p.pricing.daily_cap * (1 + tol) + tol:
                violations.append(f"day {t}: resource cost {v:.3f} exceeds cap {p.pricing.daily_cap:.3f}")
    elif len(tbu) != Y:
        raise ValueError(f"tbu has {len(tbu)} entries, project has {Y} periods")
    tbu = tuple(float(v) for v in tbu)

    if s is not None:
        due = tuple(period_due(s, p, y) for y in range(1, Y + 1))
        for y in range(Y):
            if abs(d.pa[y] + d.dp[y] - due[y]) > tol * max(1.0, due[y]):
                violations.append(f"period {y + 1}: paid {d.pa[y]:.3f} + delayed {d.dp[y]:.3f} != due {due[y]:.3f}")
    else:
        due = tuple(a + b for a, b in zip(d.pa, d.dp))

    f = p.finance
    D = f.compounding_days
    if d.ltl > f.max_long_loan * (1 + tol) + tol:
        violations.append(f"long-term loan {d.ltl:.3f} exceeds cap {f.max_long_loan:.3f}")
    items: list[tuple[float, ...]] = []
    cf: list[float] = []
    for y in range(Y):
        if d.stl[y] > f.max_short_loan * (1 + tol) + tol:
            violations.append(f"period {y + 1}: short-term loan {d.stl[y]:.3f} exceeds cap {f.max_short_loan:.3f}")
        if y == 0:
            row = (f.initial_capital, d.ltl, d.stl[0], d.pa[0], 0.0, 0.0, -tbu[0], 0.0, 0.0)
        else:
            # a negative carried balance compounds like a positive one
            carry = math.copysign(compound_credit(abs(cf[y - 1]), f.r_excess, D), cf[y - 1])
            row = (
                0.0, 0.0, d.stl[y], d.pa[y], carry,
                compound_credit(d.dp[y - 1], f.r_delay, D),
                -tbu[y],
                -repay_debit(d.ltl, f.r_long, D),
                -repay_debit(d.stl[y - 1], f.r_short, D),
            )
        items.append(row)
        cf.append(_sum_items(row))
        if cf[-1] < f.min_cash - tol * max(1.0, abs(f.min_cash)):
            violations.append(f"period {y + 1}: cash {cf[-1]:.3f} below floor {f.min_cash:.3f}")
    return Ledger(
        items=tuple(items), cf=tuple(cf), tbu=tbu, stl=tuple(d.stl), pa=tuple(d.pa), dp=tuple(d.dp),
        due=due, ltl=d.ltl, daily_cost=daily, violations=tuple(violations),
    )


def _financing_model(p: Project, due: Sequence[float], tbu: dict[str, Sequence[float]], floors_upto: int):
    from .model import ModelBuilder, Objective

    f = p.finance
    D = f.compounding_days
    Y = p.n_periods
    b = ModelBuilder()
    ltl = b.add_var("LTL", ub=f.max_long_loan)
    stl = [b.add_var(f"STL_{y}", ub=f.max_short_loan) for y in range(1, Y + 1)]
    pa = [b.add_var(f"PA_{y}") for y in range(1, Y + 1)]
    dp = [b.add_var(f"DP_{y}") for y in range(1, Y + 1)]
    cf = {}
    for c in tbu:
        cf[c] = [
            b.add_var(f"CF_{c}_{y}", lb=f.min_cash if y <= floors_upto else -math.inf)
            for y in range(1, Y + 1)
        ]
    for y in range(Y):
        b.add_row(f"due_{y+1}", [(pa[y], 1.0), (dp[y], 1.0)], "=", due[y])
    ge, gd = (1 + f.r_excess) ** D, (1 + f.r_delay) ** D
    gl, gs = (1 + f.r_long) ** D, (1 + f.r_short) ** D
    for c, costs in tbu.items():
        for y in range(Y):
            if y == 0:
                b.add_row(f"cash_{c}_1", [(cf[c][0], 1.0), (stl[0], -1.0), (ltl, -1.0), (pa[0], -1.0)],
                          "=", f.initial_capital - costs[0])
            else:
                b.add_row(f"cash_{c}_{y+1}", [
                    (cf[c][y], 1.0), (stl[y], -1.0), (cf[c][y - 1], -ge), (pa[y], -1.0), (dp[y - 1], -gd),
                    (ltl, 1.0 / gl), (stl[y - 1], 1.0 / gs)], "=", -costs[y])
    if "U" in cf and "L" in cf:
        b.add_row("link_profit", [(cf["U"][-1], 1.0), (cf["L"][-1], -1.0)], ">=", 0.0)
    first = "L" if "L" in cf else next(iter(cf))
    b.objectives.append(Objective("Z2", ((cf[first][-1], 1.0),), "max"))
    return b.freeze(), ltl, stl, pa, dp


def optimize_financing(
    s: Schedule, p: Project, *, tbu: dict[str, Sequence[float]] | None = None
) -> tuple[FinancingDecisions, Ledger]:
    """Financing decisions that maximize final cash for a fixed schedule.

    Fuzzy schedules (``s.alpha`` set) carry both cost copies; the floor
    applies to each and the objective is the L-copy final cash. Raises
    :class:`FinancingInfeasible` naming the first period whose floor cannot
    be met.
    """
    from .solver.lp import solve_lp

    Y = p.n_periods
    due = [period_due(s, p, y) for y in range(1, Y + 1)]
    if tbu is None:
        copies = COPIES if s.alpha is not None else ("L",)
        tbu = {c: period_costs(s, p, c) for c in copies}
    model, ltl, stl, pa, dp = _financing_model(p, due, tbu, Y)
    sol = solve_lp(model)
    if sol.status == "infeasible":
        for upto in range(1, Y + 1):
            probe = solve_lp(_financing_model(p, due, tbu, upto)[0])
            if probe.status == "infeasible":
                raise FinancingInfeasible(upto)
        raise FinancingInfeasible(Y)
    if sol.status != "optimal":
        raise RuntimeError(f"financing LP ended with status {sol.status}")
    x = sol.values

    def clean(v: float, cap: float = math.inf) -> float:
        return min(max(0.0, v), cap)

    # split pa/dp exactly on the due amount so the replay sees pa + dp == due
    pa_v = [min(clean(x[pa[y]]), due[y]) for y in range(Y)]
    dec = FinancingDecisions(
        ltl=clean(x[ltl], p.finance.max_long_loan),
        stl=tuple(clean(x[j], p.finance.max_short_loan) for j in stl),
        pa=tuple(pa_v),
        dp=tuple(due[y] - pa_v[y] for y in range(Y)),
    )
    return dec, evaluate_ledger(s, dec, p, copy="L", tbu=tbu.get("L", next(iter(tbu.values()))) if tbu else None)
