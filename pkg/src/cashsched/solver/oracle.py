"""Exhaustive enumeration oracle and schedule decoding.

The oracle walks every mode/start/completion assignment that respects
precedence and the horizon, prices each distinct cost/payment profile with
:func:`optimize_financing`, and evaluates the requested objective directly
on the resulting objective vectors. It shares no code with the model builder,
so agreement with branch-and-bound is a genuine cross-check.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..finance import FinancingInfeasible, Schedule, ScheduledActivity, evaluate_ledger, optimize_financing
from ..project import COPIES, Project, mode_terms, start_windows
from .milp import MilpSolution, SolveLimits

__all__ = [
    "ObjectiveSpec",
    "OracleRefused",
    "DecodeError",
    "SchedulePoint",
    "enumerate_schedules",
    "oracle_points",
    "oracle_payoffs",
    "enumerate_exhaustive",
    "extract_schedule",
    "DEFAULT_LEAF_CAP",
]

DEFAULT_LEAF_CAP = 10_000_000
_REL = 1e-9


class OracleRefused(RuntimeError):
    """The search space exceeds the configured leaf cap."""


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class ObjectiveSpec:
    """What the oracle optimizes.

    ``kind`` is ``makespan``, ``profit``, ``th`` or ``weighted``. The two
    aggregate kinds normalize against ``payoffs`` (a ``(pis, nis)`` pair of
    tuples); when omitted the oracle derives its own payoff table.
    """

    kind: str
    gamma: float = 0.4
    theta: tuple[float, ...] = ()
    weights: tuple[float, ...] = ()
    payoffs: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("makespan", "profit", "th", "weighted"):
            raise ValueError(f"unknown objective kind {self.kind!r}")


@dataclass(frozen=True)
class SchedulePoint:
    """A feasible schedule with optimal financing and its objective vector.

    ``values`` is ``(Z1, Z2)`` for crisp runs and ``(Z1, Z2L, Z2U)`` for
    fuzzy runs.
    """

    schedule: Schedule
    values: tuple[float, ...]


def _check_cap(count: int, cap: int) -> None:
    if count > cap:
        raise OracleRefused(f"search space exceeds {cap} leaves; refusing to return a truncated optimum")


def enumerate_schedules(p: Project, alpha: float | None, cap: int = DEFAULT_LEAF_CAP,
                        *, dominance: bool = True):
    """Yield ``(schedule, due, tbu_by_copy)`` for every feasible schedule.

    Resource-cost caps are enforced here. With ``dominance`` set, zero-length
    dummy activities start as early as their predecessors allow, which never
    worsens any objective and keeps the tree small.
    """
    acts = p.activities
    n = len(acts)
    if n == 0:
        yield Schedule((), alpha), (0.0,) * p.n_periods, {c: (0.0,) * p.n_periods for c in _copies(alpha)}
        return
    T = p.horizon
    Y = p.n_periods
    copies = _copies(alpha)
    terms = [[mode_terms(m, alpha) for m in a.modes] for a in acts]
    es, ls = start_windows(p, terms)
    pos = p.index()
    order = [pos[i] for i in p.topological_order()]
    preds = [[pos[q] for q in a.predecessors] for a in acts]
    period_of = [0] + [p.periods.period_of(t) for t in range(1, T + 1)]
    cap_day = p.pricing.daily_cap
    cr, cw = np.array(p.pricing.cr, dtype=float), np.array(p.pricing.cw, dtype=float)

    def daily(i: int, m: int, start: int, c: str) -> np.ndarray:
        tm = terms[i][m]
        per_day = float(cr @ np.array(tm.renewable[c], dtype=float)) if len(cr) else 0.0
        per_day += float(cw @ np.array(tm.nonrenewable[c], dtype=float)) if len(cw) else 0.0
        out = np.zeros(T)
        if per_day:
            out[start - 1: min(T, start + tm.window[c] - 1)] = per_day
        return out

    cost_cache: dict[tuple[int, int, int, str], np.ndarray] = {}

    def cost(i, m, s, c):
        key = (i, m, s, c)
        v = cost_cache.get(key)
        if v is None:
            v = cost_cache[key] = daily(i, m, s, c)
        return v

    start = [0] * n
    mode = [0] * n
    done = [0] * n
    leaves = 0
    usage = {c: np.zeros(T) for c in copies}
    due = [0.0] * (Y + 1)
    bounds = [[(p.periods.first_day(y), p.periods.last_day(y)) for y in range(1, Y + 1)]]

    def rec(k: int):
        nonlocal leaves
        if k == n:
            leaves += 1
            _check_cap(leaves, cap)
            for c in copies:
                if usage[c].max(initial=0.0) > cap_day * (1 + 1e-9) + 1e-9:
                    return
            items = tuple(
                ScheduledActivity(acts[i].id, mode[i] + 1, start[i], done[i]) for i in range(n)
            )
            tbu = {c: tuple(float(usage[c][a - 1:b].sum()) for a, b in bounds[0]) for c in copies}
            yield Schedule(items, alpha), tuple(due[1:]), tbu
            return
        i = order[k]
        a = acts[i]
        for m, tm in enumerate(terms[i]):
            lo = es[i]
            for q in preds[i]:
                lo = max(lo, start[q] + terms[q][mode[q]].min_lag)
            hi = ls[i][m]
            if a.is_dummy and dominance:
                hi = min(hi, lo)
            for s in range(lo, hi + 1):
                offsets = range(tm.done_lo, tm.done_hi + 1)
                if a.is_dummy and dominance:
                    offsets = range(tm.done_lo, tm.done_lo + 1)
                adds = {c: cost(i, m, s, c) for c in copies}
                for c in copies:
                    usage[c] += adds[c]
                for off in offsets:
                    f = s + off
                    if f > T:
                        break
                    y = period_of[f]
                    pay = a.modes[m].payment
                    due[y] += pay
                    start[i], mode[i], done[i] = s, m, f
                    yield from rec(k + 1)
                    due[y] -= pay
                for c in copies:
                    usage[c] -= adds[c]

    yield from rec(0)


def _copies(alpha: float | None) -> tuple[str, ...]:
    return COPIES if alpha is not None else ("L",)


@lru_cache(maxsize=64)
def oracle_points(p: Project, alpha: float | None, cap: int = DEFAULT_LEAF_CAP) -> tuple[SchedulePoint, ...]:
    """Every distinct objective vector reachable with optimal financing."""
    fin_cache: dict[tuple, tuple[float, ...] | None] = {}
    seen: dict[tuple, SchedulePoint] = {}
    sink = p.sink() if p.activities else None
    for sched, due, tbu in enumerate_schedules(p, alpha, cap):
        z1 = float(sched.entry(sink).completion) if sink else 0.0
        key = (due, tuple(tbu[c] for c in sorted(tbu)))
        if (z1,) + key in seen:
            continue
        if key not in fin_cache:
            try:
                dec, led = optimize_financing(sched, p, tbu=tbu)
            except FinancingInfeasible:
                fin_cache[key] = None
            else:
                if alpha is None:
                    fin_cache[key] = (led.final,)
                else:
                    up = evaluate_ledger(None, dec, p, tbu=tbu["U"])
                    fin_cache[key] = (led.final, up.final)
        fin = fin_cache[key]
        if fin is None:
            continue
        seen[(z1,) + key] = SchedulePoint(sched, (z1,) + fin)
    return tuple(seen.values())


_SENSES_CRISP = ("min", "max")
_SENSES_FUZZY = ("min", "max", "max")


def _better(a: float, b: float, sense: str) -> bool:
    return a < b if sense == "min" else a > b


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= _REL * max(1.0, abs(a), abs(b))


def _lexicographic(points: Sequence[SchedulePoint], order: Sequence[int], senses) -> SchedulePoint:
    pool = list(points)
    for k in order:
        pick = min if senses[k] == "min" else max
        best = pick(pt.values[k] for pt in pool)
        pool = [pt for pt in pool if _close(pt.values[k], best) or _better(pt.values[k], best, senses[k])]
    return pool[0]


def oracle_payoffs(p: Project, alpha: float | None, cap: int = DEFAULT_LEAF_CAP):
    """``(pis, nis)`` from lexicographic optima over the enumerated points."""
    pts = oracle_points(p, alpha, cap)
    if not pts:
        raise FinancingInfeasible(1, "no feasible schedule")
    senses = _SENSES_FUZZY if alpha is not None else _SENSES_CRISP
    k = len(senses)
    table = []
    for j in range(k):
        best = _lexicographic(pts, [j] + [i for i in range(k) if i != j], senses)
        table.append(best.values)
    pis = tuple(table[j][j] for j in range(k))
    nis = []
    for i in range(k):
        others = [table[j][i] for j in range(k) if j != i] or [pis[i]]
        nis.append(max(others) if senses[i] == "min" else min(others))
    return pis, tuple(nis)


def _memberships(values, pis, nis, senses) -> list[float] | None:
    mus = []
    for v, a, b, s in zip(values, pis, nis, senses):
        if a == b:
            mus.append(1.0)
            continue
        lin = (v - b) / (a - b) if s == "max" else (b - v) / (b - a)
        if lin < -1e-9:
            return None  # outside the region the linear memberships admit
        mus.append(min(1.0, max(0.0, lin)))
    return mus


def enumerate_exhaustive(
    p: Project,
    alpha: float | None,
    objective: ObjectiveSpec,
    lim: SolveLimits | None = None,
    *,
    cap: int = DEFAULT_LEAF_CAP,
) -> MilpSolution:
    """True optimum of ``objective`` by complete enumeration.

    The returned solution carries the objective value and, in ``schedule``,
    one optimal schedule; ``nodes`` counts the distinct objective vectors.
    """
    t0 = time.perf_counter()
    pts = oracle_points(p, alpha, cap)
    if lim is not None and time.perf_counter() - t0 > lim.max_seconds:
        raise OracleRefused("enumeration exceeded the time limit")
    if not pts:
        return MilpSolution("infeasible", nodes=0, seconds=time.perf_counter() - t0)
    senses = _SENSES_FUZZY if alpha is not None else _SENSES_CRISP
    best_val = -math.inf
    best_pt = None
    if objective.kind in ("makespan", "profit"):
        j = 0 if objective.kind == "makespan" else 1
        pt = _lexicographic(pts, [j], senses)
        best_pt, best_val = pt, pt.values[j]
    else:
        pis, nis = objective.payoffs or oracle_payoffs(p, alpha, cap)
        for pt in pts:
            mus = _memberships(pt.values, pis, nis, senses)
            if mus is None:
                continue
            if objective.kind == "th":
                if len(objective.theta) != len(mus):
                    raise ValueError("theta length does not match the number of objectives")
                val = objective.gamma * min(mus) + (1 - objective.gamma) * sum(
                    t * mu for t, mu in zip(objective.theta, mus))
            else:
                if len(objective.weights) != len(mus):
                    raise ValueError("weights length does not match the number of objectives")
                val = sum(w * mu for w, mu in zip(objective.weights, mus))
            if val > best_val + 1e-12:
                best_val, best_pt = val, pt
        if best_pt is None:
            return MilpSolution("infeasible", nodes=len(pts), seconds=time.perf_counter() - t0)
    sol = MilpSolution("optimal", best_val, [], len(pts), time.perf_counter() - t0, 0.0)
    sol.schedule = best_pt.schedule
    sol.point_values = best_pt.values
    return sol


def extract_schedule(sol: MilpSolution, p: Project) -> Schedule:
    """Decode modes, starts and completions from the X/XP binaries."""
    if not sol.has_incumbent or sol.model is None:
        raise DecodeError(f"no incumbent to decode (status {sol.status})")
    idx = sol.model.var_index
    alpha = sol.model.meta.get("alpha")
    T = p.horizon
    items = []
    for i, a in enumerate(p.activities, start=1):
        starts, ends = [], []
        for m in range(1, len(a.modes) + 1):
            for t in range(1, T + 1):
                for tag, bucket in (("X", starts), ("XP", ends)):
                    v = sol.values[idx[f"{tag}_{i}_{m}_{t}"]]
                    if min(abs(v), abs(v - 1)) > 1e-6:
                        raise DecodeError(f"{tag}_{i}_{m}_{t} = {v} is not integral")
                    if v > 0.5:
                        bucket.append((m, t))
        if len(starts) != 1:
            raise DecodeError(f"activity {a.id}: expected one start assignment, found {starts}")
        if len(ends) != 1:
            raise DecodeError(f"activity {a.id}: expected one completion assignment, found {ends}")
        (m, s), (m2, f) = starts[0], ends[0]
        if m != m2:
            raise DecodeError(f"activity {a.id}: starts in mode {m} but completes in mode {m2}")
        items.append(ScheduledActivity(a.id, m, s, f))
    return Schedule(tuple(items), alpha)
