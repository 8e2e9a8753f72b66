"""Scheduling instance data model and structural validation."""

from __future__ import annotations

import bisect
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .fuzzy import MixClass, NivtfNumber, crisp, expected_value, mix_coeff

__all__ = [
    "Mode",
    "Activity",
    "PeriodGrid",
    "ResourcePricing",
    "FinanceParams",
    "Project",
    "Diagnostic",
    "ModeTerms",
    "COPIES",
    "validate_project",
    "horizon_bound",
    "mode_terms",
    "round_half_up",
    "start_windows",
]

#: Labels of the two coefficient copies carried by the fuzzy model.
COPIES = ("L", "U")

_EPS = 1e-9


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _ceil(x: float) -> int:
    return int(math.ceil(x - _EPS))


def _floor(x: float) -> int:
    return int(math.floor(x + _EPS))


@dataclass(frozen=True)
class Mode:
    """One execution mode: duration, payment and daily resource usage."""

    duration: NivtfNumber
    payment: float = 0.0
    renewable: tuple[NivtfNumber, ...] = ()
    nonrenewable: tuple[NivtfNumber, ...] = ()

    @property
    def is_crisp(self) -> bool:
        return self.duration.is_crisp and all(
            u.is_crisp for u in self.renewable + self.nonrenewable
        )


@dataclass(frozen=True)
class Activity:
    id: str
    name: str = ""
    predecessors: tuple[str, ...] = ()
    modes: tuple[Mode, ...] = ()
    is_dummy: bool = False

    @classmethod
    def dummy(cls, id: str, predecessors: Iterable[str] = (), *, n_renewable: int = 0,
              n_nonrenewable: int = 0, name: str = "") -> "Activity":
        zero = crisp(0.0)
        mode = Mode(zero, 0.0, (zero,) * n_renewable, (zero,) * n_nonrenewable)
        return cls(id, name or id, tuple(predecessors), (mode,), True)


@dataclass(frozen=True)
class PeriodGrid:
    """Long-term periods given by their closing days ``TY_1 < TY_2 < ...``.

    Period ``y`` (1-based) covers days ``a_y = TY_{y-1} + 1`` through
    ``b_y = TY_y`` with ``TY_0 = 0``, so a boundary day belongs to the period
    it closes.
    """

    boundaries: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.boundaries)

    @property
    def horizon(self) -> int:
        return self.boundaries[-1] if self.boundaries else 0

    def first_day(self, y: int) -> int:
        return (self.boundaries[y - 2] if y > 1 else 0) + 1

    def last_day(self, y: int) -> int:
        return self.boundaries[y - 1]

    def days(self, y: int) -> range:
        return range(self.first_day(y), self.last_day(y) + 1)

    def period_of(self, day: int) -> int:
        if day < 1 or day > self.horizon:
            raise ValueError(f"day {day} lies outside the period grid [1, {self.horizon}]")
        return bisect.bisect_left(self.boundaries, day) + 1

    @classmethod
    def uniform(cls, length: int, count: int) -> "PeriodGrid":
        return cls(tuple(length * (y + 1) for y in range(count)))


@dataclass(frozen=True)
class ResourcePricing:
    cr: tuple[float, ...] = ()
    cw: tuple[float, ...] = ()
    daily_cap: float = math.inf


@dataclass(frozen=True)
class FinanceParams:
    """Capital, credit lines and the four daily interest rates.

    ``r_excess`` compounds the carried balance, ``r_delay`` the delayed
    payments; ``r_long``/``r_short`` divide the loan repayments.
    """

    initial_capital: float = 0.0
    max_long_loan: float = 0.0
    max_short_loan: float = 0.0
    min_cash: float = 0.0
    r_excess: float = 0.0
    r_delay: float = 0.0
    r_long: float = 0.0
    r_short: float = 0.0
    compounding_days: int = 30


@dataclass(frozen=True)
class Project:
    activities: tuple[Activity, ...]
    horizon: int
    periods: PeriodGrid
    pricing: ResourcePricing = ResourcePricing()
    finance: FinanceParams = FinanceParams()
    name: str = ""
    notes: Mapping[str, str] = field(default_factory=dict, compare=False)

    @property
    def n_renewable(self) -> int:
        return len(self.pricing.cr)

    @property
    def n_nonrenewable(self) -> int:
        return len(self.pricing.cw)

    @property
    def n_periods(self) -> int:
        return len(self.periods)

    @property
    def is_crisp(self) -> bool:
        return all(m.is_crisp for a in self.activities for m in a.modes)

    def index(self) -> dict[str, int]:
        return {a.id: i for i, a in enumerate(self.activities)}

    def activity(self, id: str) -> Activity:
        for a in self.activities:
            if a.id == id:
                return a
        raise KeyError(id)

    def successors(self) -> dict[str, list[str]]:
        succ: dict[str, list[str]] = {a.id: [] for a in self.activities}
        for a in self.activities:
            for p in a.predecessors:
                if p in succ:
                    succ[p].append(a.id)
        return succ

    def topological_order(self) -> list[str]:
        """Kahn order, ties broken by declaration order. Raises on cycles."""
        pos = self.index()
        indeg = {a.id: len(set(a.predecessors)) for a in self.activities}
        succ = self.successors()
        ready = deque(a.id for a in self.activities if indeg[a.id] == 0)
        order: list[str] = []
        while ready:
            u = ready.popleft()
            order.append(u)
            for v in sorted(set(succ[u]), key=pos.__getitem__):
                indeg[v] -= 1
                if indeg[v] == 0:
                    ready.append(v)
        if len(order) != len(self.activities):
            raise ValueError("precedence graph contains a cycle")
        return order

    def source(self) -> str:
        return next(a.id for a in self.activities if not a.predecessors)

    def sink(self) -> str:
        succ = self.successors()
        return next(a.id for a in self.activities if not succ[a.id])


@dataclass(frozen=True)
class Diagnostic:
    entity: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.entity}: [{self.rule}] {self.message}"


def _find_cycle(p: Project) -> list[str] | None:
    succ = p.successors()
    color: dict[str, int] = {}
    stack_path: list[str] = []

    def dfs(u: str) -> list[str] | None:
        color[u] = 1
        stack_path.append(u)
        for v in succ[u]:
            if color.get(v, 0) == 1:
                return stack_path[stack_path.index(v):] + [v]
            if color.get(v, 0) == 0:
                found = dfs(v)
                if found:
                    return found
        stack_path.pop()
        color[u] = 2
        return None

    for a in p.activities:
        if color.get(a.id, 0) == 0:
            found = dfs(a.id)
            if found:
                return found
    return None


def validate_project(p: Project) -> list[Diagnostic]:
    """Check every structural invariant; one diagnostic per violation."""
    out: list[Diagnostic] = []

    def bad(entity: str, rule: str, message: str) -> None:
        out.append(Diagnostic(entity, rule, message))

    ids = [a.id for a in p.activities]
    seen: set[str] = set()
    for i in ids:
        if i in seen:
            bad(i, "duplicate id", f"activity id {i!r} declared more than once")
        seen.add(i)

    K, L = p.n_renewable, p.n_nonrenewable
    refs_ok = True
    for a in p.activities:
        for q in a.predecessors:
            if q not in seen:
                refs_ok = False
                bad(a.id, "unknown predecessor", f"predecessor {q!r} does not exist")
            elif q == a.id:
                refs_ok = False
                bad(a.id, "cycle", "activity lists itself as predecessor")
        if not a.modes:
            bad(a.id, "modes", "activity has no execution mode")
        for m_no, m in enumerate(a.modes, start=1):
            tag = f"{a.id}/mode {m_no}"
            if len(m.renewable) != K or len(m.nonrenewable) != L:
                bad(tag, "mode arity",
                    f"expected {K} renewable and {L} non-renewable usages, got "
                    f"{len(m.renewable)} and {len(m.nonrenewable)}")
            if m.duration.modal < 0:
                bad(tag, "non-negative", "duration modal point is negative")
            if m.payment < 0:
                bad(tag, "non-negative", "payment is negative")
            if any(u.modal < 0 for u in m.renewable + m.nonrenewable):
                bad(tag, "non-negative", "resource usage modal point is negative")
        if a.is_dummy:
            zero = crisp(0.0)
            shape_ok = len(a.modes) == 1 and all(
                m.duration == zero and m.payment == 0
                and all(u == zero for u in m.renewable + m.nonrenewable)
                for m in a.modes
            )
            if not shape_ok:
                bad(a.id, "dummy shape",
                    "dummy activity needs exactly one mode with zero duration, payment and usage")

    if refs_ok and p.activities:
        cycle = _find_cycle(p)
        if cycle:
            bad(cycle[0], "cycle", "precedence cycle " + " -> ".join(cycle))
        else:
            sources = [a.id for a in p.activities if not a.predecessors]
            succ = p.successors()
            sinks = [a.id for a in p.activities if not succ[a.id]]
            if len(sources) != 1:
                bad("project", "unique source", f"expected one source activity, found {sources}")
            if len(sinks) != 1:
                bad("project", "unique sink", f"expected one sink activity, found {sinks}")
    elif not p.activities:
        bad("project", "unique source", "project has no activities")

    b = p.periods.boundaries
    if not b:
        bad("periods", "period coverage", "no periods defined")
    else:
        if any(x >= y for x, y in zip(b, b[1:])) or b[0] < 1:
            bad("periods", "period coverage", f"boundaries must be positive and strictly increasing: {b}")
        if b[-1] != p.horizon:
            bad("periods", "period coverage",
                f"last period boundary {b[-1]} differs from horizon {p.horizon}")

    pr = p.pricing
    if any(c < 0 for c in pr.cr + pr.cw) or pr.daily_cap < 0:
        bad("pricing", "non-negative", "resource prices and daily cap must be non-negative")

    f = p.finance
    rates = (f.r_excess, f.r_delay, f.r_long, f.r_short)
    if any(r < 0 for r in rates):
        bad("finance", "non-negative", f"interest rates must be non-negative: {rates}")
    if f.max_long_loan < 0 or f.max_short_loan < 0:
        bad("finance", "non-negative", "loan caps must be non-negative")
    if f.compounding_days < 1:
        bad("finance", "compounding", "compounding_days must be at least 1")
    return out


@dataclass(frozen=True)
class ModeTerms:
    """Crisp coefficients of one mode at a given alpha-level.

    ``lag`` and the usage coefficients are per copy (``"L"``, ``"U"``).
    The L copy carries the pessimistic envelope of the two triangles, the U
    copy the optimistic one, so ``usage["L"] >= usage["U"]`` elementwise.
    ``done_lo``/``done_hi`` bound the integer completion offset and
    ``done_raw`` holds the un-rounded two-sided bounds per copy; it is
    ``None`` when the integer window came out empty and the fallback
    offset ``done_lo == done_hi`` was used.
    """

    lag: Mapping[str, float]
    done_lo: int
    done_hi: int
    done_raw: Mapping[str, tuple[float, float]] | None
    window: Mapping[str, int]
    renewable: Mapping[str, tuple[float, ...]]
    nonrenewable: Mapping[str, tuple[float, ...]]

    @property
    def min_lag(self) -> int:
        """Smallest integer start-to-start gap the precedence rows allow."""
        return _ceil(max(self.lag.values()))


def _usage_pair(u: NivtfNumber, alpha: float) -> tuple[float, float]:
    a = mix_coeff(u.lower, alpha, MixClass.LEQ_FULL)
    b = mix_coeff(u.upper, alpha, MixClass.LEQ_FULL)
    return max(a, b), min(a, b)


def mode_terms(mode: Mode, alpha: float | None) -> ModeTerms:
    """Coefficients of ``mode`` in the crisp (``alpha=None``) or fuzzy model."""
    if alpha is None:
        if not mode.is_crisp:
            raise ValueError("crisp terms requested for a fuzzy mode; pass an alpha-level")
        d = mode.duration.modal
        di = round_half_up(d)
        if di != d:
            raise ValueError(f"crisp duration {d} is not a whole number of days")
        ren = tuple(u.modal for u in mode.renewable)
        non = tuple(u.modal for u in mode.nonrenewable)
        return ModeTerms(
            lag={"L": float(di), "U": float(di)},
            done_lo=di, done_hi=di, done_raw={"L": (float(di), float(di)), "U": (float(di), float(di))},
            window={"L": di, "U": di},
            renewable={"L": ren, "U": ren},
            nonrenewable={"L": non, "U": non},
        )

    dur = mode.duration
    lag = {c: mix_coeff(dur.triangle(c), alpha, MixClass.GEQ_FULL) for c in COPIES}
    raw = {
        c: (mix_coeff(dur.triangle(c), alpha, MixClass.GEQ_HALF),
            mix_coeff(dur.triangle(c), alpha, MixClass.LEQ_HALF))
        for c in COPIES
    }
    lo_raw = max(r[0] for r in raw.values())
    hi_raw = min(r[1] for r in raw.values())
    lo, hi = _ceil(lo_raw), _floor(hi_raw)
    done_raw: Mapping[str, tuple[float, float]] | None = raw
    if lo > hi:
        # no whole day satisfies the two-sided completion rows
        lo = hi = max(0, round_half_up((lo_raw + hi_raw) / 2.0))
        done_raw = None
    ev = [round_half_up(expected_value(dur.triangle(c))) for c in COPIES]
    ren = [_usage_pair(u, alpha) for u in mode.renewable]
    non = [_usage_pair(u, alpha) for u in mode.nonrenewable]
    return ModeTerms(
        lag=lag,
        done_lo=lo,
        done_hi=hi,
        done_raw=done_raw,
        window={"L": max(ev), "U": min(ev)},
        renewable={"L": tuple(r[0] for r in ren), "U": tuple(r[1] for r in ren)},
        nonrenewable={"L": tuple(r[0] for r in non), "U": tuple(r[1] for r in non)},
    )


def horizon_bound(p: Project, alpha: float = 0.0) -> int:
    """Upper bound on the makespan of any schedule at ``alpha``.

    Sums, over activities, the largest rounded-up duration coefficient any
    mode can impose (precedence lag or completion offset, both triangles).
    """
    total = 0
    for a in p.activities:
        worst = 0
        for m in a.modes:
            for c in COPIES:
                t = m.duration.triangle(c)
                v = max(mix_coeff(t, alpha, MixClass.GEQ_FULL), mix_coeff(t, alpha, MixClass.LEQ_HALF))
                worst = max(worst, _ceil(v))
        total += worst
    return total


def start_windows(
    p: Project, terms: Sequence[Sequence[ModeTerms]]
) -> tuple[list[int], list[list[int]]]:
    """Earliest start per activity and latest start per (activity, mode).

    ``terms[i][m]`` are the mode terms of activity ``i``. The windows only
    drop start days that no feasible schedule can use.
    """
    pos = p.index()
    order = [pos[i] for i in p.topological_order()]
    succ = p.successors()
    n = len(p.activities)
    es = [1] * n
    for i in order:
        for q in p.activities[i].predecessors:
            qi = pos[q]
            es[i] = max(es[i], es[qi] + min(t.min_lag for t in terms[qi]))
    ls: list[list[int]] = [[p.horizon] * len(terms[i]) for i in range(n)]
    for i in reversed(order):
        nexts = [pos[s] for s in succ[p.activities[i].id]]
        for m, t in enumerate(terms[i]):
            bound = p.horizon - t.done_lo
            for j in nexts:
                bound = min(bound, max(ls[j]) - t.min_lag)
            ls[i][m] = bound
    return es, ls
