"""Solver-agnostic linear models of the scheduling and cash-flow problem.

The time-indexed formulation uses binaries ``X_i_m_t`` (activity ``i``
starts in mode ``m`` on day ``t``), ``XP_i_m_t`` (completes on day ``t``)
and ``XYP_i_m_y_t`` (completes on day ``t`` inside period ``y``), plus the
continuous resource and financing chain. Indices in names are 1-based
positions, so activity ids never leak into identifiers.

The fuzzy model keeps one set of scheduling binaries and duplicates the
resource/financing chain into an ``L`` copy (pessimistic coefficient
envelope) and a ``U`` copy (optimistic envelope); names of copied
variables carry the copy letter, e.g. ``CF_L_3``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, TextIO

import numpy as np

from .project import COPIES, ModeTerms, Project, mode_terms, start_windows

__all__ = [
    "Variable",
    "Constraint",
    "Objective",
    "MilpModel",
    "ModelBuilder",
    "ModelSizeError",
    "InfeasibleError",
    "UnboundedError",
    "PayoffTable",
    "ThConfig",
    "build_crisp_model",
    "build_ivf_model",
    "build_model",
    "compute_payoff_table",
    "membership",
    "build_th_model",
    "build_weighted_sum",
    "fix_objective",
    "export_lp",
]

BINARY = "binary"
CONTINUOUS = "continuous"

#: Default cap on declared variables before builders refuse to proceed.
MAX_VARIABLES = 400_000


class ModelSizeError(RuntimeError):
    """The time-indexed grid is too large to build for the embedded solver."""


class InfeasibleError(RuntimeError):
    pass


class UnboundedError(RuntimeError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str = CONTINUOUS
    lb: float = 0.0
    ub: float = math.inf


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: tuple[tuple[int, float], ...]
    sense: str  # "<=", ">=", "="
    rhs: float


@dataclass(frozen=True)
class Objective:
    label: str
    coeffs: tuple[tuple[int, float], ...]
    sense: str  # "min" or "max"
    constant: float = 0.0


@dataclass(frozen=True)
class MilpModel:
    """Immutable linear model. ``objectives[0]`` is the one solvers optimize;
    the remaining objectives are carried for reporting."""

    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    objectives: tuple[Objective, ...]
    meta: Mapping[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        n = len(self.variables)
        self._check_objectives(n)
        for c in self.constraints:
            if not math.isfinite(c.rhs):
                raise ValueError(f"constraint {c.name} has non-finite rhs")
            for j, a in c.coeffs:
                if not 0 <= j < n or not math.isfinite(a):
                    raise ValueError(f"constraint {c.name} references a bad coefficient ({j}, {a})")

    def _check_objectives(self, n: int) -> None:
        for o in self.objectives:
            for j, a in o.coeffs:
                if not 0 <= j < n or not math.isfinite(a):
                    raise ValueError(f"objective {o.label} references a bad coefficient ({j}, {a})")

    @property
    def var_index(self) -> dict[str, int]:
        idx = self.__dict__.get("_var_index")
        if idx is None:
            idx = {v.name: j for j, v in enumerate(self.variables)}
            object.__setattr__(self, "_var_index", idx)
        return idx

    def row_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Constraint rows in CSR form: ``(indptr, indices, data, rhs, sense)``.

        ``sense`` holds -1 for ``<=``, 0 for ``=`` and 1 for ``>=``.
        """
        arrs = self.__dict__.get("_rows")
        if arrs is None:
            indptr = np.zeros(len(self.constraints) + 1, dtype=np.int64)
            idx: list[int] = []
            dat: list[float] = []
            for r, c in enumerate(self.constraints):
                for j, a in c.coeffs:
                    idx.append(j)
                    dat.append(a)
                indptr[r + 1] = len(idx)
            code = {"<=": -1, "=": 0, ">=": 1}
            arrs = (indptr, np.array(idx, dtype=np.int64), np.array(dat, dtype=float),
                    np.array([c.rhs for c in self.constraints], dtype=float),
                    np.array([code[c.sense] for c in self.constraints], dtype=np.int8))
            object.__setattr__(self, "_rows", arrs)
        return arrs

    def objective(self, key: int | str = 0) -> Objective:
        if isinstance(key, int):
            return self.objectives[key]
        for o in self.objectives:
            if o.label == key:
                return o
        raise KeyError(f"no objective labelled {key!r}")

    def n_binaries(self) -> int:
        return sum(v.kind == BINARY for v in self.variables)

    def evaluate(self, key: int | str, values: Sequence[float]) -> float:
        o = self.objective(key)
        return o.constant + sum(a * values[j] for j, a in o.coeffs)

    def with_objectives(self, objectives: Sequence[Objective], **meta) -> "MilpModel":
        # rows are unchanged and were checked when this model was built
        m = object.__new__(MilpModel)
        for name, value in (("variables", self.variables), ("constraints", self.constraints),
                            ("objectives", tuple(objectives)), ("meta", {**self.meta, **meta})):
            object.__setattr__(m, name, value)
        m._check_objectives(len(self.variables))
        return m

    def extended(self) -> "ModelBuilder":
        """Builder seeded with this model's content, for derived models."""
        b = ModelBuilder()
        b.variables.extend(self.variables)
        b.index.update(self.var_index)
        b.constraints.extend(self.constraints)
        b.objectives.extend(self.objectives)
        b.meta.update(self.meta)
        return b


class ModelBuilder:
    """Mutable accumulator that freezes into a :class:`MilpModel`."""

    def __init__(self, max_variables: int | None = None) -> None:
        self.variables: list[Variable] = []
        self.index: dict[str, int] = {}
        self.constraints: list[Constraint] = []
        self.objectives: list[Objective] = []
        self.meta: dict[str, object] = {}
        self.max_variables = max_variables

    def add_var(self, name: str, kind: str = CONTINUOUS, lb: float = 0.0, ub: float = math.inf) -> int:
        if name in self.index:
            raise ValueError(f"duplicate variable {name}")
        if self.max_variables is not None and len(self.variables) >= self.max_variables:
            raise ModelSizeError(
                f"model exceeds {self.max_variables} variables; export it with export_lp "
                "and use an external solver instead of the embedded one"
            )
        if kind == BINARY:
            lb, ub = max(0.0, lb), min(1.0, ub)
        self.index[name] = len(self.variables)
        self.variables.append(Variable(name, kind, float(lb), float(ub)))
        return self.index[name]

    def add_row(self, name: str, terms: Iterable[tuple[int, float]], sense: str, rhs: float) -> None:
        acc: dict[int, float] = {}
        for j, a in terms:
            acc[j] = acc.get(j, 0.0) + a
        coeffs = tuple((j, a) for j, a in sorted(acc.items()) if a != 0.0)
        self.constraints.append(Constraint(name, coeffs, sense, float(rhs)))

    def freeze(self) -> MilpModel:
        return MilpModel(tuple(self.variables), tuple(self.constraints), tuple(self.objectives), dict(self.meta))


def _gain(rate: float, days: int) -> float:
    return (1.0 + rate) ** days


def _build(p: Project, alpha: float | None, max_variables: int | None) -> MilpModel:
    fuzzy = alpha is not None
    copies = COPIES if fuzzy else ("",)
    tag = {c: (f"_{c}" if c else "") for c in copies}
    ckey = {c: (c or "L") for c in copies}  # which ModeTerms copy feeds each chain

    acts = p.activities
    n = len(acts)
    T = p.horizon
    Y = p.n_periods
    K, L = p.n_renewable, p.n_nonrenewable
    pos = p.index()
    terms: list[list[ModeTerms]] = [[mode_terms(m, alpha) for m in a.modes] for a in acts]
    es, ls = start_windows(p, terms)

    b = ModelBuilder(max_variables)
    b.meta.update(kind="ivf" if fuzzy else "crisp", alpha=alpha, copies=copies, horizon=T, periods=Y)

    # scheduling binaries
    X: dict[tuple[int, int, int], int] = {}
    XP: dict[tuple[int, int, int], int] = {}
    XYP: dict[tuple[int, int, int, int], int] = {}
    for i in range(n):
        for m, tm in enumerate(terms[i]):
            for t in range(1, T + 1):
                ok = es[i] <= t <= ls[i][m]
                X[i, m, t] = b.add_var(f"X_{i+1}_{m+1}_{t}", BINARY, 0.0, 1.0 if ok else 0.0)
    for i in range(n):
        for m, tm in enumerate(terms[i]):
            for t in range(1, T + 1):
                ok = es[i] + tm.done_lo <= t <= ls[i][m] + tm.done_hi
                XP[i, m, t] = b.add_var(f"XP_{i+1}_{m+1}_{t}", BINARY, 0.0, 1.0 if ok else 0.0)
    for i in range(n):
        for m in range(len(terms[i])):
            for y in range(1, Y + 1):
                lo, hi = p.periods.first_day(y), p.periods.last_day(y)
                for t in range(1, T + 1):
                    ok = lo <= t <= hi and b.variables[XP[i, m, t]].ub > 0
                    XYP[i, m, y, t] = b.add_var(f"XYP_{i+1}_{m+1}_{y}_{t}", BINARY, 0.0, 1.0 if ok else 0.0)

    f = p.finance
    D = f.compounding_days
    LTL = b.add_var("LTL", CONTINUOUS, 0.0, f.max_long_loan)
    STL = {y: b.add_var(f"STL_{y}", CONTINUOUS, 0.0, f.max_short_loan) for y in range(1, Y + 1)}
    PA = {y: b.add_var(f"PA_{y}") for y in range(1, Y + 1)}
    DP = {y: b.add_var(f"DP_{y}") for y in range(1, Y + 1)}
    BR: dict[tuple[str, int, int], int] = {}
    WR: dict[tuple[str, int, int], int] = {}
    BU: dict[tuple[str, int], int] = {}
    TBU: dict[tuple[str, int], int] = {}
    CF: dict[tuple[str, int], int] = {}
    Z1: dict[str, int] = {}
    for c in copies:
        s = tag[c]
        for k in range(K):
            for t in range(1, T + 1):
                BR[c, k, t] = b.add_var(f"BR{s}_{k+1}_{t}")
        for l in range(L):
            for t in range(1, T + 1):
                WR[c, l, t] = b.add_var(f"WR{s}_{l+1}_{t}")
        for t in range(1, T + 1):
            BU[c, t] = b.add_var(f"BU{s}_{t}", CONTINUOUS, 0.0, p.pricing.daily_cap)
        for y in range(1, Y + 1):
            TBU[c, y] = b.add_var(f"TBU{s}_{y}")
        for y in range(1, Y + 1):
            CF[c, y] = b.add_var(f"CF{s}_{y}", CONTINUOUS, f.min_cash, math.inf)
        Z1[c] = b.add_var(f"Z1{s}", CONTINUOUS, 0.0, math.inf)

    # (7) one start per activity
    for i in range(n):
        b.add_row(f"start_{i+1}", ((X[i, m, t], 1.0) for m in range(len(terms[i])) for t in range(1, T + 1)), "=", 1.0)

    # (8)/(30) precedence, one row per copy in the fuzzy model
    for j in range(n):
        for q in acts[j].predecessors:
            i = pos[q]
            for c in copies:
                rows = [(X[j, m, t], float(t)) for m in range(len(terms[j])) for t in range(1, T + 1)]
                rows += [(X[i, m, t], -(t + terms[i][m].lag[ckey[c]]))
                         for m in range(len(terms[i])) for t in range(1, T + 1)]
                b.add_row(f"prec{tag[c]}_{i+1}_{j+1}", rows, ">=", 0.0)

    # (13) or (33)/(34): completion day versus start day
    for i in range(n):
        for m, tm in enumerate(terms[i]):
            done = [(XP[i, m, t], float(t)) for t in range(1, T + 1)]
            if not fuzzy:
                b.add_row(f"done_{i+1}_{m+1}", done + [(X[i, m, t], -(t + tm.done_lo)) for t in range(1, T + 1)],
                          "=", 0.0)
            elif tm.done_raw is not None:
                for c in copies:
                    lo, hi = tm.done_raw[c]
                    b.add_row(f"done_lo_{c}_{i+1}_{m+1}",
                              done + [(X[i, m, t], -(t + lo)) for t in range(1, T + 1)], ">=", 0.0)
                    b.add_row(f"done_hi_{c}_{i+1}_{m+1}",
                              done + [(X[i, m, t], -(t + hi)) for t in range(1, T + 1)], "<=", 0.0)
            else:
                off = tm.done_lo
                b.add_row(f"done_lo_{i+1}_{m+1}", done + [(X[i, m, t], -(t + off)) for t in range(1, T + 1)],
                          ">=", 0.0)
                b.add_row(f"done_hi_{i+1}_{m+1}", done + [(X[i, m, t], -(t + off)) for t in range(1, T + 1)],
                          "<=", 0.0)

    # (14) one completion per activity; (15) completion lands in one period.
    # (16)-(17) are encoded by fixing XYP_i_m_y_t = 0 for days outside period y.
    for i in range(n):
        b.add_row(f"finish_{i+1}", ((XP[i, m, t], 1.0) for m in range(len(terms[i])) for t in range(1, T + 1)),
                  "=", 1.0)
    for i in range(n):
        for m in range(len(terms[i])):
            for t in range(1, T + 1):
                b.add_row(f"period_{i+1}_{m+1}_{t}",
                          [(XYP[i, m, y, t], 1.0) for y in range(1, Y + 1)] + [(XP[i, m, t], -1.0)], "=", 0.0)

    sink = pos[p.sink()] if n else None
    for c in copies:
        s = tag[c]
        key = ckey[c]
        # (9)/(10)/(31)/(32): daily usage over the occupancy window h in [t-w+1, t]
        for t in range(1, T + 1):
            for k in range(K):
                rows = [(BR[c, k, t], -1.0)]
                for i in range(n):
                    for m, tm in enumerate(terms[i]):
                        coef = tm.renewable[key][k]
                        w = tm.window[key]
                        if coef == 0 or w <= 0:
                            continue
                        rows += [(X[i, m, h], coef) for h in range(max(1, t - w + 1), t + 1)]
                b.add_row(f"ren{s}_{k+1}_{t}", rows, "<=", 0.0)
            for l in range(L):
                rows = [(WR[c, l, t], -1.0)]
                for i in range(n):
                    for m, tm in enumerate(terms[i]):
                        coef = tm.nonrenewable[key][l]
                        w = tm.window[key]
                        if coef == 0 or w <= 0:
                            continue
                        rows += [(X[i, m, h], coef) for h in range(max(1, t - w + 1), t + 1)]
                b.add_row(f"non{s}_{l+1}_{t}", rows, "<=", 0.0)
            # (11) daily cost; (12) is the BU upper bound
            rows = [(BR[c, k, t], p.pricing.cr[k]) for k in range(K)]
            rows += [(WR[c, l, t], p.pricing.cw[l]) for l in range(L)]
            b.add_row(f"cost{s}_{t}", rows + [(BU[c, t], -1.0)], "<=", 0.0)
        # (19) period totals
        for y in range(1, Y + 1):
            b.add_row(f"tbu{s}_{y}", [(TBU[c, y], 1.0)] + [(BU[c, t], -1.0) for t in p.periods.days(y) if t <= T],
                      "=", 0.0)
        # (20)/(21) cash-flow chain
        for y in range(1, Y + 1):
            rows = [(CF[c, y], 1.0), (STL[y], -1.0), (PA[y], -1.0), (TBU[c, y], 1.0)]
            if y == 1:
                rows.append((LTL, -1.0))
                b.add_row(f"cash{s}_{y}", rows, "=", f.initial_capital)
            else:
                rows += [
                    (CF[c, y - 1], -_gain(f.r_excess, D)),
                    (DP[y - 1], -_gain(f.r_delay, D)),
                    (LTL, 1.0 / _gain(f.r_long, D)),
                    (STL[y - 1], 1.0 / _gain(f.r_short, D)),
                ]
                b.add_row(f"cash{s}_{y}", rows, "=", 0.0)
        # makespan link for (5)
        if sink is not None:
            b.add_row(f"makespan{s}", [(Z1[c], 1.0)] + [
                (XP[sink, m, t], -float(t)) for m in range(len(terms[sink])) for t in range(1, T + 1)], "=", 0.0)

    # (18) as equality: paid now plus delayed equals amount due
    for y in range(1, Y + 1):
        rows = [(PA[y], 1.0), (DP[y], 1.0)]
        for i in range(n):
            for m in range(len(terms[i])):
                pay = acts[i].modes[m].payment
                if pay:
                    rows += [(XYP[i, m, y, t], -pay) for t in range(1, T + 1)]
        b.add_row(f"due_{y}", rows, "=", 0.0)

    if fuzzy:
        # (35) and (36)
        b.add_row("link_makespan", [(Z1["U"], 1.0), (Z1["L"], -1.0)], "<=", 0.0)
        b.add_row("link_profit", [(CF["U", Y], 1.0), (CF["L", Y], -1.0)], ">=", 0.0)
        b.objectives += [
            Objective("Z1", ((Z1["L"], 1.0),), "min"),
            Objective("Z2L", ((CF["L", Y], 1.0),), "max"),
            Objective("Z2U", ((CF["U", Y], 1.0),), "max"),
        ]
    else:
        b.objectives += [
            Objective("Z1", ((Z1[""], 1.0),), "min"),
            Objective("Z2", ((CF["", Y], 1.0),), "max"),
        ]
    return b.freeze()


def build_crisp_model(p: Project, *, max_variables: int | None = MAX_VARIABLES) -> MilpModel:
    """Time-indexed bi-objective model for an all-crisp instance."""
    if not p.is_crisp:
        raise ValueError("instance has fuzzy parameters; use build_ivf_model")
    return _build(p, None, max_variables)


def build_ivf_model(p: Project, alpha: float, *, max_variables: int | None = MAX_VARIABLES) -> MilpModel:
    """Alpha-parametric crisp equivalent of the fuzzy model with L/U copies."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return _build(p, float(alpha), max_variables)


def build_model(p: Project, alpha: float | None, **kw) -> MilpModel:
    return build_crisp_model(p, **kw) if alpha is None else build_ivf_model(p, alpha, **kw)


def fix_objective(m: MilpModel, key: int | str, value: float, rel_tol: float = 1e-9) -> MilpModel:
    """Copy of ``m`` with objective ``key`` held at (or better than) ``value``."""
    o = m.objective(key)
    tol = rel_tol * max(1.0, abs(value))
    b = m.extended()
    if o.sense == "max":
        b.add_row(f"fix_{o.label}", o.coeffs, ">=", value - o.constant - tol)
    else:
        b.add_row(f"fix_{o.label}", o.coeffs, "<=", value - o.constant + tol)
    return b.freeze()


@dataclass(frozen=True)
class PayoffTable:
    labels: tuple[str, ...]
    senses: tuple[str, ...]
    pis: tuple[float, ...]
    nis: tuple[float, ...]
    #: values[j][i] = objective i at the lexicographic optimum of objective j
    values: tuple[tuple[float, ...], ...] = ()

    def __post_init__(self) -> None:
        for lab, s, a, b in zip(self.labels, self.senses, self.pis, self.nis):
            if (s == "max" and a < b - 1e-9 * max(1, abs(a))) or (s == "min" and a > b + 1e-9 * max(1, abs(a))):
                raise ValueError(f"payoff ordering violated for {lab}: pis={a}, nis={b}")


_SAME_OPTIMUM = 1e-9


def compute_payoff_table(
    p: Project,
    alpha: float | None,
    solve: Callable[[MilpModel], object],
    *,
    base: MilpModel | None = None,
) -> PayoffTable:
    """Positive and negative ideal values of every objective.

    Each objective is optimized first, then the remaining objectives are
    optimized lexicographically in declaration order with the earlier ones
    held at their optima. PIS is the first-stage optimum; NIS is the worst
    value an objective attains at the other objectives' lexicographic optima,
    each objective taken at the optimum of its own stage.
    ``solve`` maps a model to a solution exposing ``status``, ``objective``
    and ``values``.
    """
    model = base if base is not None else build_model(p, alpha)
    objs = model.objectives
    nobj = len(objs)
    table: list[tuple[float, ...]] = []
    pis: list[float] = []
    for j in range(nobj):
        order = [j] + [i for i in range(nobj) if i != j]
        current = model
        row = [math.nan] * nobj
        for stage, k in enumerate(order):
            staged = current.with_objectives([objs[k]] + [o for i, o in enumerate(objs) if i != k])
            sol = solve(staged)
            status = getattr(sol, "status")
            if status == "infeasible":
                raise InfeasibleError(f"no feasible schedule when optimizing {objs[k].label}")
            if status == "unbounded":
                raise UnboundedError(f"objective {objs[k].label} is unbounded")
            if status != "optimal":
                raise RuntimeError(f"solver stopped with status {status!r} on objective {objs[k].label}")
            if stage == 0:
                pis.append(sol.objective)
            # held objectives keep their stage optimum; later stages may only
            # use the hold tolerance, which must not leak into the table
            row[k] = sol.objective
            if stage < nobj - 1:
                current = fix_objective(current, objs[k].label, sol.objective)
        table.append(tuple(row))
    nis = []
    for i in range(nobj):
        others = [table[j][i] for j in range(nobj) if j != i] or [pis[i]]
        worst = min(others) if objs[i].sense == "max" else max(others)
        # a lexicographic optimum can never beat the single-objective optimum
        worst = min(worst, pis[i]) if objs[i].sense == "max" else max(worst, pis[i])
        if abs(worst - pis[i]) <= _SAME_OPTIMUM * max(1.0, abs(pis[i])):
            worst = pis[i]  # solver noise, not a genuine spread
        nis.append(worst)
    return PayoffTable(
        tuple(o.label for o in objs), tuple(o.sense for o in objs), tuple(pis), tuple(nis), tuple(table)
    )


def membership(value: float, pis: float, nis: float, sense: str) -> float:
    """Linear membership degree of an objective value between NIS and PIS."""
    if pis == nis:
        return 1.0
    if sense == "max":
        mu = (value - nis) / (pis - nis)
    elif sense == "min":
        mu = (nis - value) / (nis - pis)
    else:
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    return min(1.0, max(0.0, mu))


@dataclass(frozen=True)
class ThConfig:
    gamma: float = 0.4
    theta: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if any(not 0.0 <= t <= 1.0 for t in self.theta):
            raise ValueError("each theta must lie in [0, 1]")
        if abs(sum(self.theta) - 1.0) > 1e-9:
            raise ValueError(f"theta weights must sum to 1, got {sum(self.theta)}")

    @classmethod
    def even(cls, n_terms: int, gamma: float = 0.4) -> "ThConfig":
        w = [1.0 / n_terms] * n_terms
        w[-1] = 1.0 - sum(w[:-1])
        return cls(gamma, tuple(w))


def _add_memberships(b: ModelBuilder, base: MilpModel, payoffs: PayoffTable) -> list[int]:
    objs = base.objectives
    if tuple(o.label for o in objs) != payoffs.labels:
        raise ValueError(f"payoff table labels {payoffs.labels} do not match model objectives")
    mus = []
    for o, pis, nis in zip(objs, payoffs.pis, payoffs.nis):
        if pis == nis:
            mus.append(b.add_var(f"MU_{o.label}", CONTINUOUS, 1.0, 1.0))
            continue
        mu = b.add_var(f"MU_{o.label}", CONTINUOUS, 0.0, 1.0)
        mus.append(mu)
        if o.sense == "max":
            # mu <= (f - nis) / (pis - nis)
            b.add_row(f"member_{o.label}", [(mu, pis - nis)] + [(j, -a) for j, a in o.coeffs],
                      "<=", o.constant - nis)
        else:
            # mu <= (nis - f) / (nis - pis)
            b.add_row(f"member_{o.label}", [(mu, nis - pis)] + list(o.coeffs), "<=", nis - o.constant)
    return mus


def build_th_model(base: MilpModel, payoffs: PayoffTable, cfg: ThConfig) -> MilpModel:
    """Torabi-Hassini aggregate: max gamma*lambda0 + (1-gamma)*sum(theta*mu)."""
    if len(cfg.theta) != len(base.objectives):
        raise ValueError(
            f"theta has {len(cfg.theta)} weights but the model has {len(base.objectives)} membership terms"
        )
    b = base.extended()
    b.objectives.clear()
    mus = _add_memberships(b, base, payoffs)
    lam = b.add_var("LAMBDA0", CONTINUOUS, 0.0, 1.0)
    for o, mu in zip(base.objectives, mus):
        b.add_row(f"maxmin_{o.label}", [(lam, 1.0), (mu, -1.0)], "<=", 0.0)
    coeffs = [(lam, cfg.gamma)] + [(mu, (1.0 - cfg.gamma) * th) for mu, th in zip(mus, cfg.theta)]
    b.objectives.append(Objective("TH", tuple((j, a) for j, a in coeffs if a != 0.0), "max"))
    b.objectives.extend(base.objectives)
    b.meta.update(scalarization="th", gamma=cfg.gamma, theta=cfg.theta, payoffs=payoffs)
    return b.freeze()


def build_weighted_sum(base: MilpModel, payoffs: PayoffTable, weights: Sequence[float]) -> MilpModel:
    """Weighted sum of the normalized memberships of every objective."""
    weights = tuple(float(w) for w in weights)
    if len(weights) != len(base.objectives):
        raise ValueError(f"expected {len(base.objectives)} weights, got {len(weights)}")
    if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
        raise ValueError("weights must be non-negative and sum to 1")
    b = base.extended()
    b.objectives.clear()
    mus = _add_memberships(b, base, payoffs)
    coeffs = tuple((mu, w) for mu, w in zip(mus, weights) if w != 0.0)
    b.objectives.append(Objective("WS", coeffs, "max"))
    b.objectives.extend(base.objectives)
    b.meta.update(scalarization="weighted", weights=weights, payoffs=payoffs)
    return b.freeze()


_LP_BAD = re.compile(r"[^A-Za-z0-9_!\"#$%&()/,.;?@`'{}|~]")


def _lp_name(name: str) -> str:
    s = _LP_BAD.sub("_", name)
    if not s or s[0].isdigit() or s[0] in ".eE":
        s = "n_" + s
    return s[:255]


def _fmt(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _expr(coeffs: Iterable[tuple[int, float]], names: Sequence[str]) -> str:
    parts = []
    for j, a in coeffs:
        sign = "-" if a < 0 else "+"
        parts.append(f"{sign} {_fmt(abs(a))} {names[j]}")
    if not parts:
        return "0 " + names[0] if names else "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[1:]


def _wrap(text: str, width: int = 200) -> str:
    out, line = [], ""
    for tok in text.split(" "):
        if len(line) + len(tok) + 1 > width and line:
            out.append(line)
            line = "  " + tok
        else:
            line = f"{line} {tok}" if line else tok
    out.append(line)
    return "\n".join(out)


def export_lp(m: MilpModel, sink: TextIO, objective: int | str = 0) -> None:
    """Write ``m`` in CPLEX LP text format, optimizing one objective."""
    names = [_lp_name(v.name) for v in m.variables]
    if len(set(names)) != len(names):
        # keep sanitization injective by suffixing positions on collision
        seen: dict[str, int] = {}
        for j, nm in enumerate(names):
            if nm in seen:
                names[j] = f"{nm}_{j}"
            seen[nm] = j
    o = m.objective(objective)
    w = sink.write
    w(f"\\ objective {o.label}\n")
    w("Maximize\n" if o.sense == "max" else "Minimize\n")
    obj = _expr(o.coeffs, names)
    if o.constant:
        obj += f" + {_fmt(o.constant)} __const"
    w(_wrap(f" obj: {obj}") + "\n")
    w("Subject To\n")
    for r, c in enumerate(m.constraints):
        op = {"<=": "<=", ">=": ">=", "=": "="}[c.sense]
        lhs = _expr(c.coeffs, names) if c.coeffs else f"0 {names[0]}"
        w(_wrap(f" {_lp_name(c.name)}_{r}: {lhs} {op} {_fmt(c.rhs)}") + "\n")
    w("Bounds\n")
    for v, nm in zip(m.variables, names):
        if v.kind == BINARY and v.lb == 0 and v.ub == 1:
            continue
        if v.lb == v.ub:
            w(f" {nm} = {_fmt(v.lb)}\n")
        elif math.isinf(v.ub):
            if v.lb == -math.inf:
                w(f" {nm} free\n")
            elif v.lb != 0:
                w(f" {nm} >= {_fmt(v.lb)}\n")
        else:
            lb = "-inf" if v.lb == -math.inf else _fmt(v.lb)
            w(f" {lb} <= {nm} <= {_fmt(v.ub)}\n")
    if o.constant:
        w(" __const = 1\n")
    bins = [nm for v, nm in zip(m.variables, names) if v.kind == BINARY]
    if bins:
        w("Binaries\n")
        for k in range(0, len(bins), 8):
            w(" " + " ".join(bins[k:k + 8]) + "\n")
    w("End\n")
