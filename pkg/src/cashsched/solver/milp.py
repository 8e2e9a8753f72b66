"""Best-first branch-and-bound over the binaries of a :class:`MilpModel`."""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..model import MilpModel
from .lp import FEAS_TOL, Reduced, Simplex, residuals

__all__ = ["SolveLimits", "MilpSolution", "solve_milp", "INT_TOL", "OBJ_TOL"]

INT_TOL = 1e-6
OBJ_TOL = 1e-6


@dataclass(frozen=True)
class SolveLimits:
    max_nodes: int = 200_000
    max_seconds: float = 600.0
    gap: float = 1e-9  # relative optimality gap at which a node is pruned

    def __post_init__(self) -> None:
        if self.max_nodes <= 0 or self.max_seconds <= 0 or self.gap <= 0:
            raise ValueError("solve limits must all be positive")


@dataclass
class MilpSolution:
    """Outcome of a MILP solve.

    ``status`` is one of ``optimal``, ``feasible-limit`` (a limit stopped the
    search with an incumbent), ``limit`` (stopped without one),
    ``infeasible``, ``unbounded`` or ``numerical``.
    """

    status: str
    objective: float = math.nan
    values: list[float] = field(default_factory=list)
    nodes: int = 0
    seconds: float = 0.0
    gap: float = math.nan
    model: MilpModel | None = field(default=None, repr=False)
    #: set by the enumeration oracle, which has no model to decode from
    schedule: object = field(default=None, repr=False)
    point_values: tuple[float, ...] = ()

    @property
    def has_incumbent(self) -> bool:
        return self.status in ("optimal", "feasible-limit")

    def value(self, name: str) -> float:
        if self.model is None:
            raise ValueError("solution carries no model")
        return self.values[self.model.var_index[name]]


class _Node:
    __slots__ = ("bound", "id", "state")

    def __init__(self, bound: float, id: int, state: Simplex) -> None:
        self.bound, self.id, self.state = bound, id, state

    def __lt__(self, other: "_Node") -> bool:
        return (self.bound, self.id) < (other.bound, other.id)


def _reoptimize(state: Simplex, cutoff: float, max_iter: int) -> str:
    st = state.dual(max_iter, cutoff)
    if st == "optimal" and not state.dual_feasible():
        st = state.primal(max_iter)
    return st


def solve_milp(m: MilpModel, lim: SolveLimits | None = None, objective: int | str = 0) -> MilpSolution:
    """Exact optimum of objective ``objective`` by LP-based branch-and-bound.

    Nodes are expanded in order of their relaxation bound (ties by creation
    order); each expansion branches on the most fractional binary, lowest
    index first, and re-optimizes both children with the dual simplex.
    """
    lim = lim or SolveLimits()
    t0 = time.perf_counter()
    red = Reduced(m, objective)
    if red.infeasible:
        return MilpSolution("infeasible", nodes=0, seconds=time.perf_counter() - t0, model=m)
    root = Simplex(red)
    try:
        status = root.solve()
    except np.linalg.LinAlgError:
        status = "numerical"
    if status != "optimal":
        return MilpSolution(status, nodes=0, seconds=time.perf_counter() - t0, model=m)

    ints = np.flatnonzero(red.is_int_y)
    const = red.const_min
    max_iter = 50 * (root.m + root.n_real) + 1000

    def frac_of(state: Simplex) -> tuple[np.ndarray, np.ndarray]:
        y = state.structural()
        v = y[ints]
        return y, np.minimum(v - np.floor(v), np.ceil(v) - v)

    incumbent = math.inf
    inc_y: np.ndarray | None = None
    inc_state: Simplex | None = None
    inc_bits: tuple[int, ...] = ()

    def consider(state: Simplex, obj: float) -> None:
        nonlocal incumbent, inc_y, inc_bits, inc_state
        # rebuild the tableau so drift from incremental updates cannot leak
        # into the incumbent used for pruning
        state = state.copy()
        if not state.refactor():
            return
        if state.primal_infeasibility() > FEAS_TOL:
            if _reoptimize(state, math.inf, state.iterations + max_iter) != "optimal":
                return
            if frac_of(state)[1].max(initial=0.0) > INT_TOL:
                return
        obj = state.objective() + const
        y = state.structural().copy()
        bits = tuple(int(b) for b in np.round(y[ints]))
        if obj < incumbent - 1e-9 * max(1.0, abs(obj)) or (
            abs(obj - incumbent) <= 1e-9 * max(1.0, abs(obj)) and bits < inc_bits
        ):
            incumbent, inc_y, inc_bits, inc_state = obj, y, bits, state

    def prunable(bound: float) -> bool:
        return bound >= incumbent - lim.gap * max(1.0, abs(incumbent))

    nodes = 0
    counter = 0
    heap: list[_Node] = []
    root_obj = root.objective() + const
    y, frac = frac_of(root)
    if ints.size == 0 or frac.max(initial=0.0) <= INT_TOL:
        consider(root, root_obj)
    else:
        heap.append(_Node(root_obj, counter, root))
    limit_hit = False
    while heap:
        if nodes >= lim.max_nodes or time.perf_counter() - t0 > lim.max_seconds:
            limit_hit = True
            break
        node = heapq.heappop(heap)
        if prunable(node.bound):
            continue
        nodes += 1
        state = node.state
        y, frac = frac_of(state)
        k = int(np.argmax(frac))
        j = int(ints[k])
        for down in (True, False):
            child = state.copy() if down else state
            if down:
                child.ub[j] = math.floor(y[j] + INT_TOL)
            else:
                child.lb[j] = math.ceil(y[j] - INT_TOL)
            if child.lb[j] > child.ub[j]:
                continue
            cutoff = incumbent - const if math.isfinite(incumbent) else math.inf
            try:
                st = _reoptimize(child, cutoff, child.iterations + max_iter)
            except np.linalg.LinAlgError:
                st = "numerical"
            if st == "numerical":
                child = _fresh(red, child)
                st = child.solve() if child is not None else "numerical"
                if st != "optimal" and st != "infeasible":
                    return MilpSolution("numerical", nodes=nodes, seconds=time.perf_counter() - t0, model=m)
            if st in ("infeasible", "cutoff"):
                continue
            bound = child.objective() + const
            if bound < node.bound - OBJ_TOL * max(1.0, abs(node.bound)):
                raise AssertionError(
                    f"child relaxation {bound} improves on parent bound {node.bound}; LP engine inconsistent"
                )
            if prunable(bound):
                continue
            _, cfrac = frac_of(child)
            if cfrac.max(initial=0.0) <= INT_TOL:
                consider(child, bound)
            else:
                counter += 1
                heapq.heappush(heap, _Node(bound, counter, child))
    elapsed = time.perf_counter() - t0
    if inc_y is None:
        return MilpSolution("limit" if limit_hit else "infeasible", nodes=nodes, seconds=elapsed, model=m)
    obj = red.sign * incumbent + red.obj_constant
    values = None
    exact = _pin_binaries(inc_state, ints, max_iter)
    if exact is not None:
        pinned = red.recover(exact.structural())
        if residuals(m, pinned) <= FEAS_TOL:
            values = pinned
            obj = red.sign * (exact.objective() + const) + red.obj_constant
    if values is None:
        values = red.recover(inc_y)
        if residuals(m, values) > FEAS_TOL:
            return MilpSolution("numerical", nodes=nodes, seconds=time.perf_counter() - t0, model=m)
    for jj, v in enumerate(m.variables):
        if v.kind == "binary":
            values[jj] = float(round(values[jj]))
    if limit_hit and heap:
        best = min(nd.bound for nd in heap)
        gap = max(0.0, (incumbent - best) / max(1.0, abs(incumbent)))
        status = "feasible-limit" if gap > lim.gap else "optimal"
    else:
        gap, status = 0.0, "optimal"
    if status == "optimal":
        gap = 0.0
    return MilpSolution(status, obj, values, nodes, elapsed, gap, m)


def _fresh(red: Reduced, state: Simplex) -> Simplex | None:
    """New engine solving from scratch under ``state``'s structural bounds."""
    sx = Simplex(red)
    k = sx.n_real
    sx.lb = state.lb[:k].copy()
    sx.ub = state.ub[:k].copy()
    return sx



def _pin_binaries(state: Simplex, ints: np.ndarray, max_iter: int) -> Simplex | None:
    """Incumbent node re-optimized with its binaries fixed at their rounded values.

    Leaves continuous variables consistent with exactly integral binaries, so
    objective values such as a makespan come out integral rather than within
    the integrality tolerance of one.
    """
    sx = state.copy()
    v = np.round(sx.structural()[ints])
    if not sx.refactor():
        return None
    sx.lb[ints] = v
    sx.ub[ints] = v
    try:
        st = _reoptimize(sx, math.inf, sx.iterations + max_iter)
    except np.linalg.LinAlgError:
        return None
    return sx if st == "optimal" else None
