"""Dense-tableau bounded-variable simplex.

The engine works on a reduced copy of a :class:`MilpModel`: fixed columns,
singleton rows and ``x_j - x_k = 0`` duplicates are removed first, free
columns are split, and every row is scaled to unit max-norm. The primal
simplex (two phases, Devex pricing with a Bland fallback on stalling) solves
from scratch; the dual simplex re-optimizes after bound changes, which is what
branch-and-bound uses for child nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg.blas import dger

from ..model import BINARY, MilpModel

__all__ = ["LpSolution", "Reduced", "Simplex", "solve_lp", "residuals", "FEAS_TOL"]

FEAS_TOL = 1e-7  # reported-solution feasibility on normalized rows
_PRIMAL_TOL = 1e-9
_DUAL_TOL = 1e-9
_PIVOT_TOL = 1e-9
_REFACTOR_EVERY = 80
_STALL_LIMIT = 30


@dataclass
class LpSolution:
    status: str  # optimal, infeasible, unbounded, numerical
    objective: float = math.nan
    values: list[float] = field(default_factory=list)
    iterations: int = 0


class _Infeasible(Exception):
    pass


class Reduced:
    """Presolved, transformed problem ``min c.y + const`` in standard bounds.

    Original variable ``j`` is recovered as ``offset[j] + sum(coef * y[k])``
    over ``recover[j]``.
    """

    def __init__(self, model: MilpModel, objective: int | str = 0,
                 lb: Sequence[float] | None = None, ub: Sequence[float] | None = None) -> None:
        n = len(model.variables)
        self.model = model
        self.n_orig = n
        lo = np.array([v.lb for v in model.variables] if lb is None else lb, dtype=float)
        hi = np.array([v.ub for v in model.variables] if ub is None else ub, dtype=float)
        self.is_int = np.array([v.kind == BINARY for v in model.variables])
        obj = model.objective(objective)
        self.sign = -1.0 if obj.sense == "max" else 1.0
        cost = np.zeros(n)
        for j, a in obj.coeffs:
            cost[j] += a
        rows = [dict(c.coeffs) for c in model.constraints]
        senses = [c.sense for c in model.constraints]
        rhs = [c.rhs for c in model.constraints]
        self.infeasible = False
        try:
            self._presolve(rows, senses, rhs, lo, hi, cost)
        except _Infeasible:
            self.infeasible = True
        self.obj_constant = obj.constant

    # -- presolve ---------------------------------------------------------
    def _presolve(self, rows, senses, rhs, lo, hi, cost) -> None:
        n = self.n_orig
        tol = 1e-9
        col_rows: list[set[int]] = [set() for _ in range(n)]
        for r, row in enumerate(rows):
            for j in row:
                col_rows[j].add(r)
        alias = list(range(n))  # alias[j] = k means x_j == x_k
        alive_col = np.ones(n, dtype=bool)
        alive_row = [True] * len(rows)
        fixed_val = np.full(n, np.nan)
        const = 0.0

        def tighten(j: int, new_lo: float, new_hi: float) -> None:
            if self.is_int[j]:
                if math.isfinite(new_lo):
                    new_lo = math.ceil(new_lo - 1e-6)
                if math.isfinite(new_hi):
                    new_hi = math.floor(new_hi + 1e-6)
            lo[j] = max(lo[j], new_lo)
            hi[j] = min(hi[j], new_hi)
            if lo[j] > hi[j] + 1e-9 * max(1.0, abs(lo[j])):
                raise _Infeasible
            if lo[j] > hi[j]:
                hi[j] = lo[j]

        for j in range(n):
            if lo[j] > hi[j] + 1e-12:
                raise _Infeasible
        queue = list(range(len(rows)))
        fix_queue = [j for j in range(n) if lo[j] == hi[j]]
        self.implied: list[tuple[int, dict[int, float], float]] = []

        def fix_columns() -> None:
            nonlocal const
            while fix_queue:
                j = fix_queue.pop()
                if not alive_col[j]:
                    continue
                v = lo[j]
                alive_col[j] = False
                fixed_val[j] = v
                const += cost[j] * v
                for r in col_rows[j]:
                    if alive_row[r] and j in rows[r]:
                        rhs[r] -= rows[r].pop(j) * v
                        queue.append(r)
                col_rows[j].clear()

        def fold(j: int, k: int, r: int) -> None:
            # x_j == x_k: move column j onto k
            alive_row[r] = False
            col_rows[j].discard(r)
            col_rows[k].discard(r)
            for r2 in col_rows[j]:
                if alive_row[r2]:
                    a2 = rows[r2].pop(j)
                    nv = rows[r2].get(k, 0.0) + a2
                    if nv == 0.0:
                        rows[r2].pop(k, None)
                        col_rows[k].discard(r2)
                    else:
                        rows[r2][k] = nv
                        col_rows[k].add(r2)
                    queue.append(r2)
            col_rows[j].clear()
            cost[k] += cost[j]
            cost[j] = 0.0
            alive_col[j] = False
            alias[j] = k

        def drain() -> None:
            while True:
                if fix_queue:
                    fix_columns()
                if not queue:
                    return
                r = queue.pop()
                if not alive_row[r]:
                    continue
                row = rows[r]
                if not row:
                    s, b = senses[r], rhs[r]
                    scale = 1e-7 * max(1.0, abs(b))
                    if (s == "<=" and b < -scale) or (s == ">=" and b > scale) or (s == "=" and abs(b) > scale):
                        raise _Infeasible
                    alive_row[r] = False
                elif len(row) == 1:
                    (j, a), = row.items()
                    b = rhs[r] / a
                    s = senses[r]
                    if a < 0 and s != "=":
                        s = ">=" if s == "<=" else "<="
                    if s == "<=":
                        tighten(j, -math.inf, b)
                    elif s == ">=":
                        tighten(j, b, math.inf)
                    else:
                        tighten(j, b, b)
                    alive_row[r] = False
                    col_rows[j].discard(r)
                    if lo[j] == hi[j]:
                        fix_queue.append(j)
                elif len(row) == 2 and senses[r] == "=" and rhs[r] == 0.0:
                    (j, a), (k, c) = row.items()
                    if a == -c and self.is_int[j] == self.is_int[k] and lo[j] == lo[k] and hi[j] == hi[k]:
                        fold(j, k, r)

        drain()
        while self._eliminate_dominated(rows, senses, rhs, lo, hi, cost, col_rows, alive_col, alive_row, queue):
            drain()
        # resolve alias chains
        def root(j: int) -> int:
            while alias[j] != j:
                j = alias[j]
            return j

        cols = [j for j in range(n) if alive_col[j]]
        live_rows = [r for r in range(len(rows)) if alive_row[r]]
        self.const = const
        self._build(cols, live_rows, rows, senses, rhs, lo, hi, cost, fixed_val, root)

    def _eliminate_dominated(self, rows, senses, rhs, lo, hi, cost, col_rows, alive_col, alive_row, queue) -> bool:
        """Substitute out zero-cost columns pinned by a single lower-bounding row.

        A continuous column with no cost and no upper bound that appears in
        one row as ``x_j >= expr`` and elsewhere only where a larger ``x_j``
        tightens the row can be set to ``expr`` at some optimum, provided
        ``expr`` never falls below the column's lower bound.
        """
        changed = False
        for j in range(self.n_orig):
            if not alive_col[j] or self.is_int[j] or cost[j] != 0.0 or math.isfinite(hi[j]):
                continue
            live = [r for r in col_rows[j] if alive_row[r]]
            defining = []
            ok = True
            for r in live:
                a = rows[r][j]
                if senses[r] == "=":
                    ok = False
                    break
                eff = a if senses[r] == "<=" else -a
                if eff < 0:
                    defining.append(r)
            if not ok or len(defining) != 1:
                continue
            r = defining[0]
            sg = 1.0 if senses[r] == "<=" else -1.0
            e = {k: sg * a for k, a in rows[r].items()}
            b_e = sg * rhs[r]
            q = -e.pop(j)
            # smallest value expr = (sum e_k x_k - b_e) / q can take
            low = -b_e
            for k, a in e.items():
                bound = lo[k] if a > 0 else hi[k]
                if not math.isfinite(bound):
                    low = -math.inf
                    break
                low += a * bound
            if low / q < lo[j] - 1e-12:
                continue
            coef = {k: a / q for k, a in e.items()}
            const = -b_e / q
            for r2 in live:
                if r2 == r:
                    continue
                a2 = rows[r2].pop(j)
                for k, c in coef.items():
                    nv = rows[r2].get(k, 0.0) + a2 * c
                    if nv == 0.0:
                        rows[r2].pop(k, None)
                        col_rows[k].discard(r2)
                    else:
                        rows[r2][k] = nv
                        col_rows[k].add(r2)
                rhs[r2] -= a2 * const
                queue.append(r2)
            alive_row[r] = False
            for k in e:
                col_rows[k].discard(r)
            col_rows[j].clear()
            alive_col[j] = False
            self.implied.append((j, coef, const))
            changed = True
        return changed

    def _build(self, cols, live_rows, rows, senses, rhs, lo, hi, cost, fixed_val, root) -> None:
        n = self.n_orig
        # column transform: x = off + sgn * y (one column) or y1 - y2 (split)
        ycols: list[tuple[int, float]] = []  # (orig col, sign)
        ylo, yhi, yint = [], [], []
        self.col_of: dict[int, list[tuple[int, float]]] = {}
        off = np.zeros(n)
        for j in cols:
            if math.isfinite(lo[j]):
                off[j] = lo[j]
                self.col_of[j] = [(len(ycols), 1.0)]
                ycols.append((j, 1.0))
                ylo.append(0.0)
                yhi.append(hi[j] - lo[j])
                yint.append(self.is_int[j])
            elif math.isfinite(hi[j]):
                off[j] = hi[j]
                self.col_of[j] = [(len(ycols), -1.0)]
                ycols.append((j, -1.0))
                ylo.append(0.0)
                yhi.append(math.inf)
                yint.append(False)
            else:
                self.col_of[j] = [(len(ycols), 1.0), (len(ycols) + 1, -1.0)]
                ycols += [(j, 1.0), (j, -1.0)]
                ylo += [0.0, 0.0]
                yhi += [math.inf, math.inf]
                yint += [False, False]
        ny = len(ycols)
        m = len(live_rows)
        A = np.zeros((m, ny))
        b = np.zeros(m)
        sense = []
        for i, r in enumerate(live_rows):
            bi = rhs[r]
            for j, a in rows[r].items():
                bi -= a * off[j]
                for k, sg in self.col_of[j]:
                    A[i, k] += a * sg
            scale = np.abs(A[i]).max() if ny else 0.0
            if scale == 0.0:
                scale = 1.0
            A[i] /= scale
            b[i] = bi / scale
            sense.append(senses[r])
        c = np.zeros(ny)
        const = self.const
        for j in cols:
            const += cost[j] * off[j]
            for k, sg in self.col_of[j]:
                c[k] += cost[j] * sg
        self.A, self.b, self.senses = A, b, sense
        self.c = self.sign * c
        self.const_min = self.sign * const
        self.lb = np.array(ylo)
        self.ub = np.array(yhi)
        self.is_int_y = np.array(yint, dtype=bool)
        self.off = off
        self.fixed_val = fixed_val
        self.root = root
        self.ycols = ycols
        self.cost_orig_constant = const

    def recover(self, y: np.ndarray) -> list[float]:
        x = [0.0] * self.n_orig
        for j in range(self.n_orig):
            if not math.isnan(self.fixed_val[j]):
                x[j] = float(self.fixed_val[j])
        for j, parts in self.col_of.items():
            x[j] = float(self.off[j] + sum(sg * y[k] for k, sg in parts))
        for j in range(self.n_orig):
            r = self.root(j)
            if r != j:
                x[j] = x[r] if r in self.col_of else float(self.fixed_val[r])
        for j, coef, const in reversed(self.implied):
            x[j] = const + sum(c * x[k] for k, c in coef.items())
        return x

    def objective_value(self, y: np.ndarray) -> float:
        """Objective in the model's own sense (max stays max)."""
        return float(self.sign * (self.c @ y + self.const_min)) + self.obj_constant


class Simplex:
    """Tableau ``B^-1 [A | I_slack | art | b]`` with bounded variables (minimize)."""

    def __init__(self, red: Reduced) -> None:
        A, b = red.A, red.b
        m, n = A.shape
        self.m, self.n_struct = m, n
        slack_cols = []
        slack_sign = []
        for i, s in enumerate(red.senses):
            if s != "=":
                slack_cols.append(i)
                slack_sign.append(1.0 if s == "<=" else -1.0)
        ns = len(slack_cols)
        S = np.zeros((m, ns))
        for k, (i, sg) in enumerate(zip(slack_cols, slack_sign)):
            S[i, k] = sg
        self.lb = np.concatenate([red.lb, np.zeros(ns)])
        self.ub = np.concatenate([red.ub, np.full(ns, math.inf)])
        self.c = np.concatenate([red.c, np.zeros(ns)])
        self.A = np.hstack([A, S])
        self.b = b.copy()
        self.is_int = np.concatenate([red.is_int_y, np.zeros(ns, dtype=bool)])
        self.n_real = n + ns
        self.slack_of_row = {i: n + k for k, i in enumerate(slack_cols)}
        self.iterations = 0
        self.T: np.ndarray | None = None

    # -- bookkeeping ------------------------------------------------------
    def copy(self) -> "Simplex":
        s = Simplex.__new__(Simplex)
        s.__dict__.update(self.__dict__)
        for name in ("lb", "ub", "basis", "at_ub", "xB", "d", "T", "is_basic"):
            setattr(s, name, getattr(self, name).copy(order="K"))
        return s

    def _nonbasic_x(self) -> np.ndarray:
        x = np.where(self.at_ub, self.ub, self.lb)
        x[self.is_basic] = 0.0
        return x

    def refresh(self) -> None:
        """Recompute basic values and reduced costs from the tableau."""
        xN = self._nonbasic_x()
        N = self.A_full.shape[1]
        self.xB = self.T[:, N] - self.T[:, :N] @ xN
        self.d = self.cost - self.cost[self.basis] @ self.T[:, :N]
        self.d[self.basis] = 0.0

    def refactor(self) -> bool:
        B = self.A_full[:, self.basis]
        try:
            T = np.linalg.solve(B, np.hstack([self.A_full, self.b[:, None]]))
        except np.linalg.LinAlgError:
            return False
        if not np.isfinite(T).all() or np.abs(T).max(initial=0.0) > 1e12:
            return False
        T[np.abs(T) < 1e-13] = 0.0
        self.T = np.asfortranarray(T)
        self.since_refactor = 0
        self.refresh()
        return True

    def x(self) -> np.ndarray:
        x = self._nonbasic_x()
        x[self.basis] = self.xB
        return x

    def objective(self) -> float:
        return float(self.cost @ self.x())

    def _pivot(self, r: int, q: int) -> None:
        T = self.T
        piv = T[r, q]
        T[r] /= piv
        col = T[:, q].copy()
        col[r] = 0.0
        # in-place rank-one update on the Fortran-ordered tableau
        self.T = T = dger(-1.0, col, T[r].copy(), a=T, overwrite_a=1)
        T[:, q] = 0.0
        T[r, q] = 1.0
        N = self.A_full.shape[1]
        self.d -= self.d[q] * T[r, :N]
        self.d[q] = 0.0
        leave = self.basis[r]
        self.is_basic[leave] = False
        self.is_basic[q] = True
        self.basis[r] = q
        self.iterations += 1
        self.since_refactor += 1
        if self.since_refactor >= _REFACTOR_EVERY:
            if not self.refactor():
                raise np.linalg.LinAlgError("basis became ill-conditioned")

    # -- primal simplex ---------------------------------------------------
    def start(self) -> None:
        """Slack/artificial starting basis for phase 1."""
        m = self.m
        x0 = np.where(np.isfinite(self.lb), self.lb, 0.0)
        r = self.b - self.A @ x0
        basis = []
        arts = []
        for i in range(m):
            k = self.slack_of_row.get(i)
            if k is not None:
                sg = self.A[i, k]
                if r[i] * sg >= 0:
                    basis.append(k)
                    continue
            arts.append((i, 1.0 if r[i] >= 0 else -1.0))
        na = len(arts)
        Art = np.zeros((m, na))
        for k, (i, sg) in enumerate(arts):
            Art[i, k] = sg
        self.A_full = np.hstack([self.A, Art])
        N = self.A_full.shape[1]
        self.n_art = na
        self.lb = np.concatenate([self.lb, np.zeros(na)])
        self.ub = np.concatenate([self.ub, np.full(na, math.inf)])
        art_idx = {i: self.n_real + k for k, (i, _) in enumerate(arts)}
        self.basis = np.array(self._merge_basis(basis, art_idx), dtype=int)
        self.is_basic = np.zeros(N, dtype=bool)
        self.is_basic[self.basis] = True
        self.at_ub = np.zeros(N, dtype=bool)
        self.cost = np.concatenate([np.zeros(self.n_real), np.ones(na)])

    def _merge_basis(self, slack_basis: list[int], art_idx: dict[int, int]) -> list[int]:
        out = []
        it = iter(slack_basis)
        for i in range(self.m):
            out.append(art_idx[i] if i in art_idx else next(it))
        return out

    def primal(self, max_iter: int) -> str:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self._primal(max_iter)

    def _primal(self, max_iter: int) -> str:
        stall = 0
        free = self.ub > self.lb
        N = self.A_full.shape[1]
        weights = np.ones(N)  # devex reference weights
        movable = free & ~self.is_basic
        lbB = self.lb[self.basis]
        ubB = self.ub[self.basis]
        while True:
            if self.iterations > max_iter:
                return "numerical"
            d = self.d
            dd = np.where(self.at_ub, -d, d)
            cand = movable & (dd < -_DUAL_TOL)
            if not cand.any():
                return "optimal"
            if stall >= _STALL_LIMIT:
                q = int(np.flatnonzero(cand)[0])
            else:
                q = int(np.argmax(np.where(cand, d * d / weights, -1.0)))
            direction = -1.0 if self.at_ub[q] else 1.0
            col = self.T[:, q]
            delta = -direction * col  # change of xB per unit step
            ad = np.abs(delta)
            ratio = np.where(delta < 0, self.xB - lbB, ubB - self.xB) / ad
            ratio[ad <= _PIVOT_TOL] = math.inf
            np.maximum(ratio, 0.0, out=ratio)
            theta = ratio.min() if self.m else math.inf
            span = self.ub[q] - self.lb[q]
            if span <= theta:
                # entering variable reaches its opposite bound first
                if not math.isfinite(span):
                    return "unbounded"
                self.xB += span * delta
                self.at_ub[q] = not self.at_ub[q]
                stall = 0
                continue
            if not math.isfinite(theta):
                return "unbounded"
            ties = np.flatnonzero(ratio <= theta + 1e-12)
            if stall >= _STALL_LIMIT:
                r = int(ties[np.argmin(self.basis[ties])])
            else:
                arts = ties[self.basis[ties] >= self.n_real]
                if arts.size:  # drive artificials out first
                    ties = arts
                r = int(ties[np.argmax(ad[ties])])
            enter_val = (self.ub[q] if self.at_ub[q] else self.lb[q]) + direction * theta
            self.xB += theta * delta
            leave = self.basis[r]
            self.at_ub[leave] = bool(delta[r] > 0)
            piv = col[r]
            wq = weights[q]
            self._pivot(r, q)
            self.xB[r] = enter_val
            movable[q] = False
            movable[leave] = free[leave]
            lbB[r] = self.lb[q]
            ubB[r] = self.ub[q]
            alpha = self.T[r, :N]
            np.maximum(weights, alpha * alpha * wq, out=weights)
            weights[q] = 1.0
            weights[leave] = max(wq / (piv * piv), 1.0)
            stall = stall + 1 if theta <= 1e-12 else 0

    # -- dual simplex -----------------------------------------------------
    def dual(self, max_iter: int, cutoff: float = math.inf) -> str:
        """Re-optimize after bound changes; assumes dual feasibility.

        Stops early with ``"cutoff"`` once the (monotone) dual objective
        exceeds ``cutoff``.
        """
        stall = 0
        free = self.ub > self.lb
        N = self.A_full.shape[1]
        checks = 0
        movable = free & ~self.is_basic
        lbB = self.lb[self.basis]
        ubB = self.ub[self.basis]
        while True:
            if self.iterations > max_iter:
                return "numerical"
            below = lbB - self.xB
            above = self.xB - ubB
            viol = np.maximum(below, above)
            tol = _PRIMAL_TOL * np.maximum(1.0, np.abs(self.xB))
            bad = viol > tol
            if not bad.any():
                return "optimal"
            checks += 1
            if math.isfinite(cutoff) and checks % 4 == 0 and self.objective() > cutoff:
                return "cutoff"
            if stall >= _STALL_LIMIT:
                rows = np.flatnonzero(bad)
                r = int(rows[np.argmin(self.basis[rows])])
            else:
                # steepest-edge style: infeasibility relative to tableau row length
                norms = np.einsum("ij,ij->i", self.T[:, :N], self.T[:, :N])
                r = int(np.argmax(np.where(bad, viol * viol / norms, -1.0)))
            up = below[r] > 0  # basic variable must increase to its lower bound
            target = lbB[r] if up else ubB[r]
            row = self.T[r, :N]
            if up:
                elig = movable & (((~self.at_ub) & (row < -_PIVOT_TOL)) | (self.at_ub & (row > _PIVOT_TOL)))
            else:
                elig = movable & (((~self.at_ub) & (row > _PIVOT_TOL)) | (self.at_ub & (row < -_PIVOT_TOL)))
            if not elig.any():
                return "infeasible"
            idx = np.flatnonzero(elig)
            ratios = np.abs(self.d[idx]) / np.abs(row[idx])
            best = ratios.min()
            ties = idx[ratios <= best + 1e-12]
            if stall >= _STALL_LIMIT:
                q = int(ties[0])
            else:
                q = int(ties[np.argmax(np.abs(row[ties]))])
            step = (self.xB[r] - target) / row[q]
            xq = (self.ub[q] if self.at_ub[q] else self.lb[q]) + step
            self.xB -= step * self.T[:, q]
            leave = self.basis[r]
            self.at_ub[leave] = not up
            self._pivot(r, q)
            self.xB[r] = xq
            movable[q] = False
            movable[leave] = free[leave]
            lbB[r] = self.lb[q]
            ubB[r] = self.ub[q]
            stall = stall + 1 if abs(best) <= 1e-12 else 0

    def dual_feasible(self) -> bool:
        movable = (~self.is_basic) & (self.ub > self.lb)
        bad = movable & (((~self.at_ub) & (self.d < -1e-7)) | (self.at_ub & (self.d > 1e-7)))
        return not bad.any()

    def primal_infeasibility(self) -> float:
        lbB = self.lb[self.basis]
        ubB = self.ub[self.basis]
        v = np.maximum(lbB - self.xB, self.xB - ubB)
        return float(v.max()) if v.size else 0.0

    # -- driver -----------------------------------------------------------
    def solve(self, max_iter: int | None = None) -> str:
        """Two-phase primal simplex from the slack/artificial basis."""
        if max_iter is None:
            max_iter = 50 * (self.m + self.n_real) + 1000
        self.start()
        # the starting basis is diagonal with +-1 entries, so it is its own inverse
        sign = self.A_full[np.arange(self.m), self.basis] if self.m else np.zeros(0)
        self.T = np.asfortranarray(sign[:, None] * np.hstack([self.A_full, self.b[:, None]]))
        self.since_refactor = 0
        self.refresh()
        # phase 1
        if self.n_art:
            st = self.primal(max_iter)
            if st != "optimal":
                return "numerical" if st != "unbounded" else "numerical"
            if self.objective() > 1e-7 * max(1.0, float(np.abs(self.b).max(initial=0.0))):
                return "infeasible"
            self._drop_artificials()
        self.cost = np.concatenate([self.c, np.zeros(self.A_full.shape[1] - self.n_real)])
        self.refresh()
        return self.primal(max_iter)

    def _drop_artificials(self) -> None:
        N = self.A_full.shape[1]
        art = np.arange(self.n_real, N)
        # pivot zero-level artificials out of the basis where possible
        for r in range(self.m):
            q_art = self.basis[r]
            if q_art < self.n_real:
                continue
            row = self.T[r, : self.n_real]
            cand = np.flatnonzero((np.abs(row) > 1e-7) & ~self.is_basic[: self.n_real])
            if cand.size:
                q = int(cand[np.argmax(np.abs(row[cand]))])
                val = self.ub[q] if self.at_ub[q] else self.lb[q]
                self.at_ub[q_art] = False
                self._pivot(r, q)
                self.xB[r] = val + 0.0
        keep = np.ones(N, dtype=bool)
        keep[art[~self.is_basic[art]]] = False
        pos = np.cumsum(keep) - 1
        self.A_full = self.A_full[:, keep]
        self.T = np.hstack([self.T[:, :N][:, keep], self.T[:, N:]])
        self.lb, self.ub = self.lb[keep], self.ub[keep]
        self.at_ub, self.is_basic = self.at_ub[keep], self.is_basic[keep]
        self.cost = self.cost[keep]
        self.basis = pos[self.basis]
        # remaining artificials sit on redundant rows; pin them at zero
        self.ub[self.n_real:] = 0.0
        self.n_art = self.A_full.shape[1] - self.n_real
        self.refresh()

    def structural(self) -> np.ndarray:
        return self.x()[: self.n_struct]


def residuals(model: MilpModel, values: Sequence[float]) -> float:
    """Largest normalized row or bound violation of ``values``."""
    x = np.asarray(values, dtype=float)
    lb = np.array([v.lb for v in model.variables], dtype=float)
    ub = np.array([v.ub for v in model.variables], dtype=float)
    worst = 0.0
    with np.errstate(invalid="ignore"):
        fl, fu = np.isfinite(lb), np.isfinite(ub)
        if fl.any():
            worst = max(worst, float(np.max((lb[fl] - x[fl]) / np.maximum(1.0, np.abs(lb[fl])))))
        if fu.any():
            worst = max(worst, float(np.max((x[fu] - ub[fu]) / np.maximum(1.0, np.abs(ub[fu])))))
    indptr, idx, dat, rhs, sense = model.row_arrays()
    if rhs.size:
        terms = dat * x[idx]
        counts = np.diff(indptr)
        act = np.zeros(rhs.size)
        mag = np.maximum(1.0, np.abs(rhs))
        nz = counts > 0
        if terms.size:
            starts = indptr[:-1][nz]
            act[nz] = np.add.reduceat(terms, starts)
            mag[nz] = np.maximum(mag[nz], np.maximum.reduceat(np.abs(terms), starts))
        r = act - rhs
        viol = np.where(sense < 0, np.maximum(r, 0.0), np.where(sense > 0, np.maximum(-r, 0.0), np.abs(r)))
        worst = max(worst, float(np.max(viol / mag)))
    return worst


def solve_lp(model: MilpModel, objective: int | str = 0, *,
             lb: Sequence[float] | None = None, ub: Sequence[float] | None = None) -> LpSolution:
    """Optimize one objective of ``model`` with binaries relaxed to ``[0, 1]``."""
    red = Reduced(model, objective, lb, ub)
    if red.infeasible:
        return LpSolution("infeasible")
    sx = Simplex(red)
    try:
        status = sx.solve()
    except np.linalg.LinAlgError:
        status = "numerical"
    if status != "optimal":
        return LpSolution(status, iterations=sx.iterations)
    y = sx.structural()
    values = red.recover(y)
    relaxed = model
    if residuals(relaxed, values) > FEAS_TOL and not _bounds_only_issue(model, values, lb, ub):
        return LpSolution("numerical", iterations=sx.iterations)
    return LpSolution("optimal", red.objective_value(y), values, sx.iterations)


def _bounds_only_issue(model, values, lb, ub) -> bool:
    """True when the only violations are of model bounds overridden by the caller."""
    if lb is None and ub is None:
        return False
    stripped = MilpModel(
        tuple(type(v)(v.name, v.kind, -math.inf, math.inf) for v in model.variables),
        model.constraints, model.objectives,
    )
    lo = lb if lb is not None else [v.lb for v in model.variables]
    hi = ub if ub is not None else [v.ub for v in model.variables]
    if residuals(stripped, values) > FEAS_TOL:
        return False
    return all(l - 1e-7 * max(1, abs(l)) <= x <= h + 1e-7 * max(1, abs(h)) for x, l, h in zip(values, lo, hi))
