import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from cashsched.finance import _financing_model, evaluate_ledger
from cashsched.io import load_instance, parse_decisions, parse_schedule
from cashsched.model import ModelBuilder, Objective
from cashsched.solver.lp import residuals, solve_lp

from conftest import PKG_DATA


def one_var(ub, sense="max"):
    b = ModelBuilder()
    x = b.add_var("x", ub=ub)
    b.add_row("cap", [(x, 1.0)], "<=", 5.0)
    b.objectives.append(Objective("obj", ((x, 1.0),), sense))
    return b.freeze()


def test_bounded_maximum():
    sol = solve_lp(one_var(math.inf))
    assert sol.status == "optimal" and sol.objective == pytest.approx(5.0)
    assert sol.values == pytest.approx([5.0])


def test_infeasible_pair():
    b = ModelBuilder()
    x = b.add_var("x", lb=-math.inf)
    b.add_row("lo", [(x, 1.0)], ">=", 3.0)
    b.add_row("hi", [(x, 1.0)], "<=", 2.0)
    b.objectives.append(Objective("obj", ((x, 1.0),), "min"))
    assert solve_lp(b.freeze()).status == "infeasible"


def test_unbounded():
    b = ModelBuilder()
    x = b.add_var("x")
    y = b.add_var("y")
    b.add_row("r", [(x, 1.0), (y, -1.0)], "<=", 1.0)
    b.objectives.append(Objective("obj", ((x, 1.0),), "max"))
    assert solve_lp(b.freeze()).status == "unbounded"


def test_case_study_financing_lp_matches_reference():
    p, _ = load_instance(PKG_DATA / "case22.json")
    tbu = parse_schedule((PKG_DATA / "case22_schedule.json").read_text()).period_costs
    d = parse_decisions((PKG_DATA / "case22_decisions.json").read_text())
    due = evaluate_ledger(None, d, p, tbu=tbu).due
    model = _financing_model(p, due, {"L": tbu}, p.n_periods)[0]
    ours = solve_lp(model)
    ref = _linprog(model)
    assert ours.status == "optimal" and ref.status == 0
    assert ours.objective == pytest.approx(-ref.fun, rel=1e-9)
    assert residuals(model, ours.values) <= 1e-7


def _linprog(model):
    n = len(model.variables)
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for c in model.constraints:
        row = np.zeros(n)
        for j, a in c.coeffs:
            row[j] = a
        if c.sense == "=":
            a_eq.append(row)
            b_eq.append(c.rhs)
        elif c.sense == "<=":
            a_ub.append(row)
            b_ub.append(c.rhs)
        else:
            a_ub.append(-row)
            b_ub.append(-c.rhs)
    obj = model.objective(0)
    cost = np.zeros(n)
    for j, a in obj.coeffs:
        cost[j] = a if obj.sense == "min" else -a
    bounds = [(None if math.isinf(v.lb) else v.lb, None if math.isinf(v.ub) else v.ub) for v in model.variables]
    return linprog(cost, A_ub=np.array(a_ub) if a_ub else None, b_ub=b_ub or None,
                   A_eq=np.array(a_eq) if a_eq else None, b_eq=b_eq or None, bounds=bounds, method="highs")


@st.composite
def random_lp(draw):
    n = draw(st.integers(1, 6))
    m = draw(st.integers(0, 6))
    coef = st.integers(-5, 5).map(float)
    b = ModelBuilder()
    xs = [b.add_var(f"x{j}", lb=draw(st.sampled_from([0.0, -3.0, -math.inf])),
                    ub=draw(st.sampled_from([4.0, 10.0, math.inf]))) for j in range(n)]
    for i in range(m):
        terms = [(x, draw(coef)) for x in xs]
        b.add_row(f"r{i}", terms, draw(st.sampled_from(["<=", ">=", "="])), draw(st.integers(-10, 10)))
    b.objectives.append(Objective("obj", tuple((x, draw(coef)) for x in xs), draw(st.sampled_from(["min", "max"]))))
    return b.freeze()


@given(random_lp())
@settings(max_examples=200, deadline=None)
def test_agrees_with_reference_solver(model):
    ours = solve_lp(model)
    ref = _linprog(model)
    expected = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
    assert ours.status == expected
    if expected == "optimal":
        sign = 1.0 if model.objective(0).sense == "min" else -1.0
        assert ours.objective == pytest.approx(sign * ref.fun, rel=1e-7, abs=1e-7)
        assert residuals(model, ours.values) <= 1e-7
