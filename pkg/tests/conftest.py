from __future__ import annotations

import math
from pathlib import Path

import pytest

from cashsched.fuzzy import crisp
from cashsched.project import Activity, FinanceParams, Mode, PeriodGrid, Project, ResourcePricing

DATA = Path(__file__).parent / "data"
PKG_DATA = Path(__file__).resolve().parents[1] / "src" / "cashsched" / "data"


def mode(duration, payment=0.0, ren=(), non=()):
    """Crisp mode; fuzzy values may be passed as ready NIVTF numbers."""
    wrap = lambda v: v if hasattr(v, "lower") else crisp(float(v))  # noqa: E731
    return Mode(wrap(duration), float(payment), tuple(map(wrap, ren)), tuple(map(wrap, non)))


def chain(durations, horizon, periods=None, *, payments=None, finance=None, pricing=None, ren=None):
    """Serial project S -> A1 -> ... -> An -> E with single-mode activities."""
    n = len(durations)
    payments = payments or [0.0] * n
    ren = ren or [0.0] * n
    acts = [Activity.dummy("S", n_renewable=1, n_nonrenewable=0)]
    prev = "S"
    for k, (d, pay, r) in enumerate(zip(durations, payments, ren), start=1):
        acts.append(Activity(f"A{k}", f"A{k}", (prev,), (mode(d, pay, (r,)),)))
        prev = f"A{k}"
    acts.append(Activity.dummy("E", (prev,), n_renewable=1, n_nonrenewable=0))
    return Project(
        tuple(acts), horizon, periods or PeriodGrid((horizon,)),
        pricing or ResourcePricing((1.0,), (), math.inf),
        finance or FinanceParams(initial_capital=100.0),
    )


def tradeoff_project(cap=math.inf) -> Project:
    """Two parallel activities, each with a fast-expensive and a slow-cheap mode.

    The fast modes shorten the project but cost more per day than they
    earn back, so the makespan and profit optima differ.
    """
    s = Activity.dummy("S", n_renewable=1, n_nonrenewable=1)
    a = Activity("A", "A", ("S",), (mode(2, 40, (6,), (1,)), mode(4, 40, (2,), (1,))))
    b = Activity("B", "B", ("S",), (mode(1, 25, (5,), (1,)), mode(3, 25, (1,), (1,))))
    e = Activity.dummy("E", ("A", "B"), n_renewable=1, n_nonrenewable=1)
    fin = FinanceParams(initial_capital=60.0, max_long_loan=10.0, max_short_loan=10.0, min_cash=0.0,
                        r_excess=0.001, r_delay=0.003, r_long=0.002, r_short=0.004, compounding_days=30)
    return Project((s, a, b, e), 6, PeriodGrid((3, 6)), ResourcePricing((2.0,), (1.0,), cap), fin,
                   name="tradeoff")


@pytest.fixture
def tradeoff() -> Project:
    return tradeoff_project()
