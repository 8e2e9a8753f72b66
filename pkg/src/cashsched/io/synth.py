"""Seeded financial augmentation of benchmark instances.

Benchmark files carry durations, resource requests and precedence only; the
generator adds resource prices, payments, fuzzy spreads, a period grid and
finance parameters so the instance can be solved end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..fuzzy import NivtfNumber, Triangle, crisp
from ..project import Activity, FinanceParams, Mode, PeriodGrid, Project, ResourcePricing
from .psplib import BenchmarkInstance, BenchmarkMode

__all__ = ["FinanceConfig", "synthesize_finance", "mode_cost"]


@dataclass(frozen=True)
class FinanceConfig:
    """Knobs of the augmentation; money values are in the instance's unit."""

    markup: float = 0.2
    #: relative half-widths of the (lower, upper) triangles around a crisp value
    duration_spread: tuple[float, float] = (0.1, 0.2)
    usage_spread: tuple[float, float] = (0.05, 0.1)
    renewable_price: tuple[float, float] = (1.0, 5.0)
    nonrenewable_price: tuple[float, float] = (1.0, 3.0)
    n_periods: int = 4
    capital_share: float = 0.25  # initial capital / total mean mode cost
    long_loan_share: float = 0.1
    short_loan_share: float = 0.1
    daily_cap_share: float | None = None  # cap / peak single-mode daily cost
    r_excess: float = 0.0125
    r_delay: float = 0.1
    r_long: float = 0.06
    r_short: float = 0.075
    compounding_days: int = 30

    def __post_init__(self) -> None:
        for name in ("duration_spread", "usage_spread"):
            a, b = getattr(self, name)
            if not 0 <= a <= b:
                raise ValueError(f"{name} must satisfy 0 <= lower <= upper, got {(a, b)}")
        if self.markup < 0 or self.n_periods < 1:
            raise ValueError("markup must be non-negative and n_periods positive")


def _fuzzy(value: float, spread: tuple[float, float], digits: int = 4) -> NivtfNumber:
    if value == 0 or spread == (0.0, 0.0):
        return crisp(float(value))
    a, b = (round(value * s, digits) for s in spread)
    low = Triangle(max(0.0, value - a), value, value + a)
    up = Triangle(max(0.0, value - b), value, value + b)
    return NivtfNumber(low, up)


def mode_cost(m: BenchmarkMode, cr, cw) -> float:
    """Crisp cost of a mode: daily renewable cost over its duration plus the
    whole non-renewable request."""
    return m.duration * sum(c * r for c, r in zip(cr, m.renewable)) + sum(
        c * n for c, n in zip(cw, m.nonrenewable))


def synthesize_finance(b: BenchmarkInstance, seed: int, cfg: FinanceConfig = FinanceConfig()) -> Project:
    """Deterministic native instance for benchmark ``b``.

    Identical ``(b, seed, cfg)`` give identical projects, hence identical
    serialized documents. Non-renewable requests, which benchmarks state per
    mode, are spread evenly over the mode's days.
    """
    rng = np.random.default_rng(seed)
    K, L = len(b.renewable_capacity), len(b.nonrenewable_capacity)
    cr = tuple(round(float(v), 2) for v in rng.uniform(*cfg.renewable_price, size=K))
    cw = tuple(round(float(v), 2) for v in rng.uniform(*cfg.nonrenewable_price, size=L))
    n = b.n_jobs
    preds: dict[int, list[int]] = {j: [] for j in range(1, n + 1)}
    for j, s in b.arcs:
        preds[s].append(j)
    acts = []
    mean_costs = []
    peak_daily = 0.0
    for j in range(1, n + 1):
        jm = b.modes[j - 1]
        dummy = all(m.duration == 0 for m in jm) and (j == 1 or j == n)
        modes = []
        costs = []
        for m in jm:
            cost = mode_cost(m, cr, cw)
            costs.append(cost)
            per_day = [v / m.duration if m.duration else 0.0 for v in m.nonrenewable]
            peak_daily = max(peak_daily, sum(c * r for c, r in zip(cr, m.renewable))
                             + sum(c * v for c, v in zip(cw, per_day)))
            modes.append(Mode(
                _fuzzy(float(m.duration), cfg.duration_spread, 0),
                round(cost * (1.0 + cfg.markup), 2),
                tuple(_fuzzy(float(r), cfg.usage_spread) for r in m.renewable),
                tuple(_fuzzy(round(v, 4), cfg.usage_spread) for v in per_day),
            ))
        mean_costs.append(sum(costs) / len(costs))
        acts.append(Activity(f"J{j}", f"job {j}", tuple(f"J{q}" for q in sorted(preds[j])),
                             tuple(modes), dummy))
    horizon = max(1, b.horizon)
    Y = min(cfg.n_periods, horizon)
    grid = PeriodGrid(tuple(sorted({max(1, round(horizon * (y + 1) / Y)) for y in range(Y)})))
    total = sum(mean_costs)
    cap = math.inf
    if cfg.daily_cap_share is not None:
        cap = round(peak_daily * cfg.daily_cap_share, 2)
    fin = FinanceParams(
        initial_capital=round(total * cfg.capital_share, 2),
        max_long_loan=round(total * cfg.long_loan_share, 2),
        max_short_loan=round(total * cfg.short_loan_share, 2),
        min_cash=0.0,
        r_excess=cfg.r_excess,
        r_delay=cfg.r_delay,
        r_long=cfg.r_long,
        r_short=cfg.r_short,
        compounding_days=cfg.compounding_days,
    )
    notes = {
        "source": f"{b.origin} benchmark, {n} jobs; finance synthesized with seed {seed}",
        "pricing": "synthetic resource prices",
        "finance": "synthetic caps scaled to total mean mode cost",
    }
    return Project(tuple(acts), horizon, grid, ResourcePricing(cr, cw, cap), fin,
                   name=f"{b.origin}-{n}-seed{seed}", notes=notes)
