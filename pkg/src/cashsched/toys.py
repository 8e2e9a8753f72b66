"""Seeded generator of desk-scale instances for verification runs.

Every toy has a dummy source and sink, one renewable and one non-renewable
resource, two periods and a horizon of at most 15 days. Fast modes use more
resource per day than slow ones, so makespan and profit pull apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fuzzy import NivtfNumber, crisp, make_nivtf
from .project import Activity, FinanceParams, Mode, PeriodGrid, Project, ResourcePricing

__all__ = ["ToyConfig", "random_toy"]


@dataclass(frozen=True)
class ToyConfig:
    n_real: tuple[int, int] = (2, 3)
    max_modes: int = 2
    max_horizon: int = 15
    fuzzy_durations: bool = True
    fuzzy_usage: bool = True
    cap_probability: float = 0.3


def _spread(rng: np.random.Generator, value: float, fuzzy: bool, integer: bool) -> NivtfNumber:
    if not fuzzy or value == 0:
        return crisp(value)
    if integer:
        inner = int(rng.integers(0, 2))
        outer = inner + int(rng.integers(0, 2))
        inner, outer = min(inner, value), min(outer, value)
        return make_nivtf((value - inner, value, value + inner), (value - outer, value, value + outer))
    a = round(float(rng.uniform(0.0, 0.3)) * value, 2)
    b = round(a + float(rng.uniform(0.0, 0.3)) * value, 2)
    return make_nivtf((value - a, value, value + a), (value - b, value, value + b))


def random_toy(seed: int, cfg: ToyConfig = ToyConfig()) -> Project:
    """Deterministic toy project for ``seed``."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(cfg.n_real[0], cfg.n_real[1] + 1))
    ids = [f"A{k + 1}" for k in range(n)]
    preds: dict[str, list[str]] = {i: [] for i in ids}
    for k in range(1, n):
        for j in range(k):
            if rng.random() < 0.4:
                preds[ids[k]].append(ids[j])
    cr = (float(rng.integers(2, 6)),)
    cw = (float(rng.integers(1, 4)),)
    acts = [Activity.dummy("S", n_renewable=1, n_nonrenewable=1)]
    finish: dict[str, int] = {}
    for i in ids:
        modes = []
        n_modes = int(rng.integers(1, cfg.max_modes + 1))
        base = int(rng.integers(1, 4))
        for m in range(n_modes):
            d = base + m  # later modes are slower ...
            ren = float(rng.integers(1, 4) + (n_modes - 1 - m) * 2)  # ... and cheaper per day
            non = float(rng.integers(1, 3))
            cost = d * (ren * cr[0] + non * cw[0])
            pay = round(cost * float(rng.uniform(1.1, 1.6)), 0)
            modes.append(Mode(
                _spread(rng, float(d), cfg.fuzzy_durations, True),
                pay,
                (_spread(rng, ren, cfg.fuzzy_usage, False),),
                (_spread(rng, non, cfg.fuzzy_usage, False),),
            ))
        finish[i] = max((finish[q] for q in preds[i]), default=0) + math.ceil(
            max(m.duration.upper.hi for m in modes))
        acts.append(Activity(i, i, tuple(preds[i]) or ("S",), tuple(modes)))
    has_succ = {q for i in ids for q in preds[i]}
    ends = tuple(i for i in ids if i not in has_succ)
    acts.append(Activity.dummy("E", ends, n_renewable=1, n_nonrenewable=1))
    horizon = min(cfg.max_horizon, max(4, max(finish.values()) + int(rng.integers(0, 2))))
    horizon += horizon % 2
    horizon = min(horizon, cfg.max_horizon - cfg.max_horizon % 2)
    grid = PeriodGrid((horizon // 2, horizon))
    peak = max(m.renewable[0].upper.hi * cr[0] + m.nonrenewable[0].upper.hi * cw[0]
               for a in acts for m in a.modes)
    cap = math.inf
    if rng.random() < cfg.cap_probability:
        cap = float(math.ceil(peak * float(rng.uniform(1.0, 1.6))))
    fin = FinanceParams(
        initial_capital=float(rng.integers(40, 120)),
        max_long_loan=float(rng.integers(0, 60)),
        max_short_loan=float(rng.integers(0, 60)),
        min_cash=0.0,
        r_excess=0.001,
        r_delay=0.003,
        r_long=0.002,
        r_short=0.004,
        compounding_days=30,
    )
    return Project(tuple(acts), horizon, grid, ResourcePricing(cr, cw, cap), fin, name=f"toy-{seed}")
