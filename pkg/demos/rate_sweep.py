"""
Sensitivity of final cash to the financing rates
================================================

The schedule and the financing decisions are frozen; only one rate changes
at a time, so every difference comes from the ledger arithmetic.
"""

import dataclasses
from pathlib import Path

import numpy as np

import cashsched
from cashsched.finance import evaluate_ledger
from cashsched.io import load_instance
from cashsched.pipeline import run_method

p, _ = load_instance(Path(cashsched.__file__).parent / "data" / "toy.json")
res = run_method(p, 0.5, "single-profit")
s, d = res.schedule, res.decisions
print(f"long loan {d.ltl:.1f}, short loans {sum(d.stl):.1f}, deferred {sum(d.dp):.1f}")

for name in ("r_excess", "r_delay", "r_long", "r_short"):
    base = getattr(p.finance, name)
    grid = np.linspace(0.5 * base, 2.0 * base, 7)
    finals = []
    for v in grid:
        q = dataclasses.replace(p, finance=dataclasses.replace(p.finance, **{name: float(v)}))
        finals.append(evaluate_ledger(s, d, q).final)
    finals = np.array(finals)
    print(f"{name:9s}", " ".join(f"{f:10.2f}" for f in finals), " diffs > 0:", bool(np.all(np.diff(finals) > 0)))
