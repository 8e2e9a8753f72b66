"""
Solving a small fuzzy instance four ways
========================================

The bundled toy has two modes per activity and interval-valued fuzzy
durations.  Each method is solved at a middling alpha-level.
"""

from pathlib import Path

import cashsched
from cashsched.io import load_instance
from cashsched.pipeline import METHODS, run_method

p, _ = load_instance(Path(cashsched.__file__).parent / "data" / "toy.json")
alpha = 0.5

for method in METHODS:
    res = run_method(p, alpha, method)
    z = "  ".join(f"{k}={v:,.2f}" for k, v in res.objectives.items())
    print(f"{method:16s} {res.status:8s} {z}")

# the compromise method also reports how satisfied each objective is
res = run_method(p, alpha, "th", gamma=0.4)
for label, mu in res.memberships.items():
    print(f"  mu[{label}] = {mu:.3f}")
print(f"  lambda0 = {res.lambda0:.3f}")

# the chosen schedule, activity by activity
for item in res.schedule.items:
    print(f"  {item.activity:>4s}  mode {item.mode}  days {item.start:3d}..{item.completion:3d}")

# how alpha moves the two extremes
for a in (0.0, 0.5, 1.0):
    fast = run_method(p, a, "single-makespan")
    rich = run_method(p, a, "single-profit")
    print(f"alpha {a:.1f}: makespan {fast.objectives['Z1']:.0f}  profit {rich.profit:,.2f}")
