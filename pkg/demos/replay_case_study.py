"""
Replaying the 22-activity case study
====================================

The schedule's per-period costs and the published financing decisions are
fed straight into the ledger, with no solver involved.
"""

import sys
from pathlib import Path

import cashsched
from cashsched.finance import evaluate_ledger
from cashsched.io import load_instance, parse_decisions, parse_schedule, write_ledger_csv

data = Path(cashsched.__file__).parent / "data"
p, _ = load_instance(data / "case22.json")
costs = parse_schedule((data / "case22_schedule.json").read_text()).period_costs
decisions = parse_decisions((data / "case22_decisions.json").read_text())

print(f"{len(p.activities)} activities, {p.n_periods} periods, initial capital {p.finance.initial_capital:,.0f}")

ledger = evaluate_ledger(None, decisions, p, tbu=costs)

# one column per period; the cash_flow row is the headline
write_ledger_csv(ledger, sys.stdout)

print()
print(f"final cash {ledger.final:,.3f}")
