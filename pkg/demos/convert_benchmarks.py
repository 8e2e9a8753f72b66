"""
From a PSPLIB multi-mode file to a native instance
==================================================

Benchmark files carry durations and resource use only.  Prices, fuzzy
spreads and financing terms are drawn from a seeded generator so the same
seed always yields the same instance.
"""

from pathlib import Path

from cashsched.io import FinanceConfig, parse_psplib_mm, synthesize_finance, write_instance
from cashsched.project import validate_project

here = Path(__file__).resolve().parent.parent / "tests" / "data"

for name in ("j30_synth.mm", "mm50_synth.mm"):
    b = parse_psplib_mm((here / name).read_text())
    print(f"{name}: {b.origin}, {b.n_jobs} jobs, {b.n_modes} modes")

    p = synthesize_finance(b, seed=4)
    assert write_instance(p) == write_instance(synthesize_finance(b, seed=4))
    print("  problems:", validate_project(p) or "none")
    print(f"  horizon {p.horizon} days over {p.n_periods} periods")

# zero spreads collapse every fuzzy number to a crisp one
b = parse_psplib_mm((here / "j30_synth.mm").read_text())
flat = synthesize_finance(b, 4, FinanceConfig(duration_spread=(0.0, 0.0), usage_spread=(0.0, 0.0)))
print("crisp:", flat.is_crisp)
