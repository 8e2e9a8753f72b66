"""Acceptance criteria A1-A8, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import dataclasses
import functools
import re
import statistics
import time
import timeit

import pytest

from cashsched.finance import evaluate_ledger, optimize_financing
from cashsched.io import load_instance, parse_decisions, parse_psplib_mm, parse_schedule, synthesize_finance, write_instance
from cashsched.model import (
    InfeasibleError,
    Objective,
    ThConfig,
    build_crisp_model,
    build_ivf_model,
    build_th_model,
    build_weighted_sum,
    compute_payoff_table,
    membership,
)
from cashsched.pipeline import run_method
from cashsched.project import validate_project
from cashsched.solver import ObjectiveSpec, enumerate_exhaustive, extract_schedule, solve_milp
from cashsched.toys import ToyConfig, random_toy

from conftest import DATA, PKG_DATA

CASE22_CF = (890_000.0, 1_474_232.399, 2_809_530.777, 4_914_108.476)
ALPHAS = (0.0, 0.5, 1.0)
GAMMAS = (0.0, 0.4, 1.0)
N_TOYS = 50


@pytest.fixture
def verdict(capsys):
    def emit(tag: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{tag} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


# -- A1 ----------------------------------------------------------------------

def test_a1_case_study_replay(verdict):
    p, _ = load_instance(PKG_DATA / "case22.json")
    tbu = parse_schedule((PKG_DATA / "case22_schedule.json").read_text()).period_costs
    d = parse_decisions((PKG_DATA / "case22_decisions.json").read_text())
    led = evaluate_ledger(None, d, p, tbu=tbu)
    errs = [abs(got - want) / want for got, want in zip(led.cf, CASE22_CF)]
    runs = timeit.repeat(lambda: evaluate_ledger(None, d, p, tbu=tbu), number=20, repeat=15)
    per_call = statistics.median(runs) / 20
    ok = len(led.cf) == 4 and max(errs) <= 5e-4 and per_call < 1e-3 and f"{led.final:.4E}" == "4.9141E+06"
    verdict("A1", ok, f"max rel err {max(errs):.2e}, final {led.final:,.3f}, {per_call * 1e6:.0f} us/call")


# -- A2 / A8 -------------------------------------------------------------------

def _specs():
    even = ThConfig.even(3).theta
    out = {"single-makespan": ObjectiveSpec("makespan"), "single-profit": ObjectiveSpec("profit")}
    for g in GAMMAS:
        out[f"th-{g}"] = ObjectiveSpec("th", g, even)
    out["weighted"] = ObjectiveSpec("weighted", weights=even)
    return out


def _milp_side(p, alpha):
    """Every objective of one toy solved by branch-and-bound.

    The payoff-table stages that coincide with the single-objective runs
    are answered from the same solutions instead of being solved twice.
    """
    base = build_ivf_model(p, alpha)
    seen = {}

    def solve(m):
        key = (id(m.constraints), m.objectives)
        if key not in seen:
            seen[key] = solve_milp(m)
        return seen[key]

    objs = base.objectives
    out = {"single-makespan": solve(base),
           "single-profit": solve(base.with_objectives([objs[1], objs[0], objs[2]]))}
    try:
        pt = compute_payoff_table(p, alpha, solve, base=base)
    except InfeasibleError:
        pt = None
    for g in GAMMAS:
        out[f"th-{g}"] = solve_milp(build_th_model(base, pt, ThConfig.even(3, g))) if pt else None
    out["weighted"] = solve_milp(build_weighted_sum(base, pt, ThConfig.even(3).theta)) if pt else None
    return out


@functools.lru_cache(maxsize=1)
def oracle_comparison():
    specs = _specs()
    rows = []
    t0 = time.perf_counter()
    for seed in range(N_TOYS):
        p = random_toy(seed)
        for alpha in ALPHAS:
            ours = _milp_side(p, alpha)
            for name, spec in specs.items():
                ref = enumerate_exhaustive(p, alpha, spec)
                rows.append((seed, alpha, name, ours[name], ref))
    return rows, time.perf_counter() - t0


def _agree(ours, ref) -> bool:
    if ours is None or ours.status == "infeasible":
        return ref.status == "infeasible"
    return ours.status == ref.status == "optimal" and abs(ours.objective - ref.objective) <= 1e-6


def test_a2_oracle_equivalence(verdict):
    rows, seconds = oracle_comparison()
    bad = [(s, a, n) for s, a, n, ours, ref in rows if not _agree(ours, ref)]
    solved = sum(1 for *_, ours, ref in rows if ref.status == "optimal")
    ok = not bad and seconds < 60.0
    verdict("A2", ok, f"{len(rows)} comparisons ({solved} optimal), {len(bad)} mismatches {bad[:3]}, "
                      f"{seconds:.1f} s")


def test_a8_pipeline_self_consistency(verdict):
    rows, _ = oracle_comparison()
    worst, checked, bad = 0.0, 0, []
    for seed, alpha, name, sol, _ in rows:
        if name != "single-profit" or sol.status != "optimal":
            continue
        p = random_toy(seed)
        s = extract_schedule(sol, p)
        _, led = optimize_financing(s, p)
        gap = abs(led.final - sol.objective)
        worst = max(worst, gap)
        checked += 1
        if gap > 1e-6:
            bad.append((seed, alpha))
    verdict("A8", not bad and checked > 0, f"{checked} solves replayed, worst |dZ2| {worst:.1e}")


# -- A3 ------------------------------------------------------------------------

CRISP = ToyConfig(fuzzy_durations=False, fuzzy_usage=False)


def test_a3_crisp_collapse(verdict):
    worst_obj = worst_link = 0.0
    statuses_match = True
    for seed in range(6):
        p = random_toy(seed, CRISP)
        crisp_m = build_crisp_model(p)
        ref = {lab: solve_milp(crisp_m, objective=lab) for lab in ("Z1", "Z2")}
        for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
            m = build_ivf_model(p, alpha)
            for lab, crisp_lab in (("Z1", "Z1"), ("Z2L", "Z2"), ("Z2U", "Z2")):
                sol = solve_milp(m, objective=lab)
                statuses_match &= sol.status == ref[crisp_lab].status
                if sol.status == "optimal":
                    worst_obj = max(worst_obj, abs(sol.objective - ref[crisp_lab].objective))
            both = Objective("profit", m.objective("Z2L").coeffs + m.objective("Z2U").coeffs, "max")
            sol = solve_milp(m.with_objectives([both]))
            if sol.status == "optimal":
                links = (abs(sol.value("Z1_U") - sol.value("Z1_L")),
                         abs(m.evaluate("Z2U", sol.values) - m.evaluate("Z2L", sol.values)))
                worst_link = max(worst_link, *links)
    ok = statuses_match and worst_obj <= 1e-6 and worst_link <= 1e-6
    verdict("A3", ok, f"worst objective gap {worst_obj:.1e}, worst link slack {worst_link:.1e}")


# -- A4 ------------------------------------------------------------------------

RATES = ("r_excess", "r_delay", "r_long", "r_short")


def test_a4_rate_monotonicity(verdict):
    p, _ = load_instance(PKG_DATA / "toy.json")
    res = run_method(p, None if p.is_crisp else 0.5, "single-profit")
    s, d = res.schedule, res.decisions
    led = evaluate_ledger(s, d, p)
    preconditions = sum(d.dp) > 0 and sum(d.stl) > 0 and min(led.cf[:-1]) > 0
    trends = {}
    for name in RATES:
        base = getattr(p.finance, name)
        grid = [base * k for k in (0.5, 0.75, 1.0, 1.25, 1.5, 2.0)] if base else [0.0, 0.01, 0.02, 0.03]
        finals = [evaluate_ledger(s, d, dataclasses.replace(p, finance=dataclasses.replace(p.finance, **{name: v}))
                                  ).final for v in grid]
        steps = [b - a for a, b in zip(finals, finals[1:])]
        trends[name] = "strict" if all(x > 0 for x in steps) else "weak" if all(x >= -1e-9 for x in steps) else "no"
    ok = (preconditions and all(t != "no" for t in trends.values())
          and trends["r_delay"] == trends["r_excess"] == "strict")
    verdict("A4", ok, f"dp {sum(d.dp):.1f}, stl {sum(d.stl):.1f}; " + ", ".join(f"{k} {v}" for k, v in trends.items()))


# -- A5 ------------------------------------------------------------------------

def test_a5_alpha_levels(verdict):
    profits_ok, mus_ok, lam_ok, n = True, True, True, 0
    for seed in range(12):
        p = random_toy(seed)
        r0, r1 = run_method(p, 0.0, "th"), run_method(p, 1.0, "th")
        if not (r0.ledger and r1.ledger):
            continue
        n += 1
        profits_ok &= r1.profit >= r0.profit - 1e-6
        for r in (r0, r1):
            mus_ok &= all(0.0 <= v <= 1.0 for v in r.memberships.values())
        if seed < 4:
            r = run_method(p, 0.5, "th", gamma=1.0)
            lam_ok &= abs(r.solution.value("LAMBDA0") - min(r.memberships.values())) <= 1e-6
    ok = n > 0 and profits_ok and mus_ok and lam_ok
    verdict("A5", ok, f"{n} toys: profit(1) >= profit(0) {profits_ok}, memberships in [0,1] {mus_ok}, "
                      f"lambda0 = min mu {lam_ok}")


# -- A6 ------------------------------------------------------------------------

def test_a6_membership_endpoints(verdict):
    cases = [(10.0, 2.0, "max"), (2.0, 10.0, "min"), (-3.5, -7.25, "max"), (1e6, 1e7, "min")]
    ok = all(membership(pis, pis, nis, s) == 1.0 and membership(nis, pis, nis, s) == 0.0 for pis, nis, s in cases)
    verdict("A6", ok, f"{len(cases)} payoff pairs over both senses")


# -- A7 ------------------------------------------------------------------------

def _ingest(path):
    t0 = time.perf_counter()
    text = path.read_text()
    declared = int(re.search(r"jobs \(incl\. supersource/sink \):\s*(\d+)", text).group(1))
    b = parse_psplib_mm(text)
    docs = {write_instance(synthesize_finance(b, 11)) for _ in range(2)}
    p = synthesize_finance(b, 11)
    valid = validate_project(p) == []
    return b.n_jobs, declared, len(docs) == 1 and valid, time.perf_counter() - t0


def test_a7_benchmark_ingestion(verdict):
    out = {name: _ingest(DATA / name) for name in ("j30_synth.mm", "mm50_synth.mm")}
    (j30, j30_h, j30_ok, j30_t), (mm, mm_h, mm_ok, mm_t) = out.values()
    ok = (j30 == j30_h == 32 and mm == mm_h == 52 and j30_ok and mm_ok and j30_t < 1.0 and mm_t < 1.0)
    verdict("A7", ok, f"J30 {j30} jobs in {j30_t * 1e3:.0f} ms, MM50 {mm} jobs in {mm_t * 1e3:.0f} ms")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
