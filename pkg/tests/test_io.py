import io
import json
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cashsched.finance import LEDGER_TERMS, FinancingDecisions, Ledger, Schedule, ScheduledActivity, evaluate_ledger
from cashsched.fuzzy import crisp
from cashsched.io import (
    FinanceConfig,
    InstanceFormatError,
    InstanceSyntaxError,
    PsplibParseError,
    load_instance,
    parse_decisions,
    parse_instance,
    parse_psplib_mm,
    parse_schedule,
    read_ledger_csv,
    render_gantt_svg,
    synthesize_finance,
    write_decisions,
    write_instance,
    write_ledger_csv,
    write_schedule,
)
from cashsched.io.synth import mode_cost
from cashsched.project import PeriodGrid, validate_project
from cashsched.toys import random_toy

from conftest import DATA, PKG_DATA, chain

J30 = DATA / "j30_synth.mm"
MM50 = DATA / "mm50_synth.mm"


@given(st.integers(0, 5000))
@settings(max_examples=40)
def test_native_round_trip(seed):
    p = random_toy(seed)
    text = write_instance(p)
    q, diags = parse_instance(text)
    assert diags == [] and q == p
    assert write_instance(q) == text


def test_case_study_file():
    p, diags = load_instance(PKG_DATA / "case22.json")
    assert diags == [] and len(p.activities) == 24


@pytest.mark.parametrize("text", ["", "   \n"])
def test_empty_document(text):
    with pytest.raises(InstanceSyntaxError):
        parse_instance(text)


def test_syntax_error_position():
    with pytest.raises(InstanceSyntaxError) as exc:
        parse_instance('{\n  "schema": 1,\n  oops\n}')
    assert exc.value.line == 3


def _doc():
    return json.loads(write_instance(chain([2, 3], 10)))


def test_crisp_duration_as_number():
    doc = _doc()
    doc["activities"][1]["modes"][0]["duration"] = 4
    p, _ = parse_instance(json.dumps(doc))
    assert p.activities[1].modes[0].duration == crisp(4.0)


def test_triangular_and_interval_forms():
    doc = _doc()
    doc["activities"][1]["modes"][0]["duration"] = [1, 2, 4]
    doc["activities"][2]["modes"][0]["duration"] = {"lower": [2, 3, 4], "upper": [1, 3, 5]}
    p, _ = parse_instance(json.dumps(doc))
    d1, d2 = p.activities[1].modes[0].duration, p.activities[2].modes[0].duration
    assert d1.is_triangular and d1.upper.as_tuple() == (1, 2, 4)
    assert d2.lower.as_tuple() == (2, 3, 4) and d2.upper.as_tuple() == (1, 3, 5)


def test_unknown_field_rejected():
    doc = _doc()
    doc["finance"]["bonus"] = 1
    with pytest.raises(InstanceFormatError, match="bonus"):
        parse_instance(json.dumps(doc))


def test_semantic_problems_become_diagnostics():
    doc = _doc()
    doc["activities"][1]["predecessors"] = ["nowhere"]
    _, diags = parse_instance(json.dumps(doc))
    assert "unknown predecessor" in {d.rule for d in diags}


@pytest.mark.parametrize("path, jobs", [(J30, 32), (MM50, 52)])
def test_benchmark_header_echo(path, jobs):
    text = path.read_text()
    declared = int(re.search(r"jobs \(incl\. supersource/sink \):\s*(\d+)", text).group(1))
    b = parse_psplib_mm(text)
    assert b.n_jobs == declared == jobs == len(b.modes) == len(b.successors)
    assert b.header["renewable"] == len(b.renewable_capacity)
    assert b.header["nonrenewable"] == len(b.nonrenewable_capacity)


def test_dialect_detection():
    assert parse_psplib_mm(J30.read_text()).origin == "psplib-mm"
    assert parse_psplib_mm(MM50.read_text()).origin == "mmlib"


def test_truncated_file_names_requests_section():
    text = J30.read_text()
    cut = text.index("REQUESTS/DURATIONS")
    truncated = text[: cut + 600]
    with pytest.raises(PsplibParseError) as exc:
        parse_psplib_mm(truncated)
    assert exc.value.section == "REQUESTS/DURATIONS"


def test_job_count_mismatch():
    text = J30.read_text().replace("jobs (incl. supersource/sink ):  32", "jobs (incl. supersource/sink ):  33")
    with pytest.raises(PsplibParseError, match="header declares 33"):
        parse_psplib_mm(text)


@pytest.mark.parametrize("path", [J30, MM50])
def test_synthesis_is_deterministic_and_valid(path):
    b = parse_psplib_mm(path.read_text())
    a, c = synthesize_finance(b, 7), synthesize_finance(b, 7)
    assert write_instance(a) == write_instance(c)
    assert write_instance(synthesize_finance(b, 8)) != write_instance(a)
    assert validate_project(a) == []


def test_zero_spreads_give_crisp_instance():
    b = parse_psplib_mm(J30.read_text())
    p = synthesize_finance(b, 1, FinanceConfig(duration_spread=(0.0, 0.0), usage_spread=(0.0, 0.0)))
    assert all(m.duration.is_crisp and all(u.is_crisp for u in m.renewable + m.nonrenewable)
               for a in p.activities for m in a.modes)


def test_markup_scales_payments():
    b = parse_psplib_mm(J30.read_text())
    p = synthesize_finance(b, 3, FinanceConfig(markup=0.2))
    cr, cw = p.pricing.cr, p.pricing.cw
    cost = sum(mode_cost(m, cr, cw) for jm in b.modes for m in jm)
    paid = sum(m.payment for a in p.activities for m in a.modes)
    assert paid == pytest.approx(1.2 * cost, abs=0.005 * b.n_modes)


def test_spread_order_enforced():
    with pytest.raises(ValueError):
        FinanceConfig(duration_spread=(0.3, 0.1))


@st.composite
def ledgers(draw):
    Y = draw(st.integers(1, 5))
    money = st.floats(-1e7, 1e7, allow_nan=False).map(lambda v: round(v, 3))
    col = st.lists(money, min_size=Y, max_size=Y).map(tuple)
    items = tuple(tuple(draw(money) for _ in LEDGER_TERMS) for _ in range(Y))
    return Ledger(items=items, cf=draw(col), tbu=draw(col), stl=draw(col), pa=draw(col), dp=draw(col),
                  due=draw(col), ltl=draw(money))


@given(ledgers())
def test_ledger_csv_round_trip(led):
    buf = io.StringIO()
    write_ledger_csv(led, buf)
    back = read_ledger_csv(buf.getvalue())
    for attr in ("cf", "tbu", "stl", "pa", "dp", "due"):
        assert getattr(back, attr) == pytest.approx(getattr(led, attr), abs=5e-4)
    assert back.ltl == pytest.approx(led.ltl, abs=5e-4)


def test_case_study_ledger_csv():
    p, _ = load_instance(PKG_DATA / "case22.json")
    tbu = parse_schedule((PKG_DATA / "case22_schedule.json").read_text()).period_costs
    d = parse_decisions((PKG_DATA / "case22_decisions.json").read_text())
    buf = io.StringIO()
    write_ledger_csv(evaluate_ledger(None, d, p, tbu=tbu), buf)
    rows = buf.getvalue().splitlines()
    assert rows[0] == "period,1,2,3,4"
    cf = [float(v) for v in rows[1].split(",")[1:]]
    assert rows[1].startswith("cash_flow,890000.000,")
    for got, want in zip(cf, (890_000, 1_474_232.399, 2_809_530.777, 4_914_108.476)):
        assert got == pytest.approx(want, rel=5e-4)


def test_ledger_csv_edge_shapes():
    buf = io.StringIO()
    write_ledger_csv(Ledger((), (), (), (), (), (), ()), buf)
    assert buf.getvalue() == "period\n"
    p = chain([2], 5)
    s = Schedule((ScheduledActivity("S", 1, 1, 1), ScheduledActivity("A1", 1, 1, 3),
                  ScheduledActivity("E", 1, 3, 3)))
    buf = io.StringIO()
    write_ledger_csv(evaluate_ledger(s, FinancingDecisions(0, (0,), (0,), (0,)), p), buf)
    assert all(len(r.split(",")) == 2 for r in buf.getvalue().splitlines())


def _gantt(s, p):
    buf = io.StringIO()
    render_gantt_svg(s, p, buf, day_width=10.0, label_width=100.0)
    return buf.getvalue()


def test_gantt_geometry():
    p = chain([3], 120, PeriodGrid.uniform(30, 4))
    s = Schedule((ScheduledActivity("S", 1, 5, 5), ScheduledActivity("A1", 1, 5, 8),
                  ScheduledActivity("E", 1, 8, 8)))
    svg = _gantt(s, p)
    bar = re.search(r'<rect class="bar" id="act-A1" x="([\d.]+)" y="[\d.]+" width="([\d.]+)"', svg)
    x0, w = float(bar.group(1)), float(bar.group(2))
    assert (x0, x0 + w) == (150.0, 180.0)
    assert svg.count('class="period"') == 4
    assert svg.count('class="marker"') == 2
    assert re.search(r'class="marker" id="act-S" points="150\.0,', svg)
    assert _gantt(s, p) == svg


def test_schedule_and_decisions_files():
    s = Schedule((ScheduledActivity("S", 1, 1, 1), ScheduledActivity("A1", 2, 1, 4)), 0.5)
    back = parse_schedule(write_schedule(s, [1.5, 2.0]))
    assert back.schedule == s and back.period_costs == (1.5, 2.0)
    d = FinancingDecisions(3.0, (1.0, 0.0), (2.0, 5.0), (0.0, 1.0))
    assert parse_decisions(write_decisions(d)) == d
    with pytest.raises(InstanceFormatError):
        parse_decisions('{"ltl": 1, "stl": [], "pa": [], "dp": [], "extra": 0}')
    with pytest.raises(InstanceSyntaxError):
        parse_schedule("")
