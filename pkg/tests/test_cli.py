import csv
import dataclasses
import io
import json

import pytest

from cashsched.cli import EXIT_INFEASIBLE, EXIT_IO, EXIT_OK, EXIT_USAGE, main, monotonicity, sweep_grid
from cashsched.io import load_instance, parse_schedule, write_instance, write_schedule
from cashsched.solver import ObjectiveSpec, enumerate_exhaustive

from conftest import DATA, PKG_DATA

TOY = PKG_DATA / "toy.json"
CASE = PKG_DATA / "case22.json"


@pytest.fixture(scope="module")
def solved(tmp_path_factory):
    out = tmp_path_factory.mktemp("solved")
    assert main(["solve", "--instance", str(TOY), "--method", "single-profit", "--out-dir", str(out)]) == EXIT_OK
    return out


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_solve_makespan_matches_oracle(tmp_path):
    out = tmp_path / "s.json"
    assert main(["solve", "--instance", str(TOY), "--method", "single-makespan", "--backend", "embedded",
                 "--out", str(out)]) == EXIT_OK
    summary = json.loads(out.read_text())
    p, _ = load_instance(TOY)
    ref = enumerate_exhaustive(p, summary["alpha"], ObjectiveSpec("makespan"))
    assert summary["objectives"]["Z1"] == pytest.approx(ref.objective, abs=1e-6)


def test_solve_writes_all_artifacts(solved):
    names = sorted(f.name for f in solved.iterdir())
    assert names == ["decisions.json", "gantt.svg", "ledger.csv", "schedule.json", "summary.json"]


def test_th_max_min_reports_lambda(tmp_path):
    out = tmp_path / "s.json"
    assert main(["solve", "--instance", str(TOY), "--method", "th", "--gamma", "1.0",
                 "--theta", "0.34,0.33,0.33", "--out", str(out)]) == EXIT_OK
    s = json.loads(out.read_text())
    assert s["lambda0"] == pytest.approx(min(s["memberships"].values()), abs=1e-9)
    assert all(0 <= m <= 1 for m in s["memberships"].values())


def test_export_does_not_solve(tmp_path, capsys):
    out = tmp_path / "m.lp"
    assert main(["solve", "--instance", str(TOY), "--method", "single-makespan", "--backend", "export",
                 "--out", str(out)]) == EXIT_OK
    text = out.read_text()
    assert text.startswith("\\") or "Minimize" in text
    assert "Binaries" in text and "summary" not in capsys.readouterr().out


def test_export_verb_matches_solve_backend(tmp_path):
    a, b = tmp_path / "a.lp", tmp_path / "b.lp"
    main(["export", "--instance", str(TOY), "--method", "single-profit", "--out", str(a)])
    main(["solve", "--instance", str(TOY), "--method", "single-profit", "--backend", "export", "--out", str(b)])
    assert a.read_text() == b.read_text()


@pytest.mark.parametrize("argv", [
    ["solve", "--instance", str(TOY), "--theta", "0.5,0.5"],
    ["solve", "--instance", str(TOY), "--method", "weighted", "--weights", "0.5,0.6,0.1"],
    ["solve", "--instance", str(TOY), "--gamma", "1.5"],
    ["solve", "--instance", str(TOY), "--bogus"],
    ["solve"],
])
def test_bad_arguments_exit_4(argv, tmp_path):
    argv = argv + ["--out", str(tmp_path / "never.json")] if len(argv) > 1 else argv
    assert main(argv) == EXIT_USAGE
    assert not (tmp_path / "never.json").exists()


def test_missing_instance_exit_3(tmp_path):
    assert main(["solve", "--instance", str(tmp_path / "nope.json")]) == EXIT_IO


def test_invalid_instance_exit_3(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert main(["solve", "--instance", str(bad)]) == EXIT_IO


def test_infeasible_exit_1_without_artifacts(tmp_path):
    p, _ = load_instance(TOY)
    fin = dataclasses.replace(p.finance, min_cash=1e9)
    inst = tmp_path / "tight.json"
    inst.write_text(write_instance(dataclasses.replace(p, finance=fin)))
    out = tmp_path / "out"
    assert main(["solve", "--instance", str(inst), "--method", "single-makespan", "--out-dir", str(out)]) \
        == EXIT_INFEASIBLE
    assert not out.exists() or not any(out.iterdir())


def test_case_study_replay(capsys, tmp_path):
    out = tmp_path / "e.json"
    code = main(["evaluate", "--instance", str(CASE), "--schedule", str(PKG_DATA / "case22_schedule.json"),
                 "--decisions", str(PKG_DATA / "case22_decisions.json"), "--out", str(out)])
    assert code == EXIT_OK
    assert json.loads(out.read_text())["final_cash_flow"] == pytest.approx(4_914_108.476, rel=5e-4)


def test_evaluate_rejects_broken_precedence(solved, tmp_path, capsys):
    sf = parse_schedule((solved / "schedule.json").read_text())
    p, _ = load_instance(TOY)
    first, second = next((a.predecessors[0], a.id) for a in p.activities
                         if a.predecessors and not p.activity(a.predecessors[0]).is_dummy)
    items = []
    for it in sf.schedule.items:
        if it.activity == second:
            early = sf.schedule.entry(first).start
            it = dataclasses.replace(it, start=early, completion=early + (it.completion - it.start))
        items.append(it)
    bad = tmp_path / "bad.json"
    bad.write_text(write_schedule(dataclasses.replace(sf.schedule, items=tuple(items))))
    assert main(["evaluate", "--instance", str(TOY), "--schedule", str(bad)]) == EXIT_INFEASIBLE
    assert f"{first} -> {second}" in capsys.readouterr().err


def test_evaluate_optimizes_financing(solved, tmp_path):
    out = tmp_path / "e.json"
    assert main(["evaluate", "--instance", str(TOY), "--schedule", str(solved / "schedule.json"),
                 "--out", str(out)]) == EXIT_OK
    s = json.loads(out.read_text())
    p, _ = load_instance(TOY)
    assert p.finance.r_delay > p.finance.r_excess
    assert s["financing"] == "optimized"
    assert all(v == 0 for v in s["decisions"]["pa"][:-1])
    summary = json.loads((solved / "summary.json").read_text())
    assert s["final_cash_flow"] == pytest.approx(summary["objectives"]["Z2L"], abs=1e-6)


def test_rate_sweep_is_strictly_increasing(solved, tmp_path):
    out, summ = tmp_path / "s.csv", tmp_path / "s.json"
    assert main(["sweep", "--instance", str(TOY), "--param", "r_delay", "--from", "0.1", "--to", "0.2",
                 "--steps", "5", "--schedule", str(solved / "schedule.json"),
                 "--out", str(out), "--summary", str(summ)]) == EXIT_OK
    rows = _rows(out.read_text())
    assert [float(r["r_delay"]) for r in rows] == pytest.approx([0.1, 0.125, 0.15, 0.175, 0.2])
    assert json.loads(summ.read_text())["monotone"]["final_cash_flow"] == "strictly increasing"


def test_alpha_sweep_rows(tmp_path):
    out = tmp_path / "a.csv"
    assert main(["sweep", "--instance", str(TOY), "--param", "alpha", "--values", "0.2,0.4,0.6,0.8",
                 "--out", str(out), "--summary", str(tmp_path / "a.json")]) == EXIT_OK
    rows = _rows(out.read_text())
    assert len(rows) == 4
    for r in rows:
        mus = [float(v) for k, v in r.items() if k.startswith("mu_")]
        assert mus and all(0 <= m <= 1 for m in mus)


def test_long_rate_sweep_without_long_loan_is_constant(solved, tmp_path):
    p, _ = load_instance(TOY)
    inst = tmp_path / "noltl.json"
    inst.write_text(write_instance(dataclasses.replace(p, finance=dataclasses.replace(p.finance, max_long_loan=0.0))))
    summ = tmp_path / "s.json"
    assert main(["sweep", "--instance", str(inst), "--param", "r_long", "--values", "0,0.05,0.1",
                 "--schedule", str(solved / "schedule.json"), "--out", str(tmp_path / "s.csv"),
                 "--summary", str(summ)]) == EXIT_OK
    assert json.loads(summ.read_text())["monotone"]["final_cash_flow"] == "constant"


def test_sweep_usage_errors(tmp_path):
    assert main(["sweep", "--instance", str(TOY), "--param", "r_delay", "--from", "0.1", "--to", "0.2",
                 "--steps", "0"]) == EXIT_USAGE
    assert main(["sweep", "--instance", str(TOY), "--param", "alpha", "--values", "0.5",
                 "--mode", "replay"]) == EXIT_USAGE


def test_sweep_is_deterministic(solved, tmp_path, monkeypatch):
    argv = ["sweep", "--instance", str(TOY), "--param", "r_excess", "--values", "0,0.01,0.02,0.03",
            "--schedule", str(solved / "schedule.json"), "--summary", str(tmp_path / "x.json")]
    monkeypatch.setenv("CASHSCHED_THREADS", "1")
    main(argv + ["--out", str(tmp_path / "a.csv")])
    monkeypatch.setenv("CASHSCHED_THREADS", "4")
    main(argv + ["--out", str(tmp_path / "b.csv")])
    assert (tmp_path / "a.csv").read_text() == (tmp_path / "b.csv").read_text()


def test_grid_and_monotonicity_helpers():
    assert sweep_grid(0.0, 1.0, 3, None) == pytest.approx([0.0, 0.5, 1.0])
    assert sweep_grid(0.2, 0.9, 1, None) == [0.2]
    assert sweep_grid(None, None, None, [0.3, 0.1]) == [0.3, 0.1]
    assert sweep_grid(0.0, 1.0, 0, None) == []
    assert monotonicity([1.0, 2.0, 3.0]) == "strictly increasing"
    assert monotonicity([1.0, 1.0]) == "constant"
    assert monotonicity([1.0, 1.0, 2.0]) == "non-decreasing"


def test_convert(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    src = str(DATA / "j30_synth.mm")
    assert main(["convert", "--psplib", src, "--seed", "4", "--out", str(a)]) == EXIT_OK
    assert "jobs 32" in capsys.readouterr().out
    assert main(["convert", "--psplib", src, "--seed", "4", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    p, diags = load_instance(a)
    assert diags == [] and len(p.activities) == 32
    assert main(["convert", "--mmlib", str(DATA / "mm50_synth.mm"), "--out", str(b)]) == EXIT_OK
    assert len(load_instance(b)[0].activities) == 52
    assert main(["convert", "--psplib", str(tmp_path / "missing.mm")]) == EXIT_IO


def test_convert_finance_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"markup": 0.0, "duration_spread": [0, 0], "usage_spread": [0, 0]}))
    out = tmp_path / "c.json"
    assert main(["convert", "--psplib", str(DATA / "j30_synth.mm"), "--finance-cfg", str(cfg),
                 "--out", str(out)]) == EXIT_OK
    p, _ = load_instance(out)
    assert all(m.duration.is_crisp for a in p.activities for m in a.modes)
    cfg.write_text(json.dumps({"markup": 0.1, "colour": "red"}))
    assert main(["convert", "--psplib", str(DATA / "j30_synth.mm"), "--finance-cfg", str(cfg),
                 "--out", str(out)]) == EXIT_IO


def test_report(solved, tmp_path, capsys):
    g, led = tmp_path / "g.svg", tmp_path / "l.csv"
    assert main(["report", "--instance", str(TOY), "--schedule", str(solved / "schedule.json"),
                 "--decisions", str(solved / "decisions.json"), "--gantt", str(g), "--ledger", str(led)]) == EXIT_OK
    assert g.read_text().lstrip().startswith("<?xml") and led.read_text().startswith("period,")
    assert "cash flow" in capsys.readouterr().out
