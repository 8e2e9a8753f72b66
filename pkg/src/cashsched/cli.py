"""Command-line front end: ``cashsched solve|evaluate|sweep|convert|export|report``.

Exit codes: 0 success, 1 infeasible model or violated schedule, 2 a limit
stopped the solver without an incumbent, 3 I/O or parse failure, 4 bad
arguments. Artifacts are rendered in memory and moved into place with an
atomic rename, so a failing command leaves no half-written files behind.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .finance import (
    FinancingInfeasible,
    Schedule,
    evaluate_ledger,
    optimize_financing,
    schedule_violations,
)
from .io import (
    FinanceConfig,
    InstanceFormatError,
    InstanceSyntaxError,
    PsplibParseError,
    load_instance,
    parse_decisions,
    parse_psplib_mm,
    parse_schedule,
    render_gantt_svg,
    synthesize_finance,
    write_decisions,
    write_instance,
    write_ledger_csv,
    write_schedule,
)
from .model import InfeasibleError, PayoffTable, ThConfig, UnboundedError, build_model, export_lp
from .pipeline import METHODS, MethodResult, default_theta, run_method
from .project import Project
from .solver.milp import SolveLimits

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_LIMIT = 2
EXIT_IO = 3
EXIT_USAGE = 4

DEFAULT_GAMMA = 0.4
#: alpha used when a fuzzy instance is solved without an explicit level
DEFAULT_ALPHA = 0.5
RATE_PARAMS = ("r_excess", "r_delay", "r_long", "r_short")
THREADS_ENV = "CASHSCHED_THREADS"


class CliError(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- configuration ---------------------------------------------------------

@dataclass
class RunConfig:
    instance: Path
    alpha: float | None = None
    method: str = "th"
    gamma: float = DEFAULT_GAMMA
    theta: tuple[float, ...] | None = None
    weights: tuple[float, ...] | None = None
    backend: str = "embedded"
    max_nodes: int = SolveLimits.max_nodes
    max_seconds: float = SolveLimits.max_seconds
    out: Path | None = None
    out_dir: Path | None = None
    payoffs: Path | None = None
    seed: int = 0

    def resolve_alpha(self, p: Project) -> float | None:
        """Crisp model only for a crisp instance without an explicit level."""
        if self.alpha is None and not p.is_crisp:
            return DEFAULT_ALPHA
        return self.alpha

    def check(self, n_objectives: int) -> None:
        """Reject bad weight vectors before anything is solved."""
        if self.method not in METHODS:
            raise CliError(EXIT_USAGE, f"unknown method {self.method!r}")
        if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
            raise CliError(EXIT_USAGE, f"--alpha must lie in [0, 1], got {self.alpha}")
        if self.method == "th":
            theta = self.theta if self.theta is not None else default_theta(n_objectives)
            if len(theta) != n_objectives:
                raise CliError(EXIT_USAGE, f"--theta needs {n_objectives} weights for this model, got {len(theta)}")
            try:
                ThConfig(self.gamma, tuple(theta))
            except ValueError as exc:
                raise CliError(EXIT_USAGE, str(exc)) from None
        elif self.theta is not None:
            raise CliError(EXIT_USAGE, "--theta applies to --method th only")
        if self.method == "weighted":
            if self.weights is not None:
                if len(self.weights) != n_objectives:
                    raise CliError(EXIT_USAGE,
                                   f"--weights needs {n_objectives} entries for this model, got {len(self.weights)}")
                if any(w < 0 for w in self.weights) or abs(sum(self.weights) - 1.0) > 1e-9:
                    raise CliError(EXIT_USAGE, "--weights must be non-negative and sum to 1")
        elif self.weights is not None:
            raise CliError(EXIT_USAGE, "--weights applies to --method weighted only")

    @property
    def limits(self) -> SolveLimits:
        try:
            return SolveLimits(max_nodes=self.max_nodes, max_seconds=self.max_seconds)
        except ValueError as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None


def _floats(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        instance=args.instance, alpha=args.alpha, method=args.method, gamma=args.gamma,
        theta=args.theta, weights=args.weights, backend=getattr(args, "backend", "embedded"),
        max_nodes=args.max_nodes, max_seconds=args.max_seconds, out=getattr(args, "out", None),
        out_dir=getattr(args, "out_dir", None), payoffs=getattr(args, "payoffs", None),
        seed=getattr(args, "seed", 0),
    )


# -- file helpers ----------------------------------------------------------

def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _commit(files: dict[Path, str]) -> None:
    try:
        for path, text in files.items():
            atomic_write(path, text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {exc.filename or ''}: {exc.strerror or exc}") from None


def _read(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None


def _load_project(path: Path) -> Project:
    try:
        p, diags = load_instance(path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    except (InstanceSyntaxError, InstanceFormatError) as exc:
        raise CliError(EXIT_IO, f"{path}: {exc}") from None
    if diags:
        raise CliError(EXIT_IO, f"{path}: invalid instance:\n  " + "\n  ".join(map(str, diags)))
    return p


def _parse_file(path: Path, parse):
    text = _read(path)
    try:
        return parse(text)
    except (InstanceSyntaxError, InstanceFormatError) as exc:
        raise CliError(EXIT_IO, f"{path}: {exc}") from None


def _num(v: float) -> float | None:
    return None if v is None or not math.isfinite(v) else float(v)


def _ledger_csv(ledger) -> str:
    buf = io.StringIO()
    write_ledger_csv(ledger, buf)
    return buf.getvalue()


def _gantt(s: Schedule, p: Project) -> str:
    buf = io.StringIO()
    render_gantt_svg(s, p, buf)
    return buf.getvalue()


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


# -- solve / export --------------------------------------------------------

def _status_code(status: str) -> int:
    if status in ("optimal", "feasible-limit"):
        return EXIT_OK
    if status in ("infeasible", "unbounded"):
        return EXIT_INFEASIBLE
    return EXIT_LIMIT


def _run(cfg: RunConfig, p: Project, alpha: float | None, payoffs: PayoffTable | None = None) -> MethodResult:
    try:
        return run_method(p, alpha, cfg.method, gamma=cfg.gamma, theta=cfg.theta, weights=cfg.weights,
                          limits=cfg.limits, payoffs=payoffs)
    except (InfeasibleError, UnboundedError) as exc:
        raise CliError(EXIT_INFEASIBLE, f"payoff table: {exc}") from None
    except RuntimeError as exc:  # a payoff stage hit a limit
        raise CliError(EXIT_LIMIT, f"payoff table: {exc}") from None


def solution_summary(res: MethodResult) -> dict:
    doc = {
        "method": res.method,
        "alpha": res.alpha,
        "status": res.status,
        "objective": _num(res.objective),
        "objectives": {k: _num(v) for k, v in res.objectives.items()},
        "memberships": {k: _num(v) for k, v in res.memberships.items()},
        "lambda0": _num(res.lambda0),
        "gap": _num(res.gap),
        "nodes": res.nodes,
        "seconds": round(res.seconds, 6),
    }
    if res.ledger is not None:
        doc["cash_flow"] = list(res.ledger.cf)
        doc["final_cash_flow"] = res.ledger.final
    if res.payoffs is not None:
        pt = res.payoffs
        doc["payoffs"] = {"labels": list(pt.labels), "senses": list(pt.senses),
                          "pis": list(pt.pis), "nis": list(pt.nis)}
    return doc


def _payoffs_from_summary(path: Path) -> PayoffTable:
    try:
        doc = json.loads(_read(path))["payoffs"]
        return PayoffTable(tuple(doc["labels"]), tuple(doc["senses"]), tuple(doc["pis"]), tuple(doc["nis"]))
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_IO, f"{path}: no usable payoff table ({exc})") from None


def cmd_solve(cfg: RunConfig) -> int:
    p = _load_project(cfg.instance)
    alpha = cfg.resolve_alpha(p)
    n_obj = 2 if alpha is None else 3
    cfg.check(n_obj)
    if cfg.backend == "export":
        return _export(cfg, p, alpha)
    res = _run(cfg, p, alpha)
    summary = solution_summary(res)
    files: dict[Path, str] = {}
    if cfg.out is not None:
        files[cfg.out] = _dump(summary)
    if cfg.out_dir is not None and res.schedule is not None:
        d = cfg.out_dir
        files[d / "summary.json"] = _dump(summary)
        files[d / "schedule.json"] = write_schedule(res.schedule)
        files[d / "decisions.json"] = write_decisions(res.decisions)
        files[d / "ledger.csv"] = _ledger_csv(res.ledger)
        files[d / "gantt.svg"] = _gantt(res.schedule, p)
    code = _status_code(res.status)
    if code == EXIT_OK:
        _commit(files)
    print(_dump(summary), end="")
    if code == EXIT_INFEASIBLE:
        print("no feasible schedule", file=sys.stderr)
    elif code == EXIT_LIMIT:
        print(f"solver stopped without an incumbent (status {res.status})", file=sys.stderr)
    return code


def _export(cfg: RunConfig, p: Project, alpha: float | None) -> int:
    if cfg.out is None:
        raise CliError(EXIT_USAGE, "export needs --out PATH")
    from .model import build_th_model, build_weighted_sum, compute_payoff_table
    from .solver.milp import solve_milp

    base = build_model(p, alpha)
    if cfg.method in ("th", "weighted"):
        if cfg.payoffs is not None:
            payoffs = _payoffs_from_summary(cfg.payoffs)
            if payoffs.labels != tuple(o.label for o in base.objectives):
                raise CliError(EXIT_USAGE, f"payoff labels {payoffs.labels} do not match the model")
        else:
            try:
                payoffs = compute_payoff_table(p, alpha, lambda m: solve_milp(m, cfg.limits), base=base)
            except (InfeasibleError, UnboundedError) as exc:
                raise CliError(EXIT_INFEASIBLE, f"payoff table: {exc}") from None
            except RuntimeError as exc:
                raise CliError(EXIT_LIMIT, f"payoff table: {exc}") from None
        if cfg.method == "th":
            theta = cfg.theta or default_theta(len(base.objectives))
            model = build_th_model(base, payoffs, ThConfig(cfg.gamma, tuple(theta)))
        else:
            model = build_weighted_sum(base, payoffs, cfg.weights or default_theta(len(base.objectives)))
    elif cfg.method == "single-profit":
        model = base.with_objectives([base.objectives[1]] + [o for k, o in enumerate(base.objectives) if k != 1])
    else:
        model = base
    buf = io.StringIO()
    export_lp(model, buf)
    _commit({cfg.out: buf.getvalue()})
    print(f"wrote {cfg.out}: {len(model.variables)} variables, {len(model.constraints)} constraints, "
          f"{model.n_binaries()} binaries")
    return EXIT_OK


# -- evaluate / report -----------------------------------------------------

def _replay(p: Project, sched_path: Path, dec_path: Path | None):
    sf = _parse_file(sched_path, parse_schedule)
    s = sf.schedule
    if s.items or sf.period_costs is None:
        bad = schedule_violations(s, p)
        if bad:
            raise CliError(EXIT_INFEASIBLE, "schedule violates the instance:\n  " + "\n  ".join(bad))
    if sf.period_costs is not None and len(sf.period_costs) != p.n_periods:
        raise CliError(EXIT_IO, f"{sched_path}: period_costs has {len(sf.period_costs)} entries, "
                                f"instance has {p.n_periods} periods")
    if dec_path is not None:
        d = _parse_file(dec_path, parse_decisions)
        try:
            ledger = evaluate_ledger(s if s.items else None, d, p, tbu=sf.period_costs)
        except ValueError as exc:
            raise CliError(EXIT_IO, f"{dec_path}: {exc}") from None
        return s, d, ledger, "replay"
    tbu = {"L": sf.period_costs} if sf.period_costs is not None else None
    try:
        d, ledger = optimize_financing(s, p, tbu=tbu)
    except FinancingInfeasible as exc:
        raise CliError(EXIT_INFEASIBLE, str(exc)) from None
    return s, d, ledger, "optimized"


def cmd_evaluate(args: argparse.Namespace) -> int:
    p = _load_project(args.instance)
    s, d, ledger, how = _replay(p, args.schedule, args.decisions)
    summary = {
        "financing": how,
        "cash_flow": list(ledger.cf),
        "final_cash_flow": ledger.final,
        "violations": list(ledger.violations),
        "decisions": json.loads(write_decisions(d)),
    }
    files: dict[Path, str] = {}
    if args.ledger is not None:
        files[args.ledger] = _ledger_csv(ledger)
    if args.out is not None:
        files[args.out] = _dump(summary)
    _commit(files)
    print(_dump(summary), end="")
    if ledger.violations:
        print("ledger violations:\n  " + "\n  ".join(ledger.violations), file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    p = _load_project(args.instance)
    s, d, ledger, _ = _replay(p, args.schedule, args.decisions)
    files: dict[Path, str] = {}
    if args.gantt is not None:
        if not s.items:
            raise CliError(EXIT_USAGE, "a Gantt chart needs scheduled items")
        files[args.gantt] = _gantt(s, p)
    if args.ledger is not None:
        files[args.ledger] = _ledger_csv(ledger)
    _commit(files)
    width = max(14, *(len(f"{v:,.3f}") + 2 for v in ledger.cf))
    print(f"{'period':<18}" + "".join(f"{y:>{width}}" for y in range(1, p.n_periods + 1)))
    for label, values in (("resource cost", ledger.tbu), ("due", ledger.due), ("payments", ledger.pa),
                          ("delayed", ledger.dp), ("short loan", ledger.stl), ("cash flow", ledger.cf)):
        print(f"{label:<18}" + "".join(f"{v:>{width},.3f}" for v in values))
    if s.items:
        print(f"makespan {s.makespan(p)}")
    for v in ledger.violations:
        print(f"violation: {v}")
    return EXIT_INFEASIBLE if ledger.violations else EXIT_OK


# -- sweep -----------------------------------------------------------------

def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise CliError(EXIT_USAGE, f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise CliError(EXIT_USAGE, f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def sweep_grid(start: float | None, stop: float | None, steps: int | None,
               values: Sequence[float] | None) -> list[float]:
    if values is not None:
        return [float(v) for v in values]
    if start is None or stop is None or steps is None:
        raise CliError(EXIT_USAGE, "give --values or all of --from, --to and --steps")
    if steps < 1:
        return []
    if steps == 1:
        return [float(start)]
    return [float(v) for v in np.linspace(start, stop, steps)]


def monotonicity(column: Sequence[float], rel_tol: float = 1e-9) -> str:
    """Trend of a column in grid order, ignoring non-finite entries."""
    vals = [v for v in column if v is not None and math.isfinite(v)]
    if len(vals) < 2:
        return "constant"
    diffs = []
    for a, b in zip(vals, vals[1:]):
        tol = rel_tol * max(1.0, abs(a), abs(b))
        diffs.append(0 if abs(b - a) <= tol else (1 if b > a else -1))
    if all(d == 0 for d in diffs):
        return "constant"
    if all(d > 0 for d in diffs):
        return "strictly increasing"
    if all(d < 0 for d in diffs):
        return "strictly decreasing"
    if all(d >= 0 for d in diffs):
        return "non-decreasing"
    if all(d <= 0 for d in diffs):
        return "non-increasing"
    return "none"


def _with_rate(p: Project, param: str, value: float) -> Project:
    try:
        return dataclasses.replace(p, finance=dataclasses.replace(p.finance, **{param: value}))
    except ValueError as exc:
        raise CliError(EXIT_USAGE, f"{param}={value}: {exc}") from None


@dataclass
class SweepRow:
    value: float
    status: str
    makespan: float = math.nan
    final_cash_flow: float = math.nan
    lambda0: float = math.nan
    memberships: dict[str, float] = field(default_factory=dict)


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _config(args)
    grid = sweep_grid(args.start, args.stop, args.steps, args.values)
    if not grid:
        raise CliError(EXIT_USAGE, "the sweep grid is empty")
    param = args.param
    mode = args.mode or ("resolve" if param == "alpha" else "replay")
    if param == "alpha":
        if mode == "replay":
            raise CliError(EXIT_USAGE, "alpha sweeps re-solve per level; --mode replay is not available")
        if any(not 0.0 <= a <= 1.0 for a in grid):
            raise CliError(EXIT_USAGE, "alpha values must lie in [0, 1]")
    elif any(v < 0 for v in grid):
        raise CliError(EXIT_USAGE, f"{param} values must be non-negative")
    if mode == "resolve" and (args.schedule or args.decisions):
        raise CliError(EXIT_USAGE, "--schedule/--decisions apply to replay sweeps only")
    p = _load_project(cfg.instance)
    base_alpha = cfg.resolve_alpha(p)
    cfg.check(3 if param == "alpha" or base_alpha is not None else 2)
    workers = min(_threads(), len(grid))

    if mode == "resolve":
        problems = [(p, v) if param == "alpha" else (_with_rate(p, param, v), base_alpha) for v in grid]

        def point(k: int) -> SweepRow:
            q, a = problems[k]
            try:
                res = run_method(q, a, cfg.method, gamma=cfg.gamma, theta=cfg.theta, weights=cfg.weights,
                                 limits=cfg.limits)
            except (InfeasibleError, UnboundedError):
                return SweepRow(grid[k], "infeasible")
            except RuntimeError:
                return SweepRow(grid[k], "limit")
            row = SweepRow(grid[k], res.status, res.makespan, res.profit, res.lambda0, dict(res.memberships))
            if res.ledger is not None:
                row.final_cash_flow = res.ledger.final
            return row
    else:
        if args.schedule is not None:
            sf = _parse_file(args.schedule, parse_schedule)
            s = sf.schedule
            bad = schedule_violations(s, p)
            if bad:
                raise CliError(EXIT_INFEASIBLE, "schedule violates the instance:\n  " + "\n  ".join(bad))
        else:
            res = _run(cfg, p, base_alpha)
            code = _status_code(res.status)
            if code != EXIT_OK:
                raise CliError(code, f"base schedule: solver status {res.status}")
            s = res.schedule
        decisions = _parse_file(args.decisions, parse_decisions) if args.decisions else None
        problems = [_with_rate(p, param, v) for v in grid]
        span = s.makespan(p)

        def point(k: int) -> SweepRow:
            q = problems[k]
            if decisions is not None:
                ledger = evaluate_ledger(s, decisions, q)
                return SweepRow(grid[k], "violated" if ledger.violations else "ok", span, ledger.final)
            try:
                _, ledger = optimize_financing(s, q)
            except FinancingInfeasible:
                return SweepRow(grid[k], "infeasible", span)
            return SweepRow(grid[k], "ok", span, ledger.final)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(point, range(len(grid))))  # map keeps grid order

    labels = sorted({k for r in rows for k in r.memberships})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", param, "makespan", "final_cash_flow", "status"]
               + (["lambda0"] + [f"mu_{k}" for k in labels] if labels else []))
    for k, r in enumerate(rows):
        extra = [_cell(r.lambda0)] + [_cell(r.memberships.get(lab, math.nan)) for lab in labels] if labels else []
        w.writerow([k, repr(r.value), _cell(r.makespan), _cell(r.final_cash_flow), r.status] + extra)
    summary = {
        "parameter": param,
        "mode": mode,
        "points": len(rows),
        "monotone": {
            "makespan": monotonicity([r.makespan for r in rows]),
            "final_cash_flow": monotonicity([r.final_cash_flow for r in rows]),
        },
    }
    if labels:
        summary["monotone"]["lambda0"] = monotonicity([r.lambda0 for r in rows])
    files: dict[Path, str] = {}
    if args.out is not None:
        files[args.out] = buf.getvalue()
    if args.summary is not None:
        files[args.summary] = _dump(summary)
    _commit(files)
    if args.out is None:
        print(buf.getvalue(), end="")
        print(json.dumps(summary), file=sys.stderr)
    else:
        print(_dump(summary), end="")
    return EXIT_OK


def _cell(v: float) -> str:
    return "" if v is None or not math.isfinite(v) else repr(float(v))


# -- convert ---------------------------------------------------------------

def _finance_config(path: Path | None) -> FinanceConfig:
    if path is None:
        return FinanceConfig()
    try:
        doc = json.loads(_read(path))
    except ValueError as exc:
        raise CliError(EXIT_IO, f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise CliError(EXIT_IO, f"{path}: expected a JSON object")
    known = {f.name for f in dataclasses.fields(FinanceConfig)}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise CliError(EXIT_IO, f"{path}: unknown finance settings {unknown}")
    doc = {k: tuple(v) if isinstance(v, list) else v for k, v in doc.items()}
    try:
        return FinanceConfig(**doc)
    except (TypeError, ValueError) as exc:
        raise CliError(EXIT_IO, f"{path}: {exc}") from None


def cmd_convert(args: argparse.Namespace) -> int:
    src, dialect = (args.psplib, "psplib-mm") if args.psplib is not None else (args.mmlib, "mmlib")
    text = _read(src)
    try:
        bench = parse_psplib_mm(text, origin=dialect)
    except PsplibParseError as exc:
        raise CliError(EXIT_IO, f"{src}: {exc}") from None
    p = synthesize_finance(bench, args.seed, _finance_config(args.finance_cfg))
    doc = write_instance(p)
    if args.out is not None:
        _commit({args.out: doc})
    h = bench.header
    print(f"jobs {h['jobs']} (parsed {bench.n_jobs}, converted {len(p.activities)}), "
          f"modes {bench.n_modes}, renewable {h['renewable']}, nonrenewable {h['nonrenewable']}, "
          f"horizon {h['horizon']}")
    if args.out is None:
        print(doc, end="")
    return EXIT_OK


# -- argument parsing ------------------------------------------------------

def _model_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--instance", type=Path, required=True, help="native JSON instance")
    sp.add_argument("--alpha", type=float, help="alpha-level; omit for the crisp model of a crisp instance")
    sp.add_argument("--method", choices=METHODS, default="th")
    sp.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help="weight of the min-membership term")
    sp.add_argument("--theta", type=_floats, help="TH membership weights, comma separated (default even)")
    sp.add_argument("--weights", type=_floats, help="weighted-sum weights, comma separated (default even)")
    sp.add_argument("--max-nodes", type=int, default=SolveLimits.max_nodes)
    sp.add_argument("--max-seconds", type=float, default=SolveLimits.max_seconds)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cashsched", description="Fuzzy multi-mode project scheduling with cash-flow financing.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("solve", help="solve one method at one alpha-level")
    _model_flags(sp)
    sp.add_argument("--backend", choices=("embedded", "export"), default="embedded")
    sp.add_argument("--out", type=Path, help="summary JSON (LP file with --backend export)")
    sp.add_argument("--out-dir", type=Path, help="write summary, schedule, decisions, ledger CSV and Gantt SVG here")
    sp.add_argument("--payoffs", type=Path, help="reuse the payoff table of an earlier summary when exporting")
    sp.set_defaults(handler=lambda a: cmd_solve(_config(a)))

    sp = sub.add_parser("export", help="write the model in LP format without solving it")
    _model_flags(sp)
    sp.add_argument("--out", type=Path, required=True)
    sp.add_argument("--payoffs", type=Path, help="payoff table from an earlier solve summary")
    sp.set_defaults(handler=lambda a: cmd_solve(dataclasses.replace(_config(a), backend="export")))

    sp = sub.add_parser("evaluate", help="replay a schedule through the cash-flow ledger")
    sp.add_argument("--instance", type=Path, required=True)
    sp.add_argument("--schedule", type=Path, required=True)
    sp.add_argument("--decisions", type=Path, help="fixed financing decisions; optimized when omitted")
    sp.add_argument("--ledger", type=Path, help="ledger CSV output")
    sp.add_argument("--out", type=Path, help="summary JSON output")
    sp.set_defaults(handler=cmd_evaluate)

    sp = sub.add_parser("sweep", help="final cash flow over a grid of rates or alpha-levels")
    _model_flags(sp)
    sp.add_argument("--param", choices=RATE_PARAMS + ("alpha",), required=True)
    sp.add_argument("--from", dest="start", type=float)
    sp.add_argument("--to", dest="stop", type=float)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--values", type=_floats, help="explicit grid, comma separated")
    sp.add_argument("--mode", choices=("replay", "resolve"),
                    help="replay a fixed schedule or re-solve per point (default: replay for rates, resolve for alpha)")
    sp.add_argument("--schedule", type=Path, help="fixed schedule for replay sweeps (solved once when omitted)")
    sp.add_argument("--decisions", type=Path, help="fixed financing for replay sweeps (optimized per point when omitted)")
    sp.add_argument("--out", type=Path, help="CSV output (stdout when omitted)")
    sp.add_argument("--summary", type=Path, help="monotonicity summary JSON")
    sp.set_defaults(handler=cmd_sweep)

    sp = sub.add_parser("convert", help="turn a PSPLIB/MMLIB multi-mode file into a native instance")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--psplib", type=Path)
    src.add_argument("--mmlib", type=Path)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--finance-cfg", type=Path, help="JSON object of finance-synthesis settings")
    sp.add_argument("--out", type=Path)
    sp.set_defaults(handler=cmd_convert)

    sp = sub.add_parser("report", help="Gantt chart and ledger table for a saved schedule")
    sp.add_argument("--instance", type=Path, required=True)
    sp.add_argument("--schedule", type=Path, required=True)
    sp.add_argument("--decisions", type=Path)
    sp.add_argument("--gantt", type=Path)
    sp.add_argument("--ledger", type=Path)
    sp.set_defaults(handler=cmd_report)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors, --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except CliError as exc:
        print(f"cashsched: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
