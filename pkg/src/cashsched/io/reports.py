"""Ledger CSV and Gantt SVG emitters."""

from __future__ import annotations

import csv
import io
from typing import TextIO
from xml.sax.saxutils import escape

from ..finance import LEDGER_TERMS, Ledger, Schedule
from ..project import Project

__all__ = ["LEDGER_ROWS", "write_ledger_csv", "read_ledger_csv", "render_gantt_svg"]

#: row label -> Ledger attribute, in output order
LEDGER_ROWS = (
    ("cash_flow", "cf"),
    ("resource_cost", "tbu"),
    ("short_term_loan", "stl"),
    ("payments", "pa"),
    ("delayed_payments", "dp"),
    ("due", "due"),
)


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def write_ledger_csv(ledger: Ledger, sink: TextIO) -> None:
    """Period columns, one row per ledger line, three fixed decimals.

    The long-term loan is drawn once, so its row holds the amount in the
    first period column and zeros after it.
    """
    Y = ledger.n_periods
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(["period"] + [str(y) for y in range(1, Y + 1)])
    if Y == 0:
        return
    for label, attr in LEDGER_ROWS:
        w.writerow([label] + [_fmt(v) for v in getattr(ledger, attr)])
    w.writerow(["long_term_loan"] + [_fmt(ledger.ltl)] + ["0.000"] * (Y - 1))
    for k, name in enumerate(LEDGER_TERMS):
        w.writerow([f"term:{name}"] + [_fmt(row[k]) for row in ledger.items])


def read_ledger_csv(text: str) -> Ledger:
    """Inverse of :func:`write_ledger_csv` up to the printed precision."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or not rows[0] or rows[0][0] != "period":
        raise ValueError("ledger CSV must start with a 'period' header row")
    Y = len(rows[0]) - 1
    table = {}
    for r in rows[1:]:
        if not r:
            continue
        if len(r) != Y + 1:
            raise ValueError(f"row {r[0]!r} has {len(r) - 1} values, header has {Y} periods")
        table[r[0]] = tuple(float(v) for v in r[1:])
    if Y == 0:
        return Ledger((), (), (), (), (), (), ())
    missing = [lab for lab, _ in LEDGER_ROWS if lab not in table]
    missing += [f"term:{t}" for t in LEDGER_TERMS if f"term:{t}" not in table]
    if missing or "long_term_loan" not in table:
        raise ValueError(f"ledger CSV lacks rows: {missing or ['long_term_loan']}")
    items = tuple(tuple(table[f"term:{t}"][y] for t in LEDGER_TERMS) for y in range(Y))
    fields = {attr: table[label] for label, attr in LEDGER_ROWS}
    return Ledger(items=items, ltl=table["long_term_loan"][0], **fields)


def render_gantt_svg(s: Schedule, p: Project, sink: TextIO, *, day_width: float = 8.0,
                     row_height: float = 18.0, label_width: float = 160.0) -> None:
    """One bar per activity from its start day to its completion day.

    A bar for start ``a`` and completion ``c`` spans ``x(a)..x(c)`` with
    ``x(t) = label_width + t * day_width``. Dummies are drawn as zero-width
    diamonds; every period boundary gets a dashed vertical rule.
    """
    T = p.horizon
    n = len(p.activities)
    top = 24.0
    width = label_width + (T + 2) * day_width
    height = top + n * row_height + 20.0

    def x(t: float) -> float:
        return label_width + t * day_width

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1f}" height="{height:.1f}" '
        f'viewBox="0 0 {width:.1f} {height:.1f}" font-family="sans-serif" font-size="10">',
        f'<title>{escape(p.name or "schedule")}</title>',
        f'<line id="axis" x1="{x(0):.1f}" y1="{top:.1f}" x2="{x(T):.1f}" y2="{top:.1f}" stroke="black"/>',
    ]
    for y, b in enumerate(p.periods.boundaries, start=1):
        out.append(f'<line class="period" id="period-{y}" x1="{x(b):.1f}" y1="{top - 8:.1f}" x2="{x(b):.1f}" '
                   f'y2="{height - 12:.1f}" stroke="gray" stroke-dasharray="4,3"/>')
        out.append(f'<text x="{x(b):.1f}" y="{top - 10:.1f}" text-anchor="middle">{b}</text>')
    for k, a in enumerate(p.activities):
        it = s.entry(a.id)
        yc = top + (k + 0.5) * row_height
        label = escape(a.name or a.id)
        out.append(f'<text x="4" y="{yc + 3:.1f}">{label}</text>')
        if a.is_dummy or it.completion == it.start:
            cx = x(it.start)
            h = row_height * 0.3
            out.append(f'<polygon class="marker" id="act-{escape(a.id)}" points="{cx:.1f},{yc - h:.1f} '
                       f'{cx + h:.1f},{yc:.1f} {cx:.1f},{yc + h:.1f} {cx - h:.1f},{yc:.1f}" fill="black"/>')
            continue
        x0, x1 = x(it.start), x(it.completion)
        out.append(f'<rect class="bar" id="act-{escape(a.id)}" x="{x0:.1f}" y="{yc - row_height * 0.35:.1f}" '
                   f'width="{x1 - x0:.1f}" height="{row_height * 0.7:.1f}" fill="steelblue"/>')
        out.append(f'<text x="{x1 + 3:.1f}" y="{yc + 3:.1f}">m{it.mode} [{it.start}, {it.completion}]</text>')
    out.append("</svg>")
    sink.write("\n".join(out) + "\n")
