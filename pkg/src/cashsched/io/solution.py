"""JSON files for schedules and financing decisions.

A schedule file looks like::

    {"alpha": 0.5,
     "items": [{"activity": "A", "mode": 1, "start": 1, "completion": 4}, ...],
     "period_costs": [210000.0, ...]}     # optional

``period_costs`` overrides the per-period resource cost otherwise derived
from the items; with it present ``items`` may be empty, which replays a
ledger whose costs are known but whose schedule is not.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import jsonschema

from ..finance import FinancingDecisions, Schedule, ScheduledActivity
from .native import InstanceFormatError, InstanceSyntaxError

__all__ = [
    "ScheduleFile",
    "parse_schedule",
    "write_schedule",
    "parse_decisions",
    "write_decisions",
]

_num = {"type": "number"}
_SCHEDULE_SCHEMA = {
    "type": "object",
    "properties": {
        "alpha": {"type": ["number", "null"]},
        "items": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "activity": {"type": "string"},
                    "mode": {"type": "integer", "minimum": 1},
                    "start": {"type": "integer"},
                    "completion": {"type": "integer"},
                },
                "required": ["activity", "mode", "start", "completion"],
                "additionalProperties": False,
            },
        },
        "period_costs": {"type": "array", "items": _num},
    },
    "required": ["items"],
    "additionalProperties": False,
}
_DECISIONS_SCHEMA = {
    "type": "object",
    "properties": {
        "ltl": _num,
        "stl": {"type": "array", "items": _num},
        "pa": {"type": "array", "items": _num},
        "dp": {"type": "array", "items": _num},
    },
    "required": ["ltl", "stl", "pa", "dp"],
    "additionalProperties": False,
}


@dataclass(frozen=True)
class ScheduleFile:
    schedule: Schedule
    period_costs: tuple[float, ...] | None = None


def _load(text: str, schema: dict):
    if not text.strip():
        raise InstanceSyntaxError("empty document", 1, 1)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise InstanceFormatError(exc.message, "$" + "".join(
            f"[{p}]" if isinstance(p, int) else f".{p}" for p in exc.absolute_path)) from None
    return doc


def parse_schedule(text: str) -> ScheduleFile:
    doc = _load(text, _SCHEDULE_SCHEMA)
    items = tuple(ScheduledActivity(e["activity"], e["mode"], e["start"], e["completion"]) for e in doc["items"])
    costs = doc.get("period_costs")
    return ScheduleFile(Schedule(items, doc.get("alpha")), tuple(float(v) for v in costs) if costs is not None else None)


def write_schedule(s: Schedule, period_costs=None) -> str:
    doc: dict = {
        "alpha": s.alpha,
        "items": [{"activity": it.activity, "mode": it.mode, "start": it.start, "completion": it.completion}
                  for it in s.items],
    }
    if period_costs is not None:
        doc["period_costs"] = [float(v) for v in period_costs]
    return json.dumps(doc, indent=2) + "\n"


def parse_decisions(text: str) -> FinancingDecisions:
    doc = _load(text, _DECISIONS_SCHEMA)
    try:
        return FinancingDecisions(float(doc["ltl"]), tuple(map(float, doc["stl"])),
                                  tuple(map(float, doc["pa"])), tuple(map(float, doc["dp"])))
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None


def write_decisions(d: FinancingDecisions) -> str:
    return json.dumps({"ltl": d.ltl, "stl": list(d.stl), "pa": list(d.pa), "dp": list(d.dp)}, indent=2) + "\n"
