"""Native JSON instance format (``"schema": 1``).

Document layout::

    {
      "schema": 1,
      "name": "toy",
      "horizon": 12,
      "periods": [6, 12],                 # closing day of every period
      "pricing": {"renewable": [3.0], "nonrenewable": [2.0], "daily_cap": null},
      "finance": {"initial_capital": 100.0, ..., "compounding_days": 30},
      "activities": [
        {"id": "S", "dummy": true, "modes": [...]},
        {"id": "A", "name": "...", "predecessors": ["S"],
         "modes": [{"duration": 3, "payment": 40.0,
                    "renewable": [[1, 2, 3]], "nonrenewable": [1.5]}]},
        ...
      ],
      "notes": {"pricing.renewable": "placeholder, not in the source data"}
    }

Every fuzzy quantity may be written as a plain number (crisp), a
``[lo, mid, hi]`` triple (triangular: lower and upper coincide) or an
object ``{"lower": [...], "upper": [...]}``. ``daily_cap`` is ``null`` for an
unlimited cap.
"""

from __future__ import annotations

import json
import math
from typing import Any

import jsonschema

from ..fuzzy import FuzzyError, NivtfNumber, Triangle, crisp
from ..project import (
    Activity,
    Diagnostic,
    FinanceParams,
    Mode,
    PeriodGrid,
    Project,
    ResourcePricing,
    validate_project,
)

__all__ = [
    "SCHEMA_VERSION",
    "INSTANCE_SCHEMA",
    "InstanceSyntaxError",
    "InstanceFormatError",
    "parse_instance",
    "write_instance",
    "instance_to_dict",
    "load_instance",
    "nivtf_from_json",
    "nivtf_to_json",
]

SCHEMA_VERSION = 1

_num = {"type": "number"}
_triple = {"type": "array", "items": _num, "minItems": 3, "maxItems": 3}
_nivtf = {
    "oneOf": [
        _num,
        _triple,
        {
            "type": "object",
            "properties": {"lower": _triple, "upper": _triple},
            "required": ["lower", "upper"],
            "additionalProperties": False,
        },
    ]
}
_mode = {
    "type": "object",
    "properties": {
        "duration": _nivtf,
        "payment": _num,
        "renewable": {"type": "array", "items": _nivtf},
        "nonrenewable": {"type": "array", "items": _nivtf},
    },
    "required": ["duration"],
    "additionalProperties": False,
}
_finance_fields = (
    "initial_capital", "max_long_loan", "max_short_loan", "min_cash",
    "r_excess", "r_delay", "r_long", "r_short",
)

INSTANCE_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "horizon": {"type": "integer", "minimum": 1},
        "periods": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        "pricing": {
            "type": "object",
            "properties": {
                "renewable": {"type": "array", "items": _num},
                "nonrenewable": {"type": "array", "items": _num},
                "daily_cap": {"type": ["number", "null"]},
            },
            "additionalProperties": False,
        },
        "finance": {
            "type": "object",
            "properties": {
                **{k: _num for k in _finance_fields},
                "compounding_days": {"type": "integer", "minimum": 0},
            },
            "additionalProperties": False,
        },
        "activities": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "name": {"type": "string"},
                    "predecessors": {"type": "array", "items": {"type": "string"}},
                    "dummy": {"type": "boolean"},
                    "modes": {"type": "array", "items": _mode, "minItems": 1},
                },
                "required": ["id", "modes"],
                "additionalProperties": False,
            },
        },
        "notes": {"type": "object", "additionalProperties": {"type": "string"}},
    },
    "required": ["schema", "horizon", "periods", "activities"],
    "additionalProperties": False,
}

_validator = jsonschema.Draft202012Validator(INSTANCE_SCHEMA)


class InstanceSyntaxError(ValueError):
    """The text is not well-formed JSON."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column


class InstanceFormatError(ValueError):
    """Well-formed JSON that does not follow the instance schema."""

    def __init__(self, message: str, path: str = "") -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def nivtf_from_json(v: Any, where: str = "$") -> NivtfNumber:
    try:
        if isinstance(v, (int, float)):
            return crisp(float(v))
        if isinstance(v, list):
            t = Triangle(*(float(x) for x in v))
            return NivtfNumber(t, t)
        return NivtfNumber(Triangle(*map(float, v["lower"])), Triangle(*map(float, v["upper"])))
    except FuzzyError as exc:
        raise InstanceFormatError(str(exc), where) from None


def nivtf_to_json(x: NivtfNumber) -> Any:
    """Most compact encoding that decodes back to ``x``."""
    if x.is_crisp:
        return _plain(x.lower.mid)
    if x.is_triangular:
        return [_plain(v) for v in x.lower.as_tuple()]
    return {"lower": [_plain(v) for v in x.lower.as_tuple()],
            "upper": [_plain(v) for v in x.upper.as_tuple()]}


def _plain(v: float) -> float | int:
    return int(v) if float(v).is_integer() and abs(v) < 2**53 else float(v)


def parse_instance(text: str) -> tuple[Project, list[Diagnostic]]:
    """Parse a native instance document.

    Syntax problems raise :class:`InstanceSyntaxError` with a line and
    column; schema problems (unknown or mistyped fields) raise
    :class:`InstanceFormatError`. Semantic problems such as cycles or
    undefined predecessors are returned as ``validate_project`` diagnostics.
    """
    if not text.strip():
        raise InstanceSyntaxError("empty document", 1, 1)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    errors = sorted(_validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise InstanceFormatError(e.message, _path(e.absolute_path))
    p = _project_from_doc(doc)
    return p, validate_project(p)


def _project_from_doc(doc: dict) -> Project:
    acts = []
    for i, a in enumerate(doc["activities"]):
        modes = []
        for m, md in enumerate(a["modes"]):
            at = f"$.activities[{i}].modes[{m}]"
            modes.append(Mode(
                nivtf_from_json(md["duration"], at + ".duration"),
                float(md.get("payment", 0.0)),
                tuple(nivtf_from_json(u, f"{at}.renewable[{k}]") for k, u in enumerate(md.get("renewable", []))),
                tuple(nivtf_from_json(u, f"{at}.nonrenewable[{k}]") for k, u in enumerate(md.get("nonrenewable", []))),
            ))
        acts.append(Activity(a["id"], a.get("name", ""), tuple(a.get("predecessors", [])),
                             tuple(modes), bool(a.get("dummy", False))))
    pr = doc.get("pricing", {})
    cap = pr.get("daily_cap")
    pricing = ResourcePricing(
        tuple(float(v) for v in pr.get("renewable", [])),
        tuple(float(v) for v in pr.get("nonrenewable", [])),
        math.inf if cap is None else float(cap),
    )
    fin = doc.get("finance", {})
    finance = FinanceParams(**{k: float(fin[k]) for k in _finance_fields if k in fin},
                            **({"compounding_days": int(fin["compounding_days"])} if "compounding_days" in fin else {}))
    return Project(
        tuple(acts), int(doc["horizon"]), PeriodGrid(tuple(int(v) for v in doc["periods"])),
        pricing, finance, doc.get("name", ""), dict(doc.get("notes", {})),
    )


def instance_to_dict(p: Project) -> dict:
    f = p.finance
    doc: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "name": p.name,
        "horizon": p.horizon,
        "periods": list(p.periods.boundaries),
        "pricing": {
            "renewable": [_plain(v) for v in p.pricing.cr],
            "nonrenewable": [_plain(v) for v in p.pricing.cw],
            "daily_cap": None if math.isinf(p.pricing.daily_cap) else _plain(p.pricing.daily_cap),
        },
        "finance": {**{k: _plain(getattr(f, k)) for k in _finance_fields},
                    "compounding_days": f.compounding_days},
        "activities": [],
    }
    for a in p.activities:
        entry: dict[str, Any] = {"id": a.id}
        if a.name:
            entry["name"] = a.name
        if a.predecessors:
            entry["predecessors"] = list(a.predecessors)
        if a.is_dummy:
            entry["dummy"] = True
        entry["modes"] = [
            {
                "duration": nivtf_to_json(m.duration),
                "payment": _plain(m.payment),
                "renewable": [nivtf_to_json(u) for u in m.renewable],
                "nonrenewable": [nivtf_to_json(u) for u in m.nonrenewable],
            }
            for m in a.modes
        ]
        doc["activities"].append(entry)
    if p.notes:
        doc["notes"] = dict(sorted(p.notes.items()))
    return doc


def write_instance(p: Project) -> str:
    """Serialize ``p``; the output is deterministic and ends with a newline."""
    return json.dumps(instance_to_dict(p), indent=2, ensure_ascii=False) + "\n"


def load_instance(path) -> tuple[Project, list[Diagnostic]]:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())
