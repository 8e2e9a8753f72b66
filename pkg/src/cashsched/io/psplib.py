"""Reader for the multi-mode PSPLIB (``.mm``) and MMLIB text formats.

Both dialects share the section layout: a header block with the declared
job count and resource counts, ``PRECEDENCE RELATIONS``, ``REQUESTS/DURATIONS``
and ``RESOURCEAVAILABILITIES``. MMLIB files drop the basedata preamble and
the ``PROJECT INFORMATION`` block; those are the only differences handled.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = ["BenchmarkMode", "BenchmarkInstance", "PsplibParseError", "parse_psplib_mm", "DIALECTS"]


class PsplibParseError(ValueError):
    def __init__(self, section: str, message: str) -> None:
        super().__init__(f"{section}: {message}")
        self.section = section


@dataclass(frozen=True)
class BenchmarkMode:
    duration: int
    renewable: tuple[int, ...]
    nonrenewable: tuple[int, ...]  # total request over the whole mode


@dataclass(frozen=True)
class BenchmarkInstance:
    origin: str  # "psplib-mm" or "mmlib"
    n_jobs: int
    horizon: int
    successors: tuple[tuple[int, ...], ...]  # job j (1-based) -> successor jobs
    modes: tuple[tuple[BenchmarkMode, ...], ...]
    renewable_capacity: tuple[int, ...]
    nonrenewable_capacity: tuple[int, ...]
    #: counts as declared by the file header, kept for the header-echo check
    header: dict

    @property
    def n_modes(self) -> int:
        return sum(len(m) for m in self.modes)

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return [(j + 1, s) for j, succ in enumerate(self.successors) for s in succ]

    def predecessors(self, job: int) -> list[int]:
        return [j for j, s in self.arcs if s == job]


#: section titles per dialect; ``None`` marks a section the dialect omits
DIALECTS = {
    "psplib-mm": {"precedence": "PRECEDENCE RELATIONS", "requests": "REQUESTS/DURATIONS",
                  "availability": "RESOURCEAVAILABILITIES", "project": "PROJECT INFORMATION"},
    "mmlib": {"precedence": "PRECEDENCE RELATIONS", "requests": "REQUESTS/DURATIONS",
              "availability": "RESOURCEAVAILABILITIES", "project": None},
}

_RULE = re.compile(r"^\*{5,}\s*$|^-{5,}\s*$")


def _ints(line: str, section: str) -> list[int]:
    try:
        return [int(v) for v in line.split()]
    except ValueError:
        raise PsplibParseError(section, f"expected integers, got {line.strip()!r}") from None


def _header_value(lines: list[str], key: str, default: int | None = None) -> int:
    for ln in lines:
        if ln.lower().startswith(key) and ":" in ln:
            m = re.search(r"(\d+)", ln.split(":", 1)[1])
            if m:
                return int(m.group(1))
    if default is not None:
        return default
    raise PsplibParseError("header", f"missing {key!r} line")


def _sections(lines: list[str]) -> dict[str, list[str]]:
    """Split the file on its ``TITLE:`` lines; rule lines separate blocks."""
    out: dict[str, list[str]] = {"header": []}
    current = "header"
    for ln in lines:
        stripped = ln.strip()
        if not stripped or _RULE.match(stripped):
            continue
        if stripped.endswith(":") and stripped[:-1].isupper():
            current = stripped[:-1].strip()
            out[current] = []
            continue
        out[current].append(ln.rstrip("\n"))
    return out


def _detect(sections: dict[str, list[str]]) -> str:
    return "psplib-mm" if "PROJECT INFORMATION" in sections else "mmlib"


def parse_psplib_mm(text: str, origin: str | None = None) -> BenchmarkInstance:
    """Parse a multi-mode instance; ``origin`` is detected when omitted.

    Job, mode and resource counts are re-derived from the section bodies and
    must agree with the header; any mismatch is reported against the
    section that disagrees.
    """
    secs = _sections(text.splitlines())
    origin = origin or _detect(secs)
    if origin not in DIALECTS:
        raise ValueError(f"unknown dialect {origin!r}")
    titles = DIALECTS[origin]
    head = secs["header"]
    n_jobs = _header_value(head, "jobs")
    horizon = _header_value(head, "horizon", 0)
    n_ren = _header_value([h.strip().lstrip("- ") for h in head], "renewable")
    n_non = _header_value([h.strip().lstrip("- ") for h in head], "nonrenewable")

    def body(key: str) -> tuple[str, list[str]]:
        title = titles[key]
        if title not in secs:
            raise PsplibParseError(title, "section missing")
        return title, secs[title]

    # precedence: jobnr #modes #successors successors...
    sec, lines = body("precedence")
    rows = [ln for ln in lines if ln.strip() and ln.split()[0].isdigit()]
    n_modes: list[int] = []
    succ: list[tuple[int, ...]] = []
    for k, ln in enumerate(rows, start=1):
        v = _ints(ln, sec)
        if len(v) < 3 or v[0] != k or len(v) != 3 + v[2]:
            raise PsplibParseError(sec, f"malformed row for job {k}: {ln.strip()!r}")
        n_modes.append(v[1])
        succ.append(tuple(v[3:]))
    if len(rows) != n_jobs:
        raise PsplibParseError(sec, f"{len(rows)} jobs listed, header declares {n_jobs}")

    # requests: jobnr mode duration R.. N..  (continuation rows omit jobnr)
    sec, lines = body("requests")
    width = 3 + n_ren + n_non
    modes: list[list[BenchmarkMode]] = [[] for _ in range(n_jobs)]
    job = 0
    for ln in lines:
        if not ln.strip() or not ln.split()[0].isdigit():
            continue
        v = _ints(ln, sec)
        if len(v) == width:
            job = v[0]
            v = v[1:]
        elif len(v) != width - 1:
            raise PsplibParseError(sec, f"row has {len(v)} fields, expected {width} or {width - 1}: {ln.strip()!r}")
        if not 1 <= job <= n_jobs:
            raise PsplibParseError(sec, f"job number {job} out of range")
        if v[0] != len(modes[job - 1]) + 1:
            raise PsplibParseError(sec, f"job {job}: mode {v[0]} out of sequence")
        modes[job - 1].append(BenchmarkMode(v[1], tuple(v[2:2 + n_ren]), tuple(v[2 + n_ren:])))
    for j in range(n_jobs):
        if len(modes[j]) != n_modes[j]:
            raise PsplibParseError(sec, f"job {j + 1} has {len(modes[j])} modes, precedence section declares {n_modes[j]}")

    sec, lines = body("availability")
    rows = [ln for ln in lines if ln.split() and ln.split()[0].lstrip("-").isdigit()]
    if not rows:
        raise PsplibParseError(sec, "no availability row")
    cap = _ints(rows[0], sec)
    if len(cap) != n_ren + n_non:
        raise PsplibParseError(sec, f"{len(cap)} capacities, header declares {n_ren + n_non} resources")

    if horizon == 0:  # no declared horizon: serial sum of the longest modes
        horizon = sum(max((md.duration for md in m), default=0) for m in modes)
    inst = BenchmarkInstance(
        origin, n_jobs, horizon, tuple(succ), tuple(tuple(m) for m in modes),
        tuple(cap[:n_ren]), tuple(cap[n_ren:]),
        {"jobs": n_jobs, "renewable": n_ren, "nonrenewable": n_non, "horizon": horizon},
    )
    _check_acyclic(inst)
    return inst


def _check_acyclic(b: BenchmarkInstance) -> None:
    indeg = [0] * (b.n_jobs + 1)
    for _, s in b.arcs:
        if not 1 <= s <= b.n_jobs:
            raise PsplibParseError("PRECEDENCE RELATIONS", f"successor {s} out of range")
        indeg[s] += 1
    ready = [j for j in range(1, b.n_jobs + 1) if indeg[j] == 0]
    seen = 0
    while ready:
        j = ready.pop()
        seen += 1
        for s in b.successors[j - 1]:
            indeg[s] -= 1
            if indeg[s] == 0:
                ready.append(s)
    if seen != b.n_jobs:
        raise PsplibParseError("PRECEDENCE RELATIONS", "precedence arcs contain a cycle")
