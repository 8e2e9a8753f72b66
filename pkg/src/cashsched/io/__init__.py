"""Instance files, benchmark readers and report writers."""

from .native import (
    INSTANCE_SCHEMA,
    SCHEMA_VERSION,
    InstanceFormatError,
    InstanceSyntaxError,
    load_instance,
    parse_instance,
    write_instance,
)
from .psplib import BenchmarkInstance, BenchmarkMode, PsplibParseError, parse_psplib_mm
from .reports import read_ledger_csv, render_gantt_svg, write_ledger_csv
from .solution import ScheduleFile, parse_decisions, parse_schedule, write_decisions, write_schedule
from .synth import FinanceConfig, synthesize_finance

__all__ = [
    "INSTANCE_SCHEMA",
    "SCHEMA_VERSION",
    "InstanceFormatError",
    "InstanceSyntaxError",
    "load_instance",
    "parse_instance",
    "write_instance",
    "BenchmarkInstance",
    "BenchmarkMode",
    "PsplibParseError",
    "parse_psplib_mm",
    "read_ledger_csv",
    "render_gantt_svg",
    "write_ledger_csv",
    "ScheduleFile",
    "parse_decisions",
    "parse_schedule",
    "write_decisions",
    "write_schedule",
    "FinanceConfig",
    "synthesize_finance",
]
