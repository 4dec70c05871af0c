"""
report.py - Reports and their deterministic emission.

A Report collects one entry per executed query. emit() renders it either as
canonical JSON (sorted keys, rationals as "p/q") or as plain-text tables.
"""

import json
from dataclasses import dataclass, field, fields, is_dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional

from movstab.chern_calculus import SheafClass
from movstab.cone_engine import RationalCone
from movstab.config import EXIT_OK, OUTPUT_FORMATS
from movstab.errors import PreconditionError
from movstab.lattice_core import NSLattice, NumClass
from movstab.stability_engine import Interval
from movstab.utils import format_rational


@dataclass
class ReportEntry:
    """Outcome of one query."""

    index: int
    cmd: str
    query: Dict[str, Any]
    status: str = "ok"
    result: Any = None
    error: Optional[Dict[str, Any]] = None
    warnings: List[str] = field(default_factory=list)
    exit_code: int = EXIT_OK


@dataclass
class Report:
    """All entries of one bundle run plus bundle-level errors."""

    bundle: str
    entries: List[ReportEntry] = field(default_factory=list)
    errors: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = EXIT_OK

    def add(self, entry: ReportEntry) -> None:
        self.entries.append(entry)
        self.exit_code = max(self.exit_code, entry.exit_code)


# ============================================================================
# JSON CONVERSION
# ============================================================================

def _interval(interval: Interval) -> Dict[str, Any]:
    if interval.is_empty():
        return {"empty": True}
    return {
        "empty": False,
        "lo": format_rational(interval.lo),
        "hi": format_rational(interval.hi),
        "lo_closed": interval.lo_closed,
        "hi_closed": interval.hi_closed,
    }


def to_jsonable(value: Any) -> Any:
    """
    Convert engine results into plain JSON values.

    Rationals become "p/q" strings, classes become coordinate lists, named
    tuples and dataclasses become objects keyed by field name.
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, NumClass):
        return [format_rational(c) for c in value.coords]
    if isinstance(value, SheafClass):
        return {"rank": value.rank, "c1": to_jsonable(value.c1), "c2": format_rational(value.c2)}
    if isinstance(value, NSLattice):
        return {
            "rank": value.rank,
            "gram": [[format_rational(v) for v in row] for row in value.gram],
            "basis": list(value.basis_labels),
        }
    if isinstance(value, RationalCone):
        return {
            "generators": [to_jsonable(g) for g in value.generators],
            "facets": [to_jsonable(f) for f in value.facets],
            "dimension": value.dimension,
        }
    if isinstance(value, Interval):
        return _interval(value)
    if isinstance(value, tuple) and hasattr(value, "_asdict"):
        return {k: to_jsonable(v) for k, v in value._asdict().items()}
    if is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


# ============================================================================
# TEXT RENDERING
# ============================================================================

def _scalar(value: Any) -> str:
    if isinstance(value, list):
        return "(" + ", ".join(_scalar(v) for v in value) + ")"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_scalar(v)}" for k, v in sorted(value.items())) + "}"
    return str(value)


def _interval_text(data: Dict[str, Any]) -> str:
    if data.get("empty"):
        return "∅"
    left = "[" if data["lo_closed"] else "("
    right = "]" if data["hi_closed"] else ")"
    if data["lo"] == data["hi"]:
        return "{" + data["lo"] + "}"
    return f"{left}{data['lo']}, {data['hi']}{right}"


def _segment_lines(result: Dict[str, Any]) -> List[str]:
    lines = [
        f"  stable set:     {_interval_text(result['stable'])}",
        f"  semistable set: {_interval_text(result['semistable'])}",
        "  epsilon      classification",
    ]
    for eps, label in result["points"]:
        lines.append(f"  {eps:<12} {label}")
    for wall in result["walls"]:
        lines.append(f"  wall at {wall['epsilon']} from member {wall['member']}")
    return lines


def _walls_lines(result: List[Dict[str, Any]]) -> List[str]:
    if not result:
        return ["  (no walls)"]
    return [f"  member {w['member']}: {_scalar(w['functional'])}" for w in result]


def _generic_lines(result: Any, indent: str = "  ") -> List[str]:
    if isinstance(result, dict):
        lines = []
        for key in sorted(result):
            value = result[key]
            if isinstance(value, dict) and value and len(_scalar(value)) > 72:
                lines.append(f"{indent}{key}:")
                lines.extend(_generic_lines(value, indent + "  "))
            else:
                lines.append(f"{indent}{key}: {_scalar(value)}")
        return lines
    return [f"{indent}{_scalar(result)}"]


def _entry_lines(entry: Dict[str, Any]) -> List[str]:
    lines = [f"[{entry['index']}] {entry['cmd']}: {entry['status']}"]
    if entry["status"] == "error":
        error = entry["error"]
        lines.append(f"  {error['type']} at {error['path']}: {error['message']}")
    elif entry["cmd"] == "segment":
        lines.extend(_segment_lines(entry["result"]))
    elif entry["cmd"] == "walls":
        lines.extend(_walls_lines(entry["result"]))
    else:
        lines.extend(_generic_lines(entry["result"]))
    for warning in entry["warnings"]:
        lines.append(f"  warning: {warning}")
    return lines


def _text(data: Dict[str, Any]) -> str:
    lines = [f"bundle: {data['bundle']}", f"exit code: {data['exit_code']}"]
    for error in data["errors"]:
        lines.append(f"error: {error['type']} at {error['path']}: {error['message']}")
    for key in sorted(data["summary"]):
        lines.append(f"{key}: {_scalar(data['summary'][key])}")
    for entry in data["entries"]:
        lines.append("")
        lines.extend(_entry_lines(entry))
    return "\n".join(lines) + "\n"


# ============================================================================
# EMIT / PARSE
# ============================================================================

def emit(report: Report, output_format: str = "json") -> str:
    """
    Render a report deterministically.

    Args:
        report: The report
        output_format: "json" (canonical) or "text" (tables)

    Returns:
        The rendered document, newline-terminated
    """
    if output_format not in OUTPUT_FORMATS:
        raise PreconditionError(f"unknown output format {output_format!r}")
    data = to_jsonable(report)
    if output_format == "json":
        return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return _text(data)


def emit_many(reports: List[Report], output_format: str = "json") -> str:
    """Render several reports; JSON output is a list, text output is concatenated."""
    if output_format == "json":
        data = [to_jsonable(r) for r in reports]
        return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return "\n".join(emit(r, output_format) for r in reports)


def parse_report(document: str) -> Dict[str, Any]:
    """Parse emitted JSON back into the plain report structure."""
    return json.loads(document)
