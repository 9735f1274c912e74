"""JSON and CSV serialization of tables and reports."""

import csv
import dataclasses
import json
import math
from enum import Enum
from typing import IO, Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import __version__
from .diagnostics import DiagnosticsReport
from .witness import WitnessReport

REPORT_COLUMNS = ("t", "lhs", "rhs", "ratio")
DISPLAY_DIGITS = 12


def format_number(value: float) -> str:
    """17 significant digits; inf and nan spelled out."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def round_significant(value: float, digits: int = DISPLAY_DIGITS) -> float:
    """Round to ``digits`` significant digits, leaving inf and nan alone."""
    value = float(value)
    return float(f"{value:.{digits}g}") if math.isfinite(value) else value


class SignificantDigitsEncoder(json.JSONEncoder):
    """Writes finite floats with 17 significant digits instead of their shortest repr."""

    def iterencode(self, o, _one_shot=False):
        def floatstr(value: float) -> str:
            if not math.isfinite(value):
                raise ValueError(f"non-finite float {value!r} reached the encoder")
            text = format_number(value)
            return text if any(c in text for c in ".en") else text + ".0"

        encoder = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        markers = {} if self.check_circular else None
        return json.encoder._make_iterencode(
            markers, self.default, encoder, self.indent, floatstr,
            self.key_separator, self.item_separator, self.sort_keys, self.skipkeys, _one_shot,
        )(o, 0)


def make_json_safe(obj):
    """Recursively convert dataclasses, enums, numpy values and non-finite floats to plain JSON types."""
    if isinstance(obj, Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        obj = {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): make_json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [make_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [make_json_safe(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else format_number(value)
    return obj


def report_to_dict(report: DiagnosticsReport) -> Dict:
    return {
        "subject": report.subject,
        "grid_kind": report.grid_kind,
        "verdict": report.verdict.value,
        "passed": report.passed,
        "constants": make_json_safe(report.constants),
        "notes": list(report.notes),
        "records": [make_json_safe(r) for r in report.records],
        "sections": [report_to_dict(s) for s in report.sections],
    }


def witness_to_dict(report: WitnessReport) -> Dict:
    return {
        "family": report.family.value,
        "t": make_json_safe(report.t),
        "rv": {"atoms": [[make_json_safe(v), make_json_safe(p)] for v, p in report.rv.atoms]},
        "norm_value": make_json_safe(report.norm_value),
        "tail_at_t": make_json_safe(report.tail_at_t),
        "characteristic_at_t": make_json_safe(report.characteristic_at_t),
        "saturated": report.saturated,
    }


def document(
    command: str,
    config: Dict,
    verdict: Optional[str],
    rows: Optional[List[Dict]] = None,
    report: Optional[Dict] = None,
) -> Dict:
    """Top-level JSON document {command, config, rows|report, verdict, version}."""
    doc = {"command": command, "config": make_json_safe(config)}
    if rows is not None:
        doc["rows"] = make_json_safe(rows)
    if report is not None:
        doc["report"] = report
    doc["verdict"] = verdict
    doc["version"] = __version__
    return doc


def write_json(doc: Dict, stream: IO[str]) -> None:
    json.dump(doc, stream, indent=2, cls=SignificantDigitsEncoder)
    stream.write("\n")


def write_csv(header: Sequence[str], rows: Iterable[Sequence[float]], stream: IO[str]) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_number(v) for v in row])


def report_rows(report: DiagnosticsReport) -> List[List[float]]:
    """Rows matching REPORT_COLUMNS."""
    return [[r.x, r.lhs, r.rhs, r.ratio] for r in report.records]
