"""CSV and JSON writers; every number is printed with 17 significant digits."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import sys
from typing import Any, Dict, Mapping, Optional, Sequence

from shared import defaults as DEFAULTS

logger = logging.getLogger(__name__)


def format_number(value: float) -> str:
    if math.isnan(value) or math.isinf(value):
        return repr(value)
    return f"{value:.{DEFAULTS.OUTPUT_SIGNIFICANT_DIGITS}g}"


def _json_number(value: Any) -> Any:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return value
    if isinstance(value, int):
        return value
    if not math.isfinite(value):
        return format_number(value)
    return float(format_number(value))


def render_table(
    columns: Sequence[str], rows: Sequence[Sequence[float]], fmt: str
) -> str:
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_number(v) for v in row])
        return buffer.getvalue()
    payload = {
        "columns": list(columns),
        "rows": [[_json_number(v) for v in row] for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def render_mapping(values: Mapping[str, Any], fmt: str) -> str:
    """A flat name -> value report; CSV becomes a two-column name,value table."""
    ordered: Dict[str, Any] = {key: values[key] for key in sorted(values)}
    if fmt == "json":
        return (
            json.dumps({k: _json_number(v) for k, v in ordered.items()}, indent=2) + "\n"
        )
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["name", "value"])
    for key, value in ordered.items():
        text = format_number(value) if isinstance(value, float) else str(value)
        writer.writerow([key, text])
    return buffer.getvalue()


def write_output(text: str, path: Optional[str]) -> None:
    """Write to ``path`` or to standard output; OSError propagates."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    logger.debug("report written", extra={"path": path, "bytes": len(text)})
