"""Per-tick telemetry export (CSV, optional JSON) and CSV read-back.

CSV columns, in order::

    t, state, forward_mps, right_mps, up_mps, yaw_rate_dps, gimbal_pan_deg,
    gimbal_tilt_deg, zoom, stream, detected, s_p_percent, occupancy, phi_deg,
    theta_deg, psi_deg, x_m, y_m, z_m, yaw_deg, zoom_cmd, stream_cmd, marker_id

``occupancy`` is how far the marker reaches towards the frame edge (1 = touching).

``t`` has 3 decimals, other floats 6; ``detected`` is 0/1; detection fields
are empty when the pad is not detected and ``marker_id`` is then -1.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .runner import COLUMNS, RunRecord, TelemetryRow


class TelemetryError(OSError):
    pass


def _cell(name: str, value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        text = f"{value:.3f}" if name == "t" else f"{value:.6f}"
        # avoid "-0.000000" so identical states print identically
        return text[1:] if text.startswith("-") and float(text) == 0.0 else text
    return str(value)


def format_rows(record: RunRecord) -> list[list[str]]:
    return [[_cell(name, v) for name, v in zip(COLUMNS, row)] for row in record.rows]


def to_csv(record: RunRecord) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    writer.writerows(format_rows(record))
    return buf.getvalue()


def _json_value(cell: str, name: str):
    if name in ("state", "stream", "zoom_cmd", "stream_cmd"):
        return cell
    if cell == "":
        return None
    if name in ("detected", "marker_id"):
        return int(cell)
    return float(cell)


def to_json(record: RunRecord) -> str:
    rows = [[_json_value(c, n) for c, n in zip(r, COLUMNS)] for r in format_rows(record)]
    doc = {
        "scenario": record.scenario,
        "pad_type": record.pad_type,
        "outcome": record.outcome,
        "touchdown_error_m": record.touchdown_error_m,
        "columns": list(COLUMNS),
        "rows": rows,
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def export_timeseries(record: RunRecord, destination: str | Path, fmt: str = "csv") -> Path:
    """Write telemetry to ``destination`` (a file, or a directory to hold ``<scenario>.<fmt>``)."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown telemetry format {fmt!r}")
    path = Path(destination)
    if path.is_dir():
        path = path / f"{record.scenario}.{fmt}"
    text = to_csv(record) if fmt == "csv" else to_json(record)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        # newline="" keeps the bytes identical across platforms
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise TelemetryError(f"cannot write telemetry to {path}: {exc}") from exc
    return path


def _parse(name: str, cell: str):
    if name in ("state", "stream", "zoom_cmd", "stream_cmd"):
        return cell
    if name == "detected":
        return cell == "1"
    if name == "marker_id":
        return int(cell)
    return float(cell) if cell != "" else float("nan")


def read_csv(path: str | Path) -> list[TelemetryRow]:
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(header) != COLUMNS:
                raise TelemetryError(f"{path}: unexpected telemetry header")
            return [TelemetryRow(*(_parse(n, c) for n, c in zip(COLUMNS, row))) for row in reader if row]
    except OSError as exc:
        if isinstance(exc, TelemetryError):
            raise
        raise TelemetryError(f"cannot read telemetry {path}: {exc}") from exc
