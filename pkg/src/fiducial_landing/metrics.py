"""Run-level invariant checks used by the acceptance sweep and the test-suite."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .controller import TRACKING_MODES, ControllerInput, TargetObservation
from .runner import RunRecord, TelemetryRow
from .sensing import CameraRig
from .world import SaturationLimits, WorldConfig

# names that would leak range information into the controller
RANGE_FIELD_WORDS = ("altitude", "range", "distance", "height", "position", "z_m")

_TRACKING = frozenset(m.value for m in TRACKING_MODES)


def range_leaks() -> list[str]:
    """Fields of the controller's input types that look like altitude or range."""
    leaks = []
    for cls in (ControllerInput, TargetObservation):
        for f in dataclasses.fields(cls):
            if any(w in f.name.lower() for w in RANGE_FIELD_WORDS):
                leaks.append(f"{cls.__name__}.{f.name}")
    return leaks


def saturation_violations(record: RunRecord, limits: SaturationLimits) -> list[tuple[float, str]]:
    bad = []
    for r in record.rows:
        for name, value, (lo, hi) in (
            ("forward_mps", r.forward_mps, limits.forward),
            ("right_mps", r.right_mps, limits.right),
            ("up_mps", r.up_mps, limits.up),
            ("yaw_rate_dps", r.yaw_rate_dps, limits.yaw_rate),
        ):
            if not lo <= value <= hi:
                bad.append((r.t, name))
    return bad


def gimbal_violations(record: RunRecord, cfg: WorldConfig) -> list[float]:
    (p_lo, p_hi), (t_lo, t_hi) = cfg.pan_limits_deg, cfg.tilt_limits_deg
    return [r.t for r in record.rows
            if not (p_lo <= r.gimbal_pan_deg <= p_hi and t_lo <= r.gimbal_tilt_deg <= t_hi)]


def ir_zoom_commands(record: RunRecord) -> list[float]:
    return [r.t for r in record.rows if r.stream == "ir" and r.zoom_cmd != "none"]


@dataclass(frozen=True)
class ZoomCompliance:
    compliant: int
    feasible: int

    @property
    def fraction(self) -> float:
        return self.compliant / self.feasible if self.feasible else 1.0


def _focal(rig: CameraRig, stream: str, zoom: float) -> float:
    cam = rig.camera(stream)
    return zoom * cam.base_focal_length_mm / cam.sensor_width_mm


def _band_reachable(row: TelemetryRow, rig: CameraRig, band: tuple[float, float],
                    fit_margin: float) -> bool:
    now = _focal(rig, row.stream, row.zoom)
    f_min = _focal(rig, "wide", rig.wide.zoom_range[0])
    f_max = _focal(rig, "zoom", rig.zoom.zoom_range[1])
    # zooming in past the fit margin would push the marker out of frame
    k_max = min(f_max / now, fit_margin / row.occupancy)
    return row.s_p_percent * f_min / now <= band[1] and row.s_p_percent * k_max >= band[0]


def auto_zoom_compliance(record: RunRecord, rig: CameraRig, world: WorldConfig,
                         band: tuple[float, float] = (20.0, 80.0),
                         fit_margin: float = 0.85, latency_s: float = 1.0) -> ZoomCompliance:
    """Count tracked ticks where the band is reachable and how many sit inside it.

    A tick is feasible when the marker is tracked on a zoomable stream, some
    zoom setting puts it in the band while keeping it framed, and enough time
    has passed since the current stretch began for the zoom to slew there.
    """
    slew = math.log(world.zoom_slew_per_s)
    compliant = feasible = 0
    start_t = None
    settle = 0.0
    prev_marker = None
    for r in record.rows:
        tracked = (r.detected and r.state in _TRACKING and r.stream != "ir"
                   and _band_reachable(r, rig, band, fit_margin))
        if not tracked or r.marker_id != prev_marker:
            start_t = None
        prev_marker = r.marker_id if tracked else None
        if not tracked:
            continue
        if start_t is None:
            start_t = r.t
            need = max(0.0, math.log(band[0] / r.s_p_percent), math.log(r.s_p_percent / band[1]))
            settle = need / slew + latency_s
        if r.t - start_t < settle:
            continue
        feasible += 1
        if band[0] <= r.s_p_percent <= band[1]:
            compliant += 1
    return ZoomCompliance(compliant, feasible)
