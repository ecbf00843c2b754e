"""Built-in scenario sets: the seeded nominal envelope and the obscuration case study."""
from __future__ import annotations

import math
import random
from importlib import resources

from .config import DEFAULT_MARKERS, DEFAULT_RIG
from .scenario import Scenario, parse_scenario

# starting envelope per pad type: (max horizontal distance, max altitude), metres
ENVELOPE = {
    "visual": (168.0, 102.0),
    "active_ir": (40.0, 30.0),
    "passive_ir": (40.0, 30.0),
}
MIN_START_M = 5.0
# steepest initial look-down angle; the drone starts near, not above, the pad
MAX_START_DEPRESSION_DEG = 75.0
NOMINAL_MAX_SIM_TIME_S = 900.0
# marker size the operator frames the pad at before handing over control
OPERATOR_FRAMING_PERCENT = 3.0


def operator_zoom(distance: float, altitude: float, pad_type: str, rig=DEFAULT_RIG,
                  markers=DEFAULT_MARKERS) -> tuple[str, float]:
    """Stream and zoom a pilot would pick before handing over control."""
    if pad_type != "visual":
        return "ir", 1.0
    rng = math.hypot(distance, altitude)
    cam = rig.zoom
    want = OPERATOR_FRAMING_PERCENT / 100.0 * cam.sensor_width_mm * rng / (
        markers["visual"][0] * cam.base_focal_length_mm)
    lo, hi = cam.zoom_range
    if want < lo:
        return "wide", 1.0
    return "zoom", round(min(want, hi), 2)


def nominal_scenarios(pad_type: str, n: int = 50, seed: int = 0) -> list[Scenario]:
    rng = random.Random(f"{pad_type}:{seed}")
    max_d, max_a = ENVELOPE[pad_type]
    out = []
    for i in range(n):
        while True:
            distance = round(rng.uniform(MIN_START_M, max_d), 2)
            altitude = round(rng.uniform(MIN_START_M, max_a), 2)
            if math.degrees(math.atan2(altitude, distance)) <= MAX_START_DEPRESSION_DEG:
                break
        stream, zoom = operator_zoom(distance, altitude, pad_type)
        out.append(Scenario(
            name=f"nominal_{pad_type}_{i:03d}",
            pad_type=pad_type,
            distance_m=distance,
            altitude_m=altitude,
            pad_bearing_deg=round(rng.uniform(-10.0, 60.0), 1),
            heading_deg=round(rng.uniform(0.0, 360.0), 1),
            pad_yaw_deg=round(rng.uniform(-180.0, 180.0), 1),
            stream=stream,
            zoom=zoom,
            max_sim_time_s=NOMINAL_MAX_SIM_TIME_S,
            seed=seed * 1000 + i,
        ))
    return out


def nominal_suite(n_per_type: int = 50, seed: int = 0) -> list[Scenario]:
    return [s for pad in ("visual", "active_ir", "passive_ir")
            for s in nominal_scenarios(pad, n_per_type, seed)]


def builtin_scenario_text(name: str) -> str:
    return resources.files("fiducial_landing.scenarios").joinpath(f"{name}.yaml").read_text()


def case_study() -> Scenario:
    return parse_scenario(builtin_scenario_text("case_study"))
