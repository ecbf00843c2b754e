"""Simulation configuration: camera rig, pads, dynamics, sensing and controller knobs.

Defaults describe a wide/zoom/IR triple-camera payload. The sensor sizes and
focal lengths are plausible stand-ins, not measured values. Every field can
be overridden from a YAML file::

    schema_version: 1
    dt_s: 0.05
    cameras:
      zoom: {base_focal_length_mm: 4.5, zoom_range: [2, 23]}
    controller: {k_gimbal: 3.0}
    pads: {visual: [0.8, 0.2, 0.05]}
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import yaml

from .controller import ControllerConfig
from .geometry import CameraModel
from .sensing import CameraRig, SensingConfig
from .world import SaturationLimits, WorldConfig

CONFIG_ENV_VAR = "FIDUCIAL_LANDING_CONFIG"
SCHEMA_VERSION = 1

DEFAULT_RIG = CameraRig(
    wide=CameraModel("wide", 7.68, 4.32, 4.5, (1.0, 1.0), 1920, 1080),
    zoom=CameraModel("zoom", 7.68, 4.32, 4.5, (2.0, 23.0), 1920, 1080),
    ir=CameraModel("ir", 7.68, 6.144, 24.0, (1.0, 1.0), 640, 512),
)

DEFAULT_MARKERS: dict[str, tuple[float, ...]] = {
    "visual": (0.8, 0.2, 0.05),
    "active_ir": (0.6,),
    "passive_ir": (0.6,),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    rig: CameraRig = DEFAULT_RIG
    world: WorldConfig = field(default_factory=lambda: WorldConfig(zoom_ranges=DEFAULT_RIG.zoom_ranges))
    sensing: SensingConfig = SensingConfig()
    controller: ControllerConfig = ControllerConfig()
    markers: dict[str, tuple[float, ...]] = field(default_factory=lambda: dict(DEFAULT_MARKERS))
    dt_s: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.dt_s <= 0.25:
            raise ConfigError(f"dt_s must be in (0, 0.25], got {self.dt_s}")


def _tuplify(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(_tuplify(v) for v in value)
    return value


def _override(obj, values: dict, where: str):
    if not isinstance(values, dict):
        raise ConfigError(f"{where}: expected a mapping")
    names = {f.name for f in dataclasses.fields(obj)}
    unknown = sorted(set(values) - names)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")
    changes = {}
    for key, value in values.items():
        current = getattr(obj, key)
        if dataclasses.is_dataclass(current):
            changes[key] = _override(current, value, f"{where}.{key}")
        else:
            changes[key] = _tuplify(value)
    try:
        return replace(obj, **changes)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def build_config(data: dict | None) -> SimConfig:
    data = dict(data or {})
    version = data.pop("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported config schema_version {version}")
    allowed = {"dt_s", "cameras", "rig", "world", "sensing", "controller", "pads"}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"config: unknown key(s) {', '.join(unknown)}")

    rig = DEFAULT_RIG
    cams = data.get("cameras") or {}
    for name in cams:
        if name not in ("wide", "zoom", "ir"):
            raise ConfigError(f"cameras: unknown camera {name!r}")
    try:
        rig = replace(rig, **{name: _override(getattr(rig, name), vals, f"cameras.{name}")
                              for name, vals in cams.items()})
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if "rig" in data:
        allowed_rig = {"pan_limits_deg", "tilt_limits_deg", "camera_offset_m"}
        bad = sorted(set(data["rig"]) - allowed_rig)
        if bad:
            raise ConfigError(f"rig: unknown key(s) {', '.join(bad)}")
        rig = _override(rig, data["rig"], "rig")

    world = WorldConfig(zoom_ranges=rig.zoom_ranges, pan_limits_deg=rig.pan_limits_deg,
                        tilt_limits_deg=rig.tilt_limits_deg, camera_offset_m=rig.camera_offset_m)
    if "world" in data:
        bad = {"zoom_ranges", "pan_limits_deg", "tilt_limits_deg", "camera_offset_m"} & set(data["world"])
        if bad:
            raise ConfigError(f"world: {', '.join(sorted(bad))} come from the camera rig")
        world = _override(world, data["world"], "world")
    sensing = _override(SensingConfig(), data.get("sensing") or {}, "sensing")
    controller_vals = dict(data.get("controller") or {})
    limits = controller_vals.pop("limits", None)
    controller = _override(ControllerConfig(), controller_vals, "controller")
    if limits is not None:
        controller = replace(controller, limits=_override(SaturationLimits(), limits, "controller.limits"))

    markers = dict(DEFAULT_MARKERS)
    for pad, sizes in (data.get("pads") or {}).items():
        if pad not in markers:
            raise ConfigError(f"pads: unknown pad type {pad!r}")
        markers[pad] = tuple(float(s) for s in sizes)
    return SimConfig(rig, world, sensing, controller, markers, float(data.get("dt_s", 0.05)))


def load_config(path: str | os.PathLike | None = None) -> SimConfig:
    """Load a config file; falls back to ``$FIDUCIAL_LANDING_CONFIG`` then defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return SimConfig()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        return build_config(data)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
