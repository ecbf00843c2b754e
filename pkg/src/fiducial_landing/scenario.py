"""Scenario files: YAML documents describing one landing attempt.

Example::

    schema_version: 1
    name: case_study
    pad_type: visual          # visual | active_ir | passive_ir
    start:
      distance_m: 20          # horizontal distance to the pad
      altitude_m: 10          # height above the pad
      pad_bearing_deg: 0      # pad bearing from the initial heading, clockwise
      heading_deg: 0          # initial drone yaw
    camera:
      stream: zoom            # wide | zoom | ir
      zoom: 2.0
    pad_yaw_deg: 0
    events:
      - {type: obscuration, t_start: 40, t_end: 44, displacement_m: [3, 0]}
      - {type: gust, t_start: 10, t_end: 12, velocity_mps: [0.5, 0, 0]}
    max_sim_time_s: 300
    seed: 0
    config: rig.yaml          # optional, relative to the scenario file
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from .sensing import ObscurationEvent
from .world import PAD_TYPES, STREAMS, WindGust

SCHEMA_VERSION = 1
DEFAULT_MAX_SIM_TIME_S = 300.0


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    pad_type: str
    distance_m: float
    altitude_m: float
    pad_bearing_deg: float = 0.0
    heading_deg: float = 0.0
    pad_yaw_deg: float = 0.0
    stream: str | None = None
    zoom: float | None = None
    obscurations: tuple[ObscurationEvent, ...] = ()
    gusts: tuple[WindGust, ...] = ()
    max_sim_time_s: float = DEFAULT_MAX_SIM_TIME_S
    seed: int = 0
    config: str | None = None

    def __post_init__(self):
        if self.pad_type not in PAD_TYPES:
            raise ScenarioError(f"unknown pad_type {self.pad_type!r}")
        if not (self.distance_m > 0 and self.altitude_m > 0):
            raise ScenarioError("distance_m and altitude_m must be positive")
        if not self.max_sim_time_s > 0:
            raise ScenarioError("max_sim_time_s must be positive")
        if self.stream is not None and self.stream not in STREAMS:
            raise ScenarioError(f"unknown stream {self.stream!r}")

    @property
    def initial_stream(self) -> str:
        if self.stream is not None:
            return self.stream
        return "zoom" if self.pad_type == "visual" else "ir"

    @property
    def events(self) -> tuple:
        return self.obscurations + self.gusts

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "schema_version": SCHEMA_VERSION, "name": self.name, "pad_type": self.pad_type,
            "start": {"distance_m": self.distance_m, "altitude_m": self.altitude_m,
                      "pad_bearing_deg": self.pad_bearing_deg, "heading_deg": self.heading_deg},
            "pad_yaw_deg": self.pad_yaw_deg,
            "max_sim_time_s": self.max_sim_time_s, "seed": self.seed,
        }
        cam = {}
        if self.stream is not None:
            cam["stream"] = self.stream
        if self.zoom is not None:
            cam["zoom"] = self.zoom
        if cam:
            out["camera"] = cam
        events = []
        for e in self.obscurations:
            ev = {"type": "obscuration", "t_start": e.t_start, "t_end": e.t_end}
            if e.pad_displacement is not None:
                ev["displacement_m"] = list(e.pad_displacement)
            events.append(ev)
        for g in self.gusts:
            events.append({"type": "gust", "t_start": g.t_start, "t_end": g.t_end,
                           "velocity_mps": list(g.velocity_offset)})
        if events:
            out["events"] = events
        if self.config is not None:
            out["config"] = self.config
        return out

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)


# --- parsing -----------------------------------------------------------------

_TOP = {"schema_version", "name", "pad_type", "start", "camera", "pad_yaw_deg", "events",
        "max_sim_time_s", "seed", "config"}
_START = {"distance_m", "altitude_m", "pad_bearing_deg", "heading_deg"}
_CAMERA = {"stream", "zoom"}
_EVENT = {"obscuration": {"type", "t_start", "t_end", "displacement_m"},
          "gust": {"type", "t_start", "t_end", "velocity_mps"}}


class _Doc:
    """Plain data plus the source line of every mapping key / sequence item."""

    def __init__(self, root: yaml.Node):
        self.lines: dict[tuple, int] = {}
        self.data = self._walk(root, ())

    def _walk(self, node, path):
        self.lines[path] = node.start_mark.line + 1
        if isinstance(node, yaml.MappingNode):
            out = {}
            for k, v in node.value:
                key = k.value
                if key in out:
                    raise ScenarioError(f"line {k.start_mark.line + 1}: duplicate key {key!r}")
                out[key] = self._walk(v, path + (key,))
                self.lines[path + (key,)] = k.start_mark.line + 1
            return out
        if isinstance(node, yaml.SequenceNode):
            return [self._walk(v, path + (i,)) for i, v in enumerate(node.value)]
        return _scalar(node)

    def error(self, path: tuple, msg: str) -> ScenarioError:
        p = path
        while p and p not in self.lines:
            p = p[:-1]
        field_name = ".".join(str(x) for x in path) or "<root>"
        return ScenarioError(f"line {self.lines.get(p, 1)}: {field_name}: {msg}")


def _scalar(node: yaml.ScalarNode):
    loader = yaml.SafeLoader("")
    try:
        return loader.construct_object(node, deep=True)
    finally:
        loader.dispose()


def _number(doc: _Doc, mapping: dict, path: tuple, key: str, default=None, *, required=False) -> float | None:
    if key not in mapping:
        if required:
            raise doc.error(path, f"missing required field {key!r}")
        return default
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise doc.error(path + (key,), f"expected a finite number, got {value!r}")
    return float(value)


def _vector(doc: _Doc, value, path: tuple, n: int) -> tuple[float, ...]:
    if not isinstance(value, list) or len(value) != n or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        raise doc.error(path, f"expected a list of {n} numbers")
    return tuple(float(v) for v in value)


def _check_keys(doc: _Doc, mapping, path: tuple, allowed: set):
    if not isinstance(mapping, dict):
        raise doc.error(path, "expected a mapping")
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise doc.error(path + (unknown[0],), f"unknown key(s): {', '.join(unknown)}")


def parse_scenario(text: str) -> Scenario:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"malformed YAML: {exc}") from exc
    if root is None:
        raise ScenarioError("line 1: empty scenario")
    doc = _Doc(root)
    d = doc.data
    _check_keys(doc, d, (), _TOP)

    version = d.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise doc.error(("schema_version",), f"unsupported version {version!r}")
    name = d.get("name", "scenario")
    if not isinstance(name, str):
        raise doc.error(("name",), "expected a string")
    pad_type = d.get("pad_type")
    if pad_type not in PAD_TYPES:
        raise doc.error(("pad_type",), f"expected one of {', '.join(PAD_TYPES)}, got {pad_type!r}")

    start = d.get("start")
    if start is None:
        raise doc.error((), "missing required field 'start'")
    _check_keys(doc, start, ("start",), _START)
    distance = _number(doc, start, ("start",), "distance_m", required=True)
    altitude = _number(doc, start, ("start",), "altitude_m", required=True)
    if distance <= 0:
        raise doc.error(("start", "distance_m"), "must be positive")
    if altitude <= 0:
        raise doc.error(("start", "altitude_m"), "must be positive")
    bearing = _number(doc, start, ("start",), "pad_bearing_deg", 0.0)
    heading = _number(doc, start, ("start",), "heading_deg", 0.0)

    stream = zoom = None
    if "camera" in d:
        cam = d["camera"]
        _check_keys(doc, cam, ("camera",), _CAMERA)
        stream = cam.get("stream")
        if stream is not None and stream not in STREAMS:
            raise doc.error(("camera", "stream"), f"expected one of {', '.join(STREAMS)}")
        zoom = _number(doc, cam, ("camera",), "zoom")
        if zoom is not None and zoom < 1:
            raise doc.error(("camera", "zoom"), "zoom factor must be >= 1")

    obscurations, gusts = [], []
    events = d.get("events") or []
    if not isinstance(events, list):
        raise doc.error(("events",), "expected a list")
    for i, ev in enumerate(events):
        path = ("events", i)
        if not isinstance(ev, dict) or ev.get("type") not in _EVENT:
            raise doc.error(path, "event needs type 'obscuration' or 'gust'")
        _check_keys(doc, ev, path, _EVENT[ev["type"]])
        t0 = _number(doc, ev, path, "t_start", required=True)
        t1 = _number(doc, ev, path, "t_end", required=True)
        if not 0 <= t0 < t1:
            raise doc.error(path, "requires 0 <= t_start < t_end")
        if ev["type"] == "obscuration":
            disp = None
            if "displacement_m" in ev:
                disp = _vector(doc, ev["displacement_m"], path + ("displacement_m",), 2)
            obscurations.append(ObscurationEvent(t0, t1, disp))
        else:
            if "velocity_mps" not in ev:
                raise doc.error(path, "missing required field 'velocity_mps'")
            gusts.append(WindGust(t0, t1, _vector(doc, ev["velocity_mps"], path + ("velocity_mps",), 3)))

    max_t = _number(doc, d, (), "max_sim_time_s", DEFAULT_MAX_SIM_TIME_S)
    if max_t <= 0:
        raise doc.error(("max_sim_time_s",), "must be positive")
    seed = d.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise doc.error(("seed",), "expected an integer")
    config = d.get("config")
    if config is not None and not isinstance(config, str):
        raise doc.error(("config",), "expected a path string")

    return Scenario(name, pad_type, distance, altitude, bearing, heading,
                    _number(doc, d, (), "pad_yaw_deg", 0.0), stream, zoom,
                    tuple(obscurations), tuple(gusts), max_t, seed, config)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    try:
        return parse_scenario(text)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
