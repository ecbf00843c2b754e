"""Closed-loop run of one scenario: detect -> controller tick -> saturate -> world step."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from pathlib import Path
from typing import NamedTuple

from .config import SimConfig, load_config
from .controller import ControllerInput, ControllerState, Mode, observe, tick
from .geometry import GimbalState
from .scenario import Scenario
from .sensing import detect, due_displacements
from .world import DroneState, PadState, WorldState, saturate, step, touchdown_error


class TelemetryRow(NamedTuple):
    t: float
    state: str
    forward_mps: float
    right_mps: float
    up_mps: float
    yaw_rate_dps: float
    gimbal_pan_deg: float
    gimbal_tilt_deg: float
    zoom: float
    stream: str
    detected: bool
    s_p_percent: float
    occupancy: float
    phi_deg: float
    theta_deg: float
    psi_deg: float
    x_m: float
    y_m: float
    z_m: float
    yaw_deg: float
    zoom_cmd: str
    stream_cmd: str
    marker_id: int


COLUMNS: tuple[str, ...] = TelemetryRow._fields
NAN = float("nan")


@dataclass
class RunRecord:
    scenario: str
    pad_type: str
    rows: list[TelemetryRow]
    outcome: str
    touchdown_error_m: float | None
    start_altitude_m: float
    start_distance_m: float

    @property
    def landed(self) -> bool:
        return self.outcome == "landed"

    def states(self) -> list[str]:
        """Mode sequence with consecutive duplicates collapsed."""
        seq: list[str] = []
        for r in self.rows:
            if not seq or seq[-1] != r.state:
                seq.append(r.state)
        return seq


def initial_world(scenario: Scenario, cfg: SimConfig) -> WorldState:
    az = math.radians(scenario.heading_deg + scenario.pad_bearing_deg)
    pos = (-scenario.distance_m * math.sin(az), -scenario.distance_m * math.cos(az), scenario.altitude_m)
    pad = PadState((0.0, 0.0, 0.0), scenario.pad_yaw_deg, scenario.pad_type,
                   cfg.markers[scenario.pad_type])
    stream = scenario.initial_stream
    lo, hi = cfg.rig.camera(stream).zoom_range
    zoom = min(max(scenario.zoom if scenario.zoom is not None else lo, lo), hi)
    return WorldState(0.0, DroneState(pos, scenario.heading_deg), GimbalState(0.0, 0.0), pad,
                      stream, zoom, scenario.gusts, scenario.seed)


def resolve_config(scenario: Scenario, base_dir: str | Path | None = None,
                   config: SimConfig | None = None) -> SimConfig:
    if config is not None:
        return config
    if scenario.config is not None:
        path = Path(scenario.config)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        return load_config(path)
    return load_config()


def run_scenario(scenario: Scenario, config: SimConfig | None = None,
                 base_dir: str | Path | None = None) -> RunRecord:
    cfg = resolve_config(scenario, base_dir, config)
    dt = cfg.dt_s
    rig = cfg.rig
    ctrl_cfg = cfg.controller
    world = initial_world(scenario, cfg)
    state = ControllerState()
    rng = random.Random(scenario.seed)
    events = scenario.obscurations
    rows: list[TelemetryRow] = []
    n_ticks = int(math.ceil(scenario.max_sim_time_s / dt - 1e-9))
    outcome = "timeout"

    for n in range(n_ticks + 1):
        dx, dy = due_displacements(events, world.t - dt, world.t)
        if dx or dy:
            px, py, pz = world.pad.position
            world = replace(world, pad=replace(world.pad, position=(px + dx, py + dy, pz)))
        det = detect(world, rig, events, cfg.sensing, rng)
        obs = observe(det, world.gimbal, rig, world.active_camera, world.zoom) if det else None
        inp = ControllerInput(obs, world.gimbal, world.zoom, world.active_camera,
                              motor_stopped=not world.drone.motors_on,
                              ground_contact=world.drone.on_ground, dt=dt)
        state, cmd = tick(state, inp, ctrl_cfg, rig)
        cmd = saturate(cmd, ctrl_cfg.limits)
        d = world.drone
        rows.append(TelemetryRow(
            world.t, state.mode.value, cmd.forward_mps, cmd.right_mps, cmd.up_mps, cmd.yaw_rate_dps,
            world.gimbal.pan_deg, world.gimbal.tilt_deg, world.zoom, world.active_camera,
            obs is not None,
            obs.s_p_percent if obs else NAN, obs.occupancy if obs else NAN,
            obs.phi_deg if obs else NAN,
            obs.theta_deg if obs else NAN, obs.psi_deg if obs else NAN,
            d.position[0], d.position[1], d.position[2], d.yaw_deg,
            cmd.zoom.mode, cmd.stream, obs.marker_id if obs else -1))
        if state.mode is Mode.LANDED:
            outcome = "landed"
            break
        if n == n_ticks:
            break
        world = step(world, cmd, dt, cfg.world)

    error = touchdown_error(world, rig.camera_offset_m) if outcome == "landed" else None
    return RunRecord(scenario.name, scenario.pad_type, rows, outcome, error,
                     scenario.altitude_m, scenario.distance_m)
