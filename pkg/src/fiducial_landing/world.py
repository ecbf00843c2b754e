"""Fixed-step kinematic world: drone, gimbal, zoom, pad and wind gusts.

World frame: x east, y north, z up, with z = 0 on the pad's base plane.
Yaw 0 faces +y and grows clockwise seen from above.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

from .geometry import GimbalState, wrap_deg

Vec3 = tuple[float, float, float]
PadType = Literal["visual", "active_ir", "passive_ir"]
PAD_TYPES: tuple[str, ...] = ("visual", "active_ir", "passive_ir")
STREAMS: tuple[str, ...] = ("wide", "zoom", "ir")


@dataclass(frozen=True)
class SaturationLimits:
    forward: tuple[float, float] = (-0.5, 2.0)
    right: tuple[float, float] = (-1.0, 1.0)
    up: tuple[float, float] = (-0.5, 1.0)
    yaw_rate: tuple[float, float] = (-10.0, 10.0)


DEFAULT_LIMITS = SaturationLimits()


@dataclass(frozen=True)
class GimbalCommand:
    """Rate mode (deg/s) when ``mode == "rate"``, absolute targets (deg) when ``"angle"``."""

    mode: Literal["rate", "angle"] = "rate"
    pan: float = 0.0
    tilt: float = 0.0


@dataclass(frozen=True)
class ZoomCommand:
    mode: Literal["none", "out", "set"] = "none"
    target: float | None = None


HOLD_GIMBAL = GimbalCommand()
NO_ZOOM = ZoomCommand()


@dataclass(frozen=True)
class CommandSet:
    forward_mps: float = 0.0
    right_mps: float = 0.0
    up_mps: float = 0.0
    yaw_rate_dps: float = 0.0
    gimbal: GimbalCommand = HOLD_GIMBAL
    zoom: ZoomCommand = NO_ZOOM
    stream: Literal["keep", "wide", "zoom", "ir"] = "keep"
    motor_stop: bool = False


@dataclass(frozen=True)
class DroneState:
    position: Vec3
    yaw_deg: float = 0.0
    velocity: Vec3 = (0.0, 0.0, 0.0)
    motors_on: bool = True
    on_ground: bool = False


@dataclass(frozen=True)
class PadState:
    position: Vec3 = (0.0, 0.0, 0.0)
    yaw_deg: float = 0.0
    pad_type: PadType = "visual"
    marker_sizes_m: tuple[float, ...] = (0.8, 0.2, 0.05)

    def __post_init__(self):
        if self.pad_type not in PAD_TYPES:
            raise ValueError(f"unknown pad type {self.pad_type!r}")
        sizes = self.marker_sizes_m
        if not sizes or any(s <= 0 for s in sizes):
            raise ValueError("marker sizes must be a nonempty list of positive lengths")
        if any(a <= b for a, b in zip(sizes, sizes[1:])):
            raise ValueError("marker sizes must be strictly decreasing")
        expected = 3 if self.pad_type == "visual" else 1
        if len(sizes) != expected:
            raise ValueError(f"{self.pad_type} pad needs {expected} marker(s), got {len(sizes)}")


@dataclass(frozen=True)
class WindGust:
    t_start: float
    t_end: float
    velocity_offset: Vec3

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError("gust needs t_start < t_end")

    def active(self, t: float) -> bool:
        return self.t_start <= t < self.t_end


@dataclass(frozen=True)
class WorldConfig:
    tau_s: float = 0.5
    gimbal_rate_max_dps: float = 60.0
    pan_limits_deg: tuple[float, float] = (-90.0, 90.0)
    tilt_limits_deg: tuple[float, float] = (-120.0, 30.0)
    zoom_slew_per_s: float = 1.5
    zoom_out_per_s: float = 0.5
    zoom_ranges: dict[str, tuple[float, float]] = field(
        default_factory=lambda: {"wide": (1.0, 1.0), "zoom": (2.0, 23.0), "ir": (1.0, 1.0)})
    # camera mounting offset in the body frame (forward, right, up), metres
    camera_offset_m: Vec3 = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class WorldState:
    t: float
    drone: DroneState
    gimbal: GimbalState
    pad: PadState
    active_camera: str = "zoom"
    zoom: float = 2.0
    gusts: tuple[WindGust, ...] = ()
    rng_seed: int = 0


def _clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def saturate(cmd: CommandSet, limits: SaturationLimits = DEFAULT_LIMITS) -> CommandSet:
    values = (cmd.forward_mps, cmd.right_mps, cmd.up_mps, cmd.yaw_rate_dps)
    if not all(math.isfinite(v) for v in values):
        raise ValueError(f"non-finite command: {values}")
    fwd = _clamp(cmd.forward_mps, *limits.forward)
    right = _clamp(cmd.right_mps, *limits.right)
    up = _clamp(cmd.up_mps, *limits.up)
    yaw = _clamp(cmd.yaw_rate_dps, *limits.yaw_rate)
    if (fwd, right, up, yaw) == values:
        return cmd
    return replace(cmd, forward_mps=fwd, right_mps=right, up_mps=up, yaw_rate_dps=yaw)


def within_limits(cmd: CommandSet, limits: SaturationLimits = DEFAULT_LIMITS) -> bool:
    pairs = ((cmd.forward_mps, limits.forward), (cmd.right_mps, limits.right),
             (cmd.up_mps, limits.up), (cmd.yaw_rate_dps, limits.yaw_rate))
    return all(lo <= v <= hi for v, (lo, hi) in pairs)


def body_to_world(yaw_deg: float, forward: float, right: float) -> tuple[float, float]:
    y = math.radians(yaw_deg)
    s, c = math.sin(y), math.cos(y)
    return forward * s + right * c, forward * c - right * s


def camera_position(drone: DroneState, offset: Vec3) -> Vec3:
    dx, dy = body_to_world(drone.yaw_deg, offset[0], offset[1])
    x, y, z = drone.position
    return x + dx, y + dy, z + offset[2]


def _slew(current: float, target: float, max_step: float) -> float:
    delta = target - current
    if delta > max_step:
        return current + max_step
    if delta < -max_step:
        return current - max_step
    return target


def _step_gimbal(g: GimbalState, cmd: GimbalCommand, dt: float, cfg: WorldConfig) -> GimbalState:
    max_step = cfg.gimbal_rate_max_dps * dt
    if cmd.mode == "angle":
        pan = _slew(g.pan_deg, cmd.pan, max_step)
        tilt = _slew(g.tilt_deg, cmd.tilt, max_step)
    else:
        pan = g.pan_deg + _clamp(cmd.pan * dt, -max_step, max_step)
        tilt = g.tilt_deg + _clamp(cmd.tilt * dt, -max_step, max_step)
    pan = _clamp(pan, *cfg.pan_limits_deg)
    tilt = _clamp(tilt, *cfg.tilt_limits_deg)
    if pan == g.pan_deg and tilt == g.tilt_deg:
        return g
    return GimbalState(pan, tilt)


def _step_zoom(camera: str, zoom: float, cmd: CommandSet, dt: float,
               cfg: WorldConfig) -> tuple[str, float]:
    if cmd.stream != "keep" and cmd.stream != camera:
        camera = cmd.stream
        lo, hi = cfg.zoom_ranges[camera]
        target = cmd.zoom.target if cmd.zoom.mode == "set" else zoom
        return camera, _clamp(target, lo, hi)
    lo, hi = cfg.zoom_ranges[camera]
    if cmd.zoom.mode == "out":
        zoom = zoom * cfg.zoom_out_per_s ** dt
    elif cmd.zoom.mode == "set" and cmd.zoom.target is not None:
        max_log = math.log(cfg.zoom_slew_per_s) * dt
        target = _clamp(cmd.zoom.target, lo, hi)
        zoom = math.exp(_slew(math.log(zoom), math.log(target), max_log))
    return camera, _clamp(zoom, lo, hi)


def step(world: WorldState, cmd: CommandSet, dt: float, cfg: WorldConfig = WorldConfig()) -> WorldState:
    """Advance the world by ``dt`` seconds under an already-saturated command."""
    if not 0.0 < dt <= 0.25:
        raise ValueError(f"dt must be in (0, 0.25], got {dt}")
    t = world.t + dt
    drone = world.drone
    if not drone.motors_on:
        return replace(world, t=t)

    tx, ty = body_to_world(drone.yaw_deg, cmd.forward_mps, cmd.right_mps)
    vx, vy, vz = drone.velocity
    a = min(1.0, dt / cfg.tau_s)
    vx += (tx - vx) * a
    vy += (ty - vy) * a
    vz += (cmd.up_mps - vz) * a
    gx = gy = gz = 0.0
    for g in world.gusts:
        if g.active(world.t):
            gx += g.velocity_offset[0]
            gy += g.velocity_offset[1]
            gz += g.velocity_offset[2]
    x, y, z = drone.position
    x += (vx + gx) * dt
    y += (vy + gy) * dt
    z += (vz + gz) * dt
    on_ground = False
    if z <= 0.0:
        z = 0.0
        if vz + gz <= 0.0:
            # ground contact: skids stop the drone
            on_ground = True
            vx = vy = vz = 0.0
    yaw = wrap_deg(drone.yaw_deg + cmd.yaw_rate_dps * dt) if not on_ground else drone.yaw_deg
    motors_on = not cmd.motor_stop
    if not motors_on:
        vx = vy = vz = 0.0
    new_drone = DroneState((x, y, z), yaw, (vx, vy, vz), motors_on, on_ground)

    gimbal = _step_gimbal(world.gimbal, cmd.gimbal, dt, cfg)
    camera, zoom = _step_zoom(world.active_camera, world.zoom, cmd, dt, cfg)
    return replace(world, t=t, drone=new_drone, gimbal=gimbal, active_camera=camera, zoom=zoom)


def touchdown_error(world: WorldState, camera_offset: Vec3 = (0.0, 0.0, 0.0)) -> float:
    """Horizontal distance from the pad centre to the point under the camera."""
    if not world.drone.on_ground:
        raise RuntimeError("touchdown_error requested before touchdown")
    cx, cy, _ = camera_position(world.drone, camera_offset)
    px, py, _ = world.pad.position
    return math.hypot(cx - px, cy - py)
