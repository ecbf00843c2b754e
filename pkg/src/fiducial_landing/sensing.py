"""Geometric stand-in for the fiducial detector.

Markers are projected with an angle-linear camera model: the pixel offset of
a marker is proportional to its pan/tilt offset from the optical axis, which
is exactly the inverse of :func:`geometry.pixel_offset_angles`. Apparent size
uses the local pinhole scale ``s / (2 d tan(fov_u / 2))``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .geometry import (CameraModel, PixelObservation, bearing_from_body, body_direction,
                       fov_deg, wrap_deg)
from .world import Vec3, WorldState, camera_position


@dataclass(frozen=True)
class CameraRig:
    wide: CameraModel
    zoom: CameraModel
    ir: CameraModel
    pan_limits_deg: tuple[float, float] = (-90.0, 90.0)
    tilt_limits_deg: tuple[float, float] = (-120.0, 30.0)
    camera_offset_m: Vec3 = (0.0, 0.0, 0.0)

    def __post_init__(self):
        for cam in (self.wide, self.ir):
            if cam.zoomable:
                raise ValueError(f"camera {cam.name!r} must have a fixed zoom")

    def camera(self, stream: str) -> CameraModel:
        try:
            return {"wide": self.wide, "zoom": self.zoom, "ir": self.ir}[stream]
        except KeyError:
            raise ValueError(f"unknown stream {stream!r}") from None

    @property
    def zoom_ranges(self) -> dict[str, tuple[float, float]]:
        return {"wide": self.wide.zoom_range, "zoom": self.zoom.zoom_range, "ir": self.ir.zoom_range}


@dataclass(frozen=True)
class Detection:
    observation: PixelObservation
    marker_id: int
    s_p_percent: float
    pad_yaw_in_image_deg: float
    timestamp: float

    def __post_init__(self):
        if not 0.0 < self.s_p_percent <= 100.0:
            raise ValueError(f"s_p_percent out of (0, 100]: {self.s_p_percent}")


@dataclass(frozen=True)
class ObscurationEvent:
    t_start: float
    t_end: float
    pad_displacement: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError("obscuration needs t_start < t_end")

    def active(self, t: float) -> bool:
        return self.t_start <= t < self.t_end


@dataclass(frozen=True)
class SensingConfig:
    s_detect_min_percent: float = 1.0
    s_detect_max_percent: float = 95.0
    occlusion_height_m: float = 5.0
    occlusion_cone: float = 0.3
    pixel_jitter_px: float = 1.0


@dataclass(frozen=True)
class MarkerProjection:
    marker_id: int
    observation: PixelObservation
    # fraction of the half-frame used by the marker on its worst axis; <= 1 when fully inside
    occupancy: float


def project_pad(world: WorldState, rig: CameraRig) -> list[MarkerProjection]:
    """Project every marker whose centre falls inside the active stream."""
    cam = rig.camera(world.active_camera)
    fov_u = fov_deg(cam, world.zoom, "horizontal")
    fov_v = fov_deg(cam, world.zoom, "vertical")
    drone = world.drone
    cx, cy, cz = camera_position(drone, rig.camera_offset_m)
    px, py, pz = world.pad.position
    dx, dy, dz = px - cx, py - cy, pz - cz
    yaw = math.radians(drone.yaw_deg)
    s, c = math.sin(yaw), math.cos(yaw)
    fwd = dx * s + dy * c
    right = dx * c - dy * s
    dist = math.sqrt(dx * dx + dy * dy + dz * dz)
    if dist == 0.0:
        return []
    pan, tilt = world.gimbal.pan_deg, world.gimbal.tilt_deg
    af, ar, au = body_direction(pan, tilt)
    if fwd * af + right * ar + dz * au <= 0.0:
        return []
    phi, theta = bearing_from_body(fwd, right, dz)
    phi_u = phi - pan
    theta_v = wrap_deg(theta - tilt)
    u_c, v_c = cam.center_px
    u = u_c + 2.0 * u_c * phi_u / fov_u
    v = v_c - 2.0 * v_c * theta_v / fov_v
    if not (0.0 <= u <= 2.0 * u_c and 0.0 <= v <= 2.0 * v_c):
        return []
    scale = 2.0 * dist * math.tan(math.radians(fov_u) / 2.0)
    aspect = u_c / v_c
    off_u = abs(u - u_c) / u_c
    off_v = abs(v - v_c) / v_c
    out = []
    for i, size in enumerate(world.pad.marker_sizes_m):
        frac = size / scale
        if frac > 1.0:
            continue
        occ = max(off_u + frac, off_v + frac * aspect)
        out.append(MarkerProjection(i, PixelObservation(u, v, u_c, v_c, frac), occ))
    return out


def pad_detectable(world: WorldState, rig: CameraRig, cfg: SensingConfig) -> bool:
    """Pad-type rule: which streams see which pad, and passive-IR self-occlusion."""
    pad = world.pad
    stream = world.active_camera
    if pad.pad_type == "visual":
        return stream in ("wide", "zoom")
    if stream != "ir":
        return False
    if pad.pad_type == "active_ir":
        # heated pad on an inverted stream reads as an ordinary tag
        return True
    cx, cy, cz = camera_position(world.drone, rig.camera_offset_m)
    altitude = cz - pad.position[2]
    offset = math.hypot(cx - pad.position[0], cy - pad.position[1])
    occluded = altitude < cfg.occlusion_height_m and offset < cfg.occlusion_cone * altitude
    return not occluded


def detect(world: WorldState, rig: CameraRig, events=(), cfg: SensingConfig = SensingConfig(),
           rng: random.Random | None = None) -> Detection | None:
    """Largest marker passing every gate, or ``None``."""
    if any(e.active(world.t) for e in events):
        return None
    if not pad_detectable(world, rig, cfg):
        return None
    for proj in project_pad(world, rig):
        pct = proj.observation.s_p_frac * 100.0
        if proj.occupancy > 1.0:
            continue
        if not cfg.s_detect_min_percent <= pct <= cfg.s_detect_max_percent:
            continue
        obs = proj.observation
        if cfg.pixel_jitter_px > 0.0 and rng is not None:
            obs = PixelObservation(
                min(max(obs.u + rng.gauss(0.0, cfg.pixel_jitter_px), 0.0), 2.0 * obs.u_c),
                min(max(obs.v + rng.gauss(0.0, cfg.pixel_jitter_px), 0.0), 2.0 * obs.v_c),
                obs.u_c, obs.v_c, obs.s_p_frac)
        rel = wrap_deg(world.pad.yaw_deg - world.drone.yaw_deg - world.gimbal.pan_deg)
        return Detection(obs, proj.marker_id, pct, rel, world.t)
    return None


def due_displacements(events, t0: float, t1: float) -> tuple[float, float]:
    """Total pad displacement from events whose end falls in (t0, t1]."""
    dx = dy = 0.0
    for e in events:
        if e.pad_displacement is not None and t0 < e.t_end <= t1:
            dx += e.pad_displacement[0]
            dy += e.pad_displacement[1]
    return dx, dy


def world_bearing(world: WorldState, rig: CameraRig) -> tuple[float, float]:
    """True (pan, tilt) from the camera to the pad centre, relative to the drone heading."""
    cx, cy, cz = camera_position(world.drone, rig.camera_offset_m)
    px, py, pz = world.pad.position
    yaw = world.drone.yaw_deg
    # inverse of body_to_world
    s, c = math.sin(math.radians(yaw)), math.cos(math.radians(yaw))
    dx, dy = px - cx, py - cy
    return bearing_from_body(dx * s + dy * c, dx * c - dy * s, pz - cz)

