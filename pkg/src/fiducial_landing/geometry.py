"""Angle and field-of-view math shared by the simulator and the controller.

Conventions (degrees at every public boundary):

* pan / yaw are positive clockwise seen from above;
* tilt is 0 at the horizon and -90 straight down;
* pixel ``u`` grows to the right and ``v`` grows downward, so a marker below
  the image centre yields a negative tilt offset.

Pan and tilt form a spherical frame whose pole is the drone's lateral (right)
axis: tilt is the angle in the forward/up plane and pan the angle out of that
plane. Looking straight down is therefore a regular point of the frame, and
pan/tilt offsets add exactly (see :func:`bearing_from_body`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

Axis = Literal["horizontal", "vertical"]


def wrap_deg(angle: float) -> float:
    """Wrap an angle to the half-open interval [-180, 180)."""
    wrapped = math.fmod(angle + 180.0, 360.0)
    if wrapped < 0.0:
        wrapped += 360.0
    wrapped -= 180.0
    # fmod rounding can land exactly on +180
    return -180.0 if wrapped >= 180.0 else wrapped


@dataclass(frozen=True)
class CameraModel:
    name: str
    sensor_width_mm: float
    sensor_height_mm: float
    base_focal_length_mm: float
    zoom_range: tuple[float, float] = (1.0, 1.0)
    stream_width_px: int = 1920
    stream_height_px: int = 1080

    def __post_init__(self):
        dims = (self.sensor_width_mm, self.sensor_height_mm, self.base_focal_length_mm,
                self.stream_width_px, self.stream_height_px)
        if not all(d > 0 for d in dims):
            raise ValueError(f"camera {self.name!r}: sizes and resolutions must be positive")
        lo, hi = self.zoom_range
        if not 1.0 <= lo <= hi:
            raise ValueError(f"camera {self.name!r}: zoom range must satisfy 1 <= lo <= hi, got {self.zoom_range}")

    @property
    def zoomable(self) -> bool:
        return self.zoom_range[1] > self.zoom_range[0]

    @property
    def center_px(self) -> tuple[float, float]:
        return self.stream_width_px / 2.0, self.stream_height_px / 2.0


@dataclass(frozen=True)
class GimbalState:
    pan_deg: float = 0.0
    tilt_deg: float = 0.0


@dataclass(frozen=True)
class PixelObservation:
    u: float
    v: float
    u_c: float
    v_c: float
    s_p_frac: float

    def __post_init__(self):
        if not (0.0 <= self.u <= 2.0 * self.u_c and 0.0 <= self.v <= 2.0 * self.v_c):
            raise ValueError(f"marker centre ({self.u}, {self.v}) outside the frame")
        if not 0.0 < self.s_p_frac <= 1.0:
            raise ValueError(f"s_p_frac must be in (0, 1], got {self.s_p_frac}")


@dataclass(frozen=True)
class TargetAngles:
    phi_deg: float
    theta_deg: float
    psi_deg: float


def fov_deg(camera: CameraModel, zoom: float, axis: Axis = "horizontal") -> float:
    """Field of view ``2*atan(d / (2*Z*F_b))`` for sensor dimension ``d`` on ``axis``."""
    lo, hi = camera.zoom_range
    if not lo <= zoom <= hi:
        raise ValueError(f"zoom {zoom} outside range {camera.zoom_range} of camera {camera.name!r}")
    if axis == "horizontal":
        d = camera.sensor_width_mm
    elif axis == "vertical":
        d = camera.sensor_height_mm
    else:
        raise ValueError(f"unknown axis {axis!r}")
    return math.degrees(2.0 * math.atan(d / (2.0 * zoom * camera.base_focal_length_mm)))


def pixel_offset_angles(obs: PixelObservation, fov_u: float, fov_v: float) -> tuple[float, float]:
    """Pan/tilt offsets implied by the marker's pixel position.

    Pixels are normalised to [-0.5, 0.5] of the frame and scaled by the field
    of view. Vertical sign is flipped so that a marker low in the frame gives
    a negative (downward) tilt offset.
    """
    phi_u = (obs.u - obs.u_c) / (2.0 * obs.u_c) * fov_u
    theta_v = -(obs.v - obs.v_c) / (2.0 * obs.v_c) * fov_v
    return phi_u, theta_v


def compose_target_angles(gimbal: GimbalState, phi_u: float, theta_v: float) -> tuple[float, float]:
    phi = wrap_deg(gimbal.pan_deg + phi_u)
    theta = gimbal.tilt_deg + theta_v
    return phi, theta


def relative_yaw(drone_yaw: float, pad_yaw: float) -> float:
    return wrap_deg(pad_yaw - drone_yaw)


def bearing_from_body(forward: float, right: float, up: float) -> tuple[float, float]:
    """Pan and tilt (deg) of a body-frame displacement.

    tilt = atan2(up, forward) and pan = atan2(right, hypot(forward, up)); pan
    stays in [-90, 90] and tilt runs continuously through -90 when a target
    passes underneath the drone.
    """
    tilt = math.degrees(math.atan2(up, forward))
    pan = math.degrees(math.atan2(right, math.hypot(forward, up)))
    return pan, tilt


def body_direction(pan_deg: float, tilt_deg: float) -> tuple[float, float, float]:
    """Unit (forward, right, up) vector for a pan/tilt pair; inverse of :func:`bearing_from_body`."""
    p = math.radians(pan_deg)
    t = math.radians(tilt_deg)
    cp = math.cos(p)
    return cp * math.cos(t), math.sin(p), cp * math.sin(t)
