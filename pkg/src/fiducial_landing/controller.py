"""Landing control policy.

A 14-mode state machine driven only by angles to the pad (pan, tilt, relative
yaw), the marker's pixel size, the zoom factor, gimbal state and flight
controller status flags. Altitude and range never enter the controller.

Each tick applies at most one transition, then computes the velocity, yaw,
gimbal and zoom commands of the (new) mode.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .geometry import GimbalState, compose_target_angles, fov_deg, pixel_offset_angles, wrap_deg
from .sensing import CameraRig, Detection
from .world import (DEFAULT_LIMITS, CommandSet, GimbalCommand, SaturationLimits, ZoomCommand,
                    saturate)


class Mode(str, enum.Enum):
    STATIC_SEARCH = "StaticSearch"
    SEARCH_DOWN = "SearchDown"
    SEARCH_UP = "SearchUp"
    AIM_CAMERA = "AimCamera"
    AIM_DRONE = "AimDrone"
    APPROACH = "Approach"
    YAW_ALIGN = "YawAlign"
    HORIZONTAL_ALIGNMENT = "HorizontalAlignment"
    DESCENT = "Descent"
    COMMIT = "Commit"
    LANDED = "Landed"
    ZOOM_OUT_1 = "ZoomOut1"
    ZOOM_OUT_2 = "ZoomOut2"
    ASCENT = "Ascent"

    def __str__(self) -> str:
        return self.value


SEARCH_MODES = frozenset({Mode.STATIC_SEARCH, Mode.SEARCH_DOWN, Mode.SEARCH_UP})
# modes that fall back to ZoomOut1 (and may be resumed) when the pad is lost
RESUMABLE_MODES = frozenset({Mode.AIM_CAMERA, Mode.AIM_DRONE, Mode.APPROACH, Mode.YAW_ALIGN,
                             Mode.HORIZONTAL_ALIGNMENT})
TRACKING_MODES = RESUMABLE_MODES | {Mode.DESCENT}
ZOOM_OUT_MODES = frozenset({Mode.ZOOM_OUT_1, Mode.ZOOM_OUT_2, Mode.ASCENT})


@dataclass(frozen=True)
class ControllerConfig:
    # transition thresholds
    theta_c_deg: float = 3.0
    theta_d_deg: float = 3.0
    theta_a_deg: float = 3.0
    theta_y_deg: float = 1.0
    theta_h_deg: float = 2.0
    z_min: float = 2.0
    # named after the published caption; acts as a lower bound on S_p for Commit
    s_max_percent: float = 32.0
    # Descent falls back to HorizontalAlignment past this multiple of theta_h
    descent_realign_factor: float = 2.0
    gimbal_down_tol_deg: float = 0.5

    # zoom
    auto_band_percent: tuple[float, float] = (20.0, 80.0)
    zoom_fit_margin: float = 0.85
    zoom_target_margin: float = 1.1

    # search
    static_search_s: float = 2.0
    search_down_s: float = 4.0
    search_up_s: float = 4.0
    search_static_tilt_deg: float = -45.0
    search_tilt_low_deg: float = -85.0
    search_tilt_high_deg: float = 0.0
    search_yaw_rate_dps: float = 6.0
    # fraction of the horizontal FOV the heading may advance between sweeps
    search_overlap: float = 0.8

    # gains
    k_gimbal: float = 6.0
    k_yaw: float = 0.8
    approach_speed_mps: float = 2.0
    k_forward_cos: float = 4.0
    k_right: float = 0.05
    k_horizontal: float = 0.05
    descent_speed_mps: float = 0.5
    commit_speed_mps: float = 0.3
    ascent_speed_mps: float = 0.5

    # recovery timeouts
    zoom_out_1_timeout_s: float = 6.0
    zoom_out_2_timeout_s: float = 5.0
    ascent_timeout_s: float = 10.0

    limits: SaturationLimits = DEFAULT_LIMITS

    def __post_init__(self):
        positive = (self.theta_c_deg, self.theta_d_deg, self.theta_a_deg, self.theta_y_deg,
                    self.theta_h_deg, self.z_min, self.s_max_percent)
        if not all(v > 0 for v in positive):
            raise ValueError("controller thresholds must be positive")
        lo, hi = self.auto_band_percent
        if not 0 < lo < hi:
            raise ValueError(f"auto zoom band must satisfy 0 < low < high, got {self.auto_band_percent}")


@dataclass(frozen=True)
class TargetObservation:
    """Everything the controller is told about a detected pad."""

    phi_deg: float
    theta_deg: float
    psi_deg: float
    phi_u_deg: float
    theta_v_deg: float
    s_p_percent: float
    # worst-axis fraction of the half-frame covered by the marker (<= 1 inside)
    occupancy: float
    marker_id: int = 0

    @property
    def offset_bearing_deg(self) -> float:
        return math.hypot(self.phi_u_deg, self.theta_v_deg)


@dataclass(frozen=True)
class ControllerInput:
    detection: TargetObservation | None
    gimbal: GimbalState
    zoom: float
    active_stream: str
    motor_stopped: bool = False
    ground_contact: bool = False
    dt: float = 0.05


@dataclass(frozen=True)
class ControllerState:
    mode: Mode = Mode.STATIC_SEARCH
    resume_target: Mode | None = None
    elapsed_s: float = 0.0

    def __post_init__(self):
        if (self.mode is Mode.ZOOM_OUT_1) != (self.resume_target is not None):
            raise ValueError("resume_target is set exactly when the mode is ZoomOut1")


def observe(det: Detection, gimbal: GimbalState, rig: CameraRig, stream: str,
            zoom: float) -> TargetObservation:
    cam = rig.camera(stream)
    fov_u = fov_deg(cam, zoom, "horizontal")
    fov_v = fov_deg(cam, zoom, "vertical")
    obs = det.observation
    phi_u, theta_v = pixel_offset_angles(obs, fov_u, fov_v)
    phi, theta = compose_target_angles(gimbal, phi_u, theta_v)
    psi = wrap_deg(det.pad_yaw_in_image_deg + gimbal.pan_deg)
    frac = obs.s_p_frac
    occupancy = max(abs(obs.u - obs.u_c) / obs.u_c + frac,
                    abs(obs.v - obs.v_c) / obs.v_c + frac * obs.u_c / obs.v_c)
    return TargetObservation(phi, theta, psi, phi_u, theta_v, det.s_p_percent, occupancy,
                             det.marker_id)


def _search_duration(mode: Mode, cfg: ControllerConfig) -> float:
    return {Mode.STATIC_SEARCH: cfg.static_search_s, Mode.SEARCH_DOWN: cfg.search_down_s,
            Mode.SEARCH_UP: cfg.search_up_s}[mode]


_NEXT_SEARCH = {Mode.STATIC_SEARCH: Mode.SEARCH_DOWN, Mode.SEARCH_DOWN: Mode.SEARCH_UP,
                Mode.SEARCH_UP: Mode.STATIC_SEARCH}


def _gimbal_down(g: GimbalState, cfg: ControllerConfig) -> bool:
    return abs(g.tilt_deg + 90.0) <= cfg.gimbal_down_tol_deg and abs(g.pan_deg) <= cfg.gimbal_down_tol_deg


def _enter(mode: Mode, resume: Mode | None = None) -> ControllerState:
    return ControllerState(mode, resume, 0.0)


def transition(state: ControllerState, inp: ControllerInput, cfg: ControllerConfig) -> ControllerState:
    mode = state.mode
    det = inp.detection
    t = state.elapsed_s

    if mode is Mode.LANDED:
        return state
    if mode is Mode.COMMIT:
        return _enter(Mode.LANDED) if inp.motor_stopped else state

    if mode in SEARCH_MODES:
        if det is not None:
            return _enter(Mode.AIM_CAMERA)
        if t >= _search_duration(mode, cfg):
            return _enter(_NEXT_SEARCH[mode])
        return state

    if mode in RESUMABLE_MODES and det is None:
        return _enter(Mode.ZOOM_OUT_1, mode)

    if mode is Mode.AIM_CAMERA:
        if abs(det.phi_u_deg) < cfg.theta_c_deg and abs(det.theta_v_deg) < cfg.theta_c_deg:
            return _enter(Mode.AIM_DRONE)
    elif mode is Mode.AIM_DRONE:
        if abs(det.phi_deg) < cfg.theta_d_deg:
            return _enter(Mode.APPROACH)
    elif mode is Mode.APPROACH:
        if abs(det.theta_deg + 90.0) < cfg.theta_a_deg:
            return _enter(Mode.YAW_ALIGN)
    elif mode is Mode.YAW_ALIGN:
        if abs(det.psi_deg) < cfg.theta_y_deg:
            return _enter(Mode.HORIZONTAL_ALIGNMENT)
    elif mode is Mode.HORIZONTAL_ALIGNMENT:
        if _gimbal_down(inp.gimbal, cfg) and det.offset_bearing_deg < cfg.theta_h_deg:
            return _enter(Mode.DESCENT)
    elif mode is Mode.DESCENT:
        if det is None:
            return _enter(Mode.ZOOM_OUT_2)
        if inp.zoom <= cfg.z_min and det.s_p_percent >= cfg.s_max_percent:
            return _enter(Mode.COMMIT)
        if det.offset_bearing_deg > cfg.descent_realign_factor * cfg.theta_h_deg:
            return _enter(Mode.HORIZONTAL_ALIGNMENT)
    elif mode is Mode.ZOOM_OUT_1:
        if det is not None:
            return _enter(state.resume_target)
        if t >= cfg.zoom_out_1_timeout_s:
            return _enter(Mode.STATIC_SEARCH)
    elif mode is Mode.ZOOM_OUT_2:
        if det is not None:
            return _enter(Mode.HORIZONTAL_ALIGNMENT)
        if t >= cfg.zoom_out_2_timeout_s:
            return _enter(Mode.ASCENT)
    elif mode is Mode.ASCENT:
        if det is not None:
            return _enter(Mode.HORIZONTAL_ALIGNMENT)
        if t >= cfg.ascent_timeout_s:
            return _enter(Mode.STATIC_SEARCH)
    return state


def _clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def search_yaw_rate(inp: ControllerInput, cfg: ControllerConfig, rig: CameraRig) -> float:
    """Clockwise search rate, slowed so successive tilt sweeps overlap horizontally."""
    fov_u = fov_deg(rig.camera(inp.active_stream), inp.zoom, "horizontal")
    revisit = cfg.search_down_s + cfg.search_up_s
    return min(cfg.search_yaw_rate_dps, cfg.search_overlap * fov_u / revisit)


def _sweep(inp: ControllerInput, target_tilt: float, duration: float, cfg: ControllerConfig) -> GimbalCommand:
    rate = (cfg.search_tilt_high_deg - cfg.search_tilt_low_deg) / duration
    g = inp.gimbal
    tilt_rate = _clamp((target_tilt - g.tilt_deg) / inp.dt, -rate, rate)
    pan_rate = -cfg.k_gimbal * g.pan_deg
    return GimbalCommand("rate", pan_rate, tilt_rate)


def _track(det: TargetObservation, yaw_rate: float, cfg: ControllerConfig) -> GimbalCommand:
    # yaw feed-forward keeps the marker steady while the body turns
    return GimbalCommand("rate", cfg.k_gimbal * det.phi_u_deg - yaw_rate, cfg.k_gimbal * det.theta_v_deg)


_LOOK_DOWN = GimbalCommand("angle", 0.0, -90.0)


def control_signals(state: ControllerState, inp: ControllerInput, cfg: ControllerConfig,
                    rig: CameraRig) -> CommandSet:
    """Velocity, yaw and gimbal commands for the current mode (zoom left at 'none')."""
    mode = state.mode
    det = inp.detection
    if mode is Mode.STATIC_SEARCH:
        cmd = CommandSet(gimbal=GimbalCommand("angle", 0.0, cfg.search_static_tilt_deg))
    elif mode is Mode.SEARCH_DOWN:
        cmd = CommandSet(yaw_rate_dps=search_yaw_rate(inp, cfg, rig),
                         gimbal=_sweep(inp, cfg.search_tilt_low_deg, cfg.search_down_s, cfg))
    elif mode is Mode.SEARCH_UP:
        cmd = CommandSet(yaw_rate_dps=search_yaw_rate(inp, cfg, rig),
                         gimbal=_sweep(inp, cfg.search_tilt_high_deg, cfg.search_up_s, cfg))
    elif mode is Mode.AIM_CAMERA:
        # on first sight, point straight at the marker by angle
        pan = _clamp(det.phi_deg, *rig.pan_limits_deg)
        tilt = _clamp(det.theta_deg, *rig.tilt_limits_deg)
        cmd = CommandSet(gimbal=GimbalCommand("angle", pan, tilt))
    elif mode is Mode.AIM_DRONE:
        yaw = _clamp(cfg.k_yaw * det.phi_deg, *cfg.limits.yaw_rate)
        cmd = CommandSet(yaw_rate_dps=yaw, gimbal=_track(det, yaw, cfg))
    elif mode is Mode.APPROACH:
        forward = min(cfg.approach_speed_mps, cfg.k_forward_cos * math.cos(math.radians(det.theta_deg)))
        cmd = CommandSet(forward_mps=forward, right_mps=cfg.k_right * det.phi_deg,
                         gimbal=_track(det, 0.0, cfg))
    elif mode is Mode.YAW_ALIGN:
        cmd = CommandSet(yaw_rate_dps=cfg.k_yaw * det.psi_deg, gimbal=_LOOK_DOWN)
    elif mode in (Mode.HORIZONTAL_ALIGNMENT, Mode.DESCENT):
        # angular offset of the pad from the nadir, split into forward / right
        forward = cfg.k_horizontal * (det.theta_deg + 90.0)
        right = cfg.k_horizontal * det.phi_deg
        up = -cfg.descent_speed_mps if mode is Mode.DESCENT else 0.0
        cmd = CommandSet(forward_mps=forward, right_mps=right, up_mps=up, gimbal=_LOOK_DOWN)
    elif mode is Mode.COMMIT:
        cmd = CommandSet(up_mps=-cfg.commit_speed_mps, gimbal=_LOOK_DOWN, motor_stop=inp.ground_contact)
    elif mode is Mode.ASCENT:
        cmd = CommandSet(up_mps=cfg.ascent_speed_mps)
    else:
        # ZoomOut1, ZoomOut2, Landed: hold still, gimbal held
        cmd = CommandSet()
    return saturate(cmd, cfg.limits)


def zoom_mode(mode: Mode) -> str:
    if mode in TRACKING_MODES:
        return "auto"
    if mode in ZOOM_OUT_MODES:
        return "out"
    return "none"


def zoom_policy(mode: Mode, det: TargetObservation | None, z: float, stream: str,
                cfg: ControllerConfig, rig: CameraRig) -> tuple[ZoomCommand, str]:
    """Zoom command and stream switch for the given mode."""
    keep = (ZoomCommand(), "keep")
    policy = zoom_mode(mode)
    if stream == "ir" or policy == "none":
        return keep
    zcam = rig.zoom
    z_lo, z_hi = zcam.zoom_range
    if policy == "out":
        if stream == "zoom" and z <= z_lo * (1.0 + 1e-9):
            return ZoomCommand("set", rig.wide.zoom_range[0]), "wide"
        if stream == "zoom":
            return ZoomCommand("out"), "keep"
        return keep

    if det is None:
        return keep
    # over the pad, widen until the outermost marker is back in view; otherwise
    # the zoom stays parked on an inner marker and never reaches Z_min
    if (mode in (Mode.HORIZONTAL_ALIGNMENT, Mode.DESCENT) and det.marker_id > 0
            and stream == "zoom" and z > z_lo * (1.0 + 1e-9)):
        return ZoomCommand("out"), "keep"
    band_lo, band_hi = cfg.auto_band_percent
    s_p = det.s_p_percent
    # admissible zoom ratios k = Z_new / Z_now
    k_lo = band_lo / s_p
    k_hi = min(band_hi / s_p, cfg.zoom_fit_margin / det.occupancy)
    if k_lo <= 1.0 <= k_hi:
        return keep
    if k_hi < 1.0:
        k = k_hi / cfg.zoom_target_margin
    else:
        k = min(k_lo * cfg.zoom_target_margin, k_hi)
    focal = _effective_focal(rig, stream, z)
    want = focal * k
    if stream == "zoom":
        lo_focal = _effective_focal(rig, "zoom", z_lo)
        if want < lo_focal and focal * k_hi < lo_focal:
            return ZoomCommand("set", rig.wide.zoom_range[0]), "wide"
        target = _clamp(z * k, z_lo, z_hi)
        if target == z:
            return keep
        return ZoomCommand("set", target), "keep"
    # wide stream: move to the zoom camera once its widest setting still fits
    lo_focal = _effective_focal(rig, "zoom", z_lo)
    if k > 1.0 and lo_focal <= focal * k_hi:
        return ZoomCommand("set", z_lo), "zoom"
    return keep


def _effective_focal(rig: CameraRig, stream: str, z: float) -> float:
    """Focal length over sensor width; apparent marker size is proportional to it."""
    cam = rig.camera(stream)
    return z * cam.base_focal_length_mm / cam.sensor_width_mm


def tick(state: ControllerState, inp: ControllerInput, cfg: ControllerConfig,
         rig: CameraRig) -> tuple[ControllerState, CommandSet]:
    if inp.dt <= 0:
        raise ValueError("dt must be positive")
    new = transition(state, inp, cfg)
    cmd = control_signals(new, inp, cfg, rig)
    zoom_cmd, stream_cmd = zoom_policy(new.mode, inp.detection, inp.zoom, inp.active_stream, cfg, rig)
    if zoom_cmd.mode != "none" or stream_cmd != "keep":
        cmd = replace(cmd, zoom=zoom_cmd, stream=stream_cmd)
    if new is state:
        new = replace(state, elapsed_s=state.elapsed_s + inp.dt)
    return new, cmd


class LandingController:
    """Stateful wrapper around :func:`tick`."""

    def __init__(self, cfg: ControllerConfig, rig: CameraRig):
        self.cfg = cfg
        self.rig = rig
        self.state = ControllerState()

    @property
    def mode(self) -> Mode:
        return self.state.mode

    def tick(self, inp: ControllerInput) -> CommandSet:
        self.state, cmd = tick(self.state, inp, self.cfg, self.rig)
        return cmd
