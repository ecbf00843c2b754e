from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from fiducial_landing.geometry import GimbalState
from fiducial_landing.world import (
    CommandSet, DroneState, GimbalCommand, PadState, SaturationLimits, WindGust, WorldConfig,
    WorldState, ZoomCommand, body_to_world, saturate, step, touchdown_error, within_limits,
)

CFG = WorldConfig()


def world_at(z=10.0, yaw=0.0, **kw):
    return WorldState(0.0, DroneState((0.0, 0.0, z), yaw), GimbalState(), PadState(), **kw)


def run(world, cmd, seconds, dt=0.05):
    for _ in range(round(seconds / dt)):
        world = step(world, cmd, dt, CFG)
    return world


class TestSaturation:
    def test_right_bound_is_symmetric(self):
        assert SaturationLimits().right == (-1.0, 1.0)

    def test_clamps_each_axis(self):
        cmd = saturate(CommandSet(5.0, -3.0, -2.0, 40.0))
        assert (cmd.forward_mps, cmd.right_mps, cmd.up_mps, cmd.yaw_rate_dps) == (2.0, -1.0, -0.5, 10.0)

    def test_identity_inside(self):
        cmd = CommandSet(1.0, 0.5, 0.2, -3.0)
        assert saturate(cmd) is cmd

    def test_rejects_nan(self):
        with pytest.raises(ValueError, match="non-finite"):
            saturate(CommandSet(math.nan))

    @given(*(st.floats(-1e6, 1e6) for _ in range(4)))
    def test_always_within(self, f, r, u, y):
        assert within_limits(saturate(CommandSet(f, r, u, y)))


class TestKinematics:
    def test_body_to_world(self):
        assert body_to_world(0.0, 1.0, 0.0) == pytest.approx((0.0, 1.0))
        assert body_to_world(90.0, 1.0, 0.0) == pytest.approx((1.0, 0.0))
        assert body_to_world(90.0, 0.0, 1.0) == pytest.approx((0.0, -1.0))

    def test_velocity_lag_converges(self):
        w = run(world_at(), CommandSet(forward_mps=2.0), 5.0)
        assert w.drone.velocity[1] == pytest.approx(2.0, rel=1e-3)
        # first-order lag: after one time constant about 63 % of the step
        w1 = run(world_at(), CommandSet(forward_mps=2.0), CFG.tau_s, dt=0.005)
        assert w1.drone.velocity[1] == pytest.approx(2.0 * (1 - math.exp(-1)), rel=0.01)

    def test_yaw_integrates_and_wraps(self):
        w = run(world_at(yaw=170.0), CommandSet(yaw_rate_dps=10.0), 2.0)
        assert w.drone.yaw_deg == pytest.approx(-170.0)

    def test_dt_bounds(self):
        with pytest.raises(ValueError):
            step(world_at(), CommandSet(), 0.0)
        with pytest.raises(ValueError):
            step(world_at(), CommandSet(), 0.3)

    def test_gust_displaces_only_while_active(self):
        gust = WindGust(0.0, 1.0, (0.5, 0.0, 0.0))
        w = run(world_at(gusts=(gust,)), CommandSet(), 3.0)
        assert w.drone.position[0] == pytest.approx(0.5)
        assert w.drone.velocity == (0.0, 0.0, 0.0)


class TestTouchdown:
    def test_lands_and_stops(self):
        w = run(world_at(z=0.5), CommandSet(up_mps=-0.5), 3.0)
        assert w.drone.on_ground and w.drone.position[2] == 0.0
        assert w.drone.velocity == (0.0, 0.0, 0.0)

    def test_error_requires_touchdown(self):
        with pytest.raises(RuntimeError):
            touchdown_error(world_at())

    def test_error_is_horizontal_offset(self):
        w = WorldState(0.0, DroneState((3.0, 4.0, 0.0), on_ground=True), GimbalState(), PadState())
        assert touchdown_error(w) == pytest.approx(5.0)

    def test_motor_stop_freezes(self):
        w = step(world_at(z=0.0), CommandSet(motor_stop=True), 0.05)
        assert not w.drone.motors_on
        w2 = step(w, CommandSet(up_mps=1.0), 0.05)
        assert w2.drone.position == w.drone.position and w2.t == pytest.approx(0.1)


class TestGimbalAndZoom:
    def test_angle_mode_slews_at_max_rate(self):
        w = step(world_at(), CommandSet(gimbal=GimbalCommand("angle", 0.0, -90.0)), 0.1)
        assert w.gimbal.tilt_deg == pytest.approx(-CFG.gimbal_rate_max_dps * 0.1)

    def test_limits(self):
        w = run(world_at(), CommandSet(gimbal=GimbalCommand("rate", 100.0, -100.0)), 5.0)
        assert w.gimbal.pan_deg == CFG.pan_limits_deg[1]
        assert w.gimbal.tilt_deg == CFG.tilt_limits_deg[0]

    def test_zoom_out_rate(self):
        w = run(world_at(zoom=16.0), CommandSet(zoom=ZoomCommand("out")), 2.0)
        assert w.zoom == pytest.approx(4.0)

    def test_zoom_set_is_slew_limited(self):
        w = run(world_at(zoom=2.0), CommandSet(zoom=ZoomCommand("set", 20.0)), 1.0)
        assert w.zoom == pytest.approx(3.0)
        w = run(w, CommandSet(zoom=ZoomCommand("set", 20.0)), 10.0)
        assert w.zoom == pytest.approx(20.0)

    def test_stream_switch_clamps_zoom(self):
        w = step(world_at(zoom=2.0), CommandSet(zoom=ZoomCommand("set", 1.0), stream="wide"), 0.05)
        assert (w.active_camera, w.zoom) == ("wide", 1.0)
        w = step(w, CommandSet(zoom=ZoomCommand("set", 2.0), stream="zoom"), 0.05)
        assert (w.active_camera, w.zoom) == ("zoom", 2.0)


class TestPad:
    def test_marker_count(self):
        with pytest.raises(ValueError, match="needs 1"):
            PadState(pad_type="active_ir", marker_sizes_m=(0.6, 0.2))

    def test_sizes_decreasing(self):
        with pytest.raises(ValueError, match="decreasing"):
            PadState(marker_sizes_m=(0.2, 0.8, 0.05))
