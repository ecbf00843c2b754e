from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from fiducial_landing.geometry import (
    CameraModel, GimbalState, PixelObservation, body_direction, bearing_from_body,
    compose_target_angles, fov_deg, pixel_offset_angles, relative_yaw, wrap_deg,
)

CAM = CameraModel("zoom", 7.68, 4.32, 4.5, (2.0, 23.0))
angles = st.floats(-1e4, 1e4, allow_nan=False)


class TestWrap:
    @pytest.mark.parametrize("angle, expected", [
        (0.0, 0.0), (180.0, -180.0), (-180.0, -180.0), (190.0, -170.0),
        (-190.0, 170.0), (540.0, -180.0), (359.0, -1.0),
    ])
    def test_values(self, angle, expected):
        assert wrap_deg(angle) == pytest.approx(expected)

    @given(angles)
    def test_range_and_congruence(self, a):
        w = wrap_deg(a)
        assert -180.0 <= w < 180.0
        assert math.isclose(math.remainder(w - a, 360.0), 0.0, abs_tol=1e-9)


class TestCameraModel:
    def test_rejects_nonpositive_sizes(self):
        with pytest.raises(ValueError):
            CameraModel("bad", 0.0, 4.0, 4.5)

    def test_rejects_inverted_zoom_range(self):
        with pytest.raises(ValueError, match="zoom range"):
            CameraModel("bad", 7.0, 4.0, 4.5, (3.0, 2.0))

    def test_properties(self):
        assert CAM.zoomable
        assert not CameraModel("w", 7.0, 4.0, 4.5).zoomable
        assert CAM.center_px == (960.0, 540.0)


class TestFov:
    def test_known_value(self):
        # 2*atan(7.68 / 18) = 46.2126537165 deg (mpmath, 30 digits)
        assert fov_deg(CAM, 2.0) == pytest.approx(2 * math.degrees(math.atan(7.68 / 18.0)), rel=1e-12)
        assert fov_deg(CAM, 2.0) == pytest.approx(46.2126537165, abs=1e-9)

    def test_vertical_uses_sensor_height(self):
        assert fov_deg(CAM, 2.0, "vertical") < fov_deg(CAM, 2.0, "horizontal")

    def test_zoom_narrows(self):
        assert fov_deg(CAM, 23.0) < fov_deg(CAM, 10.0) < fov_deg(CAM, 2.0)

    @pytest.mark.parametrize("zoom", [1.0, 23.5])
    def test_zoom_out_of_range(self, zoom):
        with pytest.raises(ValueError, match="outside range"):
            fov_deg(CAM, zoom)

    def test_unknown_axis(self):
        with pytest.raises(ValueError):
            fov_deg(CAM, 2.0, "diagonal")


class TestPixelOffset:
    def test_centre_is_zero(self):
        assert pixel_offset_angles(PixelObservation(960, 540, 960, 540, 0.1), 40, 30) == (0.0, 0.0)

    def test_right_edge_is_half_fov(self):
        phi_u, _ = pixel_offset_angles(PixelObservation(1920, 540, 960, 540, 0.1), 40, 30)
        assert phi_u == pytest.approx(20.0)

    def test_low_in_frame_is_negative_tilt(self):
        _, theta_v = pixel_offset_angles(PixelObservation(960, 1080, 960, 540, 0.1), 40, 30)
        assert theta_v == pytest.approx(-15.0)

    def test_observation_validation(self):
        with pytest.raises(ValueError, match="outside the frame"):
            PixelObservation(2000, 540, 960, 540, 0.1)
        with pytest.raises(ValueError):
            PixelObservation(960, 540, 960, 540, 0.0)


class TestCompose:
    def test_adds_offsets(self):
        assert compose_target_angles(GimbalState(10.0, -30.0), 5.0, -4.0) == (15.0, -34.0)

    def test_pan_wraps(self):
        phi, _ = compose_target_angles(GimbalState(175.0, 0.0), 10.0, 0.0)
        assert phi == pytest.approx(-175.0)

    def test_relative_yaw(self):
        assert relative_yaw(350.0, 10.0) == pytest.approx(20.0)
        assert relative_yaw(10.0, 350.0) == pytest.approx(-20.0)


class TestBodyFrame:
    @pytest.mark.parametrize("vec, expected", [
        ((1, 0, 0), (0.0, 0.0)),
        ((0, 0, -1), (0.0, -90.0)),
        ((0, 1, 0), (90.0, 0.0)),
        ((1, 0, -1), (0.0, -45.0)),
        ((-1, 0, -1), (0.0, -135.0)),
    ])
    def test_bearing(self, vec, expected):
        assert bearing_from_body(*vec) == pytest.approx(expected)

    @given(st.floats(-89.9, 89.9), st.floats(-179.9, 179.9))
    def test_direction_roundtrip(self, pan, tilt):
        f, r, u = body_direction(pan, tilt)
        assert math.isclose(f * f + r * r + u * u, 1.0, rel_tol=1e-12)
        p2, t2 = bearing_from_body(f, r, u)
        assert p2 == pytest.approx(pan, abs=1e-9)
        assert wrap_deg(t2 - tilt) == pytest.approx(0.0, abs=1e-9)

    def test_nadir_is_regular(self):
        # a small sideways offset below the drone keeps tilt near -90 instead of flipping
        pan, tilt = bearing_from_body(0.0, 0.01, -10.0)
        assert tilt == pytest.approx(-90.0)
        assert pan == pytest.approx(math.degrees(math.atan(0.001)))
