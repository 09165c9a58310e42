import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from risbeam.geometry import (BeamDirection, GeometryError, ObservationPoint,
                              PhysicalConfig, beam_coords,
                              error_angles_to_beam_direction,
                              make_link_geometry, spherical_to_cartesian,
                              ue_position)

CFG = PhysicalConfig(frequency=140e9, power_noise_ratio=100.0,
                     reflection_magnitude=1.0, receiver_gain=1e4)


class TestPhysicalConfig:
    def test_derived_quantities(self):
        assert CFG.wavenumber * CFG.wavelength == pytest.approx(2 * math.pi, rel=1e-12)
        assert CFG.receiver_aperture == pytest.approx(
            CFG.receiver_gain * CFG.wavelength**2 / (4 * math.pi), rel=1e-12)
        # frozen reference values at 140 GHz / 40 dB gain
        assert CFG.wavenumber == pytest.approx(2934.1830307323544, rel=1e-12)
        assert CFG.receiver_aperture == pytest.approx(0.003649013503199093, rel=1e-12)

    @pytest.mark.parametrize("kwargs", [
        dict(frequency=-1.0, power_noise_ratio=1.0),
        dict(frequency=1e9, power_noise_ratio=0.0),
        dict(frequency=1e9, power_noise_ratio=1.0, reflection_magnitude=1.5),
        dict(frequency=1e9, power_noise_ratio=1.0, receiver_gain=0.0),
    ])
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(GeometryError):
            PhysicalConfig(**kwargs)


class TestLinkGeometry:
    def test_rayleigh_length_from_footprint(self):
        geom = make_link_geometry(CFG, d_ue=2.0, w_ris=0.25)
        assert geom.z_r == pytest.approx(CFG.wavenumber * 0.25**2 / 2, rel=1e-12)
        assert geom.z_r == pytest.approx(91.69321971038607, rel=1e-12)

    def test_footprint_from_ap_route(self):
        # w^2 = 8 d_ap^2 / G_ap, and z_r = 4 k d_ap^2 / G_ap = k w^2 / 2
        geom = make_link_geometry(CFG, d_ue=2.0, d_ap=5.0, g_ap=1000.0)
        assert geom.w_ris == pytest.approx(math.sqrt(8 * 25 / 1000.0), rel=1e-12)
        assert geom.z_r == pytest.approx(4 * CFG.wavenumber * 25 / 1000.0, rel=1e-12)

    def test_both_routes_must_agree(self):
        w = math.sqrt(8 * 25 / 1000.0)
        geom = make_link_geometry(CFG, d_ue=2.0, w_ris=w, d_ap=5.0, g_ap=1000.0)
        assert geom.w_ris == w
        with pytest.raises(GeometryError, match="inconsistent footprint"):
            make_link_geometry(CFG, d_ue=2.0, w_ris=1.01 * w, d_ap=5.0, g_ap=1000.0)

    @pytest.mark.parametrize("kwargs,match", [
        (dict(d_ue=2.0), "either w_ris"),
        (dict(d_ue=0.0, w_ris=0.25), "d_ue"),
        (dict(d_ue=2.0, w_ris=-0.1), "w_ris"),
        (dict(d_ue=2.0, w_ris=0.25, theta_ue=math.pi / 2), "theta_ue"),
        (dict(d_ue=2.0, w_ris=0.25, phi_ue=0.3), "phi_ue"),
    ])
    def test_validation(self, kwargs, match):
        with pytest.raises(GeometryError, match=match):
            make_link_geometry(CFG, **kwargs)


class TestSphericalToCartesian:
    def test_on_axis(self):
        p = spherical_to_cartesian(2.0, 0.0, 0.0)
        assert (p.x, p.y, p.z) == (0.0, 0.0, 2.0)

    def test_axis_permutation(self):
        p = spherical_to_cartesian(2.0, math.radians(90), math.radians(90))
        assert p.x == pytest.approx(0.0, abs=1e-15)
        assert p.y == pytest.approx(2.0, rel=1e-12)
        assert p.z == pytest.approx(0.0, abs=1e-15)

    def test_30_degrees(self):
        p = spherical_to_cartesian(2.0, math.radians(30), 0.0)
        assert p.x == pytest.approx(1.0, rel=1e-12)
        assert p.y == 0.0
        assert p.z == pytest.approx(1.7320508075688774, rel=1e-12)

    def test_rejects_negative_distance(self):
        with pytest.raises(GeometryError):
            spherical_to_cartesian(-0.1, 0.0, 0.0)

    @settings(max_examples=200)
    @given(d=st.floats(0.01, 100.0),
           theta=st.floats(1e-3, math.pi / 2 - 1e-3),
           phi=st.floats(-math.pi + 1e-9, math.pi))
    def test_round_trip(self, d, theta, phi):
        p = spherical_to_cartesian(d, theta, phi)
        assert p.r == pytest.approx(d, rel=1e-10)
        assert p.theta == pytest.approx(theta, abs=1e-10)
        assert p.phi == pytest.approx(phi, abs=1e-10)


class TestBeamCoords:
    def test_aimed_at_ue_collapses(self):
        for theta_deg in (0.0, 15.0, 45.0, 80.0):
            geom = make_link_geometry(CFG, d_ue=2.0, w_ris=0.25,
                                      theta_ue=math.radians(theta_deg))
            b = BeamDirection(geom.theta_ue, geom.phi_ue)
            x_b, y_b, z_b = beam_coords(ue_position(geom), b)
            assert x_b == pytest.approx(0.0, abs=1e-12)
            assert y_b == pytest.approx(0.0, abs=1e-12)
            assert z_b == pytest.approx(2.0, rel=1e-12)

    def test_ris_center_stays_origin(self):
        p = ObservationPoint(0.0, 0.0, 0.0)
        b = BeamDirection(math.radians(37), math.radians(110))
        assert beam_coords(p, b) == (0.0, 0.0, 0.0)

    def test_tilted_derived_case(self):
        # p=(0,0,1), beam at 45 deg elevation in the x-z plane
        x_b, y_b, z_b = beam_coords(ObservationPoint(0, 0, 1),
                                    BeamDirection(math.radians(45), 0.0))
        assert z_b == pytest.approx(math.sqrt(2), rel=1e-12)
        assert x_b == pytest.approx(-1.0, rel=1e-12)
        assert y_b == 0.0

    def test_beam_aimed_at_random_points(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            d = rng.uniform(0.1, 50.0)
            theta = rng.uniform(0.0, math.pi / 2 - 1e-3)
            phi = rng.uniform(-math.pi + 1e-12, math.pi)
            p = spherical_to_cartesian(d, theta, phi)
            x_b, y_b, z_b = beam_coords(p, BeamDirection(theta, phi))
            assert abs(x_b) < 1e-10 * max(1.0, d)
            assert abs(y_b) < 1e-10 * max(1.0, d)
            assert z_b == pytest.approx(d, rel=1e-10)

    def test_grazing_beam_rejected(self):
        with pytest.raises(GeometryError):
            BeamDirection(math.pi / 2, 0.0)


class TestErrorAngles:
    def test_zero_error_recovers_ue_direction(self):
        b = error_angles_to_beam_direction(math.radians(30), 0.0, 0.0)
        assert b.theta == pytest.approx(math.radians(30), rel=1e-15)
        assert b.phi == 0.0

    def test_in_plane_errors_add_exactly(self):
        for theta_deg, dx_deg in [(45.0, 2.0), (0.0, 5.0), (10.0, -3.0), (80.0, 9.0)]:
            b = error_angles_to_beam_direction(
                math.radians(theta_deg), math.radians(dx_deg), 0.0)
            assert b.theta == pytest.approx(math.radians(theta_deg + dx_deg), abs=1e-12)
            assert b.phi == pytest.approx(0.0, abs=1e-15)

    def test_broadside_normal_error(self):
        # at theta_ue = 0 a pure normal-plane error tips the beam sideways
        b = error_angles_to_beam_direction(0.0, 0.0, math.radians(5))
        assert b.theta == pytest.approx(math.radians(5), rel=1e-12)
        assert b.phi == pytest.approx(math.radians(90), rel=1e-12)

    def test_negative_in_plane_error_flips_azimuth(self):
        b = error_angles_to_beam_direction(0.0, math.radians(-2), 0.0)
        assert b.theta == pytest.approx(math.radians(2), rel=1e-12)
        assert b.phi == pytest.approx(math.pi, rel=1e-12)

    def test_rejects_backward_beam(self):
        with pytest.raises(GeometryError):
            error_angles_to_beam_direction(math.radians(80), math.radians(15), 0.0)

    def test_constraint_residuals_on_grid(self):
        theta = np.deg2rad(np.linspace(0, 60, 100))[:, None, None]
        dx = np.deg2rad(np.linspace(-10, 10, 100))[None, :, None]
        dy = np.deg2rad(np.linspace(-10, 10, 100))[None, None, :]
        b = error_angles_to_beam_direction(theta, dx, dy)
        r1 = np.sin(b.theta) * np.cos(b.phi) - np.sin(theta + dx) * np.cos(dy)
        r2 = np.sin(b.theta) * np.sin(b.phi) - np.sin(dy)
        r3 = np.cos(b.theta) - np.cos(theta + dx) * np.cos(dy)
        assert np.max(np.abs(r1)) <= 1e-12
        assert np.max(np.abs(r2)) <= 1e-12
        assert np.max(np.abs(r3)) <= 1e-12


class TestBeamDirection:
    def test_normalization_wraps_negative_elevation(self):
        b = BeamDirection.from_angles(-0.2, 0.5)
        assert b.theta == pytest.approx(0.2)
        assert b.phi == pytest.approx(0.5 - math.pi)  # 0.5 + pi wrapped into (-pi, pi]

    def test_azimuth_range_enforced(self):
        with pytest.raises(GeometryError):
            BeamDirection(0.1, -math.pi)
        b = BeamDirection.from_angles(0.1, 3 * math.pi)
        assert b.phi == pytest.approx(math.pi)
