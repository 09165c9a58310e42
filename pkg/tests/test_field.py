import math

import numpy as np
import pytest

from risbeam import analytic
from risbeam.analytic import ErrorPlane, MisalignmentRegime
from risbeam.field import power_density, snr_at_point, snr_at_ue
from risbeam.geometry import (BeamDirection, ObservationPoint, PhysicalConfig,
                              make_link_geometry, spherical_to_cartesian,
                              ue_position)

CFG = PhysicalConfig(frequency=140e9, power_noise_ratio=100.0,
                     reflection_magnitude=1.0, receiver_gain=1e4)
GEOM = make_link_geometry(CFG, d_ue=2.0, w_ris=0.25)


def density_oracle(cfg, geom, theta_b, phi_b, p):
    """Straight transcription of the tilted-beam density, unsimplified.

    Keeps the raw 1/(1 + z_r^2 cos^4/z_b^2) tilt factor, so it is only
    valid away from z_b = 0; used to cross-check the production form.
    """
    z_b = p.z / math.cos(theta_b)
    x_b = p.x - z_b * math.sin(theta_b) * math.cos(phi_b)
    y_b = p.y - z_b * math.sin(theta_b) * math.sin(phi_b)
    c4 = math.cos(theta_b) ** 4
    a = 1 + z_b**2 / geom.z_r**2
    bb = 1 + z_b**2 / (geom.z_r**2 * c4)
    pref = (2 * cfg.power_noise_ratio * cfg.reflection_magnitude**2
            / (math.pi * geom.w_ris**2)) / math.sqrt(a * bb)
    proj = (x_b * math.cos(phi_b) + y_b * math.sin(phi_b)) ** 2
    exponent = -(cfg.wavenumber / geom.z_r) * (
        (x_b**2 + y_b**2) / a
        - (1 - c4) * proj / (a * (1 + geom.z_r**2 * c4 / z_b**2)))
    return pref * math.exp(exponent)


class TestPowerDensity:
    def test_peak_at_ris_center(self):
        p = ObservationPoint(0.0, 0.0, 0.0)
        b = BeamDirection(math.radians(33), math.radians(-50))
        expected = 2 * 100.0 / (math.pi * 0.25**2)
        assert power_density(CFG, GEOM, b, p) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(1018.5916357881302, rel=1e-12)

    def test_matches_unsimplified_oracle(self):
        rng = np.random.default_rng(99)
        for _ in range(300):
            theta_b = rng.uniform(1e-3, math.pi / 2 - 1e-2)
            phi_b = rng.uniform(-math.pi + 1e-9, math.pi)
            p = spherical_to_cartesian(rng.uniform(0.1, 30.0),
                                       rng.uniform(0.0, math.pi / 2 - 1e-2),
                                       rng.uniform(-math.pi + 1e-9, math.pi))
            got = power_density(CFG, GEOM, BeamDirection(theta_b, phi_b), p)
            assert got == pytest.approx(density_oracle(CFG, GEOM, theta_b, phi_b, p),
                                        rel=1e-12)

    def test_total_at_ris_plane(self):
        # z = 0 with a tilted beam: the rewritten tilt term has limit 0
        p = ObservationPoint(0.3, -0.2, 0.0)
        b = BeamDirection(math.radians(40), math.radians(10))
        got = power_density(CFG, GEOM, b, p)
        assert np.isfinite(got)
        # limit of the oracle as z -> 0+
        eps = density_oracle(CFG, GEOM, math.radians(40), math.radians(10),
                             ObservationPoint(0.3, -0.2, 1e-9))
        assert got == pytest.approx(eps, rel=1e-6)

    def test_even_under_joint_sign_flip(self):
        # (x_b, y_b) -> (-x_b, -y_b) keeps the density: mirror the offsets
        b = BeamDirection(math.radians(20), math.radians(45))
        base = spherical_to_cartesian(3.0, math.radians(20), math.radians(45))
        dx, dy = 0.05, -0.02
        p_plus = ObservationPoint(base.x + dx, base.y + dy, base.z)
        p_minus = ObservationPoint(base.x - dx, base.y - dy, base.z)
        assert power_density(CFG, GEOM, b, p_plus) == pytest.approx(
            power_density(CFG, GEOM, b, p_minus), rel=1e-12)


class TestSnrAtUe:
    def test_default_operating_point(self):
        assert snr_at_ue(CFG, GEOM) == pytest.approx(3.7150871530576315, rel=1e-12)

    def test_equals_snr_at_point_when_aimed(self):
        for theta_deg in (0.0, 25.0, 60.0):
            geom = make_link_geometry(CFG, d_ue=2.0, w_ris=0.25,
                                      theta_ue=math.radians(theta_deg))
            b = BeamDirection(geom.theta_ue, geom.phi_ue)
            aimed = snr_at_point(CFG, geom, b, ue_position(geom))
            assert aimed == pytest.approx(snr_at_ue(CFG, geom), rel=1e-12)

    def test_close_range_limit(self):
        geom = make_link_geometry(CFG, d_ue=1e-9, w_ris=0.25)
        expected = (2 * 100.0 * CFG.receiver_aperture) / (math.pi * 0.25**2)
        assert snr_at_ue(CFG, geom) == pytest.approx(expected, rel=1e-9)

    def test_decreases_with_steering_angle(self):
        geom60 = make_link_geometry(CFG, d_ue=2.0, w_ris=0.25,
                                    theta_ue=math.radians(60))
        assert snr_at_ue(CFG, geom60) < snr_at_ue(CFG, GEOM)

    def test_equals_alpha_for_random_configs(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            cfg = PhysicalConfig(frequency=rng.uniform(100e9, 300e9),
                                 power_noise_ratio=rng.uniform(1.0, 1e3),
                                 reflection_magnitude=rng.uniform(0.1, 1.0),
                                 receiver_gain=rng.uniform(10.0, 1e5))
            geom = make_link_geometry(cfg, d_ue=rng.uniform(0.5, 30.0),
                                      w_ris=rng.uniform(0.02, 0.5),
                                      theta_ue=rng.uniform(0.0, math.radians(80)))
            params = analytic.closed_form_params(
                cfg, geom, MisalignmentRegime(ErrorPlane.IN_PLANE, 0.01))
            assert snr_at_ue(cfg, geom) == pytest.approx(params.alpha, rel=1e-12)


class TestSnrAtPoint:
    def test_maximum_over_random_directions(self):
        rng = np.random.default_rng(31415)
        ue = ue_position(GEOM)
        peak = snr_at_ue(CFG, GEOM)
        theta = rng.uniform(0.0, math.pi / 2 - 1e-6, 10_000)
        phi = rng.uniform(-math.pi + 1e-12, math.pi, 10_000)
        values = snr_at_point(CFG, GEOM, BeamDirection(theta, phi), ue)
        assert np.all(values <= peak + 1e-12)

    def test_small_error_agrees_with_closed_form(self):
        params = analytic.closed_form_params(
            CFG, GEOM, MisalignmentRegime(ErrorPlane.IN_PLANE, 0.01))
        b = BeamDirection(math.radians(1.0), 0.0)
        exact = snr_at_point(CFG, GEOM, b, ue_position(GEOM))
        approx = analytic.snr_tilde(params, math.radians(1.0))
        assert exact == pytest.approx(3.5730567454929768, rel=1e-12)
        assert abs(exact - approx) / params.alpha < 0.01

    def test_expansion_order(self):
        # closed-form error shrinks at least cubically in the error angle
        params = analytic.closed_form_params(
            CFG, GEOM, MisalignmentRegime(ErrorPlane.IN_PLANE, 0.01))
        ue = ue_position(GEOM)
        deltas = np.deg2rad([0.1, 0.2, 0.5])
        errs = []
        for d in deltas:
            exact = snr_at_point(CFG, GEOM, BeamDirection(d, 0.0), ue)
            errs.append(abs(exact - analytic.snr_tilde(params, d)) / params.alpha)
        slope = np.polyfit(np.log(deltas), np.log(errs), 1)[0]
        assert slope >= 2.9
        c_fit = max(e / d**3 for e, d in zip(errs, deltas))
        assert all(e <= c_fit * d**3 * (1 + 1e-12) for e, d in zip(errs, deltas))
