"""Exact reflected-beam power density and SNR at arbitrary observation points.

This is the ground-truth physical model: the analytic module approximates
it for small pointing errors and the Monte-Carlo module samples it.  Power
densities carry the P_t/N_o normalization (P_t and N_o never appear
separately), so SNR = density * receiver aperture.
"""
from __future__ import annotations

import numpy as np

from .geometry import (BeamDirection, LinkGeometry, ObservationPoint,
                       PhysicalConfig, beam_coords, ue_position)


def power_density(cfg: PhysicalConfig, geom: LinkGeometry,
                  b: BeamDirection, p: ObservationPoint):
    """Power density of the tilted Gaussian beam at p, steered along b.

    The on-axis cross-section stays circular while the tilted one is
    elliptical, which the second exponent term accounts for.  That term is
    evaluated in a form multiplied through by z_b^2 so the expression stays
    finite on the whole forward half-space (including z_b = 0, where the
    raw form has a 1/z_b^2 denominator with limit 0).

    Broadcasts over array-valued beam angles; the result is in units of
    (W/m^2) * (P_t/N_o)/P_t, i.e. multiply by the receiver aperture to get
    a linear SNR.
    """
    x_b, y_b, z_b = beam_coords(p, b)
    c4 = np.cos(b.theta) ** 4
    spread = 1.0 + z_b**2 / geom.z_r**2
    spread_tilt = 1.0 + z_b**2 / (geom.z_r**2 * c4)
    prefactor = (2.0 * cfg.power_noise_ratio * cfg.reflection_magnitude**2
                 / (np.pi * geom.w_ris**2)) / np.sqrt(spread * spread_tilt)
    proj = x_b * np.cos(b.phi) + y_b * np.sin(b.phi)
    tilt_term = (1.0 - c4) * proj**2 * z_b**2 / (spread * (z_b**2 + geom.z_r**2 * c4))
    exponent = -(cfg.wavenumber / geom.z_r) * ((x_b**2 + y_b**2) / spread - tilt_term)
    return prefactor * np.exp(exponent)


def snr_at_point(cfg: PhysicalConfig, geom: LinkGeometry,
                 b: BeamDirection, p: ObservationPoint):
    """Linear SNR at observation point p for a beam steered along b."""
    return power_density(cfg, geom, b, p) * cfg.receiver_aperture


def snr_at_ue(cfg: PhysicalConfig, geom: LinkGeometry) -> float:
    """Linear SNR at the UE with the beam aimed exactly at it.

    With the beam on target the local beam coordinates collapse to
    x_b = y_b = 0, z_b = d_ue, the exponential factor becomes 1 and only
    the prefactor survives:

        SNR = 2 (P_t/N_o) |R|^2 A_r /
              [pi w^2 sqrt((1 + d^2/z_r^2)(1 + d^2/(z_r^2 cos^4(theta_ue))))]

    This is the maximum SNR over all steering directions.
    """
    d2 = geom.d_ue**2
    c4 = np.cos(geom.theta_ue) ** 4
    spread = 1.0 + d2 / geom.z_r**2
    spread_tilt = 1.0 + d2 / (geom.z_r**2 * c4)
    return (2.0 * cfg.power_noise_ratio * cfg.reflection_magnitude**2
            * cfg.receiver_aperture
            / (np.pi * geom.w_ris**2 * np.sqrt(spread * spread_tilt)))


def snr_with_errors(cfg: PhysicalConfig, geom: LinkGeometry,
                    dtheta_x, dtheta_y):
    """Exact SNR at the UE when the beam is mis-steered by the error angles.

    Convenience wrapper used by the Monte-Carlo sampler: converts the error
    angles into a beam direction and evaluates the SNR at the fixed UE
    position.  Accepts scalars or arrays.
    """
    from .geometry import error_angles_to_beam_direction

    b = error_angles_to_beam_direction(geom.theta_ue, dtheta_x, dtheta_y)
    return snr_at_point(cfg, geom, b, ue_position(geom))
