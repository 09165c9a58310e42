"""Link geometry, angle conventions and coordinate transformations.

The RIS sits at the origin of a global Cartesian frame; the access point
illuminates it with a Gaussian beam whose footprint radius on the surface
is ``w_ris``, and the reflected beam propagates as a tilted Gaussian beam
along a steering direction given by elevation/azimuth angles.  All angles
are radians; degrees exist only at the CLI boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s


class GeometryError(ValueError):
    """Raised when a configuration or direction violates a physical constraint."""


@dataclass(frozen=True)
class PhysicalConfig:
    """Carrier and transceiver parameters shared by every evaluation.

    Parameters
    ----------
    frequency : float
        Carrier frequency [Hz].
    power_noise_ratio : float
        Transmit power over noise power density, P_t/N_o, linear.  The two
        quantities never appear separately, so only the ratio is stored.
    reflection_magnitude : float
        Common reflection-coefficient magnitude |R| of the surface, in [0, 1].
    receiver_gain : float
        Receiver antenna gain, linear.
    """

    frequency: float
    power_noise_ratio: float
    reflection_magnitude: float = 1.0
    receiver_gain: float = 1.0

    def __post_init__(self):
        if self.frequency <= 0:
            raise GeometryError("frequency must be positive")
        if self.power_noise_ratio <= 0:
            raise GeometryError("power_noise_ratio must be positive")
        if not 0.0 <= self.reflection_magnitude <= 1.0:
            raise GeometryError("reflection_magnitude must lie in [0, 1]")
        if self.receiver_gain <= 0:
            raise GeometryError("receiver_gain must be positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency

    @property
    def wavenumber(self) -> float:
        """Free-space wavenumber k_o = 2*pi/wavelength [rad/m]."""
        return 2.0 * math.pi / self.wavelength

    @property
    def receiver_aperture(self) -> float:
        """Effective receiver aperture A_r = G_r * lambda^2 / (4*pi) [m^2]."""
        return self.receiver_gain * self.wavelength**2 / (4.0 * math.pi)


@dataclass(frozen=True)
class LinkGeometry:
    """Resolved geometry of the AP-RIS-UE link.

    ``w_ris`` and ``z_r`` are always populated; the AP-side quantities are
    kept only when they were supplied (they never enter any computation,
    the footprint/Rayleigh pair already encodes the AP).
    """

    w_ris: float        # beam footprint radius on the surface [m]
    z_r: float          # Rayleigh length of the reflected beam [m]
    d_ue: float         # RIS-UE distance [m]
    theta_ue: float     # UE elevation [rad]
    phi_ue: float = 0.0  # UE azimuth, fixed at 0 (UE on the steering plane)
    d_ap: float | None = None
    g_ap: float | None = None
    theta_ap: float | None = None
    phi_ap: float | None = None


def make_link_geometry(cfg: PhysicalConfig, *, d_ue, theta_ue=0.0, w_ris=None,
                       d_ap=None, g_ap=None, phi_ue=0.0,
                       theta_ap=None, phi_ap=None) -> LinkGeometry:
    """Build a validated LinkGeometry from either footprint route.

    The footprint radius may be given directly (``w_ris``) or derived from
    the AP distance and gain through w^2 = 8*d_ap^2/G_ap.  If both routes
    are supplied they must agree to 1e-9 relative.
    """
    if w_ris is None and (d_ap is None or g_ap is None):
        raise GeometryError("either w_ris or the (d_ap, g_ap) pair is required")
    if d_ap is not None and d_ap <= 0:
        raise GeometryError("d_ap must be positive")
    if g_ap is not None and g_ap <= 0:
        raise GeometryError("g_ap must be positive")
    if d_ap is not None and g_ap is not None:
        w_derived = math.sqrt(8.0 * d_ap**2 / g_ap)
        if w_ris is None:
            w_ris = w_derived
        elif abs(w_ris**2 - w_derived**2) > 1e-9 * w_ris**2:
            raise GeometryError(
                f"inconsistent footprint: w_ris={w_ris} vs {w_derived} from (d_ap, g_ap)")
    if w_ris <= 0:
        raise GeometryError("w_ris must be positive")
    if d_ue <= 0:
        raise GeometryError("d_ue must be positive")
    if not abs(theta_ue) < math.pi / 2:
        raise GeometryError("theta_ue must satisfy |theta_ue| < pi/2")
    if phi_ue != 0.0:
        raise GeometryError("phi_ue must be 0 (UE lies on the steering plane)")
    z_r = cfg.wavenumber * w_ris**2 / 2.0
    return LinkGeometry(w_ris=w_ris, z_r=z_r, d_ue=d_ue, theta_ue=theta_ue,
                        phi_ue=phi_ue, d_ap=d_ap, g_ap=g_ap,
                        theta_ap=theta_ap, phi_ap=phi_ap)


@dataclass(frozen=True)
class BeamDirection:
    """Steering direction of the reflected beam.

    ``theta``/``phi`` may be scalars or equally shaped numpy arrays; every
    element must satisfy theta in [0, pi/2) and phi in (-pi, pi].
    """

    theta: object
    phi: object

    def __post_init__(self):
        th = np.asarray(self.theta)
        ph = np.asarray(self.phi)
        if not (np.all(th >= 0.0) and np.all(th < math.pi / 2)):
            raise GeometryError("beam elevation must lie in [0, pi/2)")
        if not (np.all(ph > -math.pi) and np.all(ph <= math.pi)):
            raise GeometryError("beam azimuth must lie in (-pi, pi]")

    @classmethod
    def from_angles(cls, theta, phi) -> "BeamDirection":
        """Normalize a raw (theta, phi) pair into the canonical ranges.

        A negative elevation denotes the same ray as (-theta, phi + pi).
        """
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        theta, phi = np.broadcast_arrays(theta, phi)
        neg = theta < 0
        theta = np.where(neg, -theta, theta)
        phi = np.where(neg, phi + math.pi, phi)
        # wrap to (-pi, pi]
        phi = phi - 2 * math.pi * np.ceil((phi - math.pi) / (2 * math.pi))
        if theta.ndim == 0:
            return cls(float(theta), float(phi))
        return cls(theta, phi)


@dataclass(frozen=True)
class ObservationPoint:
    """Cartesian observation point in the RIS-centered frame [m]."""

    x: float
    y: float
    z: float

    @property
    def r(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)

    @property
    def theta(self) -> float:
        return math.acos(self.z / self.r)

    @property
    def phi(self) -> float:
        return math.atan2(self.y, self.x)


def spherical_to_cartesian(d, theta, phi) -> ObservationPoint:
    """Place a point at distance d along elevation theta, azimuth phi.

    x = d sin(theta) cos(phi), y = d sin(theta) sin(phi), z = d cos(theta).
    """
    if d < 0:
        raise GeometryError("distance must be non-negative")
    return ObservationPoint(
        x=d * math.sin(theta) * math.cos(phi),
        y=d * math.sin(theta) * math.sin(phi),
        z=d * math.cos(theta),
    )


def ue_position(geom: LinkGeometry) -> ObservationPoint:
    """Cartesian UE location implied by the link geometry."""
    return spherical_to_cartesian(geom.d_ue, geom.theta_ue, geom.phi_ue)


def beam_coords(p: ObservationPoint, b: BeamDirection):
    """Coordinates of p in the non-orthogonal frame following the beam.

    z_b is the propagation distance along the beam axis; x_b, y_b stay
    parallel to the global x, y axes:

        z_b = z0 / cos(theta_b)
        x_b = x0 - z_b sin(theta_b) cos(phi_b)
        y_b = y0 - z_b sin(theta_b) sin(phi_b)

    Broadcasts over array-valued beam angles.
    """
    ct = np.cos(b.theta)
    z_b = p.z / ct
    x_b = p.x - z_b * np.sin(b.theta) * np.cos(b.phi)
    y_b = p.y - z_b * np.sin(b.theta) * np.sin(b.phi)
    return x_b, y_b, z_b


def error_angles_to_beam_direction(theta_ue, dtheta_x, dtheta_y) -> BeamDirection:
    """Exact beam direction produced by the two misalignment error angles.

    dtheta_x tilts the beam inside the steering plane, dtheta_y tilts it
    toward the plane normal.  The returned direction solves

        sin(theta_b) cos(phi_b) = sin(theta_ue + dtheta_x) cos(dtheta_y)
        sin(theta_b) sin(phi_b) = sin(dtheta_y)
        cos(theta_b)            = cos(theta_ue + dtheta_x) cos(dtheta_y)

    exactly, via theta_b = arccos(cos(theta_ue+dtheta_x) cos(dtheta_y)) and
    phi_b = atan2(sin(dtheta_y), sin(theta_ue+dtheta_x) cos(dtheta_y)).
    Well-defined at theta_ue = 0 for any dtheta_y with |dtheta_y| < pi/2.
    Accepts scalars or broadcastable arrays.
    """
    tx = np.asarray(theta_ue, dtype=float) + np.asarray(dtheta_x, dtype=float)
    dy = np.asarray(dtheta_y, dtype=float)
    ct = np.cos(tx) * np.cos(dy)
    if not np.all(ct > 0.0):
        raise GeometryError("beam leaves the forward half-space (cos(theta_b) <= 0)")
    theta_b = np.arccos(np.clip(ct, -1.0, 1.0))
    phi_b = np.arctan2(np.sin(dy), np.sin(tx) * np.cos(dy))
    # atan2 may return exactly -pi; the canonical azimuth range is (-pi, pi]
    phi_b = np.where(phi_b <= -math.pi, math.pi, phi_b)
    if theta_b.ndim == 0:
        return BeamDirection(float(theta_b), float(phi_b))
    return BeamDirection(theta_b, phi_b)
