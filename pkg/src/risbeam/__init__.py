"""SNR statistics of a RIS-aided THz link under stochastic beam misalignment.

The package evaluates the exact tilted-Gaussian-beam field reflected by a
large intelligent surface, the closed-form statistics of the SNR when the
steering direction carries a Gaussian pointing error, and a deterministic
Monte-Carlo oracle that validates the closed forms against the full field
model.
"""
from .analytic import (ClosedFormParams, ErrorPlane, MisalignmentRegime,
                       RayleighLimit, asymptotic_params, cdf,
                       closed_form_params, mean, pdf, skewness, snr_tilde,
                       variance, zero_skew_sigma)
from .field import power_density, snr_at_point, snr_at_ue
from .geometry import (BeamDirection, GeometryError, LinkGeometry,
                       ObservationPoint, PhysicalConfig, beam_coords,
                       error_angles_to_beam_direction, make_link_geometry,
                       spherical_to_cartesian, ue_position)
from .montecarlo import (EmpiricalDistribution, Model, SamplerSpec,
                         ks_distance, sample)

__version__ = "0.1.0"

__all__ = [
    "BeamDirection", "ClosedFormParams", "EmpiricalDistribution",
    "ErrorPlane", "GeometryError", "LinkGeometry", "MisalignmentRegime",
    "Model", "ObservationPoint", "PhysicalConfig", "RayleighLimit",
    "SamplerSpec", "asymptotic_params", "beam_coords", "cdf",
    "closed_form_params", "error_angles_to_beam_direction", "ks_distance",
    "make_link_geometry", "mean", "pdf", "power_density", "sample",
    "skewness", "snr_at_point", "snr_at_ue", "snr_tilde",
    "spherical_to_cartesian", "ue_position", "variance", "zero_skew_sigma",
]
