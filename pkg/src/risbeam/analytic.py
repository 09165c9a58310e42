"""Closed-form SNR statistics under Gaussian pointing errors.

For a small misalignment angle e along one of the two principal planes the
exact SNR is well approximated by

    SNR ~ alpha * exp(-slope * e^2),      e ~ N(0, sigma^2)

with alpha the aligned (peak) SNR and a regime-dependent curvature: for
errors inside the steering plane the slope grows with the steering angle,
for errors toward the plane normal it does not.  Every statistic of the
transformed variable (PDF, CDF, moments, skewness) then has a closed form,
and most depend on sigma and slope only through u = slope * sigma^2.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .geometry import LinkGeometry, PhysicalConfig


class ErrorPlane(enum.Enum):
    """Orientation of the pointing error relative to the steering plane."""
    IN_PLANE = "inplane"
    NORMAL = "normal"


class RayleighLimit(enum.Enum):
    """Asymptotic regimes of the footprint/distance ratio."""
    FAR = "far"    # z_r >> d_ue: wide footprint, weakly focused beam
    NEAR = "near"  # d_ue >> z_r: narrow footprint, strongly focused beam


@dataclass(frozen=True)
class MisalignmentRegime:
    """Which plane carries the Gaussian pointing error, and its spread."""

    plane: ErrorPlane
    sigma: float  # standard deviation of the error angle [rad]

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class ClosedFormParams:
    """(alpha, slope) pair that fully determines the SNR distribution."""

    alpha: float  # peak linear SNR, upper support bound
    slope: float  # Gaussian curvature of the SNR roll-off [rad^-2]

    def __post_init__(self):
        if self.alpha <= 0 or self.slope <= 0:
            raise ValueError("alpha and slope must be positive")


def closed_form_params(cfg: PhysicalConfig, geom: LinkGeometry,
                       regime: MisalignmentRegime) -> ClosedFormParams:
    """Peak SNR and roll-off slope for the requested misalignment plane.

    alpha = 2 (P_t/N_o) |R|^2 z_r^2 A_r /
            [pi w^2 sqrt((d^2 + z_r^2)(z_r^2 + d^2/cos^4(theta_ue)))]

    In-plane slope (depends on the steering angle):
        beta = (d^2 k z_r / cos^2(theta_ue)) / (z_r^2 + d^2/cos^4(theta_ue))
    Normal-plane slope (does not):
        zeta = k z_r d^2 / (z_r^2 + d^2)

    The two coincide at broadside (theta_ue = 0).
    """
    d2 = geom.d_ue**2
    z2 = geom.z_r**2
    c2 = math.cos(geom.theta_ue) ** 2
    alpha = (2.0 * cfg.power_noise_ratio * cfg.reflection_magnitude**2 * z2
             * cfg.receiver_aperture
             / (math.pi * geom.w_ris**2
                * math.sqrt((d2 + z2) * (z2 + d2 / c2**2))))
    if regime.plane is ErrorPlane.IN_PLANE:
        slope = (d2 * cfg.wavenumber * geom.z_r / c2) / (z2 + d2 / c2**2)
    else:
        slope = cfg.wavenumber * geom.z_r * d2 / (z2 + d2)
    return ClosedFormParams(alpha=alpha, slope=slope)


def asymptotic_params(cfg: PhysicalConfig, geom: LinkGeometry,
                      regime: MisalignmentRegime,
                      limit: RayleighLimit) -> ClosedFormParams:
    """Limiting (alpha, slope) for very wide or very narrow footprints.

    FAR  (z_r >> d_ue): alpha ~ 2 (P_t/N_o) |R|^2 A_r / (pi w^2),
                        beta ~ k d^2 / (z_r cos^2), zeta ~ k d^2 / z_r.
    NEAR (d_ue >> z_r): alpha ~ same prefactor * (z_r^2/d^2) cos^2,
                        beta ~ k z_r cos^2,        zeta ~ k z_r.

    The normal-plane slope is independent of the steering angle in both
    limits; the in-plane slope is not.
    """
    peak = (2.0 * cfg.power_noise_ratio * cfg.reflection_magnitude**2
            * cfg.receiver_aperture / (math.pi * geom.w_ris**2))
    c2 = math.cos(geom.theta_ue) ** 2
    k = cfg.wavenumber
    if limit is RayleighLimit.FAR:
        alpha = peak
        slope = k * geom.d_ue**2 / geom.z_r
        if regime.plane is ErrorPlane.IN_PLANE:
            slope /= c2
    else:
        alpha = peak * geom.z_r**2 / geom.d_ue**2 * c2
        slope = k * geom.z_r
        if regime.plane is ErrorPlane.IN_PLANE:
            slope *= c2
    return ClosedFormParams(alpha=alpha, slope=slope)


def snr_tilde(params: ClosedFormParams, dtheta):
    """Small-error SNR approximation alpha * exp(-slope * dtheta^2)."""
    return params.alpha * np.exp(-params.slope * np.asarray(dtheta, dtype=float) ** 2)


def pdf(params: ClosedFormParams, sigma: float, x):
    """Density of the approximate SNR on its open support (0, alpha).

    f(x) = (x/alpha)^(1/(2 slope sigma^2))
           / (sqrt(2 pi) sigma x slope sqrt(ln(alpha/x)/slope))

    Both endpoints carry integrable singularities, so values at x <= 0 or
    x >= alpha are rejected rather than extrapolated.
    """
    _check_sigma(sigma)
    x = np.asarray(x, dtype=float)
    if not (np.all(x > 0.0) and np.all(x < params.alpha)):
        raise ValueError("pdf support is the open interval (0, alpha)")
    log_ratio = _log_alpha_over_x(params.alpha, x)
    dens = ((x / params.alpha) ** (1.0 / (2.0 * params.slope * sigma**2))
            / (math.sqrt(2.0 * math.pi) * sigma * x * params.slope
               * np.sqrt(log_ratio / params.slope)))
    return dens if dens.ndim else float(dens)


def cdf(params: ClosedFormParams, sigma: float, x):
    """P(SNR <= x); clamps to 0 below the support and 1 above it.

    F(x) = 1 - erf( sqrt(ln(alpha/x)) / (sqrt(2 slope) sigma) )
    """
    _check_sigma(sigma)
    x = np.asarray(x, dtype=float)
    inside = (x > 0.0) & (x < params.alpha)
    log_ratio = _log_alpha_over_x(params.alpha, np.where(inside, x, params.alpha))
    val = 1.0 - erf(np.sqrt(log_ratio) / (math.sqrt(2.0 * params.slope) * sigma))
    out = np.where(x <= 0.0, 0.0, np.where(x >= params.alpha, 1.0, val))
    return out if out.ndim else float(out)


def raw_moment(params: ClosedFormParams, sigma: float, order: int) -> float:
    """E[SNR^m] = alpha^m / sqrt(1 + 2 m slope sigma^2)."""
    _check_sigma(sigma)
    u = params.slope * sigma**2
    return params.alpha**order / math.sqrt(1.0 + 2.0 * order * u)


def mean(params: ClosedFormParams, sigma: float) -> float:
    """Average SNR, alpha / sqrt(1 + 2 slope sigma^2)."""
    return raw_moment(params, sigma, 1)


def variance(params: ClosedFormParams, sigma: float) -> float:
    """SNR variance alpha^2 (1/sqrt(1+4u) - 1/(1+2u)), u = slope sigma^2.

    Evaluated in the cancellation-free form 4 u^2 / D(u) (see _var_core),
    which agrees with the textbook difference of the two raw moments but
    stays accurate as u -> 0.
    """
    _check_sigma(sigma)
    return params.alpha**2 * _var_core(params.slope * sigma**2)


def skewness(params: ClosedFormParams, sigma: float) -> float:
    """Third standardized moment of the SNR; depends on u = slope sigma^2 only.

    Negative values put the probability mass near the peak SNR, positive
    values near zero.  sigma = 0 is rejected: the closed form is 0/0 there
    (the limit is -2 sqrt(2), approached but never evaluated).
    """
    _check_sigma(sigma)
    return skewness_of_u(params.slope * sigma**2)


def _check_sigma(sigma):
    if sigma <= 0:
        raise ValueError("sigma must be positive")


def _log_alpha_over_x(alpha, x):
    """ln(alpha/x) for 0 < x <= alpha, stable at both ends.

    Near x = alpha the log1p form keeps full precision (log(alpha) - log(x)
    would cancel); far below it the plain difference avoids evaluating
    log1p at -1.
    """
    near_peak = x > 0.5 * alpha
    rel = np.maximum((x - alpha) / alpha, -0.75)  # clipped values are unused
    return np.where(near_peak, -np.log1p(rel), np.log(alpha) - np.log(x))


def _var_core(u: float) -> float:
    """(1+4u)^(-1/2) - (1+2u)^(-1), rewritten as 4u^2/D with

    D = ((1+2u) + sqrt(1+4u)) (1+2u) sqrt(1+4u)

    which avoids the subtractive cancellation of the raw form for small u.
    """
    r4 = math.sqrt(1.0 + 4.0 * u)
    return 4.0 * u**2 / (((1.0 + 2.0 * u) + r4) * (1.0 + 2.0 * u) * r4)


def skewness_of_u(u: float) -> float:
    """Skewness as a function of u = slope * sigma^2 alone.

    Algebraically identical to the moment-based expression

        [ (1+6u)^(-1/2) - 3 (1+2u)^(-1/2) (1+4u)^(-1/2) + 2 (1+2u)^(-3/2) ]
        / [ (1+4u)^(-1/2) - (1+2u)^(-1) ]^(3/2)

    but with numerator and denominator each reduced to a difference of
    O(u^2) terms, so the evaluation stays accurate down to u ~ 1e-7 where
    the raw form loses every significant digit to cancellation.
    """
    if u <= 0:
        raise ValueError("u must be positive")
    q = 1.0 + 6.0 * u
    p = (1.0 + 2.0 * u) * (1.0 + 4.0 * u)
    sq, sp = math.sqrt(q), math.sqrt(p)
    r4 = math.sqrt(1.0 + 4.0 * u)
    one2u = 1.0 + 2.0 * u
    # mu3 / alpha^3 = 8 u^2 (a - b); var / alpha^2 = 4 u^2 / d
    a = 1.0 / ((sp + sq) * sq * sp)
    b = 1.0 / ((one2u + r4) * r4 * one2u ** 1.5)
    d = (one2u + r4) * one2u * r4
    return (a - b) * d**1.5 / u


_ZERO_SKEW_BRACKET = (1e-6, 10.0)
_zero_skew_u_cache: float | None = None


def zero_skew_u() -> float:
    """The unique root u* of skewness_of_u on [1e-6, 10], by bisection.

    The skewness crosses zero exactly once as the misalignment grows
    (mass migrates from the high-SNR to the low-SNR end), so the locus of
    zero-skew operating points is u = u* ~ 1.5338.
    """
    global _zero_skew_u_cache
    if _zero_skew_u_cache is None:
        lo, hi = _ZERO_SKEW_BRACKET
        flo, fhi = skewness_of_u(lo), skewness_of_u(hi)
        if not (flo < 0.0 < fhi):
            raise RuntimeError("zero-skew bracket lost its sign change")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if skewness_of_u(mid) < 0.0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-14 * hi:
                break
        _zero_skew_u_cache = 0.5 * (lo + hi)
    return _zero_skew_u_cache


def zero_skew_sigma(params: ClosedFormParams) -> float:
    """Error-angle spread at which the SNR skewness vanishes [rad].

    Since the skewness depends on u = slope * sigma^2 only, the root is
    sigma* = sqrt(u*/slope) with a single precomputed constant u*.
    """
    return math.sqrt(zero_skew_u() / params.slope)
