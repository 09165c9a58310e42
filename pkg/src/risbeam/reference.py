"""Reference operating points and the validation matrix.

The tables below pin the library against published reference values for a
140 GHz link with the default geometry (broadside UE at 2 m, 25 cm beam
footprint, 40 dB receiver gain, 20 dB transmit-power-to-noise ratio, unit
reflection magnitude).  Geometry columns (footprint, steering angle, UE
distance) are overridden per point; everything else comes from the caller's
configuration.  Mean-SNR expectations and CDF thresholds scale with the
configured power level, so power perturbations keep the matrix meaningful.

Several reference values are known to disagree with the closed forms (and
with the exact-field Monte Carlo, which matches the closed forms) by more
than their stated tolerance; they appear to be low-precision colormap
readings, two of them saturated at -2.  They are kept verbatim, flagged
with a note, and reported as failures.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import analytic, montecarlo
from .analytic import ErrorPlane, MisalignmentRegime, RayleighLimit
from .geometry import LinkGeometry, PhysicalConfig, make_link_geometry

_BASELINE_POWER = 100.0  # 20 dB P_t/N_o at |R| = 1

# (label, geometry overrides, sigma [deg], expected mean SNR), tolerance 0.015
MEAN_POINTS = [
    ("w=25cm sigma=1deg", {"w_ris": 0.25}, 1.0, 3.6),
    ("w=30cm sigma=1deg", {"w_ris": 0.30}, 1.0, 2.5),
    ("w=23cm sigma=3deg", {"w_ris": 0.23}, 3.0, 3.25),
    ("w=23cm sigma=4deg", {"w_ris": 0.23}, 4.0, 2.82),
    ("w=23cm sigma=6deg", {"w_ris": 0.23}, 6.0, 2.1),
    ("w=40cm sigma=3deg", {"w_ris": 0.40}, 3.0, 1.28),
    ("w=40cm sigma=4deg", {"w_ris": 0.40}, 4.0, 1.2),
    ("w=40cm sigma=6deg", {"w_ris": 0.40}, 6.0, 1.0),
    ("w=20cm sigma=0.1deg", {"w_ris": 0.20}, 0.1, 5.8),
    ("theta=0 sigma=6deg", {"theta_ue_deg": 0.0}, 6.0, 1.905),
    ("theta=30 sigma=6deg", {"theta_ue_deg": 30.0}, 6.0, 1.707),
    ("theta=60 sigma=6deg", {"theta_ue_deg": 60.0}, 6.0, 1.063),
    ("theta=10 sigma=0.5deg", {"theta_ue_deg": 10.0}, 0.5, 3.679),
    ("theta=10 sigma=6.5deg", {"theta_ue_deg": 10.0}, 6.5, 1.768),
    ("theta=60 sigma=0.5deg", {"theta_ue_deg": 60.0}, 0.5, 3.568),
    ("theta=60 sigma=6.5deg", {"theta_ue_deg": 60.0}, 6.5, 0.987),
    ("d=2m sigma=1deg", {"d_ue": 2.0}, 1.0, 3.58),
    ("d=2m sigma=3deg", {"d_ue": 2.0}, 3.0, 2.85),
    ("d=6m sigma=1deg", {"d_ue": 6.0}, 1.0, 2.85),
    ("d=6m sigma=5deg", {"d_ue": 6.0}, 5.0, 0.86),
    ("d=20m sigma=1deg", {"d_ue": 20.0}, 1.0, 1.23),
    ("d=20m sigma=3deg", {"d_ue": 20.0}, 3.0, 0.43),
]
MEAN_TOL = 0.015

# (label, geometry overrides, sigma [deg], expected skewness), tolerance 0.03
SKEW_POINTS = [
    ("theta=10 sigma=1.5deg", {"theta_ue_deg": 10.0}, 1.5, -2.0),
    ("theta=60 sigma=1.5deg", {"theta_ue_deg": 60.0}, 1.5, -1.49),
    ("theta=5 sigma=5deg", {"theta_ue_deg": 5.0}, 5.0, -0.32),
    ("theta=45 sigma=5deg", {"theta_ue_deg": 45.0}, 5.0, 0.16),
    ("theta=0 sigma=10deg", {"theta_ue_deg": 0.0}, 10.0, 0.64),
    ("theta=60 sigma=10deg", {"theta_ue_deg": 60.0}, 10.0, 1.62),
    ("d=5m sigma=0.3deg", {"d_ue": 5.0}, 0.3, -2.0),
    ("d=20m sigma=0.3deg", {"d_ue": 20.0}, 0.3, -1.08),
    ("d=15m sigma=0.7deg", {"d_ue": 15.0}, 0.7, -0.29),
    ("d=15m sigma=1.2deg", {"d_ue": 15.0}, 1.2, 0.38),
    ("d=3m sigma=4deg", {"d_ue": 3.0}, 4.0, -0.07),
    ("d=3m sigma=5deg", {"d_ue": 3.0}, 5.0, 0.24),
]
SKEW_TOL = 0.03

# (label, sigma [deg], threshold x, expected CDF), tolerance 0.01
CDF_POINTS = [
    ("sigma=0.1deg x=2", 0.1, 2.0, 0.0),
    ("sigma=5deg x=2", 5.0, 2.0, 0.42),
    ("sigma=9deg x=2", 9.0, 2.0, 0.66),
    ("sigma=3deg x=0.5", 3.0, 0.5, 0.016),
    ("sigma=3deg x=3", 3.0, 3.0, 0.43),
    ("sigma=3deg x=3.7", 3.0, 3.7, 0.9),
]
CDF_TOL = 0.01

ALIGNED_MEAN = 3.714       # mean SNR at sigma = 0.1 deg (alpha to 3 decimals)
ALIGNED_TOL = 0.01

ZERO_SKEW_SIGMA_DEG = 6.26  # defaults; balanced low/high SNR spread
ZERO_SKEW_TOL = 0.05

# reference points known not to reproduce from the formulas (see module
# docstring); kept verbatim and expected to fail their tolerance
KNOWN_DEVIANT = {
    ("mean", "w=25cm sigma=1deg"),       # 3.6 is the same point as d=2m/1deg -> 3.58
    ("mean", "w=23cm sigma=4deg"),
    ("cdf", "sigma=3deg x=3.7"),
    ("skewness", "theta=60 sigma=1.5deg"),
    ("skewness", "d=5m sigma=0.3deg"),   # colormap floor at -2 (true value -2.58)
    ("skewness", "d=20m sigma=0.3deg"),
    ("skewness", "d=15m sigma=1.2deg"),
}

# footprints whose in-plane slopes span the 5x5 oracle-equivalence grid
KS_GRID_W_RIS = [0.15, 0.20, 0.25, 0.30, 0.40]
KS_GRID_SIGMA_DEG = [0.5, 1.5, 3.0, 6.0, 9.0]

KS_EXACT_POINTS = [(2.5, 0.02), (6.26, 0.05), (9.5, 0.05)]  # (sigma [deg], bound)


@dataclass
class CheckResult:
    group: str
    label: str
    computed: float
    expected: float
    tol: float
    passed: bool
    note: str = ""

    def __post_init__(self):
        # numpy scalars sneak in from the comparisons; keep plain JSON types
        self.computed = float(self.computed)
        self.expected = float(self.expected)
        self.tol = float(self.tol)
        self.passed = bool(self.passed)

    def row(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = (f"[{status}] {self.group:12s} {self.label:28s} "
                f"computed={self.computed:+.4f} expected={self.expected:+.4f} "
                f"tol={self.tol:g}")
        return line + (f"  ({self.note})" if self.note else "")


def _apply_overrides(cfg: PhysicalConfig, geom: LinkGeometry,
                     overrides: dict) -> LinkGeometry:
    kw = {"d_ue": geom.d_ue, "theta_ue": geom.theta_ue, "w_ris": geom.w_ris}
    for key, value in overrides.items():
        if key == "theta_ue_deg":
            kw["theta_ue"] = np.deg2rad(value)
        else:
            kw[key] = value
    return make_link_geometry(cfg, **kw)


def _note(group: str, label: str) -> str:
    if (group, label) in KNOWN_DEVIANT:
        return "known deviant reference value; closed form and Monte Carlo agree"
    return ""


def run_reference_checks(cfg: PhysicalConfig, geom: LinkGeometry,
                         plane: ErrorPlane = ErrorPlane.IN_PLANE,
                         n_samples: int = 1_000_000, seed: int = 1234567,
                         include_montecarlo: bool = True,
                         _alpha_scale: float = 1.0) -> list[CheckResult]:
    """Evaluate every reference operating point against the library.

    ``_alpha_scale`` is a test hook that corrupts the computed peak SNR so
    the matrix's failure detection can itself be exercised.  Mean and CDF
    expectations are scaled by the configured power level relative to the
    20 dB / |R|=1 baseline; skewness and the zero-skew locus are scale-free.
    """
    scale = (cfg.power_noise_ratio * cfg.reflection_magnitude**2) / _BASELINE_POWER
    results: list[CheckResult] = []

    def params_for(overrides: dict, sigma_deg: float):
        g = _apply_overrides(cfg, geom, overrides)
        regime = MisalignmentRegime(plane, np.deg2rad(sigma_deg))
        p = analytic.closed_form_params(cfg, g, regime)
        return replace(p, alpha=p.alpha * _alpha_scale), regime

    # aligned SNR through the sigma -> 0 mean
    p, r = params_for({}, 0.1)
    got = analytic.mean(p, r.sigma)
    results.append(CheckResult(
        "aligned", "mean sigma=0.1deg", got, ALIGNED_MEAN * scale, ALIGNED_TOL * scale,
        abs(got - ALIGNED_MEAN * scale) <= ALIGNED_TOL * scale))

    for label, sigma_deg, x, expected in CDF_POINTS:
        p, r = params_for({}, sigma_deg)
        got = analytic.cdf(p, r.sigma, x * scale)
        results.append(CheckResult(
            "cdf", label, got, expected, CDF_TOL,
            abs(got - expected) <= CDF_TOL, _note("cdf", label)))

    for label, overrides, sigma_deg, expected in MEAN_POINTS:
        p, r = params_for(overrides, sigma_deg)
        got = analytic.mean(p, r.sigma)
        results.append(CheckResult(
            "mean", label, got, expected * scale, MEAN_TOL * scale,
            abs(got - expected * scale) <= MEAN_TOL * scale, _note("mean", label)))

    for label, overrides, sigma_deg, expected in SKEW_POINTS:
        p, r = params_for(overrides, sigma_deg)
        got = analytic.skewness(p, r.sigma)
        results.append(CheckResult(
            "skewness", label, got, expected, SKEW_TOL,
            abs(got - expected) <= SKEW_TOL, _note("skewness", label)))

    p, _ = params_for({}, 1.0)
    got = float(np.rad2deg(analytic.zero_skew_sigma(p)))
    results.append(CheckResult(
        "zero-skew", "defaults", got, ZERO_SKEW_SIGMA_DEG, ZERO_SKEW_TOL,
        abs(got - ZERO_SKEW_SIGMA_DEG) <= ZERO_SKEW_TOL))

    regime = MisalignmentRegime(ErrorPlane.NORMAL, np.deg2rad(1.0))
    exact = analytic.closed_form_params(cfg, geom, regime).slope
    limit = analytic.asymptotic_params(cfg, geom, regime, RayleighLimit.FAR).slope
    rel = abs(limit - exact) / exact
    results.append(CheckResult(
        "asymptotic", "normal-plane slope, far limit", rel, 0.0, 1e-3, rel <= 1e-3))

    if include_montecarlo:
        results.extend(_montecarlo_checks(cfg, geom, n_samples, seed))
    return results


def _montecarlo_checks(cfg, geom, n_samples, seed) -> list[CheckResult]:
    results = []
    band = 1.63 / np.sqrt(n_samples)  # 99% one-sample KS band
    worst = (0.0, "")
    for w in KS_GRID_W_RIS:
        g = _apply_overrides(cfg, geom, {"w_ris": w})
        for sigma_deg in KS_GRID_SIGMA_DEG:
            regime = MisalignmentRegime(ErrorPlane.IN_PLANE, np.deg2rad(sigma_deg))
            spec = montecarlo.SamplerSpec(regime=regime, model=montecarlo.Model.APPROX,
                                          n_samples=n_samples, seed=seed)
            emp = montecarlo.sample(cfg, g, spec)
            params = analytic.closed_form_params(cfg, g, regime)
            d = montecarlo.ks_distance(emp, params, regime.sigma)
            if d > worst[0]:
                worst = (d, f"w={w} sigma={sigma_deg}deg")
    results.append(CheckResult(
        "ks-approx", f"worst of 5x5 grid ({worst[1]})", worst[0], 0.0, band,
        worst[0] <= band))

    for sigma_deg, bound in KS_EXACT_POINTS:
        regime = MisalignmentRegime(ErrorPlane.IN_PLANE, np.deg2rad(sigma_deg))
        spec = montecarlo.SamplerSpec(regime=regime, model=montecarlo.Model.EXACT,
                                      n_samples=n_samples, seed=seed)
        emp = montecarlo.sample(cfg, geom, spec)
        params = analytic.closed_form_params(cfg, geom, regime)
        d = montecarlo.ks_distance(emp, params, regime.sigma)
        results.append(CheckResult(
            "ks-exact", f"sigma={sigma_deg}deg", d, 0.0, bound, d <= bound))

    regime = MisalignmentRegime(ErrorPlane.IN_PLANE, np.deg2rad(2.5))
    spec = montecarlo.SamplerSpec(regime=regime, model=montecarlo.Model.EXACT,
                                  n_samples=max(10_000, n_samples // 100), seed=seed)
    a = montecarlo.sample(cfg, geom, spec)
    b = montecarlo.sample(cfg, geom, replace(spec, n_workers=4))
    identical = bool(np.array_equal(a.samples_sorted, b.samples_sorted))
    results.append(CheckResult(
        "determinism", "same seed, 1 vs 4 workers", float(identical), 1.0, 0.0,
        identical))
    return results
