"""Stochastic oracle for the closed-form SNR statistics.

Draws Gaussian pointing errors, pushes them through either the exact field
model or the small-error approximation, and summarizes the resulting SNR
samples (histogram, empirical CDF, first three standardized moments).

Sampling is split into fixed-size chunks, each driven by its own child
stream of the master seed, so results are bit-identical for a given
(seed, n_samples) regardless of how many workers process the chunks.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic, field as field_model
from .analytic import ClosedFormParams, ErrorPlane, MisalignmentRegime
from .geometry import LinkGeometry, PhysicalConfig

_CHUNK = 1 << 19  # samples per sub-stream; independent of worker count


class Model(enum.Enum):
    """Which SNR map the sampled errors are pushed through."""
    EXACT = "exact"    # full tilted-beam field evaluated at the UE
    APPROX = "approx"  # alpha * exp(-slope * e^2)


@dataclass(frozen=True)
class SamplerSpec:
    """Everything that determines one Monte-Carlo run."""

    regime: MisalignmentRegime
    model: Model = Model.EXACT
    n_samples: int = 1_000_000
    seed: int = 1234567
    n_bins: int = 60
    n_workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1000:
            raise ValueError("n_samples must be at least 1000")
        if self.n_bins < 10:
            raise ValueError("n_bins must be at least 10")
        if self.n_workers < 1:
            raise ValueError("n_workers must be at least 1")


@dataclass
class EmpiricalDistribution:
    """Summary of one Monte-Carlo run."""

    bin_edges: np.ndarray
    densities: np.ndarray
    samples_sorted: np.ndarray
    mean: float
    variance: float
    skewness: float
    n_samples: int
    seed: int
    n_redraws: int

    def cdf(self, x):
        """Empirical CDF: fraction of samples <= x."""
        return np.searchsorted(self.samples_sorted, np.asarray(x), side="right") / self.n_samples

    def quantiles(self, q):
        """Sample quantiles at probabilities q (inverse of the ECDF)."""
        return np.quantile(self.samples_sorted, q)


def _draw_errors(rng, n, sigma, theta_ue, plane):
    """Gaussian error angles, redrawing any that leave the forward half-space."""
    e = rng.normal(0.0, sigma, n)
    if plane is ErrorPlane.IN_PLANE:
        bad = np.abs(theta_ue + e) >= np.pi / 2
    else:
        bad = np.abs(e) >= np.pi / 2
    redraws = 0
    while np.any(bad):
        idx = np.flatnonzero(bad)
        redraws += idx.size
        e[idx] = rng.normal(0.0, sigma, idx.size)
        if plane is ErrorPlane.IN_PLANE:
            bad[idx] = np.abs(theta_ue + e[idx]) >= np.pi / 2
        else:
            bad[idx] = np.abs(e[idx]) >= np.pi / 2
    return e, redraws


def _chunk_snr(cfg, geom, spec, params, child_seed, n):
    rng = np.random.default_rng(child_seed)
    e, redraws = _draw_errors(rng, n, spec.regime.sigma, geom.theta_ue,
                              spec.regime.plane)
    if spec.model is Model.APPROX:
        snr = analytic.snr_tilde(params, e)
    elif spec.regime.plane is ErrorPlane.IN_PLANE:
        snr = field_model.snr_with_errors(cfg, geom, e, 0.0)
    else:
        snr = field_model.snr_with_errors(cfg, geom, 0.0, e)
    return snr, redraws


def sample(cfg: PhysicalConfig, geom: LinkGeometry,
           spec: SamplerSpec) -> EmpiricalDistribution:
    """Run the sampler described by spec and summarize the SNR draws.

    The histogram uses equal-width bins over [0, 1.001*alpha]; the support
    of both models is bounded by alpha, so the normalized densities always
    integrate to one.
    """
    params = analytic.closed_form_params(cfg, geom, spec.regime)
    sizes = [min(_CHUNK, spec.n_samples - i) for i in range(0, spec.n_samples, _CHUNK)]
    children = np.random.SeedSequence(spec.seed).spawn(len(sizes))
    jobs = list(zip(children, sizes))
    if spec.n_workers > 1:
        with ThreadPoolExecutor(max_workers=spec.n_workers) as pool:
            results = list(pool.map(
                lambda job: _chunk_snr(cfg, geom, spec, params, *job), jobs))
    else:
        results = [_chunk_snr(cfg, geom, spec, params, *job) for job in jobs]
    snr = np.concatenate([r[0] for r in results])
    n_redraws = sum(r[1] for r in results)

    densities, bin_edges = np.histogram(
        snr, bins=spec.n_bins, range=(0.0, 1.001 * params.alpha), density=True)
    m = snr.mean()
    centered = snr - m
    var = np.mean(centered**2)
    skew = np.mean(centered**3) / var**1.5
    return EmpiricalDistribution(
        bin_edges=bin_edges, densities=densities,
        samples_sorted=np.sort(snr),
        mean=float(m), variance=float(var), skewness=float(skew),
        n_samples=spec.n_samples, seed=spec.seed, n_redraws=n_redraws)


def ks_distance(emp: EmpiricalDistribution, params: ClosedFormParams,
                sigma: float) -> float:
    """Kolmogorov-Smirnov distance between the sample and the closed-form CDF.

    sup_x |F_emp(x) - F(x)| over the sorted samples, taking the step
    function's value on both sides of each jump.
    """
    s = emp.samples_sorted
    if s.size == 0:
        raise ValueError("empirical distribution has no samples")
    f = analytic.cdf(params, sigma, s)
    i = np.arange(1, s.size + 1, dtype=float)
    upper = np.max(np.abs(i / s.size - f))
    lower = np.max(np.abs((i - 1.0) / s.size - f))
    return float(max(upper, lower))
