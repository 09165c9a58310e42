"""Figure rendering for the report-producing CLI commands.

Each data-emitting command can render a PNG next to its CSV output.  The
PNG metadata is pinned so repeated runs with identical inputs produce
byte-identical files.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, path, config_json):
    # fixed metadata (with the effective config) keeps reruns byte-identical
    meta = {"Software": "risbeam"}
    if config_json:
        meta["Description"] = config_json
    fig.savefig(path, dpi=150, metadata=meta)
    plt.close(fig)


def save_distribution_figure(path, x, pdf_values, cdf_values, sigma_deg, alpha,
                             config_json=None):
    fig, axes = plt.subplots(2, 1, sharex=True, figsize=(6.4, 6.0))
    axes[0].plot(x, pdf_values, color="C3")
    axes[0].set_ylabel("PDF")
    axes[1].plot(x, cdf_values, color="C0")
    axes[1].set_ylabel("CDF")
    axes[1].set_xlabel("instantaneous SNR")
    axes[1].set_ylim(0.0, 1.02)
    for ax in axes:
        ax.axvline(alpha, color="0.6", linestyle=":", linewidth=1.0)
        ax.grid(True, linestyle=":", linewidth=0.8)
    fig.suptitle(f"SNR distribution, sigma = {sigma_deg:g} deg")
    fig.tight_layout()
    _save(fig, path, config_json)


def save_mc_figure(path, emp, x, pdf_values, cdf_values, sigma_deg, model_name,
                   config_json=None):
    centers = 0.5 * (emp.bin_edges[:-1] + emp.bin_edges[1:])
    q = np.linspace(0.0, 1.0, 401)
    xq = emp.quantiles(q)

    fig, axes = plt.subplots(2, 1, figsize=(6.4, 6.0))
    width = emp.bin_edges[1] - emp.bin_edges[0]
    axes[0].bar(centers, emp.densities, width=width, color="0.3",
                label=f"samples ({model_name})")
    axes[0].plot(x, pdf_values, color="C3", label="closed form")
    axes[0].set_ylabel("PDF")
    axes[1].plot(xq, q, color="0.3", label=f"samples ({model_name})")
    axes[1].plot(x, cdf_values, color="C3", linestyle="--", label="closed form")
    axes[1].set_ylabel("CDF")
    axes[1].set_xlabel("instantaneous SNR")
    for ax in axes:
        ax.grid(True, linestyle=":", linewidth=0.8)
        ax.legend()
    fig.suptitle(f"Monte Carlo vs closed form, sigma = {sigma_deg:g} deg")
    fig.tight_layout()
    _save(fig, path, config_json)


def save_sweep_figure(path, axis_label, axis_values, sigmas_deg,
                      mean_grid, skew_grid, locus_sigma_deg, config_json=None):
    fig, axes = plt.subplots(1, 2, figsize=(10.0, 4.2), sharey=True)
    for ax, grid, title, cmap in ((axes[0], mean_grid, "mean SNR", "viridis"),
                                  (axes[1], skew_grid, "skewness", "coolwarm")):
        pcm = ax.pcolormesh(sigmas_deg, axis_values, grid, shading="auto", cmap=cmap)
        fig.colorbar(pcm, ax=ax, label=title)
        ax.set_xlabel("sigma [deg]")
        ax.set_title(title)
    axes[0].set_ylabel(axis_label)
    finite = np.isfinite(locus_sigma_deg) & (locus_sigma_deg <= max(sigmas_deg))
    for ax in axes:
        ax.plot(locus_sigma_deg[finite], np.asarray(axis_values)[finite],
                "k--", linewidth=1.2, label="zero skewness")
    axes[1].legend(loc="upper right")
    fig.tight_layout()
    _save(fig, path, config_json)
