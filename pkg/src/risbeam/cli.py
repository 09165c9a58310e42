"""Command-line front end.

Subcommands:
    eval      closed-form summary (alpha, slope, moments, zero-skew sigma)
    dist      analytic PDF/CDF curves on an SNR grid -> CSV (+ figure)
    mc        Monte-Carlo histogram, empirical CDF and summary (+ figure)
    sweep     mean/skewness grids over one geometry axis (+ locus, figure)
    validate  compare against the built-in reference operating points

Configuration comes from a JSON file (--config) with CLI flags taking
precedence; units at this boundary are Hz, meters, degrees and dB.  All
internal computation is in radians and linear units, converted exactly
once at parse time.  Every output file embeds the effective configuration
and seed.  Exit codes: 0 success, 1 validation failure, 2 config error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analytic, field, montecarlo, reference, reporting
from .analytic import ErrorPlane, MisalignmentRegime
from .geometry import GeometryError, LinkGeometry, PhysicalConfig, make_link_geometry
from .montecarlo import Model, SamplerSpec

log = logging.getLogger("risbeam")

OUTDIR_ENV = "RISBEAM_OUTDIR"

DEFAULTS = {
    "frequency_hz": 140e9,
    "power_noise_ratio_db": 20.0,
    "reflection_magnitude": 1.0,
    "receiver_gain_db": 40.0,
    "w_ris_m": 0.25,
    "d_ap_m": None,
    "g_ap_db": None,
    "theta_ap_deg": None,
    "phi_ap_deg": None,
    "d_ue_m": 2.0,
    "theta_ue_deg": 0.0,
    "phi_ue_deg": 0.0,
    "regime": "inplane",
    "model": "exact",
    "sigma_deg": [2.5],
    "sweep": {"axis": "wris", "min": None, "max": None, "steps": 50},
    "n_samples": 1_000_000,
    "seed": 1234567,
    "n_bins": 60,
    "n_workers": 1,
    "grid_points": 500,
    "out": None,
    "plot": True,
}

SWEEP_RANGES = {  # figure-axis defaults per sweep axis
    "wris": (0.01, 0.50),
    "theta": (0.0, 60.0),
    "due": (2.0, 20.0),
}


class ConfigError(Exception):
    """A configuration file or flag combination violates a validation rule."""


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass
class RunConfig:
    """Validated, unit-resolved run description."""

    cfg: PhysicalConfig
    geom: LinkGeometry
    plane: ErrorPlane
    model: Model
    sigmas: list[float]       # [rad]
    sigmas_deg: list[float]   # as supplied, for emission
    sweep_axis: str
    sweep_values: np.ndarray
    n_samples: int
    seed: int
    n_bins: int
    n_workers: int
    grid_points: int
    out: str | None
    plot: bool
    effective: dict           # boundary-unit view of everything above


def _expand_sigmas(raw) -> list[float]:
    if isinstance(raw, (int, float)):
        return [float(raw)]
    if isinstance(raw, list):
        if not raw or not all(isinstance(s, (int, float)) for s in raw):
            raise ConfigError("sigma_deg list must contain numbers")
        return [float(s) for s in raw]
    if isinstance(raw, dict):
        extra = set(raw) - {"min", "max", "steps"}
        if extra:
            raise ConfigError(f"unknown sigma_deg range keys: {sorted(extra)}")
        try:
            return list(np.linspace(float(raw["min"]), float(raw["max"]),
                                    int(raw["steps"])))
        except KeyError as e:
            raise ConfigError(f"sigma_deg range needs key {e}") from None
    raise ConfigError("sigma_deg must be a number, a list or a min/max/steps range")


def parse_config(data: dict) -> RunConfig:
    """Validate a boundary-unit dict and build the internal run objects."""
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = dict(DEFAULTS)
    # a supplied AP route replaces the default footprint rather than
    # conflicting with it
    if ("d_ap_m" in data or "g_ap_db" in data) and "w_ris_m" not in data:
        merged["w_ris_m"] = None
    merged.update(data)

    sweep = dict(DEFAULTS["sweep"])
    if not isinstance(merged["sweep"], dict):
        raise ConfigError("sweep must be an object with axis/min/max/steps")
    extra = set(merged["sweep"]) - set(sweep)
    if extra:
        raise ConfigError(f"unknown sweep keys: {sorted(extra)}")
    sweep.update(merged["sweep"])
    if sweep["axis"] not in SWEEP_RANGES:
        raise ConfigError(f"sweep axis must be one of {sorted(SWEEP_RANGES)}")
    lo, hi = SWEEP_RANGES[sweep["axis"]]
    sweep["min"] = lo if sweep["min"] is None else float(sweep["min"])
    sweep["max"] = hi if sweep["max"] is None else float(sweep["max"])
    sweep["steps"] = int(sweep["steps"])
    if sweep["steps"] < 2:
        raise ConfigError("sweep steps must be at least 2")
    merged["sweep"] = sweep

    sigmas_deg = _expand_sigmas(merged["sigma_deg"])
    if any(s <= 0 for s in sigmas_deg):
        raise ConfigError("sigma_deg values must be positive")
    merged["sigma_deg"] = sigmas_deg

    if merged["regime"] not in ("inplane", "normal"):
        raise ConfigError("regime must be 'inplane' or 'normal'")
    if merged["model"] not in ("exact", "approx"):
        raise ConfigError("model must be 'exact' or 'approx'")

    try:
        cfg = PhysicalConfig(
            frequency=float(merged["frequency_hz"]),
            power_noise_ratio=db_to_linear(float(merged["power_noise_ratio_db"])),
            reflection_magnitude=float(merged["reflection_magnitude"]),
            receiver_gain=db_to_linear(float(merged["receiver_gain_db"])),
        )
        geom = make_link_geometry(
            cfg,
            d_ue=float(merged["d_ue_m"]),
            theta_ue=math.radians(float(merged["theta_ue_deg"])),
            w_ris=None if merged["w_ris_m"] is None else float(merged["w_ris_m"]),
            d_ap=None if merged["d_ap_m"] is None else float(merged["d_ap_m"]),
            g_ap=None if merged["g_ap_db"] is None else db_to_linear(float(merged["g_ap_db"])),
            phi_ue=math.radians(float(merged["phi_ue_deg"])),
            theta_ap=None if merged["theta_ap_deg"] is None else math.radians(float(merged["theta_ap_deg"])),
            phi_ap=None if merged["phi_ap_deg"] is None else math.radians(float(merged["phi_ap_deg"])),
        )
    except (GeometryError, ValueError) as e:
        raise ConfigError(str(e)) from e
    merged["w_ris_m"] = geom.w_ris  # resolved value, whichever route supplied

    if int(merged["n_samples"]) < 1000:
        raise ConfigError("n_samples must be at least 1000")
    if int(merged["n_bins"]) < 10:
        raise ConfigError("n_bins must be at least 10")
    if int(merged["grid_points"]) < 2:
        raise ConfigError("grid_points must be at least 2")

    # worker count never affects any output (chunked split streams), so it
    # is an execution detail, not part of the provenance config
    n_workers = int(merged.pop("n_workers"))
    if n_workers < 1:
        raise ConfigError("n_workers must be at least 1")

    return RunConfig(
        cfg=cfg,
        geom=geom,
        plane=ErrorPlane(merged["regime"]),
        model=Model(merged["model"]),
        sigmas=[math.radians(s) for s in sigmas_deg],
        sigmas_deg=sigmas_deg,
        sweep_axis=sweep["axis"],
        sweep_values=np.linspace(sweep["min"], sweep["max"], sweep["steps"]),
        n_samples=int(merged["n_samples"]),
        seed=int(merged["seed"]),
        n_bins=int(merged["n_bins"]),
        n_workers=n_workers,
        grid_points=int(merged["grid_points"]),
        out=merged["out"],
        plot=bool(merged["plot"]),
        effective=merged,
    )


def _load(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config file: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("config file must contain a JSON object")
    flag_map = {
        "sigma_deg": args.sigma_deg,
        "n_samples": args.n,
        "seed": args.seed,
        "n_bins": args.bins,
        "out": args.out,
        "model": args.model,
        "regime": args.regime,
        "plot": args.plot,
    }
    if getattr(args, "axis", None):
        sweep = dict(data.get("sweep", {}))
        if sweep.get("axis") not in (None, args.axis):
            log.info("flag --axis=%s overrides config sweep.axis=%s",
                     args.axis, sweep.get("axis"))
        sweep["axis"] = args.axis
        data["sweep"] = sweep
    for key, value in flag_map.items():
        if value is None:
            continue
        if key in data and data[key] != value:
            log.info("flag overrides config key %s=%r with %r", key, data[key], value)
        data[key] = value
    if args.command == "sweep" and "sigma_deg" not in data:
        # sweeps default to the figure-style misalignment axis
        data["sigma_deg"] = {"min": 0.1, "max": 10.0, "steps": 50}
    return parse_config(data)


def _parse_sigma_flag(text: str):
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma-separated list of degrees")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one sigma value")
    return values


def _stem(rc: RunConfig, default_name: str) -> Path:
    """Output path stem; the RISBEAM_OUTDIR env var redirects the directory."""
    outdir = os.environ.get(OUTDIR_ENV)
    if rc.out is None:
        return Path(outdir) / default_name if outdir else Path(default_name)
    out = Path(rc.out)
    if out.is_dir() or str(rc.out).endswith(os.sep):
        out = out / default_name
    if outdir:
        out = Path(outdir) / out.name
    return out


def _config_header(rc: RunConfig, command: str) -> str:
    payload = json.dumps(rc.effective, sort_keys=True)
    return f"# risbeam {command}\n# config: {payload}\n"


def _write_csv(path: Path, rc: RunConfig, command: str, header: list[str],
               rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(_config_header(rc, command))
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def cmd_eval(rc: RunConfig) -> int:
    rows = []
    for sigma, sigma_deg in zip(rc.sigmas, rc.sigmas_deg):
        regime = MisalignmentRegime(rc.plane, sigma)
        params = analytic.closed_form_params(rc.cfg, rc.geom, regime)
        rows.append({
            "sigma_deg": sigma_deg,
            "alpha": params.alpha,
            "slope": params.slope,
            "snr_at_ue": field.snr_at_ue(rc.cfg, rc.geom),
            "mean": analytic.mean(params, sigma),
            "variance": analytic.variance(params, sigma),
            "skewness": analytic.skewness(params, sigma),
            "zero_skew_sigma_deg": math.degrees(analytic.zero_skew_sigma(params)),
        })
    payload = {"config": rc.effective, "results": rows}
    if rc.out:
        stem = _stem(rc, "eval")
        _write_json(stem.with_name(stem.name + ".json"), payload)
    else:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return 0


def cmd_dist(rc: RunConfig) -> int:
    stem = _stem(rc, "dist")
    for sigma, sigma_deg in zip(rc.sigmas, rc.sigmas_deg):
        regime = MisalignmentRegime(rc.plane, sigma)
        params = analytic.closed_form_params(rc.cfg, rc.geom, regime)
        inset = 1e-4 * params.alpha
        x = np.linspace(inset, params.alpha - inset, rc.grid_points)
        pdf_values = analytic.pdf(params, sigma, x)
        cdf_values = analytic.cdf(params, sigma, x)
        suffix = f"_sigma{sigma_deg:g}" if len(rc.sigmas) > 1 else ""
        _write_csv(stem.with_name(stem.name + suffix + ".csv"), rc, "dist",
                   ["x", "pdf_analytic", "cdf_analytic"],
                   zip(x, pdf_values, cdf_values))
        if rc.plot:
            reporting.save_distribution_figure(
                stem.with_name(stem.name + suffix + ".png"),
                x, pdf_values, cdf_values, sigma_deg, params.alpha,
                config_json=json.dumps(rc.effective, sort_keys=True))
    return 0


def cmd_mc(rc: RunConfig) -> int:
    stem = _stem(rc, "mc")
    for sigma, sigma_deg in zip(rc.sigmas, rc.sigmas_deg):
        regime = MisalignmentRegime(rc.plane, sigma)
        spec = SamplerSpec(regime=regime, model=rc.model, n_samples=rc.n_samples,
                           seed=rc.seed, n_bins=rc.n_bins, n_workers=rc.n_workers)
        emp = montecarlo.sample(rc.cfg, rc.geom, spec)
        params = analytic.closed_form_params(rc.cfg, rc.geom, regime)
        ks = montecarlo.ks_distance(emp, params, sigma)

        suffix = f"_sigma{sigma_deg:g}" if len(rc.sigmas) > 1 else ""
        centers = 0.5 * (emp.bin_edges[:-1] + emp.bin_edges[1:])
        _write_csv(stem.with_name(stem.name + suffix + "_hist.csv"), rc, "mc",
                   ["bin_center", "density"], zip(centers, emp.densities))
        q = np.linspace(0.0, 1.0, 512)
        _write_csv(stem.with_name(stem.name + suffix + "_cdf.csv"), rc, "mc",
                   ["quantile", "x"], zip(q, emp.quantiles(q)))
        _write_json(stem.with_name(stem.name + suffix + "_summary.json"), {
            "config": rc.effective,
            "sigma_deg": sigma_deg,
            "model": rc.model.value,
            "n_samples": emp.n_samples,
            "seed": emp.seed,
            "n_redraws": emp.n_redraws,
            "mean": emp.mean,
            "variance": emp.variance,
            "skewness": emp.skewness,
            "ks_distance_vs_analytic": ks,
            "alpha": params.alpha,
            "slope": params.slope,
        })
        if rc.plot:
            inset = 1e-4 * params.alpha
            x = np.linspace(inset, params.alpha - inset, rc.grid_points)
            reporting.save_mc_figure(
                stem.with_name(stem.name + suffix + ".png"), emp,
                x, analytic.pdf(params, sigma, x), analytic.cdf(params, sigma, x),
                sigma_deg, rc.model.value,
                config_json=json.dumps(rc.effective, sort_keys=True))
    return 0


def _sweep_geometry(rc: RunConfig, value: float) -> LinkGeometry:
    kw = {"w_ris": rc.geom.w_ris, "d_ue": rc.geom.d_ue, "theta_ue": rc.geom.theta_ue}
    if rc.sweep_axis == "wris":
        kw["w_ris"] = value
    elif rc.sweep_axis == "theta":
        kw["theta_ue"] = math.radians(value)
    else:
        kw["d_ue"] = value
    return make_link_geometry(rc.cfg, **kw)


def cmd_sweep(rc: RunConfig) -> int:
    stem = _stem(rc, "sweep")
    axis_values = rc.sweep_values
    rows = []
    locus_rows = []
    mean_grid = np.empty((axis_values.size, len(rc.sigmas)))
    skew_grid = np.empty_like(mean_grid)
    for i, value in enumerate(axis_values):
        geom = _sweep_geometry(rc, value)
        params = analytic.closed_form_params(
            rc.cfg, geom, MisalignmentRegime(rc.plane, rc.sigmas[0]))
        for j, (sigma, sigma_deg) in enumerate(zip(rc.sigmas, rc.sigmas_deg)):
            mean_grid[i, j] = analytic.mean(params, sigma)
            skew_grid[i, j] = analytic.skewness(params, sigma)
            rows.append((value, sigma_deg, mean_grid[i, j], skew_grid[i, j]))
        locus_rows.append((value, math.degrees(analytic.zero_skew_sigma(params))))

    axis_col = {"wris": "w_ris_m", "theta": "theta_ue_deg", "due": "d_ue_m"}[rc.sweep_axis]
    _write_csv(stem.with_name(stem.name + ".csv"), rc, "sweep",
               [axis_col, "sigma_deg", "mean", "skewness"], rows)
    _write_csv(stem.with_name(stem.name + "_locus.csv"), rc, "sweep",
               [axis_col, "zero_skew_sigma_deg"], locus_rows)
    if rc.plot:
        reporting.save_sweep_figure(
            stem.with_name(stem.name + ".png"), axis_col, axis_values,
            rc.sigmas_deg, mean_grid, skew_grid,
            np.array([r[1] for r in locus_rows]),
            config_json=json.dumps(rc.effective, sort_keys=True))
    return 0


def cmd_validate(rc: RunConfig) -> int:
    results = reference.run_reference_checks(
        rc.cfg, rc.geom, plane=rc.plane,
        n_samples=rc.n_samples, seed=rc.seed)
    for res in results:
        print(res.row())
    n_failed = sum(not r.passed for r in results)
    print(f"{len(results) - n_failed}/{len(results)} reference checks passed")
    if rc.out:
        stem = _stem(rc, "validate")
        _write_json(stem.with_name(stem.name + ".json"), {
            "config": rc.effective,
            "checks": [vars(r) for r in results],
            "n_failed": n_failed,
        })
    return 1 if n_failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risbeam",
        description="SNR statistics of a RIS-aided THz link under beam misalignment")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "eval": cmd_eval,
        "dist": cmd_dist,
        "mc": cmd_mc,
        "sweep": cmd_sweep,
        "validate": cmd_validate,
    }
    for name, func in commands.items():
        p = sub.add_parser(name)
        p.set_defaults(func=func)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--sigma-deg", type=_parse_sigma_flag, dest="sigma_deg",
                       help="error-angle spread(s) in degrees, comma separated")
        p.add_argument("--n", type=int, help="Monte-Carlo sample count")
        p.add_argument("--seed", type=int, help="Monte-Carlo master seed")
        p.add_argument("--bins", type=int, help="histogram bin count")
        p.add_argument("--out", help="output path stem (or directory)")
        p.add_argument("--model", choices=["exact", "approx"])
        p.add_argument("--regime", choices=["inplane", "normal"])
        plot = p.add_mutually_exclusive_group()
        plot.add_argument("--plot", dest="plot", action="store_true", default=None)
        plot.add_argument("--no-plot", dest="plot", action="store_false")
        if name == "sweep":
            p.add_argument("--axis", choices=sorted(SWEEP_RANGES))
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        rc = _load(args)
        return args.func(rc)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
