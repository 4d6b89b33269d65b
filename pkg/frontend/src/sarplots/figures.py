"""Figure rendering for the egosar CSV reports.

Strictly read-only over the CSVs: every number plotted comes straight from
a file, nothing is recomputed. Rendering is deterministic for identical
input and spec.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "sarplots"  # deterministic SVG element ids

import matplotlib.pyplot as plt
import numpy as np

FIGURE_KINDS = ("rmse-family", "resolution", "gain", "velcov", "image")

REQUIRED_COLUMNS = {
    "rmse-family": ("sweep_value", "theta_deg", "rmse_sim_deg", "rmse_analysis_deg"),
    "resolution": ("theta_deg", "aperture_m", "beamwidth_deg"),
    "gain": ("theta_deg", "sweep_value", "gain_ratio", "degradation_ratio"),
    "velcov": (
        "sigma_phi_deg",
        "speed_mps",
        "num_targets",
        "std_sim_mps",
        "std_analysis_mps",
    ),
}


class SchemaMismatch(Exception):
    """CSV does not match the declared figure kind."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render: input CSV, figure kind, output image path."""

    input_csv: str
    kind: str
    output: str
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None
    legend: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaMismatch(f"unknown figure kind {self.kind!r}")


def _read_lines(path):
    text = Path(path).read_text(encoding="utf-8")
    return [line for line in text.splitlines() if line and not line.startswith("#")]


def load_table(path, kind):
    """Columnar CSV (every report except the image grid) as {name: array}."""
    lines = _read_lines(path)
    if not lines:
        raise SchemaMismatch(f"{path}: empty CSV")
    header = lines[0].split(",")
    for column in REQUIRED_COLUMNS[kind]:
        if column not in header:
            raise SchemaMismatch(f"{path}: missing column {column!r} for kind {kind!r}")
    if len(lines) < 2:
        raise SchemaMismatch(f"{path}: no data rows")
    try:
        data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    except ValueError as exc:
        raise SchemaMismatch(f"{path}: non-numeric cell ({exc})") from exc
    if data.shape[1] != len(header):
        raise SchemaMismatch(f"{path}: ragged rows")
    return {name: data[:, i] for i, name in enumerate(header)}


def load_image_grid(path):
    """Image CSV: header row = angle axis (deg), first column = range (m)."""
    lines = _read_lines(path)
    if not lines:
        raise SchemaMismatch(f"{path}: empty CSV")
    header = lines[0].split(",")
    if header[0] != "range_m":
        raise SchemaMismatch(f"{path}: first header cell must be 'range_m'")
    if len(header) < 2 or len(lines) < 2:
        raise SchemaMismatch(f"{path}: image grid needs angles and ranges")
    try:
        angles_deg = np.array([float(v) for v in header[1:]])
        data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    except ValueError as exc:
        raise SchemaMismatch(f"{path}: non-numeric cell ({exc})") from exc
    if data.shape[1] != len(header):
        raise SchemaMismatch(f"{path}: ragged rows")
    return data[:, 0], angles_deg, data[:, 1:]


def _fmt_value(value):
    return f"{value:g}"


def build_rmse_family(table, spec):
    """One solid (simulation) and one dashed (analysis) curve per sweep value."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for i, value in enumerate(sorted(set(table["sweep_value"]))):
        mask = table["sweep_value"] == value
        theta = table["theta_deg"][mask]
        order = np.argsort(theta)
        color = f"C{i}"
        label = spec.legend.get(_fmt_value(value), _fmt_value(value))
        ax.plot(theta[order], table["rmse_sim_deg"][mask][order],
                "-", color=color, label=f"{label} (simulation)")
        ax.plot(theta[order], table["rmse_analysis_deg"][mask][order],
                "--", color=color, label=f"{label} (analysis)")
    ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel or "target angle (deg)")
    ax.set_ylabel(spec.ylabel or "angle RMSE (deg)")
    ax.set_title(spec.title or "SAR angle RMSE: simulation vs analysis")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    return fig


def build_resolution(table, spec):
    fig, ax = plt.subplots(figsize=(7, 5))
    for i, aperture in enumerate(sorted(set(table["aperture_m"]))):
        mask = table["aperture_m"] == aperture
        theta = table["theta_deg"][mask]
        order = np.argsort(theta)
        ax.plot(theta[order], table["beamwidth_deg"][mask][order],
                "-", color=f"C{i}", marker="o", markersize=3,
                label=spec.legend.get(_fmt_value(aperture), f"{aperture:g} m aperture"))
    ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel or "target angle (deg)")
    ax.set_ylabel(spec.ylabel or "3 dB beamwidth (deg)")
    ax.set_title(spec.title or "SAR angular resolution (known velocity)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    return fig


def build_gain(table, spec):
    fig, ax = plt.subplots(figsize=(7, 5))
    for i, value in enumerate(sorted(set(table["sweep_value"]))):
        mask = table["sweep_value"] == value
        theta = table["theta_deg"][mask]
        order = np.argsort(theta)
        color = f"C{i}"
        label = spec.legend.get(_fmt_value(value), _fmt_value(value))
        ax.plot(theta[order], table["gain_ratio"][mask][order],
                "-", color=color, label=f"{label} (gain)")
        ax.plot(theta[order], table["degradation_ratio"][mask][order],
                "-.", color=color, label=f"{label} (RMSE / resolution)")
    ax.axhline(1.0, color="k", linewidth=0.8, alpha=0.6)
    ax.set_yscale("log")
    ax.set_xlabel(spec.xlabel or "target angle (deg)")
    ax.set_ylabel(spec.ylabel or "ratio")
    ax.set_title(spec.title or "Gain over the physical array / degradation vs resolution")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    return fig


def build_velcov(table, spec):
    fig, ax = plt.subplots(figsize=(7, 5))
    pairs = sorted(set(zip(table["speed_mps"], table["num_targets"])))
    for i, (speed, k) in enumerate(pairs):
        mask = (table["speed_mps"] == speed) & (table["num_targets"] == k)
        sigma = table["sigma_phi_deg"][mask]
        order = np.argsort(sigma)
        color = f"C{i}"
        key = f"{speed:g}/{k:g}"
        label = spec.legend.get(key, f"v={speed:g} m/s, K={k:g}")
        ax.plot(sigma[order], table["std_sim_mps"][mask][order],
                "-", color=color, label=f"{label} (simulation)")
        ax.plot(sigma[order], table["std_analysis_mps"][mask][order],
                "--", color=color, label=f"{label} (analysis)")
    ax.set_xlabel(spec.xlabel or "array angle error std (deg)")
    ax.set_ylabel(spec.ylabel or "velocity error std (m/s)")
    ax.set_title(spec.title or "Velocity estimation error: simulation vs analysis")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    return fig


def build_image(grid, spec):
    ranges_m, angles_deg, intensity_db = grid
    fig, ax = plt.subplots(figsize=(7, 5))
    vmax = float(np.max(intensity_db))
    mesh = ax.pcolormesh(
        angles_deg, ranges_m, intensity_db, cmap="jet", vmin=vmax - 40.0, vmax=vmax,
        shading="nearest",
    )
    fig.colorbar(mesh, ax=ax, label="intensity (dB)")
    ax.set_xlabel(spec.xlabel or "angle (deg)")
    ax.set_ylabel(spec.ylabel or "range (m)")
    ax.set_title(spec.title or "SAR output intensity")
    return fig


_BUILDERS = {
    "rmse-family": build_rmse_family,
    "resolution": build_resolution,
    "gain": build_gain,
    "velcov": build_velcov,
}


def build_figure(spec: FigureSpec):
    """Matplotlib figure for a spec (not yet saved)."""
    if spec.kind == "image":
        return build_image(load_image_grid(spec.input_csv), spec)
    table = load_table(spec.input_csv, spec.kind)
    return _BUILDERS[spec.kind](table, spec)


def render(spec: FigureSpec) -> str:
    """Render one spec to its output path (PNG or SVG by extension)."""
    fig = build_figure(spec)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    # Suppress embedded timestamps so identical inputs give identical bytes.
    metadata = {"Date": None} if out.suffix.lower() == ".svg" else None
    fig.savefig(out, dpi=150, metadata=metadata)
    plt.close(fig)
    return str(out)


def infer_kind(path) -> str | None:
    """Figure kind implied by a CSV header, or None if unrecognized."""
    lines = _read_lines(path)
    if not lines:
        return None
    header = lines[0].split(",")
    if header and header[0] == "range_m":
        return "image"
    for kind, required in REQUIRED_COLUMNS.items():
        if all(col in header for col in required):
            return kind
    return None


def auto_specs(results_dir, out_dir=None, fmt="png"):
    """Specs for every recognizable CSV in a directory."""
    results = Path(results_dir)
    out = Path(out_dir) if out_dir else results
    specs = []
    for csv_path in sorted(results.glob("*.csv")):
        kind = infer_kind(csv_path)
        if kind is None:
            continue
        specs.append(
            FigureSpec(
                input_csv=str(csv_path),
                kind=kind,
                output=str(out / (csv_path.stem + "." + fmt)),
            )
        )
    return specs
