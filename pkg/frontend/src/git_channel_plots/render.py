"""Render spectral scans and design-space maps from the computation CSVs.

Schemas are pinned: a file whose header does not match the declared schema of
its figure id is refused.  Rendering is deterministic for a fixed matplotlib
version (Agg backend, fixed geometry, no embedded timestamps), so re-rendering
the same CSV reproduces the image byte for byte.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "git-channel-plots"  # deterministic ids
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap, LogNorm  # noqa: E402

__all__ = ["FigureSpec", "SchemaError", "BoundaryMismatch", "render",
           "render_all", "SPECTRUM_HEADER", "GRID_HEADER"]

SPECTRUM_HEADER = ["omega", "eta", "output_noise", "ratio", "nonclassical"]
GRID_HEADER = ["omega_B", "Q", "ratio", "classification", "eta_opt",
               "tau_min_s", "P_min_W"]

# quantity plotted per map figure, with a human axis label
MAP_QUANTITY = {
    "fig2": ("classification", "non-classicality"),
    "s2": ("classification", "non-classicality"),
    "s3": ("eta_opt", "optimal transmissivity"),
    "s4": ("tau_min_s", "minimum experiment time (s)"),
    "s5": ("P_min_W", "minimum probe power (W)"),
}

# gold spheres at 1 mK; used only for the annotation line and the marker
DEFAULT_W_G = 8.2124183896718750e-04
DEFAULT_W_T = 1.3092167646501042e+08
DEFAULT_MARKER = (0.18849555921538758, 1e14)


class SchemaError(ValueError):
    """CSV header or content does not match the figure's declared schema."""


class BoundaryMismatch(UserWarning):
    """Heatmap classification disagrees with the analytic boundary line."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render.

    ``figure_id`` is ``spectrum`` or one of the map ids; the axis scales are
    implied by the figure type (linear/log for spectra, log/log for maps).
    ``marker`` overlays the reference design point on maps; ``w_G``/``w_T``
    parametrize the annotated low-frequency boundary line.
    """

    csv_path: Path
    figure_id: str
    output_path: Path
    image_format: str = "png"
    marker: tuple = DEFAULT_MARKER
    w_G: float = DEFAULT_W_G
    w_T: float = DEFAULT_W_T

    def __post_init__(self):
        if self.figure_id != "spectrum" and self.figure_id not in MAP_QUANTITY:
            raise ValueError(f"unknown figure id: {self.figure_id!r}")
        if self.image_format not in ("png", "svg"):
            raise ValueError("image format must be 'png' or 'svg'")


def _read_csv(path, expected_header):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if header != expected_header:
            raise SchemaError(
                f"{path}: header {header!r} does not match {expected_header!r}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _load_spectrum(path):
    rows = _read_csv(path, SPECTRUM_HEADER)
    omega = np.array([float(r[0]) for r in rows])
    eta = np.array([float(r[1]) for r in rows])
    noise = np.array([float(r[2]) for r in rows])
    flag = np.array([r[4] == "true" for r in rows])
    return omega, eta, noise, flag


def _load_grid(path):
    rows = _read_csv(path, GRID_HEADER)
    omega = np.array([float(r[0]) for r in rows])
    quality = np.array([float(r[1]) for r in rows])
    quantum = np.array([r[3] == "quantum" for r in rows])
    columns = {
        "classification": quantum.astype(float),
        "eta_opt": np.array([float(r[4]) for r in rows]),
        "tau_min_s": np.array([float(r[5]) for r in rows]),
        "P_min_W": np.array([float(r[6]) for r in rows]),
    }
    omegas = np.unique(omega)
    qualities = np.unique(quality)
    n_w, n_q = omegas.size, qualities.size
    if n_w * n_q != omega.size:
        raise SchemaError(f"{path}: rows do not form a complete grid")
    shaped = {}
    order = np.lexsort((quality, omega))
    for name, values in columns.items():
        shaped[name] = values[order].reshape(n_w, n_q)
    return omegas, qualities, shaped


def _check_boundary(omegas, qualities, quantum, w_G, w_T):
    """Compare the map's classification flip against the analytic line.

    Only columns deep in the low-frequency regime are compared, one grid cell
    of slack; any worse disagreement raises the BoundaryMismatch warning (a
    rendering-time regression tripwire, not an error).
    """
    if qualities.size < 2:
        return True
    log_step = math.log10(qualities[-1] / qualities[0]) / (qualities.size - 1)
    consistent = True
    for i, omega_B in enumerate(omegas):
        if omega_B > w_T / 100.0:
            continue
        flags = quantum[i] > 0.5
        if not flags.any() or flags.all():
            continue
        transition = int(np.argmax(flags))
        q_line = w_T * omega_B / w_G**2
        if abs(math.log10(qualities[transition] / q_line)) > 2.0 * log_step:
            consistent = False
            warnings.warn(
                f"classification transition at omega_B={omega_B:.3e} sits "
                f"{abs(math.log10(qualities[transition] / q_line)):.2f} dex "
                "from the analytic boundary line", BoundaryMismatch,
                stacklevel=3)
    return consistent


def _save(fig, spec: FigureSpec):
    spec.output_path.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if spec.image_format == "svg" else {}
    fig.savefig(spec.output_path, format=spec.image_format, dpi=150,
                metadata=metadata)
    plt.close(fig)


def _render_spectrum(spec: FigureSpec):
    omega, eta, noise, flag = _load_spectrum(spec.csv_path)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    positive = noise > 0
    ax.semilogy(omega, eta, color="tab:blue", label="transmissivity")
    ax.semilogy(omega[positive], noise[positive], "--", color="tab:red",
                label="output noise")
    if flag.any():
        lo = omega[flag].min()
        hi = omega[flag].max()
        ax.axvspan(lo, hi, color="lightgreen", alpha=0.4, zorder=0,
                   label="non-classical band")
    ax.set_xlabel("probe frequency (s$^{-1}$, cavity resonance at 0)")
    ax.set_ylabel("transmissivity / output noise")
    ax.legend(loc="lower center")
    ax.set_title("gravity-induced transparency spectrum")
    fig.tight_layout()
    _save(fig, spec)
    return spec.output_path


def _render_map(spec: FigureSpec):
    omegas, qualities, shaped = _load_grid(spec.csv_path)
    column, label = MAP_QUANTITY[spec.figure_id]
    values = shaped[column]
    _check_boundary(omegas, qualities, shaped["classification"], spec.w_G,
                    spec.w_T)
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    if column == "classification":
        cmap = ListedColormap(["#d8d8d8", "#2d7dd2"])
        mesh = ax.pcolormesh(omegas, qualities, values.T, cmap=cmap,
                             vmin=0.0, vmax=1.0, shading="nearest")
        bar = fig.colorbar(mesh, ax=ax, ticks=[0.25, 0.75])
        bar.ax.set_yticklabels(["classical", "quantum"])
    else:
        finite = values[np.isfinite(values) & (values > 0.0)]
        norm = LogNorm(vmin=finite.min(), vmax=finite.max())
        plotted = np.where(np.isfinite(values) & (values > 0.0), values,
                           np.nan)
        mesh = ax.pcolormesh(omegas, qualities, plotted.T, cmap="viridis",
                             norm=norm, shading="nearest")
        fig.colorbar(mesh, ax=ax, label=label)
    line = spec.w_T * omegas / spec.w_G**2
    inside = (line >= qualities[0]) & (line <= qualities[-1])
    ax.plot(omegas[inside], line[inside], "k:",
            label="low-frequency boundary")
    ax.plot(*spec.marker, marker="*", color="red", markersize=14,
            linestyle="none", label="reference design")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlim(omegas[0], omegas[-1])
    ax.set_ylim(qualities[0], qualities[-1])
    ax.set_xlabel("mechanical frequency $\\omega_B$ (s$^{-1}$)")
    ax.set_ylabel("quality factor $Q$")
    ax.legend(loc="upper left")
    ax.set_title(f"{label} over the design plane")
    fig.tight_layout()
    _save(fig, spec)
    return spec.output_path


def render(spec: FigureSpec):
    """Render one figure; returns the output path.

    Raises :class:`SchemaError` for malformed input and emits a
    :class:`BoundaryMismatch` warning when a map's classification disagrees
    with the annotated boundary line by more than one grid cell.
    """
    if spec.figure_id == "spectrum":
        return _render_spectrum(spec)
    return _render_map(spec)


def render_all(csv_dir, out_dir, image_format="png"):
    """Render every known CSV found in ``csv_dir``; returns the written paths."""
    csv_dir = Path(csv_dir)
    out_dir = Path(out_dir)
    written = []
    for figure_id in ("spectrum", *MAP_QUANTITY):
        source = csv_dir / f"{figure_id}.csv"
        if not source.exists():
            continue
        spec = FigureSpec(csv_path=source, figure_id=figure_id,
                          output_path=out_dir / f"{figure_id}.{image_format}",
                          image_format=image_format)
        written.append(render(spec))
    if not written:
        raise FileNotFoundError(f"no renderable CSV files in {csv_dir}")
    return written
