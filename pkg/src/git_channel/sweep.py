"""Batch computations: spectral scans and feasibility maps as tabular data.

The primary component emits figures as CSV only; rendering is a separate
package.  Grid files share the feasibility schema of :mod:`.criteria`;
spectral files use ``omega,eta,output_noise,ratio,nonclassical``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import chunked_map
from .channel import channel_at, ratio_at, transparency_linewidth
from .criteria import classify_grid, write_grid_csv
from .model import DeviceGeometry, SymmetricParams

__all__ = [
    "SpectralPoint",
    "SpectralScan",
    "SPECTRUM_CSV_HEADER",
    "FIGURE_IDS",
    "FIGURE_COLUMNS",
    "spectrum_scan",
    "write_spectrum_csv",
    "figure_grid",
]

SPECTRUM_CSV_HEADER = "omega,eta,output_noise,ratio,nonclassical"

# Map figures and the grid column each one visualizes; all grids share the
# full feasibility schema.
FIGURE_COLUMNS = {
    "fig2": "classification",
    "s2": "classification",
    "s3": "eta_opt",
    "s4": "tau_min_s",
    "s5": "P_min_W",
}
FIGURE_IDS = tuple(FIGURE_COLUMNS)


@dataclass(frozen=True)
class SpectralPoint:
    """Channel figures at one probe frequency."""

    omega: float
    eta: float
    output_noise: float
    ratio: float
    nonclassical: bool


@dataclass(frozen=True)
class SpectralScan:
    """Frequency scan of the channel around the transparency peak.

    ``window`` annotates the estimated transparency band
    (-gamma_eff/2, +gamma_eff/2); rows are sorted by frequency.
    """

    params: SymmetricParams
    points: tuple
    gamma_eff: float
    window: tuple


def spectrum_scan(params: SymmetricParams, omega_min=None, omega_max=None,
                  n_points=2001, method="analytic", workers=1):
    """Scan transmissivity, output noise and criterion ratio over frequency.

    The default range is +-10 effective linewidths around the transparency
    peak; any explicit range must straddle 0 so the peak is visible.
    """
    gamma_eff = transparency_linewidth(params)
    if omega_min is None and omega_max is None:
        omega_max = 10.0 * gamma_eff
        omega_min = -omega_max
    if omega_min >= 0.0 or omega_max <= 0.0:
        raise ValueError("scan range must straddle omega = 0")
    if n_points < 3:
        raise ValueError("need at least 3 scan points")
    omegas = np.linspace(omega_min, omega_max, n_points)

    def evaluate(omega):
        ch = channel_at(params, float(omega), method=method)
        ratio = ratio_at(params, float(omega))
        return SpectralPoint(omega=float(omega), eta=ch.eta,
                             output_noise=ch.output_noise, ratio=ratio,
                             nonclassical=ratio > 1.0)

    chunks = np.array_split(omegas, max(1, min(workers, n_points)))
    points = []
    for part in chunked_map(lambda ws: [evaluate(w) for w in ws], chunks,
                            workers):
        points.extend(part)
    return SpectralScan(params=params, points=tuple(points),
                        gamma_eff=gamma_eff,
                        window=(-gamma_eff / 2.0, gamma_eff / 2.0))


def _format(value):
    if math.isinf(value):
        return "inf"
    return repr(float(value))


def write_spectrum_csv(scan: SpectralScan, fh):
    """Write a spectral scan as CSV, revalidating each row's consistency."""
    fh.write(SPECTRUM_CSV_HEADER + "\n")
    for p in scan.points:
        if p.nonclassical != (p.ratio > 1.0):
            raise ValueError("inconsistent nonclassical flag")
        if not 0.0 <= p.eta <= 1.0:
            raise ValueError("eta outside [0, 1]")
        flag = "true" if p.nonclassical else "false"
        fh.write(f"{_format(p.omega)},{_format(p.eta)},"
                 f"{_format(p.output_noise)},{_format(p.ratio)},{flag}\n")


def figure_grid(figure_id, device: DeviceGeometry | None = None, **grid_options):
    """Feasibility grid backing one of the map figures.

    All map figures share the same grid; ``FIGURE_COLUMNS[figure_id]`` names
    the column a renderer should visualize.  Options are forwarded to
    :func:`git_channel.criteria.classify_grid`.
    """
    if figure_id not in FIGURE_COLUMNS:
        raise ValueError(f"unknown figure id: {figure_id!r}; "
                         f"expected one of {sorted(FIGURE_COLUMNS)}")
    return classify_grid(device=device, **grid_options)


# re-exported here so callers writing figure CSVs need only this module
write_figure_csv = write_grid_csv
