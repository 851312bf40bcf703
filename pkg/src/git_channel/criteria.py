"""Non-classicality decisions and feasibility quantities over parameter space.

A thermal attenuator admits three equivalent non-classicality criteria (not
entanglement-breaking; not simulable by local operations and classical
communication; nonzero two-way quantum capacity), all reducing to the single
ratio test eta / ((1 - eta) N) > 1.  This module evaluates that test pointwise
and over the (omega_B, Q) plane of mechanical designs, together with the
practical costs of each design point: minimum experiment duration and minimum
probe power.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._util import chunked_map
from .model import CONSTANTS, DeviceGeometry, critical_frequencies

__all__ = [
    "CriteriaVerdicts",
    "FeasibilityPoint",
    "GRID_CSV_HEADER",
    "is_entanglement_breaking",
    "nonclassicality_criteria",
    "parameter_space_ratio",
    "low_frequency_boundary_Q",
    "minimum_time",
    "minimum_time_for_params",
    "minimum_power",
    "minimum_transmissivity",
    "classify_grid",
    "write_grid_csv",
]


def is_entanglement_breaking(eta, n_eff, one_minus_eta=None):
    """True when every entangled input leaves the channel separable.

    The channel stays *not* entanglement-breaking on the boundary itself
    (eta >= (1 - eta) N), so equality returns False.  Pass the stable
    complement ``one_minus_eta`` when eta is indistinguishable from 1.
    """
    if not 0.0 <= eta <= 1.0 + 1e-12 or n_eff < 0:
        raise ValueError("require 0 <= eta <= 1 and n_eff >= 0")
    if one_minus_eta is None:
        one_minus_eta = 1.0 - eta
    return eta < one_minus_eta * n_eff


@dataclass(frozen=True)
class CriteriaVerdicts:
    """The three equivalent non-classicality verdicts for a thermal attenuator.

    For this channel family the criteria coincide, so all fields are equal;
    they are spelled out separately because an experiment may target any one
    of them.  All use the strict ratio test eta / ((1 - eta) N) > 1; the
    boundary case is surfaced separately through ``boundary_non_eb`` which
    follows the inclusive convention of the entanglement-breaking threshold.
    """

    not_entanglement_breaking: bool
    not_locc_simulable: bool
    nonzero_two_way_capacity: bool
    ratio: float
    boundary_non_eb: bool

    @property
    def nonclassical(self):
        return self.not_entanglement_breaking


def nonclassicality_criteria(eta, n_eff, one_minus_eta=None):
    """Evaluate all three (equivalent) non-classicality criteria at (eta, N)."""
    if not 0.0 <= eta <= 1.0 + 1e-12 or n_eff < 0:
        raise ValueError("require 0 <= eta <= 1 and n_eff >= 0")
    if one_minus_eta is None:
        one_minus_eta = 1.0 - eta
    noise = one_minus_eta * n_eff
    if noise == 0.0:
        ratio = math.inf if eta > 0 else 0.0
    else:
        ratio = eta / noise
    strict = ratio > 1.0
    return CriteriaVerdicts(not_entanglement_breaking=strict,
                            not_locc_simulable=strict,
                            nonzero_two_way_capacity=strict,
                            ratio=ratio,
                            boundary_non_eb=ratio >= 1.0)


def parameter_space_ratio(omega_B, Q, w_G, w_T):
    """Optimal-point criterion ratio as a function of design parameters only.

    Substituting gamma = omega_B/Q and lam = w_G^2/omega_B into the coupling
    criterion and using N(N+1) = 1/(4 sinh^2(omega_B/(2 w_T))) gives
    2 Q (w_G/omega_B)^2 sinh(omega_B/(2 w_T)); the channel is non-classical
    where this exceeds 1.
    """
    if min(omega_B, Q, w_G, w_T) <= 0:
        raise ValueError("all arguments must be positive")
    x = omega_B / (2.0 * w_T)
    if x > 700.0:  # sinh overflows; the ratio is unambiguously enormous
        return math.inf
    return 2.0 * Q * (w_G / omega_B) ** 2 * math.sinh(x)


def low_frequency_boundary_Q(omega_B, w_G, w_T):
    """Quality factor on the classical/quantum boundary for omega_B << w_T.

    Linearizing the sinh yields Q_boundary = w_T * omega_B / w_G^2, the
    straight boundary of the log-log feasibility maps.  Warns when used
    outside its regime of validity.
    """
    if min(omega_B, w_G, w_T) <= 0:
        raise ValueError("all arguments must be positive")
    if omega_B > w_T / 10.0:
        warnings.warn("low-frequency boundary used at omega_B > w_T/10; the "
                      "linearized form is inaccurate here", stacklevel=2)
    return w_T * omega_B / w_G**2


def minimum_time(omega_B, Q, w_G):
    """Shortest experiment able to resolve the transparency bandwidth (s).

    Equals 1 / (gamma + sqrt(gamma^2 + 4 lam^2)), rewritten in the design
    variables as (Q/omega_B) / (1 + sqrt(1 + 4 Q^2 w_G^4 / omega_B^4)).
    """
    if min(omega_B, Q, w_G) <= 0:
        raise ValueError("all arguments must be positive")
    x = Q * (w_G / omega_B) ** 2
    return (Q / omega_B) / (1.0 + np.sqrt(1.0 + 4.0 * x * x))


def minimum_time_for_params(params):
    """Minimum experiment duration 1 / (transparency linewidth) for a parameter set."""
    from .channel import transparency_linewidth
    return 1.0 / transparency_linewidth(params)


def minimum_power(eta_opt, tau_min, omega_A, constants=CONSTANTS):
    """Lower bound on the probe power needed to transmit at least one photon (W).

    hbar*omega_A / (eta * tau): at least one output photon must arrive within
    the minimum experiment duration.  A vanishing transmissivity marks the
    point untestable and returns inf.
    """
    if tau_min <= 0 or omega_A <= 0:
        raise ValueError("tau_min and omega_A must be positive")
    if not 0.0 <= eta_opt <= 1.0 + 1e-12:
        raise ValueError("eta_opt must lie in [0, 1]")
    if eta_opt == 0.0:
        return math.inf
    return constants.hbar * omega_A / (eta_opt * tau_min)


def minimum_transmissivity(probe_power, duration, omega_A, constants=CONSTANTS):
    """Photon-count bound: smallest testable transmissivity at a given probe.

    The number of output photons, (input photons) * eta, must be at least 1,
    so eta >= hbar*omega_A / (P * tau).  This is the same inequality as
    :func:`minimum_power`, solved for the transmissivity.
    """
    if probe_power <= 0 or duration <= 0 or omega_A <= 0:
        raise ValueError("probe_power, duration and omega_A must be positive")
    return constants.hbar * omega_A / (probe_power * duration)


@dataclass(frozen=True)
class FeasibilityPoint:
    """Channel feasibility at one (omega_B, Q) design point.

    ``classification`` is "quantum" exactly when ``ratio`` > 1 (strict);
    ``non_eb_inclusive`` carries the >= 1 convention of the
    entanglement-breaking threshold for boundary bookkeeping.
    """

    omega_B: float
    Q: float
    ratio: float
    classification: str
    eta_opt: float
    tau_min: float
    P_min: float
    non_eb_inclusive: bool


GRID_CSV_HEADER = "omega_B,Q,ratio,classification,eta_opt,tau_min_s,P_min_W"


def _grid_rows(omegas, Qs, w_G, w_T, omega_A, constants):
    points = []
    for omega_B in omegas:
        x = Qs * (w_G / omega_B) ** 2
        ratio = 2.0 * x * np.sinh(omega_B / (2.0 * w_T))
        root = np.sqrt(1.0 + 4.0 * x * x)
        eta = 2.0 * x * x / (1.0 + root + 2.0 * x * x)
        tau = (Qs / omega_B) / (1.0 + root)
        with np.errstate(divide="ignore"):
            power = np.where(eta > 0.0, constants.hbar * omega_A / (eta * tau),
                             np.inf)
        for j, Q in enumerate(Qs):
            r = float(ratio[j])
            points.append(FeasibilityPoint(
                omega_B=float(omega_B), Q=float(Q), ratio=r,
                classification="quantum" if r > 1.0 else "classical",
                eta_opt=float(eta[j]), tau_min=float(tau[j]),
                P_min=float(power[j]), non_eb_inclusive=r >= 1.0))
    return points


def classify_grid(omega_B_range=(1e-3, 1e9), Q_range=(1.0, 1e16),
                  n_omega_B=200, n_Q=200, device: DeviceGeometry | None = None,
                  omega_A=1e15, workers=1, constants=CONSTANTS):
    """Classify a log-spaced (omega_B, Q) grid of mechanical designs.

    Each cell is evaluated with the exact sinh criterion, the optimal
    transmissivity, the minimum experiment time and the minimum probe power
    (for an optical readout at ``omega_A``).  Cells are returned omega_B-major
    then Q-ascending regardless of ``workers``; rows are distributed across a
    thread pool because every cell is an independent pure computation.
    """
    if not (omega_B_range[0] > 0 and Q_range[0] > 0):
        raise ValueError("ranges must be positive")
    if not (omega_B_range[1] > omega_B_range[0] and Q_range[1] > Q_range[0]):
        raise ValueError("ranges must have positive extent")
    if n_omega_B < 2 or n_Q < 2:
        raise ValueError("need at least a 2 x 2 grid")
    if device is None:
        device = DeviceGeometry.from_spheres(radius=0.01, rho=constants.rho_Au,
                                             temperature=1e-3)
    cf = critical_frequencies(device.rho, device.temperature, constants)
    omegas = np.logspace(math.log10(omega_B_range[0]),
                         math.log10(omega_B_range[1]), n_omega_B)
    Qs = np.logspace(math.log10(Q_range[0]), math.log10(Q_range[1]), n_Q)

    def run_chunk(chunk):
        return _grid_rows(chunk, Qs, cf.w_G, cf.w_T, omega_A, constants)

    chunks = np.array_split(omegas, max(1, min(workers, len(omegas))))
    out = []
    for part in chunked_map(run_chunk, chunks, workers):
        out.extend(part)
    return out


def _format(value):
    if math.isinf(value):
        return "inf"
    return repr(float(value))


def write_grid_csv(points, fh):
    """Write feasibility points as CSV with shortest round-trip float formatting.

    Every row is revalidated against its own consistency constraints before
    being emitted.
    """
    fh.write(GRID_CSV_HEADER + "\n")
    for p in points:
        if (p.classification == "quantum") != (p.ratio > 1.0):
            raise ValueError("inconsistent classification flag")
        if not 0.0 <= p.eta_opt <= 1.0:
            raise ValueError("eta_opt outside [0, 1]")
        fh.write(f"{_format(p.omega_B)},{_format(p.Q)},{_format(p.ratio)},"
                 f"{p.classification},{_format(p.eta_opt)},"
                 f"{_format(p.tau_min)},{_format(p.P_min)}\n")
