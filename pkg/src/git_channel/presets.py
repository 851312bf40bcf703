"""Reference parameter sets used by the documentation, tests and CLI examples."""

from __future__ import annotations

import math

from .channel import optimal_point
from .model import (CONSTANTS, DeviceGeometry, SymmetricParams,
                    critical_frequencies, thermal_occupation)

__all__ = [
    "GOLD_SPHERE_OMEGA_B",
    "GOLD_SPHERE_Q",
    "GOLD_SPHERE_TEMPERATURE",
    "gold_sphere_params",
    "gold_sphere_geometry",
    "gold_sphere_config_text",
]

# Benchmark operating point: two touching gold spheres acting as 30 mHz
# mechanical resonators with quality factor 1e14 at 1 mK, read out by cavities
# of linewidth 0.1 * omega_B driven at the optimal coupling.
GOLD_SPHERE_OMEGA_B = 2.0 * math.pi * 0.03
GOLD_SPHERE_Q = 1e14
GOLD_SPHERE_TEMPERATURE = 1e-3


def gold_sphere_params(constants=CONSTANTS):
    """Symmetric parameters of the gold-sphere benchmark point, g tuned to g_opt."""
    omega_B = GOLD_SPHERE_OMEGA_B
    gamma = omega_B / GOLD_SPHERE_Q
    kappa = 0.1 * omega_B
    w_G = critical_frequencies(constants.rho_Au, GOLD_SPHERE_TEMPERATURE,
                               constants).w_G
    lam = w_G**2 / omega_B
    n_t = thermal_occupation(omega_B, GOLD_SPHERE_TEMPERATURE, constants)
    base = SymmetricParams(omega_B=omega_B, gamma=gamma, kappa=kappa, g=0.0,
                           lam=lam, N_T=n_t)
    return base.with_g(optimal_point(base).g_opt)


def gold_sphere_geometry(radius=0.01, constants=CONSTANTS):
    """Touching gold spheres at 1 mK; the radius cancels from every rate."""
    return DeviceGeometry.from_spheres(radius=radius, rho=constants.rho_Au,
                                       temperature=GOLD_SPHERE_TEMPERATURE)


def gold_sphere_config_text(constants=CONSTANTS):
    """The benchmark point as CLI configuration text."""
    p = gold_sphere_params(constants)
    return (
        "# Two touching gold spheres at 1 mK: 30 mHz resonators, Q = 1e14,\n"
        "# cavity linewidth 0.1 * omega_B, optimal optomechanical coupling.\n"
        f"omega_B = {p.omega_B!r}\n"
        f"gamma = {p.gamma!r}\n"
        f"kappa = {p.kappa!r}\n"
        f"g = {p.g!r}\n"
        f"lambda = {p.lam!r}\n"
        f"temperature_K = {GOLD_SPHERE_TEMPERATURE!r}\n"
    )
