"""Gravity-induced optical channel between two optomechanical systems.

Computes the frequency-domain transfer of an optical probe routed from one
optomechanical system to another through their gravitational coupling, casts
it as a thermal-attenuator channel, decides its non-classicality, maps
feasibility over mechanical design space and simulates the falsification
protocols on a Gaussian-state engine.  Independent numerical oracles validate
every closed-form result.
"""

__version__ = "0.1.0"

from .channel import (AttenuatorChannel, OptimalPoint, TransferCoefficients,
                      channel_at, optimal_point, ratio_at,
                      transparency_linewidth)
from .model import (CONSTANTS, AsymmetricParams, DeviceGeometry,
                    PhysicalConstants, SymmetricParams, critical_frequencies,
                    thermal_occupation)

__all__ = [
    "__version__",
    "CONSTANTS",
    "PhysicalConstants",
    "SymmetricParams",
    "AsymmetricParams",
    "DeviceGeometry",
    "AttenuatorChannel",
    "TransferCoefficients",
    "OptimalPoint",
    "thermal_occupation",
    "critical_frequencies",
    "channel_at",
    "ratio_at",
    "optimal_point",
    "transparency_linewidth",
]
