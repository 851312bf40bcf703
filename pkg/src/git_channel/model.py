"""Physical model of two gravitationally coupled, laser-driven optomechanical systems.

Every rate and frequency in this package is an angular frequency in s^-1.
Temperatures are kelvin, occupation numbers dimensionless.  The benchmark
numbers appearing in docstrings and tests follow the same convention: the
gravitational coupling of two touching gold spheres comes out at 3.58e-6 s^-1
only for omega_B = 2*pi*0.03 s^-1, which fixes the choice.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "SymmetricParams",
    "AsymmetricParams",
    "DeviceGeometry",
    "CriticalFrequencies",
    "Cooperativities",
    "RwaCheck",
    "ConfigError",
    "thermal_occupation",
    "lambda_spheres",
    "lambda_for_geometry",
    "critical_frequencies",
    "rwa_valid",
    "cooperativities",
    "git_vs_gie_ratio",
    "parse_config_text",
    "load_config",
    "params_from_config",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants in SI units (CODATA rounded)."""

    G: float = 6.674e-11        # gravitational constant, m^3 kg^-1 s^-2
    hbar: float = 1.0546e-34    # reduced Planck constant, J s
    k_B: float = 1.3807e-23     # Boltzmann constant, J K^-1
    rho_Au: float = 1.93e4      # gold mass density, kg m^-3

    def __post_init__(self):
        for name in ("G", "hbar", "k_B", "rho_Au"):
            if not getattr(self, name) > 0:
                raise ValueError(f"constant {name} must be strictly positive")


CONSTANTS = PhysicalConstants()


def _require_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


def thermal_occupation(omega_B, temperature, constants=CONSTANTS):
    """Mean bosonic occupation of a mode of frequency ``omega_B`` at ``temperature``.

    Parameters
    ----------
    omega_B : float
        Mechanical angular frequency (s^-1), > 0.
    temperature : float
        Bath temperature (K), >= 0.  ``temperature = 0`` returns exactly 0.

    Returns
    -------
    float
        1 / (exp(hbar*omega_B / (k_B*T)) - 1), evaluated with ``expm1`` so the
        classical regime hbar*omega_B << k_B*T does not lose precision.
    """
    _require_finite(omega_B=omega_B, temperature=temperature)
    if omega_B <= 0:
        raise ValueError("omega_B must be positive")
    if temperature < 0:
        raise ValueError("temperature must be non-negative")
    if temperature == 0.0:
        return 0.0
    x = constants.hbar * omega_B / (constants.k_B * temperature)
    if x > 700.0:  # avoid expm1 overflow; occupation is exp(-x) to machine precision
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def lambda_spheres(mass, distance, omega_B, constants=CONSTANTS):
    """Gravitational coupling rate G*m / (d^3 * omega_B) of two trapped spheres.

    ``mass`` is the sphere mass (kg) and ``distance`` the center-to-center
    separation (m).  For touching homogeneous spheres (d = 2R) the radius
    cancels and the rate reduces to pi*G*rho / (6*omega_B) = w_G^2 / omega_B.
    """
    _require_finite(mass=mass, distance=distance, omega_B=omega_B)
    if mass <= 0 or distance <= 0 or omega_B <= 0:
        raise ValueError("mass, distance and omega_B must be positive")
    return constants.G * mass / (distance**3 * omega_B)


@dataclass(frozen=True)
class CriticalFrequencies:
    """Device-level frequency scales bounding the experimentally useful region.

    w_G = sqrt(pi*G*rho/6) is set by the mass density alone (gravitational
    coupling scale of touching spheres); w_T = k_B*T/hbar marks the crossover
    between classical (omega_B << w_T) and quantum-suppressed thermal noise.
    """

    w_G: float
    w_T: float


def critical_frequencies(rho, temperature, constants=CONSTANTS):
    """Critical frequencies for a device of mass density ``rho`` at ``temperature``."""
    _require_finite(rho=rho, temperature=temperature)
    if rho <= 0 or temperature <= 0:
        raise ValueError("rho and temperature must be positive")
    w_G = math.sqrt(math.pi * constants.G * rho / 6.0)
    w_T = constants.k_B * temperature / constants.hbar
    return CriticalFrequencies(w_G=w_G, w_T=w_T)


@dataclass(frozen=True)
class SymmetricParams:
    """Shared parameter set of the two identical optomechanical systems.

    Attributes
    ----------
    omega_B : float
        Mechanical angular frequency (s^-1).
    gamma : float
        Mechanical damping rate (s^-1).
    kappa : float
        Optical damping rate (s^-1).
    g : float
        Effective optomechanical coupling rate (s^-1).
    lam : float
        Gravitational coupling rate between the two mechanical modes (s^-1).
    N_T : float
        Mean thermal occupation of the mechanical baths.
    Delta : float
        Optical detuning; the resonant model underlying this package requires
        Delta = omega_B, which is also the default.
    """

    omega_B: float
    gamma: float
    kappa: float
    g: float
    lam: float
    N_T: float
    Delta: float | None = None

    def __post_init__(self):
        _require_finite(omega_B=self.omega_B, gamma=self.gamma, kappa=self.kappa,
                        g=self.g, lam=self.lam, N_T=self.N_T)
        if self.omega_B <= 0 or self.gamma <= 0 or self.kappa <= 0:
            raise ValueError("omega_B, gamma and kappa must be strictly positive")
        if self.g < 0 or self.lam < 0 or self.N_T < 0:
            raise ValueError("g, lam and N_T must be non-negative")
        if self.Delta is None:
            object.__setattr__(self, "Delta", self.omega_B)
        elif self.Delta != self.omega_B:
            raise ValueError("the resonant model requires Delta = omega_B")

    @classmethod
    def from_temperature(cls, omega_B, gamma, kappa, g, lam, temperature,
                         constants=CONSTANTS):
        """Build params with N_T computed from a bath temperature in kelvin."""
        return cls(omega_B=omega_B, gamma=gamma, kappa=kappa, g=g, lam=lam,
                   N_T=thermal_occupation(omega_B, temperature, constants))

    def with_g(self, g):
        """Copy of the parameter set with a different optomechanical coupling."""
        return replace(self, g=g)

    @property
    def Q(self):
        """Mechanical quality factor omega_B / gamma."""
        return self.omega_B / self.gamma


@dataclass(frozen=True)
class AsymmetricParams:
    """Independent parameter sets for the two systems plus the shared coupling.

    The model remains valid only for nearly degenerate mechanical frequencies;
    a large relative detuning |omega_B_1 - omega_B_2| raises a warning, not an
    error, so that sweeps may probe the boundary.
    """

    omega_B_1: float
    gamma_1: float
    kappa_1: float
    g_1: float
    Delta_1: float
    N_T_1: float
    omega_B_2: float
    gamma_2: float
    kappa_2: float
    g_2: float
    Delta_2: float
    N_T_2: float
    lam: float

    def __post_init__(self):
        for j in ("1", "2"):
            if getattr(self, f"omega_B_{j}") <= 0 or getattr(self, f"gamma_{j}") <= 0 \
                    or getattr(self, f"kappa_{j}") <= 0:
                raise ValueError("omega_B, gamma and kappa must be strictly positive")
            if getattr(self, f"g_{j}") < 0 or getattr(self, f"N_T_{j}") < 0:
                raise ValueError("g and N_T must be non-negative")
        if self.lam < 0:
            raise ValueError("lam must be non-negative")
        if abs(self.omega_B_1 - self.omega_B_2) > 0.1 * self.omega_B_1:
            warnings.warn(
                "mechanical frequencies differ by more than 10%; the nearly "
                "degenerate model assumption is questionable", stacklevel=2)

    @classmethod
    def from_symmetric(cls, p: SymmetricParams, Delta=None):
        delta = p.Delta if Delta is None else Delta
        return cls(omega_B_1=p.omega_B, gamma_1=p.gamma, kappa_1=p.kappa, g_1=p.g,
                   Delta_1=delta, N_T_1=p.N_T,
                   omega_B_2=p.omega_B, gamma_2=p.gamma, kappa_2=p.kappa, g_2=p.g,
                   Delta_2=delta, N_T_2=p.N_T, lam=p.lam)

    @property
    def is_symmetric(self):
        return (self.omega_B_1 == self.omega_B_2 and self.gamma_1 == self.gamma_2
                and self.kappa_1 == self.kappa_2 and self.g_1 == self.g_2
                and self.Delta_1 == self.Delta_2 and self.N_T_1 == self.N_T_2)


@dataclass(frozen=True)
class DeviceGeometry:
    """Two identical spherical test masses and their thermal environment."""

    mass: float          # kg
    distance: float      # center-to-center separation, m
    radius: float        # sphere radius, m
    rho: float           # mass density, kg m^-3
    temperature: float   # K

    def __post_init__(self):
        _require_finite(mass=self.mass, distance=self.distance, radius=self.radius,
                        rho=self.rho, temperature=self.temperature)
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.distance < 2 * self.radius:
            raise ValueError("distance must be at least one sphere diameter")
        if self.mass <= 0 or self.rho <= 0 or self.temperature <= 0:
            raise ValueError("mass, rho and temperature must be positive")

    @classmethod
    def from_spheres(cls, radius, rho, temperature, distance=None):
        """Homogeneous spheres of given radius and density; distance defaults to 2R."""
        mass = 4.0 / 3.0 * math.pi * radius**3 * rho
        if distance is None:
            distance = 2.0 * radius
        return cls(mass=mass, distance=distance, radius=radius, rho=rho,
                   temperature=temperature)


def lambda_for_geometry(geometry: DeviceGeometry, omega_B, constants=CONSTANTS):
    """Gravitational coupling rate of a sphere pair at mechanical frequency omega_B."""
    return lambda_spheres(geometry.mass, geometry.distance, omega_B, constants)


@dataclass(frozen=True)
class RwaCheck:
    """Outcome of the rotating-wave-approximation validity test.

    ``thermal_margin`` is N_T divided by the light-induced noise rate bound
    g^2*kappa / (gamma*omega_B^2); ``coupling_margin`` is kappa / g.  Both must
    exceed ``margin_factor`` for the single-mode channel model to apply.
    """

    valid: bool
    thermal_margin: float
    coupling_margin: float
    bound: float


def rwa_valid(params: SymmetricParams, margin_factor=10.0):
    """Check that thermal noise dominates residual light-induced heating.

    The resonant weak-coupling model drops counter-rotating terms, which is
    justified when N_T >> (g^2/gamma)*(kappa/omega_B^2) and g << kappa.  The
    ``margin_factor`` quantifies ">>" (default: one order of magnitude).
    """
    bound = params.g**2 * params.kappa / (params.gamma * params.omega_B**2)
    thermal_margin = math.inf if bound == 0 else params.N_T / bound
    coupling_margin = math.inf if params.g == 0 else params.kappa / params.g
    valid = thermal_margin > margin_factor and coupling_margin > margin_factor
    return RwaCheck(valid=valid, thermal_margin=thermal_margin,
                    coupling_margin=coupling_margin, bound=bound)


@dataclass(frozen=True)
class Cooperativities:
    """Dimensionless couplings and response functions of the asymmetric model.

    Gamma_j = 4 g_j^2/(kappa_j gamma_j) and Gamma_lambda = 4 lam^2/(gamma_1 gamma_2)
    are the optomechanical and gravitational cooperativities.  x_j and y_j are
    the optical and mechanical detunings relative to their linewidths; varrho
    is the normalized loaded response of system 1 and varsigma the response of
    system 2 dressed by the gravitational back-action of system 1.
    """

    Gamma_1: float
    Gamma_2: float
    Gamma_lambda: float
    x_1: float
    x_2: float
    y_1: float
    y_2: float
    varrho: complex
    varsigma: complex


def cooperativities(params: AsymmetricParams, omega):
    """Evaluate cooperativities and detuning response functions at ``omega``.

    ``omega`` is measured in the laser frame, where omega = omega_B_1 is the
    resonant operating point of the tuned channel.
    """
    p = params
    Gamma_1 = 4.0 * p.g_1**2 / (p.kappa_1 * p.gamma_1)
    Gamma_2 = 4.0 * p.g_2**2 / (p.kappa_2 * p.gamma_2)
    Gamma_lambda = 4.0 * p.lam**2 / (p.gamma_1 * p.gamma_2)
    x_1 = 2.0 * (p.Delta_1 - omega) / p.kappa_1
    x_2 = 2.0 * (p.Delta_2 - omega) / p.kappa_2
    y_1 = 2.0 * (p.omega_B_1 - omega) / p.gamma_1
    y_2 = 2.0 * (p.omega_B_2 - omega) / p.gamma_2
    varrho = (1.0 + 1j * x_1) * (1.0 + 1j * y_1) + Gamma_1
    varsigma = (1.0 + 1j * x_2) * (
        (1.0 + 1j * y_2) + (1.0 + 1j * x_1) * Gamma_lambda / varrho)
    return Cooperativities(Gamma_1=Gamma_1, Gamma_2=Gamma_2,
                           Gamma_lambda=Gamma_lambda, x_1=x_1, x_2=x_2,
                           y_1=y_1, y_2=y_2, varrho=varrho, varsigma=varsigma)


def git_vs_gie_ratio(geometry: DeviceGeometry, gamma, constants=CONSTANTS):
    """Figure of merit hbar*G*m / (gamma*k_B*T*d^3), shared by both experiment types.

    This single dimensionless number is simultaneously the entanglement-rate /
    decoherence-rate ratio of entanglement-generation proposals and the
    low-frequency limit lam/(gamma*N_T) of this package's channel criterion,
    so a value above 1 marks the interesting regime for either approach.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return (constants.hbar * constants.G * geometry.mass
            / (gamma * constants.k_B * geometry.temperature * geometry.distance**3))


# --- flat key = value configuration files -----------------------------------

class ConfigError(ValueError):
    """Raised for malformed configuration content or unknown keys."""


_BASE_KEYS = ("omega_B", "gamma", "kappa", "g", "lambda", "N_T", "temperature_K",
              "Delta")
_KNOWN_KEYS = frozenset(_BASE_KEYS) | {f"{k}_{j}" for k in _BASE_KEYS for j in "12"}


def parse_config_text(text):
    """Parse ``key = value`` lines (with ``#`` comments) into a string->float dict."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown configuration key: {key!r}")
        if key in values:
            raise ConfigError(f"duplicate configuration key: {key!r}")
        try:
            values[key] = float(value.strip())
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: invalid number for {key!r}") from exc
    return values


def load_config(path):
    """Read and parse a configuration file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def _resolve_occupation(cfg, suffix, constants):
    n_key, t_key = f"N_T{suffix}", f"temperature_K{suffix}"
    if n_key in cfg and t_key in cfg:
        raise ConfigError(f"supply either {n_key!r} or {t_key!r}, not both")
    if n_key in cfg:
        return cfg[n_key]
    if t_key in cfg:
        return thermal_occupation(cfg[f"omega_B{suffix}"], cfg[t_key], constants)
    raise ConfigError(f"missing required key: {n_key!r} or {t_key!r}")


def params_from_config(cfg, constants=CONSTANTS):
    """Build Symmetric/AsymmetricParams from a parsed configuration dict.

    Per-system ``_1``/``_2`` suffixes switch to the asymmetric model; ``lambda``
    is always shared.  Either ``N_T`` or ``temperature_K`` must be given.
    """
    for key in cfg:
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown configuration key: {key!r}")
    asymmetric = any(key.endswith(("_1", "_2")) for key in cfg)
    if asymmetric:
        mixed = [key for key in cfg
                 if key != "lambda" and not key.endswith(("_1", "_2"))]
        if mixed:
            raise ConfigError(
                f"cannot mix per-system and shared keys: {mixed[0]!r}")
    if not asymmetric:
        for key in ("omega_B", "gamma", "kappa", "g", "lambda"):
            if key not in cfg:
                raise ConfigError(f"missing required key: {key!r}")
        return SymmetricParams(
            omega_B=cfg["omega_B"], gamma=cfg["gamma"], kappa=cfg["kappa"],
            g=cfg["g"], lam=cfg["lambda"],
            N_T=_resolve_occupation(cfg, "", constants),
            Delta=cfg.get("Delta"))
    if "lambda" not in cfg:
        raise ConfigError("missing required key: 'lambda'")
    fields = {}
    for j in "12":
        for key in ("omega_B", "gamma", "kappa", "g"):
            full = f"{key}_{j}"
            if full not in cfg:
                raise ConfigError(f"missing required key: {full!r}")
            fields[full] = cfg[full]
        fields[f"N_T_{j}"] = _resolve_occupation(cfg, f"_{j}", constants)
        fields[f"Delta_{j}"] = cfg.get(f"Delta_{j}", cfg[f"omega_B_{j}"])
    return AsymmetricParams(lam=cfg["lambda"], **fields)
