"""The gravity-induced optical channel between the two optomechanical systems.

The steady-state input-output problem is solved in the frequency domain along
two deliberately independent routes:

* an analytic route evaluating the closed-form transfer coefficients, whose
  denominators are the determinant of the frequency-shifted drift matrix in
  factored form;
* a numeric route that LU-solves the same linear system generically, without
  any hand-derived coefficient formula.

Frequency conventions.  For symmetric parameters, ``omega`` is measured in
the interaction picture: omega = 0 is the optical cavity resonance and the
transparency peak.  The asymmetric operations follow the laser frame instead,
where the resonant point sits at omega = omega_B_1;
:func:`laser_to_interaction_frame` maps between the two.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .model import AsymmetricParams, SymmetricParams, cooperativities

__all__ = [
    "TransferCoefficients",
    "AttenuatorChannel",
    "OptimalPoint",
    "AsymmetricOptimum",
    "DegenerateFrequencyError",
    "drift_matrix",
    "asymmetric_drift_matrix",
    "transfer_coefficients_analytic",
    "transfer_coefficients_numeric",
    "channel_at",
    "ratio_at",
    "optimal_point",
    "reflection_at_optimum",
    "suboptimal_critical_frequency",
    "transparency_linewidth",
    "asymmetric_transfer_coefficients",
    "asymmetric_channel_at",
    "asymmetric_ratio",
    "asymmetric_optimum",
    "laser_to_interaction_frame",
    "interaction_to_laser_frame",
]

# Numerically vanished complement 1 - eta below this is reported as the
# noiseless limit (the effective occupation is then irrelevant).
NOISELESS_COMPLEMENT = 1e-15


class DegenerateFrequencyError(ValueError):
    """Raised when the response denominator vanishes at the requested frequency."""


@dataclass(frozen=True)
class TransferCoefficients:
    """Complex amplitudes decomposing the output field of the second cavity.

    Each coefficient multiplies one input field in the frequency-domain
    output of cavity 2:

    Attributes
    ----------
    signal : complex
        Amplitude of the optical input of system 1 (the transmitted probe).
    noise_mech1 : complex
        Amplitude of the mechanical noise input of system 1.
    reflection : complex
        Amplitude of the optical input of system 2 (its own back-reflection).
    noise_mech2 : complex
        Amplitude of the mechanical noise input of system 2.
    omega : float
        Evaluation frequency (s^-1).

    The four amplitudes form a row of a unitary scattering matrix, so their
    absolute squares sum to one; ``unitarity_defect`` measures the numerical
    violation.
    """

    signal: complex
    noise_mech1: complex
    reflection: complex
    noise_mech2: complex
    omega: float

    def as_array(self):
        return np.array([self.signal, self.noise_mech1, self.reflection,
                         self.noise_mech2], dtype=complex)

    def unitarity_sum(self):
        return float(np.sum(np.abs(self.as_array()) ** 2))

    def unitarity_defect(self):
        return abs(self.unitarity_sum() - 1.0)


@dataclass(frozen=True)
class AttenuatorChannel:
    """Phase-insensitive thermal attenuator acting on one frequency mode.

    Attributes
    ----------
    eta : float
        Transmissivity in [0, 1].
    n_eff : float
        Mean occupation of the effective environment mode.
    phi : float
        Deterministic phase imprinted on the transmitted signal (rad).
    omega : float
        Frequency at which the channel was evaluated (s^-1).
    one_minus_eta : float
        Complement 1 - eta, kept separately because it is formed from the
        noise amplitudes and stays accurate when eta rounds to 1.
    noiseless_limit : bool
        Set when 1 - eta fell below the representable complement; n_eff is
        reported as 0 in that case.
    """

    eta: float
    n_eff: float
    phi: float = 0.0
    omega: float = 0.0
    one_minus_eta: float | None = None
    noiseless_limit: bool = False

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0 + 1e-12:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if self.n_eff < 0:
            raise ValueError("n_eff must be non-negative")
        if self.one_minus_eta is None:
            object.__setattr__(self, "one_minus_eta", 1.0 - self.eta)

    @property
    def output_noise(self):
        """Added thermal noise (1 - eta) * n_eff in photon-number units."""
        return self.one_minus_eta * self.n_eff

    @property
    def criterion_ratio(self):
        """eta / ((1 - eta) * n_eff); inf in the noiseless or zero-noise limit."""
        noise = self.output_noise
        if noise == 0.0:
            return math.inf if self.eta > 0 else 0.0
        return self.eta / noise


@dataclass(frozen=True)
class OptimalPoint:
    """Channel figures of merit at the optimal working point (omega=0, g=g_opt)."""

    g_opt: float
    eta_opt: float
    n_opt: float
    ratio_opt: float
    omega_opt: float = 0.0


def laser_to_interaction_frame(omega_laser, omega_ref):
    """Map a laser-frame frequency to the interaction picture (resonance -> 0)."""
    return omega_laser - omega_ref


def interaction_to_laser_frame(omega_interaction, omega_ref):
    """Inverse of :func:`laser_to_interaction_frame`."""
    return omega_interaction + omega_ref


def drift_matrix(params: SymmetricParams):
    """Drift matrix A and input coupling B of the symmetric four-mode chain.

    Mode order is (a1, b1, a2, b2) in the interaction picture at resonance.
    Returns ``(A, B)`` with B = diag(sqrt(kappa), sqrt(gamma), ...).
    """
    k2 = params.kappa / 2.0
    g2 = params.gamma / 2.0
    ig = 1j * params.g
    il = 1j * params.lam
    A = -np.array([
        [k2, ig, 0.0, 0.0],
        [ig, g2, 0.0, il],
        [0.0, 0.0, k2, ig],
        [0.0, il, ig, g2],
    ], dtype=complex)
    B = np.diag([math.sqrt(params.kappa), math.sqrt(params.gamma),
                 math.sqrt(params.kappa), math.sqrt(params.gamma)]).astype(complex)
    return A, B


def asymmetric_drift_matrix(params: AsymmetricParams):
    """Laser-frame drift matrix and input coupling for distinct systems.

    The optical and mechanical frequencies stay on the diagonal here (no
    interaction-picture rotation), so resonance sits at omega = omega_B_1.
    """
    p = params
    A = -np.array([
        [p.kappa_1 / 2.0 + 1j * p.Delta_1, 1j * p.g_1, 0.0, 0.0],
        [1j * p.g_1, p.gamma_1 / 2.0 + 1j * p.omega_B_1, 0.0, 1j * p.lam],
        [0.0, 0.0, p.kappa_2 / 2.0 + 1j * p.Delta_2, 1j * p.g_2],
        [0.0, 1j * p.lam, 1j * p.g_2, p.gamma_2 / 2.0 + 1j * p.omega_B_2],
    ], dtype=complex)
    B = np.diag([math.sqrt(p.kappa_1), math.sqrt(p.gamma_1),
                 math.sqrt(p.kappa_2), math.sqrt(p.gamma_2)]).astype(complex)
    return A, B


def _scale(params: SymmetricParams, omega):
    # All transfer coefficients are invariant under a common rescaling of the
    # rates and the frequency; normalizing keeps intermediates near unity even
    # for rate ratios of 1e14.
    return max(params.kappa, params.gamma, params.g, params.lam, abs(omega))


def transfer_coefficients_analytic(params: SymmetricParams, omega):
    """Closed-form transfer coefficients of the symmetric chain at ``omega``.

    The coefficient numerators are the explicit polynomials of the analytic
    solution; the shared denominator det(A + i*omega) is evaluated in its
    exact factored form (d*m + g^2)^2 + (d*lam)^2 with d = kappa/2 - i*omega,
    m = gamma/2 - i*omega.  Evaluation runs in extended precision so that
    cross-validation against the generic solver is limited by the latter.
    """
    s = _scale(params, omega)
    one = np.longdouble(1.0)
    k = np.longdouble(params.kappa) / s
    gm = np.longdouble(params.gamma) / s
    gg = np.longdouble(params.g) / s
    lm = np.longdouble(params.lam) / s
    w = np.longdouble(omega) / s
    d = k / 2 - 1j * w
    m = gm / 2 - 1j * w
    det = (d * m + gg * gg) ** 2 + (d * lm) ** 2
    if det == 0:
        raise DegenerateFrequencyError(
            f"response denominator vanishes at omega = {omega!r}")
    sqk = np.sqrt(k)
    sqg = np.sqrt(gm)
    a1t = sqk * (1j * gg * gg * lm) / det
    b1t = sqg * gg * lm * (1j * w - k / 2) / det
    num2 = (gg * gg * gm / 2 - 1j * gg * gg * w + k * gm * gm / 8
            - 1j * k * gm * w / 2 + k * lm * lm / 2 - k * w * w / 2
            - 1j * gm * gm * w / 4 - gm * w * w - 1j * lm * lm * w
            + 1j * w ** 3)
    a2t = sqk * num2 / det
    b2t = sqg * gg * (-1j * gg * gg - 1j * k * gm / 4 - k * w / 2 - gm * w / 2
                      + 1j * w * w) / det
    return TransferCoefficients(
        signal=complex(sqk * a1t),
        noise_mech1=complex(sqk * b1t),
        reflection=complex(sqk * a2t - one),
        noise_mech2=complex(sqk * b2t),
        omega=float(omega))


def _coefficients_from_solve(A, B, omega, scale, out_rate):
    """Generic route: solve (A + i w) r = -B w_in and read the output row.

    ``A``/``B`` must already be normalized by ``scale``; ``out_rate`` is the
    normalized optical damping of the output cavity.
    """
    w = omega / scale
    M = A + 1j * w * np.eye(4)
    try:
        X = linalg.solve(M, -B, refine=2)
    except linalg.SingularMatrixError as exc:
        raise DegenerateFrequencyError(
            f"response is singular at omega = {omega!r}: {exc}") from exc
    row = X[2, :]
    sqk = math.sqrt(out_rate)
    return TransferCoefficients(
        signal=complex(sqk * row[0]),
        noise_mech1=complex(sqk * row[1]),
        reflection=complex(sqk * row[2] - 1.0),
        noise_mech2=complex(sqk * row[3]),
        omega=float(omega))


def transfer_coefficients_numeric(params: SymmetricParams, omega):
    """Transfer coefficients from a generic LU solve of the response matrix.

    Same contract as :func:`transfer_coefficients_analytic`, computed without
    any closed-form coefficient expression; the two routes cross-validate each
    other.
    """
    s = _scale(params, omega)
    scaled = replace(params, omega_B=params.omega_B / s, gamma=params.gamma / s,
                     kappa=params.kappa / s, g=params.g / s, lam=params.lam / s,
                     Delta=None)
    A, B = drift_matrix(scaled)
    return _coefficients_from_solve(A, B, omega, s, scaled.kappa)


def _channel_from_coefficients(tc: TransferCoefficients, noise_photons,
                               one_minus_eta):
    eta = abs(tc.signal) ** 2
    phi = cmath.phase(tc.signal) if tc.signal != 0 else 0.0
    if one_minus_eta < NOISELESS_COMPLEMENT:
        return AttenuatorChannel(eta=min(eta, 1.0), n_eff=0.0, phi=phi,
                                 omega=tc.omega, one_minus_eta=one_minus_eta,
                                 noiseless_limit=True)
    return AttenuatorChannel(eta=min(eta, 1.0),
                             n_eff=noise_photons / one_minus_eta, phi=phi,
                             omega=tc.omega, one_minus_eta=one_minus_eta)


def channel_at(params: SymmetricParams, omega, method="analytic"):
    """Attenuator parameters (eta, N, phi) of the channel at one frequency.

    ``method`` selects the analytic or the generic-solve route for the
    underlying transfer coefficients.  The complement 1 - eta is assembled
    from the three noise amplitudes (exactly equivalent by unitarity), which
    keeps the effective occupation accurate when eta approaches 1.
    """
    tc = _TRANSFER_ROUTES[method](params, omega)
    noise_amps_sq = abs(tc.noise_mech1) ** 2 + abs(tc.noise_mech2) ** 2
    one_minus_eta = noise_amps_sq + abs(tc.reflection) ** 2
    return _channel_from_coefficients(tc, noise_amps_sq * params.N_T,
                                      one_minus_eta)


_TRANSFER_ROUTES = {
    "analytic": transfer_coefficients_analytic,
    "numeric": transfer_coefficients_numeric,
}


def ratio_at(params: SymmetricParams, omega):
    """Non-classicality ratio eta / ((1 - eta) N) in simplified closed form.

    The determinant cancels between numerator and noise, leaving an expression
    that never divides by 1 - eta and therefore stays exact arbitrarily close
    to (and inside) the noiseless limit.
    """
    s = _scale(params, omega)
    k = params.kappa / s
    gm = params.gamma / s
    gg = params.g / s
    lm = params.lam / s
    w = omega / s
    num = gg * gg * k * lm * lm
    if num == 0.0:
        return 0.0
    if params.N_T == 0.0:
        return math.inf
    denom = (lm * lm * (k * k / 4.0 + w * w)
             + (gg * gg + k * gm / 4.0 - w * w) ** 2
             + (k * w / 2.0 + gm * w / 2.0) ** 2)
    return num / (params.N_T * gm * denom)


def optimal_point(params: SymmetricParams):
    """Optimal coupling and the channel figures of merit it produces.

    The ratio is maximized at omega = 0 with g_opt = (sqrt(kappa)/2) *
    (gamma^2 + 4 lam^2)^(1/4); there the effective occupation equals the real
    bath occupation and the transmissivity takes its closed form in
    L = (lam/gamma)^2.
    """
    g_opt = math.sqrt(params.kappa) / 2.0 * (params.gamma**2
                                             + 4.0 * params.lam**2) ** 0.25
    L = (params.lam / params.gamma) ** 2
    if not math.isfinite(L):
        raise ValueError("lam/gamma overflows; rescale the parameter set")
    root = math.sqrt(1.0 + 4.0 * L)
    eta_opt = 2.0 * L / (1.0 + root + 2.0 * L)
    if L == 0.0:
        ratio_opt = 0.0
    elif params.N_T == 0.0:
        ratio_opt = math.inf
    else:
        ratio_opt = 2.0 * L / (params.N_T * (1.0 + root))
    return OptimalPoint(g_opt=g_opt, eta_opt=eta_opt, n_opt=params.N_T,
                        ratio_opt=ratio_opt)


def reflection_at_optimum(params: SymmetricParams):
    """Back-reflection amplitude of cavity 2 at (omega=0, g=g_opt).

    Vanishes identically: the optimal transparency point is simultaneously the
    zero-reflection point, so all signal is routed to the opposite output.
    """
    tuned = params.with_g(optimal_point(params).g_opt)
    return transfer_coefficients_analytic(tuned, 0.0).reflection


def suboptimal_critical_frequency(params: SymmetricParams):
    """The non-resonant stationary point omega' of the ratio, or None.

    omega' = sqrt(g^2 - kappa^2/8 - gamma^2/8 - lam^2/2) exists only for
    sufficiently strong coupling; the ratio there never exceeds the resonant
    optimum.
    """
    w2 = (params.g**2 - params.kappa**2 / 8.0 - params.gamma**2 / 8.0
          - params.lam**2 / 2.0)
    if w2 <= 0.0:
        return None
    return math.sqrt(w2)


def transparency_linewidth(params: SymmetricParams):
    """Effective mechanical linewidth gamma + sqrt(gamma^2 + 4 lam^2).

    This is the laser-broadened damping rate at the optimal coupling and sets
    both the transparency bandwidth and the minimum experiment duration; the
    coupling dependence is already eliminated through g = g_opt.
    """
    return params.gamma + math.hypot(params.gamma, 2.0 * params.lam)


# --- asymmetric systems (laser frame) ----------------------------------------


def asymmetric_transfer_coefficients(params: AsymmetricParams, omega,
                                     method="analytic"):
    """Transfer coefficients for distinct systems, evaluated in the laser frame.

    The analytic route uses the cooperativity-form expressions; the signal and
    mechanical-noise amplitudes follow the printed solution, while the
    back-reflection amplitude is reconstructed in closed form,
    ((1 - i x2) * varsigma - (1 + i x2) * Gamma_2) / ((1 + i x2) * (varsigma +
    Gamma_2)), which unitarity then verifies rather than defines.
    """
    if method == "numeric":
        p = params
        s = max(p.kappa_1, p.kappa_2, p.gamma_1, p.gamma_2, p.g_1, p.g_2, p.lam,
                abs(p.Delta_1), abs(p.Delta_2), p.omega_B_1, p.omega_B_2,
                abs(omega))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # scaling preserves frequency ratios
            scaled = AsymmetricParams(
                omega_B_1=p.omega_B_1 / s, gamma_1=p.gamma_1 / s,
                kappa_1=p.kappa_1 / s, g_1=p.g_1 / s, Delta_1=p.Delta_1 / s,
                N_T_1=p.N_T_1,
                omega_B_2=p.omega_B_2 / s, gamma_2=p.gamma_2 / s,
                kappa_2=p.kappa_2 / s, g_2=p.g_2 / s, Delta_2=p.Delta_2 / s,
                N_T_2=p.N_T_2, lam=p.lam / s)
        A, B = asymmetric_drift_matrix(scaled)
        return _coefficients_from_solve(A, B, omega, s, scaled.kappa_2)
    co = cooperativities(params, omega)
    denom2 = co.varsigma + co.Gamma_2
    denom = co.varrho * denom2
    if denom == 0 or denom2 == 0:
        raise DegenerateFrequencyError(
            f"resonance denominator vanishes at omega = {omega!r}")
    signal = 2j * math.sqrt(co.Gamma_lambda * co.Gamma_1 * co.Gamma_2) / denom
    noise_mech1 = (-2.0 * (1.0 + 1j * co.x_1)
                   * math.sqrt(co.Gamma_lambda * co.Gamma_2) / denom)
    noise_mech2 = -2j * math.sqrt(co.Gamma_2) / denom2
    x2 = 1j * co.x_2
    reflection = (((1.0 - x2) * co.varsigma - (1.0 + x2) * co.Gamma_2)
                  / ((1.0 + x2) * denom2))
    return TransferCoefficients(signal=complex(signal),
                                noise_mech1=complex(noise_mech1),
                                reflection=complex(reflection),
                                noise_mech2=complex(noise_mech2),
                                omega=float(omega))


def asymmetric_channel_at(params: AsymmetricParams, omega, method="analytic"):
    """Attenuator form of the asymmetric channel; returns (channel, coefficients).

    The two mechanical baths may hold different occupations, so the effective
    noise weighs them by the respective amplitude squares.
    """
    tc = asymmetric_transfer_coefficients(params, omega, method=method)
    noise_photons = (abs(tc.noise_mech1) ** 2 * params.N_T_1
                     + abs(tc.noise_mech2) ** 2 * params.N_T_2)
    one_minus_eta = (abs(tc.noise_mech1) ** 2 + abs(tc.reflection) ** 2
                     + abs(tc.noise_mech2) ** 2)
    return _channel_from_coefficients(tc, noise_photons, one_minus_eta), tc


def asymmetric_ratio(params: AsymmetricParams, omega):
    """Non-classicality ratio of the asymmetric channel in cooperativity form.

    Depends on system 2 only through gamma_2 * N_T_2 (hidden inside
    Gamma_lambda and the bath weighting); returns 0 for vanishing
    gravitational cooperativity.
    """
    co = cooperativities(params, omega)
    if co.Gamma_lambda == 0.0:
        return 0.0
    denom = (abs(1.0 + 1j * co.x_1) ** 2 * params.N_T_1
             + abs(co.varrho) ** 2 * params.N_T_2 / co.Gamma_lambda)
    if denom == 0.0:
        return math.inf
    return co.Gamma_1 / denom


@dataclass(frozen=True)
class AsymmetricOptimum:
    """Tuned detunings/couplings of both systems and the resulting channel.

    ``ratio`` is the maximized non-classicality ratio (depends only on system
    1's tuning); ``eta`` is the transmissivity maximized over system 2's
    tuning at that point.  Both are exact closed forms of the gravitational
    cooperativity and the bath occupations.
    """

    Delta_1: float
    g_1: float
    Delta_2: float
    g_2: float
    ratio: float
    eta: float
    tuned: AsymmetricParams


def asymmetric_optimum(params: AsymmetricParams):
    """Closed-form tuning of (Delta_1, g_1, Delta_2, g_2) at omega = omega_B_1.

    System 1 is tuned to maximize the non-classicality ratio (resonant
    detuning, cooperativity sqrt(1 + Gamma_lambda * N_T_1/N_T_2)); system 2 is
    then tuned to maximize the transmissivity, which compensates a mechanical
    frequency mismatch through a detuning offset proportional to
    omega_B_2 - omega_B_1.
    """
    p = params
    if p.lam == 0.0:
        raise ValueError("asymmetric optimum is undefined for lam = 0")
    if p.N_T_2 == 0.0:
        raise ValueError("optimum tuning requires N_T_2 > 0")
    gamma_lambda = 4.0 * p.lam**2 / (p.gamma_1 * p.gamma_2)
    big_s = math.sqrt(1.0 + gamma_lambda * p.N_T_1 / p.N_T_2)
    g_1 = math.sqrt(big_s * p.kappa_1 * p.gamma_1) / 2.0
    delta_1 = p.omega_B_1
    load = 1.0 + (p.N_T_2 / p.N_T_1) * (big_s - 1.0) if p.N_T_1 > 0 else math.inf
    y2 = 2.0 * (p.omega_B_2 - p.omega_B_1) / p.gamma_2
    x2 = y2 / load
    delta_2 = p.omega_B_1 + p.kappa_2 * x2 / 2.0
    gamma_2_coop = (1.0 + x2 * x2) * load
    g_2 = math.sqrt(gamma_2_coop * p.kappa_2 * p.gamma_2) / 2.0
    ratio = gamma_lambda / (2.0 * p.N_T_2 * (1.0 + big_s))
    eta = (gamma_lambda * big_s
           / ((1.0 + big_s) * (1.0 + big_s + gamma_lambda)))
    tuned = replace(p, Delta_1=delta_1, g_1=g_1, Delta_2=delta_2, g_2=g_2)
    return AsymmetricOptimum(Delta_1=delta_1, g_1=g_1, Delta_2=delta_2, g_2=g_2,
                             ratio=ratio, eta=eta, tuned=tuned)
