import dataclasses
import math

import numpy as np
import pytest

from git_channel import channel, oracle
from git_channel.gaussian import GaussianState, symplectic_form, two_mode_verdict
from git_channel.model import SymmetricParams


def analytic_target(params, omega):
    ch = channel.channel_at(params, omega)
    return math.sqrt(ch.eta) * np.exp(1j * ch.phi)


class TestMeanFieldTransmission:
    def test_reference_resonance(self, reference_params):
        result = oracle.mean_field_transmission(reference_params, 0.0)
        assert result.settled
        assert not result.used_adiabatic_elimination
        ch = channel.channel_at(reference_params, 0.0)
        assert abs(result.ratio) ** 2 == pytest.approx(ch.eta, rel=1e-6)

    def test_transparency_window_scan(self, reference_params):
        width = channel.transparency_linewidth(reference_params)
        for omega in np.linspace(-1.5 * width, 1.5 * width, 21):
            target = analytic_target(reference_params, float(omega))
            result = oracle.mean_field_transmission(reference_params,
                                                    float(omega))
            assert result.settled
            assert abs(result.ratio - target) <= 1e-6 * abs(target)

    def test_no_gravity_no_output(self, reference_params):
        p = dataclasses.replace(reference_params, lam=0.0)
        result = oracle.mean_field_transmission(p, 0.0)
        assert abs(result.ratio) < 1e-12

    def test_narrowband_transparency(self, reference_params):
        width = channel.transparency_linewidth(reference_params)
        far = oracle.mean_field_transmission(reference_params, 100.0 * width)
        eta0 = channel.channel_at(reference_params, 0.0).eta
        assert abs(far.ratio) ** 2 < 1e-3 * eta0

    def test_adiabatic_elimination_guard(self):
        # gamma = 1e-9 kappa drives the stiffness past the integrator limit
        p = SymmetricParams(omega_B=1.0, gamma=1e-11, kappa=1e-2, g=0.0,
                            lam=1e-10, N_T=100.0)
        p = p.with_g(channel.optimal_point(p).g_opt)
        result = oracle.mean_field_transmission(p, 0.0)
        assert result.used_adiabatic_elimination
        assert result.stiffness > oracle.STIFFNESS_LIMIT
        assert result.elimination_error_estimate < 1e-6
        target = analytic_target(p, 0.0)
        assert abs(result.ratio - target) <= 1e-6 * abs(target)

    def test_zero_drive_rejected(self, reference_params):
        with pytest.raises(ValueError):
            oracle.mean_field_transmission(reference_params, 0.0, drive=0.0)


class TestSteadyStateCovariance:
    def test_decoupled_thermalization(self, reference_params):
        p = dataclasses.replace(reference_params.with_g(0.0), lam=0.0)
        sigma = oracle.steady_state_covariance(p)
        expected = np.diag([0.5, 0.5, p.N_T + 0.5, p.N_T + 0.5] * 2)
        assert np.allclose(sigma, expected, rtol=1e-10)

    def test_reference_point_physical(self, reference_params):
        sigma = oracle.steady_state_covariance(reference_params)
        nus = np.abs(np.linalg.eigvals(1j * symplectic_form(4) @ sigma))
        assert np.sort(nus)[:4].min() >= 0.5 - 1e-10

    def test_residual(self, reference_params):
        model = oracle.quadrature_model(reference_params)
        sigma = oracle.steady_state_covariance(reference_params)
        residual = np.abs(model.A_q @ sigma + sigma @ model.A_q.T + model.D)
        assert residual.max() <= 1e-10 * np.abs(model.D).max()

    def test_stationary_mechanical_modes_not_entangled(self, reference_params):
        sigma = oracle.steady_state_covariance(reference_params)
        idx = np.r_[2:4, 6:8]  # quadratures of the two mechanical modes
        sub = GaussianState(mean=np.zeros(4), cov=sigma[np.ix_(idx, idx)])
        verdict = two_mode_verdict(sub)
        assert not verdict.entangled
        assert verdict.log_negativity == 0.0

    def test_single_system_cooling(self, reference_params):
        # with lam = 0 each system is an independent laser-cooled resonator:
        # the stationary mechanical occupation drops well below the bath's
        p = dataclasses.replace(reference_params, lam=0.0)
        sigma = oracle.steady_state_covariance(p)
        occupation = sigma[2, 2] - 0.5
        assert 0.0 < occupation < p.N_T / 1e3


class TestOutputSpectrum:
    def test_reference_value(self, reference_params):
        spec = oracle.output_spectrum(reference_params, 0.0)
        assert spec == pytest.approx(0.366, rel=2e-3)

    def test_matches_channel_noise(self, reference_params):
        width = channel.transparency_linewidth(reference_params)
        for omega in (0.0, 0.4 * width, -2.0 * width, 30.0 * width):
            spec = oracle.output_spectrum(reference_params, omega)
            ch = channel.channel_at(reference_params, omega)
            assert spec == pytest.approx(ch.output_noise, rel=1e-9)

    def test_zero_temperature_is_silent(self, reference_params):
        p = dataclasses.replace(reference_params, N_T=0.0)
        for omega in (0.0, 1e-5):
            assert oracle.output_spectrum(p, omega) == 0.0

    def test_no_gravity_finite_noise_zero_transmission(self, reference_params):
        p = dataclasses.replace(reference_params, lam=0.0)
        spec = oracle.output_spectrum(p, 0.0)
        assert spec > 0.0
        assert channel.channel_at(p, 0.0).eta == 0.0

    def test_even_and_peaked_inside_window(self, reference_params):
        width = channel.transparency_linewidth(reference_params)
        omegas = np.linspace(0.0, 3.0 * width, 61)
        values = [oracle.output_spectrum(reference_params, float(w))
                  for w in omegas]
        for w, v in zip(omegas[1:: 10], values[1:: 10]):
            assert oracle.output_spectrum(reference_params, -float(w)) == \
                pytest.approx(v, rel=1e-12)
        peak = omegas[int(np.argmax(values))]
        assert abs(peak) <= width


class TestQuadratureModel:
    def test_embedding_matches_complex_dynamics(self, reference_params, rng):
        A, _ = channel.drift_matrix(reference_params)
        model = oracle.quadrature_model(reference_params)
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        dz = A @ z
        q = np.empty(8)
        q[0::2], q[1::2] = z.real, z.imag
        dq = model.A_q @ q
        assert np.allclose(dq[0::2] + 1j * dq[1::2], dz)

    def test_output_read_matrix(self, reference_params):
        model = oracle.quadrature_model(reference_params)
        assert model.C_out.shape == (2, 8)
        assert model.C_out[0, 4] == pytest.approx(
            math.sqrt(reference_params.kappa))
