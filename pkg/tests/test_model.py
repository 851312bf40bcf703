import math

import numpy as np
import pytest

from git_channel import model, presets
from git_channel.model import (CONSTANTS, AsymmetricParams, ConfigError,
                               DeviceGeometry, SymmetricParams,
                               cooperativities, critical_frequencies,
                               git_vs_gie_ratio, lambda_spheres,
                               params_from_config, parse_config_text,
                               rwa_valid, thermal_occupation)


class TestThermalOccupation:
    def test_gold_sphere_reference_value(self):
        # 30 mHz resonator at 1 mK: benchmark occupation 6.94e8
        n = thermal_occupation(presets.GOLD_SPHERE_OMEGA_B, 1e-3)
        assert n == pytest.approx(6.94e8, rel=5e-3)

    def test_zero_temperature(self):
        assert thermal_occupation(1.0, 0.0) == 0.0

    def test_at_thermal_crossover(self):
        # omega_B equal to the environmental critical frequency: exactly 1/(e-1)
        w_T = CONSTANTS.k_B * 1e-3 / CONSTANTS.hbar
        assert thermal_occupation(w_T, 1e-3) == pytest.approx(
            1.0 / (math.e - 1.0), rel=1e-12)

    def test_monotonic_in_frequency_and_temperature(self):
        assert thermal_occupation(1.0, 1.0) > thermal_occupation(2.0, 1.0)
        assert thermal_occupation(1.0, 2.0) > thermal_occupation(1.0, 1.0)

    def test_classical_limit_within_one_percent(self):
        w_T = CONSTANTS.k_B * 1e-3 / CONSTANTS.hbar
        for omega in (w_T / 100.0, w_T / 1e3, w_T / 1e6):
            classical = w_T / omega
            assert thermal_occupation(omega, 1e-3) == pytest.approx(
                classical, rel=1e-2)

    def test_deep_quantum_regime_is_suppressed(self):
        assert thermal_occupation(1e12, 1e-3) < 1e-300

    @pytest.mark.parametrize("bad", [float("nan"), float("inf")])
    def test_nonfinite_rejected(self, bad):
        with pytest.raises(ValueError):
            thermal_occupation(bad, 1.0)
        with pytest.raises(ValueError):
            thermal_occupation(1.0, bad)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            thermal_occupation(-1.0, 1.0)
        with pytest.raises(ValueError):
            thermal_occupation(1.0, -1.0)


class TestLambdaSpheres:
    def test_radius_cancels_for_touching_spheres(self):
        omega_B = 0.5
        expected = math.pi * CONSTANTS.G * CONSTANTS.rho_Au / (6.0 * omega_B)
        for radius in (1e-3, 1e-2, 1.0):
            geo = DeviceGeometry.from_spheres(radius, CONSTANTS.rho_Au, 1e-3)
            lam = lambda_spheres(geo.mass, geo.distance, omega_B)
            assert lam == pytest.approx(expected, rel=1e-12)

    def test_touching_gold_spheres_reference_value(self):
        geo = presets.gold_sphere_geometry()
        lam = lambda_spheres(geo.mass, geo.distance, presets.GOLD_SPHERE_OMEGA_B)
        assert lam == pytest.approx(3.58e-6, rel=1e-2)

    def test_cubic_distance_scaling(self):
        base = lambda_spheres(1.0, 1.0, 1.0)
        assert lambda_spheres(1.0, 2.0, 1.0) == pytest.approx(base / 8.0)

    def test_matches_critical_frequency_form(self):
        cf = critical_frequencies(CONSTANTS.rho_Au, 1e-3)
        geo = presets.gold_sphere_geometry()
        lam = model.lambda_for_geometry(geo, 0.7)
        assert lam == pytest.approx(cf.w_G**2 / 0.7, rel=1e-12)


class TestCriticalFrequencies:
    def test_gold_value(self):
        cf = critical_frequencies(CONSTANTS.rho_Au, 1e-3)
        assert cf.w_G == pytest.approx(8.2e-4, rel=5e-2)
        assert round(cf.w_G, 5) == pytest.approx(8.2e-4, abs=5e-6)  # 2 sig figs

    def test_millikelvin_value(self):
        cf = critical_frequencies(CONSTANTS.rho_Au, 1e-3)
        assert cf.w_T == pytest.approx(1.3e8, rel=5e-2)

    def test_sqrt_density_scaling(self):
        a = critical_frequencies(CONSTANTS.rho_Au, 1e-3).w_G
        b = critical_frequencies(4.0 * CONSTANTS.rho_Au, 1e-3).w_G
        assert b == pytest.approx(2.0 * a, rel=1e-12)


class TestRwaValid:
    def test_reference_point_is_valid(self, reference_params):
        check = rwa_valid(reference_params)
        assert check.valid
        assert check.thermal_margin > 10.0
        assert check.coupling_margin > 10.0
        expected_bound = (reference_params.g**2 * reference_params.kappa
                          / (reference_params.gamma * reference_params.omega_B**2))
        assert check.bound == pytest.approx(expected_bound, rel=1e-12)

    def test_zero_coupling_trivially_valid(self, reference_params):
        check = rwa_valid(reference_params.with_g(0.0))
        assert check.valid
        assert check.bound == 0.0
        assert math.isinf(check.thermal_margin)

    def test_vanishing_mechanical_damping_invalid(self, reference_params):
        import dataclasses
        bad = dataclasses.replace(reference_params,
                                  gamma=reference_params.gamma * 1e-20)
        assert not rwa_valid(bad).valid

    def test_margin_factor_configurable(self, reference_params):
        assert not rwa_valid(reference_params, margin_factor=1e4).valid


class TestCooperativities:
    def test_symmetric_resonance(self, reference_params):
        p = AsymmetricParams.from_symmetric(reference_params)
        co = cooperativities(p, reference_params.omega_B)
        assert co.x_1 == co.x_2 == co.y_1 == co.y_2 == 0.0
        assert co.varrho == pytest.approx(1.0 + co.Gamma_1, rel=1e-12)
        assert co.varsigma == pytest.approx(
            1.0 + co.Gamma_lambda / (1.0 + co.Gamma_1), rel=1e-12)
        assert co.Gamma_1 == co.Gamma_2

    def test_reference_gravitational_cooperativity(self, reference_params):
        p = AsymmetricParams.from_symmetric(reference_params)
        co = cooperativities(p, reference_params.omega_B)
        expected = 4.0 * reference_params.lam**2 / reference_params.gamma**2
        assert co.Gamma_lambda == pytest.approx(expected, rel=1e-12)
        assert co.Gamma_lambda == pytest.approx(1.44e19, rel=1e-2)

    def test_zero_coupling(self, reference_params):
        p = AsymmetricParams.from_symmetric(reference_params.with_g(0.0))
        co = cooperativities(p, 0.3)
        assert co.Gamma_1 == 0.0 and co.Gamma_2 == 0.0


class TestGitVsGieRatio:
    def test_boundary_by_construction(self):
        # choose gamma so that lambda = gamma * N_T exactly, in the classical limit
        geo = presets.gold_sphere_geometry()
        omega_B = presets.GOLD_SPHERE_OMEGA_B
        lam = model.lambda_for_geometry(geo, omega_B)
        w_T = critical_frequencies(geo.rho, geo.temperature).w_T
        n_classical = w_T / omega_B
        gamma = lam / n_classical
        assert git_vs_gie_ratio(geo, gamma) == pytest.approx(1.0, rel=1e-12)

    def test_reference_geometry_value(self, reference_params):
        geo = presets.gold_sphere_geometry()
        ratio = git_vs_gie_ratio(geo, reference_params.gamma)
        lam_over = reference_params.lam / (reference_params.gamma
                                           * reference_params.N_T)
        assert ratio == pytest.approx(lam_over, rel=1e-6)
        assert ratio == pytest.approx(2.74, rel=1e-2)

    def test_inverse_linear_in_temperature(self):
        geo = presets.gold_sphere_geometry()
        hot = DeviceGeometry(mass=geo.mass, distance=geo.distance,
                             radius=geo.radius, rho=geo.rho,
                             temperature=2.0 * geo.temperature)
        assert git_vs_gie_ratio(hot, 1e-10) == pytest.approx(
            git_vs_gie_ratio(geo, 1e-10) / 2.0, rel=1e-12)


class TestParams:
    def test_delta_defaults_to_omega_B(self):
        p = SymmetricParams(omega_B=1.0, gamma=0.1, kappa=0.2, g=0.0, lam=0.0,
                            N_T=0.0)
        assert p.Delta == 1.0

    def test_off_resonant_delta_rejected(self):
        with pytest.raises(ValueError):
            SymmetricParams(omega_B=1.0, gamma=0.1, kappa=0.2, g=0.0, lam=0.0,
                            N_T=0.0, Delta=2.0)

    def test_from_temperature(self):
        p = SymmetricParams.from_temperature(1.0, 0.1, 0.2, 0.0, 0.0, 1e-3)
        assert p.N_T == pytest.approx(thermal_occupation(1.0, 1e-3))

    def test_asymmetric_roundtrip(self, reference_params):
        ap = AsymmetricParams.from_symmetric(reference_params)
        assert ap.is_symmetric
        assert ap.lam == reference_params.lam

    def test_large_frequency_mismatch_warns(self, reference_params):
        ap = AsymmetricParams.from_symmetric(reference_params)
        import dataclasses
        with pytest.warns(UserWarning):
            dataclasses.replace(ap, omega_B_2=1.5 * ap.omega_B_1)

    def test_geometry_invariants(self):
        with pytest.raises(ValueError):
            DeviceGeometry(mass=1.0, distance=0.5, radius=1.0, rho=1.0,
                           temperature=1.0)
        geo = DeviceGeometry.from_spheres(0.01, CONSTANTS.rho_Au, 1e-3)
        assert geo.distance == 0.02
        assert geo.mass == pytest.approx(4.0 / 3.0 * math.pi * 1e-6
                                         * CONSTANTS.rho_Au)


class TestConfig:
    def test_roundtrip(self, reference_params):
        cfg = parse_config_text(presets.gold_sphere_config_text())
        params = params_from_config(cfg)
        assert params.omega_B == reference_params.omega_B
        assert params.lam == reference_params.lam
        assert params.N_T == pytest.approx(reference_params.N_T, rel=1e-12)

    def test_comments_and_blank_lines(self):
        cfg = parse_config_text("# comment\n\nomega_B = 1.0  # trailing\n")
        assert cfg == {"omega_B": 1.0}

    def test_unknown_key_is_named(self):
        with pytest.raises(ConfigError, match="frobnicate"):
            parse_config_text("frobnicate = 1\n")

    def test_missing_key_is_named(self):
        with pytest.raises(ConfigError, match="lambda"):
            params_from_config({"omega_B": 1.0, "gamma": 0.1, "kappa": 0.2,
                                "g": 0.0, "N_T": 0.0})

    def test_occupation_conflict(self):
        with pytest.raises(ConfigError, match="not both"):
            params_from_config({"omega_B": 1.0, "gamma": 0.1, "kappa": 0.2,
                                "g": 0.0, "lambda": 0.0, "N_T": 1.0,
                                "temperature_K": 1.0})

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_text("omega_B = 1\nomega_B = 2\n")

    def test_asymmetric_suffixes(self):
        cfg = {}
        for j in "12":
            cfg.update({f"omega_B_{j}": 1.0, f"gamma_{j}": 1e-6,
                        f"kappa_{j}": 0.1, f"g_{j}": 1e-3, f"N_T_{j}": 5.0})
        cfg["lambda"] = 1e-5
        params = params_from_config(cfg)
        assert isinstance(params, AsymmetricParams)
        assert params.Delta_1 == 1.0  # defaults to omega_B_1

    def test_mixed_suffix_styles_rejected(self):
        with pytest.raises(ConfigError, match="mix"):
            params_from_config({"omega_B": 1.0, "omega_B_1": 1.0,
                                "lambda": 0.0})
