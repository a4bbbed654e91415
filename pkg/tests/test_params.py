import math

import numpy as np
import pytest

from rydfac.params import (
    ModelParams,
    ParameterError,
    dephasing_rate,
    facilitation_distance,
    potential,
)

from conftest import make_params


class TestFacilitationDistance:
    def test_identity_case(self):
        assert facilitation_distance(1.0, 1.0, 6) == 1.0

    def test_power_of_two(self):
        assert facilitation_distance(64.0, 1.0, 6) == pytest.approx(2.0, rel=1e-15)

    @pytest.mark.parametrize("seed", range(20))
    def test_cancels_detuning(self, seed):
        rng = np.random.default_rng(seed)
        c = float(rng.uniform(0.1, 100.0))
        detuning = float(rng.uniform(0.1, 50.0))
        nu = int(rng.integers(1, 9))
        x_f = facilitation_distance(c, detuning, nu)
        assert c / x_f**nu - detuning == pytest.approx(0.0, abs=1e-10 * detuning)

    def test_rejects_nonpositive(self):
        with pytest.raises(ParameterError):
            facilitation_distance(-1.0, 1.0, 6)
        with pytest.raises(ParameterError):
            facilitation_distance(1.0, 0.0, 6)
        with pytest.raises(ParameterError):
            facilitation_distance(1.0, 1.0, 0)


class TestPotential:
    def test_zero_at_facilitation_point(self, damped_params):
        assert potential(1.0, damped_params) == 0.0

    def test_far_tail_approaches_minus_detuning(self, damped_params):
        assert potential(1e9, damped_params) == pytest.approx(-1.32, abs=1e-9)

    def test_hand_evaluated_value(self):
        # (x_f/x)^6 = 2^6 at x = 0.5, so U/Omega = 1.32 * 63
        p = ModelParams(detuning_ratio=1.32, nu=6)
        assert potential(0.5, p) == pytest.approx(83.16, abs=1e-12)

    def test_rejects_nonpositive_x(self, damped_params):
        with pytest.raises(ParameterError):
            potential(0.0, damped_params)
        with pytest.raises(ParameterError):
            potential(np.array([1.0, -2.0]), damped_params)

    def test_vectorized(self, damped_params):
        x = np.array([0.5, 1.0, 2.0])
        u = potential(x, damped_params)
        assert u.shape == (3,)
        assert u[1] == 0.0

    def test_zero_everywhere_in_free_rabi_mode(self, free_params):
        x = np.linspace(0.1, 10.0, 50)
        assert np.all(potential(x, free_params) == 0.0)


class TestDephasingRate:
    def test_zero_without_perturbation(self, free_params):
        assert dephasing_rate(free_params) == 0.0

    def test_infinite_mass_value(self):
        # nu^2/8 * 1 * 0.05^2 = 4.5 * 0.0025
        p = ModelParams(detuning_ratio=1.0, nu=6, sigma_ratio=0.05, xi_ratio=0.0)
        assert dephasing_rate(p) == pytest.approx(0.01125, rel=1e-14)

    def test_reference_value(self, damped_params):
        # 4.5 * 1.32^2 * (0.0025 + 1.25e-3^2/0.0025)
        assert dephasing_rate(damped_params) == pytest.approx(0.0245025, rel=1e-12)

    def test_even_in_detuning(self):
        plus = dephasing_rate(make_params(detuning_ratio=1.7, nu=6, sigma_ratio=0.05, xi_ratio=1e-3))
        minus = dephasing_rate(make_params(detuning_ratio=-1.7, nu=6, sigma_ratio=0.05, xi_ratio=1e-3))
        assert plus == minus

    def test_monotone_in_detuning_and_exponent(self):
        rates_d = [
            dephasing_rate(make_params(detuning_ratio=d, nu=6, sigma_ratio=0.05, xi_ratio=1e-3))
            for d in (0.5, 1.0, 2.0, 4.0)
        ]
        assert all(a < b for a, b in zip(rates_d, rates_d[1:]))
        rates_nu = [
            dephasing_rate(make_params(detuning_ratio=1.5, nu=nu, sigma_ratio=0.05, xi_ratio=1e-3))
            for nu in (1, 2, 4, 6, 8)
        ]
        assert all(a < b for a, b in zip(rates_nu, rates_nu[1:]))

    def test_infinite_mass_limit_drops_bracket_term(self):
        p0 = ModelParams(detuning_ratio=1.5, nu=6, sigma_ratio=0.05, xi_ratio=0.0)
        expected = (6**2 / 8.0) * 1.5**2 * 0.05**2
        assert dephasing_rate(p0) == pytest.approx(expected, rel=1e-14)


class TestModelParams:
    def test_rejects_wide_packet(self):
        with pytest.raises(ParameterError):
            ModelParams(detuning_ratio=1.0, sigma_ratio=1.0)

    def test_warns_on_marginal_packet(self):
        with pytest.warns(UserWarning, match="sigma"):
            ModelParams(detuning_ratio=1.0, sigma_ratio=0.3)

    def test_warns_outside_linearization_window(self):
        with pytest.warns(UserWarning, match="linearization window"):
            ModelParams(detuning_ratio=5.0, nu=6, sigma_ratio=0.05)

    def test_zero_detuning_needs_free_rabi(self):
        with pytest.raises(ParameterError):
            ModelParams(detuning_ratio=0.0)

    def test_free_rabi_needs_zero_detuning(self):
        with pytest.raises(ParameterError):
            ModelParams(detuning_ratio=1.0, free_rabi=True)

    def test_rabi_fixed_to_unity(self):
        with pytest.raises(ParameterError):
            ModelParams(detuning_ratio=1.0, rabi=2.0)

    def test_invalid_exponent_and_xi(self):
        with pytest.raises(ParameterError):
            ModelParams(detuning_ratio=1.0, nu=0)
        with pytest.raises(ParameterError):
            ModelParams(detuning_ratio=1.0, xi_ratio=-1e-3)

    def test_x_f_from_coefficient(self):
        p = ModelParams(detuning_ratio=1.0, nu=6, c_nu=64.0)
        assert p.x_f == pytest.approx(2.0, rel=1e-15)

    def test_x_f_defaults_to_internal_unit(self, damped_params):
        assert damped_params.x_f == 1.0
