import numpy as np
import pytest

from hypersearch.config import settings
from hypersearch.errors import InvalidInputError, ResourceLimitError
from hypersearch.models.curve import CurveSource
from hypersearch.models.problem import ProblemSpec
from hypersearch.models.walk import WalkState
from hypersearch.services.operator_service import coin_operator, fourier_operator, oracle_operator, shift_operator, walk_operators
from hypersearch.services.simulator_service import (
    apply_coin,
    apply_oracle,
    apply_shift,
    apply_walk,
    fourier_transform,
    simulate_curve,
    solution_overlap,
    uniform_state,
)


def _random_state(n: int, rng) -> WalkState:
    size = n * (1 << n)
    amplitudes = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return WalkState(n=n, amplitudes=amplitudes / np.linalg.norm(amplitudes))


class TestOperatorsMatrixFree:
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_shift(self, n, rng):
        state = _random_state(n, rng)
        expected = shift_operator(n) @ state.amplitudes
        np.testing.assert_allclose(apply_shift(state).amplitudes, expected, atol=1e-12)

    @pytest.mark.parametrize("n", [2, 4])
    def test_coin(self, n, rng):
        state = _random_state(n, rng)
        expected = coin_operator(n) @ state.amplitudes
        np.testing.assert_allclose(apply_coin(state).amplitudes, expected, atol=1e-12)

    def test_oracle(self, rng):
        spec = ProblemSpec(n=4, solutions=(0, 6, 11))
        state = _random_state(4, rng)
        expected = oracle_operator(spec) @ state.amplitudes
        np.testing.assert_allclose(apply_oracle(state, spec).amplitudes, expected, atol=1e-12)

    def test_walk_step(self, rng):
        spec = ProblemSpec(n=3, solutions=(5,))
        _, search = walk_operators(spec)
        state = _random_state(3, rng)
        expected = search @ state.amplitudes
        np.testing.assert_allclose(apply_walk(state, spec).amplitudes, expected, atol=1e-12)

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_fourier_transform(self, n, rng):
        state = _random_state(n, rng)
        expected = fourier_operator(n) @ state.amplitudes
        np.testing.assert_allclose(fourier_transform(state).amplitudes, expected, atol=1e-12)


class TestStates:
    def test_uniform_state(self):
        state = uniform_state(4)
        assert state.amplitudes.shape == (64,)
        assert state.norm() == pytest.approx(1.0)

    def test_uniform_state_rejects_zero(self):
        with pytest.raises(InvalidInputError):
            uniform_state(0)

    def test_initial_overlap(self):
        spec = ProblemSpec(n=5, solutions=(1, 2, 30))
        assert abs(solution_overlap(uniform_state(5), spec)) ** 2 == pytest.approx(3 / 32, abs=1e-14)

    def test_uniform_state_is_fixed_by_walk(self):
        state = uniform_state(4)
        apply_shift(apply_coin(state))
        np.testing.assert_allclose(state.amplitudes, uniform_state(4).amplitudes, atol=1e-14)


class TestSimulateCurve:
    def test_matches_dense_powers(self):
        spec = ProblemSpec(n=3, solutions=(0, 5))
        _, search = walk_operators(spec)
        psi = uniform_state(3).amplitudes.copy()
        target = np.zeros(24)
        for p in spec.solutions:
            target[p * 3:(p + 1) * 3] = 1 / np.sqrt(6)
        expected = []
        for _ in range(21):
            expected.append(abs(target @ psi) ** 2)
            psi = search @ psi
        curve = simulate_curve(spec, 20)
        np.testing.assert_allclose(curve.probabilities, expected, atol=1e-12)
        assert curve.source == CurveSource.DIRECT
        assert curve.t_max == 20

    def test_probabilities_in_range(self):
        curve = simulate_curve(ProblemSpec(n=7, solutions=(3, 77, 100)), 300)
        assert curve.probabilities[0] == pytest.approx(3 / 128, abs=1e-12)
        assert np.all(curve.probabilities >= 0)
        assert np.all(curve.probabilities <= 1 + 1e-12)
        assert curve.max_p == curve.probabilities[curve.argmax_t]

    def test_zero_steps(self):
        curve = simulate_curve(ProblemSpec(n=2, solutions=(1,)), 0)
        assert len(curve.probabilities) == 1
        assert curve.argmax_t == 0

    def test_negative_steps(self):
        with pytest.raises(InvalidInputError):
            simulate_curve(ProblemSpec(n=2, solutions=(1,)), -1)

    def test_resource_cap(self, monkeypatch):
        monkeypatch.setattr(settings, "SIMULATION_MAX_N", 4)
        with pytest.raises(ResourceLimitError):
            simulate_curve(ProblemSpec(n=5, solutions=(1,)), 10)
