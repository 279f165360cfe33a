import math

import numpy as np
import pytest

from hypersearch.models.problem import ProblemSpec
from hypersearch.models.scan import ScanOptions
from hypersearch.models.spectral import ComponentKind
from hypersearch.services.combinatorics_service import random_spec
from hypersearch.services.curve_service import (
    asymptotic_peak_time,
    compare_curves,
    optimal_iteration,
    probability_curve,
    upper_bound,
)
from hypersearch.services.simulator_service import simulate_curve
from hypersearch.services.spectral_service import decompose

# n = 6, 해 {3, 6} 의 양의 위상, |s|, u
WORKED_PHASES = [0.2231, 0.9434, 1.3755, 1.7661, 2.1982, 2.9185]
WORKED_ABS_S = [0.4382, 0.1769, 0.1632, 0.1632, 0.1769, 0.4382]
WORKED_U = [
    complex(0.0775, -0.6917),
    complex(0.0313, -0.0613),
    complex(-0.0289, 0.0351),
    complex(0.0289, -0.0237),
    complex(-0.0313, 0.0160),
    complex(-0.0775, 0.0087),
]
TOL = 5e-4


class TestWorkedExample:
    def test_dimension(self, example_decomposition):
        assert example_decomposition.dim_E == 22
        assert example_decomposition.complete

    def test_nonzero_components(self, example_decomposition):
        assert len(example_decomposition.nonzero_components()) == 12

    def test_phase_table(self, example_decomposition):
        positive = [c for c in example_decomposition.nonzero_components() if 0 < c.phi < math.pi]
        assert len(positive) == 6
        for component, phi, abs_s, u in zip(positive, WORKED_PHASES, WORKED_ABS_S, WORKED_U, strict=True):
            assert component.multiplicity == 1
            assert component.phi == pytest.approx(phi, abs=TOL)
            assert abs(component.s_comp[0]) == pytest.approx(abs_s, abs=TOL)
            assert abs(component.u_comp[0]) == pytest.approx(abs(u), abs=TOL)
            # s 부호는 고유벡터마다 자유
            sign = np.sign(component.s_comp[0].real)
            assert abs(sign * component.u_comp[0] - u) < TOL

    def test_bound_and_peak(self, example_decomposition, example_spec):
        bound = upper_bound(example_decomposition)
        spectral = probability_curve(example_decomposition, 10000)
        direct = simulate_curve(example_spec, 10000)

        # 표의 반올림 값으로 다시 계산하면 0.5505
        assert bound == pytest.approx(0.5509, abs=1e-3)
        assert optimal_iteration(spectral)[1] == pytest.approx(0.4279, abs=TOL)
        assert optimal_iteration(direct)[1] == pytest.approx(0.4279, abs=TOL)
        assert bound >= spectral.max_p
        assert compare_curves(spectral, direct) < 1e-7

    def test_criterion_minima(self, example_decomposition):
        # σ_min 의 극소점은 정확히 양의 정규 영점들
        assert example_decomposition.minima == 10
        assert example_decomposition.discarded == 0
        regular = sorted(
            c.phi for c in example_decomposition.components if c.kind == ComponentKind.REGULAR and 0 < c.phi < math.pi
        )
        minima = sorted(m.phi for m in example_decomposition.scan.criterion_minima)
        np.testing.assert_allclose(minima, regular, atol=1e-6)


@pytest.mark.slow
class TestOracleEquivalence:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_random_specs(self, n):
        rng = np.random.default_rng(1000 + n)
        worst = 0.0
        for _ in range(50):
            m = int(rng.integers(1, min(4, 1 << n) + 1))
            spec = random_spec(n, m, int(rng.integers(1 << 30)))
            decomp = decompose(spec)
            assert decomp.complete, spec
            diff = compare_curves(probability_curve(decomp, 200), simulate_curve(spec, 200))
            worst = max(worst, diff)
            assert diff < 1e-7, spec
            assert upper_bound(decomp) >= probability_curve(decomp, 2000).max_p - 1e-12
        assert worst < 1e-7


@pytest.mark.slow
class TestScaling:
    def test_fifty_dimensions(self):
        spec = random_spec(50, 4, seed=50)
        decomp = decompose(spec, ScanOptions(t_max=2000))
        curve = probability_curve(decomp)
        weight = decomp.total_s_weight()

        assert decomp.dim_E <= 394
        assert decomp.complete
        assert decomp.found == decomp.expected
        assert weight == pytest.approx(1.0, abs=1e-8)
        assert curve.probabilities[0] == pytest.approx(spec.M / spec.N, rel=1e-6)
        assert curve.probabilities[0] == pytest.approx(spec.M / spec.N * weight ** 2, rel=1e-9)
        assert upper_bound(decomp) >= curve.max_p


class TestAsymptotics:
    @pytest.mark.parametrize("n", [10, 14])
    def test_single_solution_peak(self, n):
        reference = asymptotic_peak_time(n)
        curve = simulate_curve(ProblemSpec(n=n, solutions=(0,)), int(1.5 * reference))
        t_star, p_star = optimal_iteration(curve)
        assert abs(t_star - reference) <= 0.2 * reference
        assert 0.35 <= p_star <= 0.6

    def test_spectral_agrees_at_ten(self):
        spec = ProblemSpec(n=10, solutions=(0,))
        reference = asymptotic_peak_time(10)
        decomp = decompose(spec)
        assert decomp.complete
        spectral = probability_curve(decomp, int(1.5 * reference))
        direct = simulate_curve(spec, int(1.5 * reference))
        assert compare_curves(spectral, direct) < 1e-7
