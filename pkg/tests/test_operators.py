import math

import numpy as np
import pytest

from hypersearch.config import settings
from hypersearch.errors import InvalidInputError, ResourceLimitError
from hypersearch.models.problem import ProblemSpec
from hypersearch.services.combinatorics_service import random_spec, rank_xi
from hypersearch.services.operator_service import (
    coin_operator,
    eigenspace,
    fourier_operator,
    generators,
    grover_diffusion,
    group_eigenvalues,
    hadamard_dense,
    intersection_dim,
    l_minus_vector,
    oracle_operator,
    perfect_shuffle,
    same_span,
    shift_operator,
    shuffle_order,
    signatures,
    solution_hadamard,
    uniform_walk_spectrum,
    walk_eigenvalue,
    walk_eigenvector,
    walk_operators,
)


class TestShuffle:
    def test_order(self):
        np.testing.assert_array_equal(shuffle_order(2, 3), [0, 3, 1, 4, 2, 5])

    @pytest.mark.parametrize(("a", "b"), [(2, 3), (4, 2), (3, 5)])
    def test_swaps_kronecker_factors(self, a, b, rng):
        left = rng.standard_normal((a, a))
        right = rng.standard_normal((b, b))
        np.testing.assert_allclose(
            np.kron(left, right),
            perfect_shuffle(a, b) @ np.kron(right, left) @ perfect_shuffle(b, a),
            atol=1e-12,
        )
        np.testing.assert_array_equal(perfect_shuffle(b, a), perfect_shuffle(a, b).T)

    def test_rejects_empty(self):
        with pytest.raises(InvalidInputError):
            perfect_shuffle(0, 3)


class TestOperators:
    def test_hadamard_orthogonal(self):
        h = hadamard_dense(4)
        np.testing.assert_allclose(h @ h, np.eye(16), atol=1e-12)
        assert h[5, 2] == pytest.approx(1 / 4)
        assert h[5, 3] == pytest.approx(-1 / 4)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_shift_flips_one_bit(self, n):
        size = 1 << n
        expected = np.zeros((n * size, n * size))
        for p in range(size):
            for d in range(n):
                expected[(p ^ (1 << d)) * n + d, p * n + d] = 1.0
        np.testing.assert_array_equal(shift_operator(n), expected)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_fourier_diagonalises_shift(self, n):
        f = fourier_operator(n)
        np.testing.assert_allclose(f @ shift_operator(n) @ f, np.diag(signatures(n)), atol=1e-12)

    def test_signature_convention(self):
        sig = signatures(3).reshape(8, 3)
        np.testing.assert_array_equal(sig[0], [1, 1, 1])
        np.testing.assert_array_equal(sig[5], [-1, 1, -1])

    def test_grover_reflection(self):
        g = grover_diffusion(5)
        np.testing.assert_allclose(g @ g, np.eye(5), atol=1e-12)
        np.testing.assert_allclose(g @ np.ones(5), np.ones(5), atol=1e-12)

    def test_coin_and_oracle_are_involutions(self):
        spec = ProblemSpec(n=3, solutions=(1, 6))
        coin = coin_operator(3)
        oracle = oracle_operator(spec)
        np.testing.assert_allclose(coin @ coin, np.eye(24), atol=1e-12)
        np.testing.assert_allclose(oracle @ oracle, np.eye(24), atol=1e-12)
        np.testing.assert_array_equal(oracle[:3, :3], np.eye(3))
        np.testing.assert_allclose(oracle[3:6, 3:6], -grover_diffusion(3))

    def test_walk_is_unitary(self):
        walk, search = walk_operators(ProblemSpec(n=4, solutions=(2, 9, 15)))
        np.testing.assert_allclose(walk.T @ walk, np.eye(64), atol=1e-12)
        np.testing.assert_allclose(search.T @ search, np.eye(64), atol=1e-12)

    def test_dense_limit(self, monkeypatch):
        monkeypatch.setattr(settings, "DENSE_MAX_N", 3)
        with pytest.raises(ResourceLimitError):
            shift_operator(4)


class TestUniformWalkSpectrum:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_multiplicities(self, n):
        size = 1 << n
        walk = shift_operator(n) @ coin_operator(n)
        for w in range(1, n):
            value = walk_eigenvalue(w, n)
            assert eigenspace(walk, value).shape[1] == math.comb(n, w)
            assert eigenspace(walk, value.conjugate()).shape[1] == math.comb(n, w)
        half = n * size // 2 - size + 2
        assert eigenspace(walk, 1.0).shape[1] == half
        assert eigenspace(walk, -1.0).shape[1] == half

    def test_grouped_spectrum_covers_space(self):
        spectrum = uniform_walk_spectrum(4)
        assert sum(m for _, m in spectrum) == 64
        for value, m in spectrum:
            assert abs(value) == pytest.approx(1.0)
            if abs(value.imag) > 1e-6:
                w = round((1 - value.real) * 4 / 2)
                assert m == math.comb(4, w)

    def test_group_wraps_at_pi(self):
        values = np.exp(1j * np.array([np.pi - 1e-9, -np.pi + 1e-9, 0.5]))
        grouped = group_eigenvalues(values)
        assert sorted(m for _, m in grouped) == [1, 2]

    @pytest.mark.parametrize("p", [1, 3, 6, 10, 13])
    def test_walk_eigenvector(self, p):
        n = 4
        f = fourier_operator(n)
        fourier_walk = f @ shift_operator(n) @ coin_operator(n) @ f
        vector = walk_eigenvector(p, n)
        value = walk_eigenvalue(p.bit_count(), n)
        np.testing.assert_allclose(fourier_walk @ vector, value * vector, atol=1e-12)
        assert np.linalg.norm(vector) == pytest.approx(1.0)

    def test_walk_eigenvector_needs_mixed_weight(self):
        with pytest.raises(InvalidInputError):
            walk_eigenvector(0, 3)

    def test_l_minus_is_unit(self):
        vector = l_minus_vector(3)
        assert np.linalg.norm(vector) == pytest.approx(1.0)
        # F(|1_{N-1}> ⊗ u) 의 첫 블록
        np.testing.assert_allclose(vector[:3], np.full(3, 1 / math.sqrt(24)))


class TestJointEigenspaces:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_shift_coin(self, n):
        size = 1 << n
        shift, coin = shift_operator(n), coin_operator(n)
        coin_minus = eigenspace(coin, -1.0)
        for sign in (1.0, -1.0):
            assert intersection_dim(eigenspace(shift, sign), coin_minus) == n * size // 2 - size + 1

    @pytest.mark.parametrize("seed", range(6))
    def test_walk_oracle(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 6))
        spec = random_spec(n, int(rng.integers(1, min(4, 1 << n) + 1)), seed)
        walk, _ = walk_operators(spec)
        oracle = oracle_operator(spec)
        oracle_plus = eigenspace(oracle, 1.0)
        oracle_minus = eigenspace(oracle, -1.0)
        for w in range(1, n):
            space = eigenspace(walk, walk_eigenvalue(w, n))
            assert intersection_dim(space, oracle_plus) == math.comb(n, w) - rank_xi(spec, w)
            assert intersection_dim(space, oracle_minus) == 0


class TestGenerators:
    def test_orthonormal_columns(self):
        spec = ProblemSpec(n=4, solutions=(0, 5))
        gens = generators(spec)
        assert gens.l1.shape[1] == 2
        assert gens.l2.shape[1] == 14
        assert gens.l3.shape[1] == 16 * 3
        for block in (gens.l123, gens.l3_prime):
            np.testing.assert_allclose(block.T @ block, np.eye(block.shape[1]), atol=1e-12)

    def test_fourier_blocks_span_l3(self):
        gens = generators(ProblemSpec(n=3, solutions=(2,)))
        assert same_span(gens.l3, gens.l3_prime)

    def test_fourier_blocks_are_walk_eigenvectors(self):
        n = 4
        gens = generators(ProblemSpec(n=n, solutions=(1,)))
        f = fourier_operator(n)
        fourier_walk = f @ shift_operator(n) @ coin_operator(n) @ f
        np.testing.assert_allclose(fourier_walk @ gens.l3_minus, gens.l3_minus, atol=1e-12)
        np.testing.assert_allclose(fourier_walk @ gens.l3_plus, -gens.l3_plus, atol=1e-12)

    def test_solution_hadamard_rank(self):
        spec = ProblemSpec(n=5, solutions=(0, 7, 24, 31))
        assert solution_hadamard(spec).shape == (32, 4)
        for w in range(6):
            rows = solution_hadamard(spec, w)
            assert rows.shape[0] == math.comb(5, w)
            assert np.linalg.matrix_rank(rows) == rank_xi(spec, w)
