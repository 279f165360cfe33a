"""
Dense reference construction of the walk operators and generators.

Only meant for small n: it backs the eigenstructure property tests and never
runs in the spectral or simulation paths.
"""
import logging

import numpy as np
import scipy.linalg as sla

from hypersearch.config import settings
from hypersearch.errors import InvalidInputError, ResourceLimitError
from hypersearch.models.problem import ProblemSpec
from hypersearch.models.walk import GeneratorSet

logger = logging.getLogger(__name__)

DenseOperator = np.ndarray

SUBSPACE_TOL = 1e-8
NULL_RCOND = 1e-9


def _check_dense(n: int) -> None:
    if n < 1:
        raise InvalidInputError(f"dimension must be >= 1, got {n}")
    if n > settings.DENSE_MAX_N:
        raise ResourceLimitError(f"dense construction limited to n <= {settings.DENSE_MAX_N}, got n={n}")


def hadamard_dense(n: int) -> np.ndarray:
    """H^{⊗n} normalised, entry (a, b) = (-1)^<a|b> / √N."""
    _check_dense(n)
    size = 1 << n
    return sla.hadamard(size).astype(np.float64) / np.sqrt(size)


def shuffle_order(a: int, b: int) -> np.ndarray:
    """Column-per-column reading order of an a×b grid filled row by row."""
    return np.arange(a * b).reshape(a, b).T.reshape(-1)


def perfect_shuffle(a: int, b: int) -> np.ndarray:
    """
    Perfect shuffle P_{a,b}: row k of the identity is moved to position order[k].

    Satisfies A⊗B = P_{a,b} (B⊗A) P_{b,a} for A (a×a) and B (b×b).
    """
    if a < 1 or b < 1:
        raise InvalidInputError(f"shuffle sizes must be >= 1, got ({a}, {b})")
    order = shuffle_order(a, b)
    perm = np.zeros((a * b, a * b))
    perm[order, np.arange(a * b)] = 1.0
    return perm


def signatures(n: int) -> np.ndarray:
    """±1 per (position, direction) slot: +1 when bit d-1 of p is 0."""
    positions = np.arange(1 << n, dtype=np.int64)[:, None]
    bits = (positions >> np.arange(n, dtype=np.int64)[None, :]) & 1
    return (1 - 2 * bits).reshape(-1).astype(np.float64)


def fourier_operator(n: int) -> np.ndarray:
    """F = H_N ⊗ I_n."""
    return np.kron(hadamard_dense(n), np.eye(n))


def shift_operator(n: int) -> DenseOperator:
    """S = P S^{CS} Pᵀ with S^{CS} = diag(S_1, ..., S_n) in coin-major order."""
    _check_dense(n)
    size = 1 << n
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    blocks = []
    for d in range(1, n + 1):
        # S_d = I^{⊗(n-d)} ⊗ X ⊗ I^{⊗(d-1)}
        blocks.append(np.kron(np.kron(np.eye(1 << (n - d)), flip), np.eye(1 << (d - 1))))
    coin_major = sla.block_diag(*blocks)
    perm = perfect_shuffle(size, n)
    return perm @ coin_major @ perm.T


def grover_diffusion(n: int) -> np.ndarray:
    """G = -I + 2|u><u|."""
    if n < 1:
        raise InvalidInputError(f"dimension must be >= 1, got {n}")
    return -np.eye(n) + 2.0 / n * np.ones((n, n))


def coin_operator(n: int) -> DenseOperator:
    _check_dense(n)
    return np.kron(np.eye(1 << n), grover_diffusion(n))


def oracle_operator(spec: ProblemSpec) -> DenseOperator:
    """Block diagonal: -G on solution blocks, identity elsewhere."""
    _check_dense(spec.n)
    n = spec.n
    oracle = np.eye(spec.Ne)
    minus_g = -grover_diffusion(n)
    for p in spec.solutions:
        oracle[p * n:(p + 1) * n, p * n:(p + 1) * n] = minus_g
    return oracle


def walk_operators(spec: ProblemSpec) -> tuple[DenseOperator, DenseOperator]:
    """
    Returns:
        (U, Q) with U = S C and Q = S C O
    """
    walk = shift_operator(spec.n) @ coin_operator(spec.n)
    return walk, walk @ oracle_operator(spec)


def walk_eigenvalue(w: int, n: int) -> complex:
    """λ_w = 1 - 2w/n + (2i/n)√(w(n-w))."""
    return complex(1 - 2 * w / n, 2 / n * np.sqrt(w * (n - w)))


def unitary_eigensystem(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigenvalues and an orthonormal eigenbasis of a normal matrix via complex Schur form.

    Returns:
        (eigenvalues, Z) with matrix ≈ Z diag(eigenvalues) Z†
    """
    triangular, basis = sla.schur(matrix.astype(np.complex128), output="complex")
    return np.diag(triangular).copy(), basis


def group_eigenvalues(eigenvalues: np.ndarray, tol: float = 1e-7) -> list[tuple[complex, int]]:
    """Cluster unit-modulus eigenvalues by angle."""
    angles = np.sort(np.angle(eigenvalues))
    groups: list[list[float]] = []
    for angle in angles:
        if groups and angle - groups[-1][-1] < tol:
            groups[-1].append(angle)
        else:
            groups.append([angle])
    # -π 과 π 는 같은 고유값
    if len(groups) > 1 and groups[0][0] + 2 * np.pi - groups[-1][-1] < tol:
        groups[0] = groups.pop() + groups[0]
    return [(complex(np.exp(1j * np.mean(np.unwrap(g)))), len(g)) for g in groups]


def uniform_walk_spectrum(n: int) -> list[tuple[complex, int]]:
    """Eigenvalues of U = SC with multiplicities, from a dense eigendecomposition."""
    _check_dense(n)
    walk = shift_operator(n) @ coin_operator(n)
    return group_eigenvalues(np.linalg.eigvals(walk))


def _zero_sum_basis(k: int) -> np.ndarray:
    if k <= 1:
        return np.zeros((k, 0))
    return sla.null_space(np.ones((1, k)))


def l_minus_vector(n: int) -> np.ndarray:
    """|l-> = F(|1_{N-1}> ⊗ |u_n>)."""
    size = 1 << n
    hat = np.zeros(size * n)
    hat[(size - 1) * n:] = 1 / np.sqrt(n)
    return fourier_operator(n) @ hat


def walk_eigenvector(p: int, n: int) -> np.ndarray:
    """
    |1_p> ⊗ |v_w> in the Fourier domain, an eigenvector of F U F with eigenvalue λ_w.

    Requires 0 < w < n where w is the weight of p.
    """
    w = p.bit_count()
    if not 0 < w < n:
        raise InvalidInputError(f"walk_eigenvector needs 0 < weight < n, got weight {w}")
    rho = ((p >> np.arange(n)) & 1).astype(np.float64)
    block = rho / np.sqrt(2 * w) - 1j * (1 - rho) / np.sqrt(2 * (n - w))
    vector = np.zeros((1 << n) * n, dtype=np.complex128)
    vector[p * n:(p + 1) * n] = block
    return vector


def _lambda_blocks(n: int, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Λ_p^-, Λ_p^+, Λ_p° for one Fourier block."""
    minus_slots = np.flatnonzero((p >> np.arange(n)) & 1)
    plus_slots = np.setdiff1d(np.arange(n), minus_slots)
    w = len(minus_slots)

    minus_block = np.zeros((n, max(w - 1, 0)))
    minus_block[minus_slots, :] = _zero_sum_basis(w)
    plus_block = np.zeros((n, max(n - w - 1, 0)))
    plus_block[plus_slots, :] = _zero_sum_basis(n - w)

    circ = np.zeros((n, 0))
    if 0 < w < n:
        circ = np.zeros((n, 1))
        circ[minus_slots, 0] = np.sqrt((n - w) / (n * w))
        circ[plus_slots, 0] = -np.sqrt(w / (n * (n - w)))
    return minus_block, plus_block, circ


def generators(spec: ProblemSpec) -> GeneratorSet:
    """
    L1, L2, L3 in the computational basis and the L3' blocks in the Fourier basis.

    Returns:
        GeneratorSet
    """
    _check_dense(spec.n)
    n, size = spec.n, spec.N
    u_n = np.ones((n, 1)) / np.sqrt(n)

    identity = np.eye(size)
    solution_mask = np.zeros(size, dtype=bool)
    solution_mask[list(spec.solutions)] = True
    l1 = np.kron(identity[:, solution_mask], u_n)
    l2 = np.kron(identity[:, ~solution_mask], u_n)
    l3 = np.kron(identity, _zero_sum_basis(n))

    minus_cols, plus_cols, circ_cols = [], [], []
    for p in range(size):
        minus_block, plus_block, circ = _lambda_blocks(n, p)
        for block, sink in ((minus_block, minus_cols), (plus_block, plus_cols), (circ, circ_cols)):
            if block.shape[1]:
                full = np.zeros((size * n, block.shape[1]))
                full[p * n:(p + 1) * n, :] = block
                sink.append(full)

    def _stack(cols: list[np.ndarray]) -> np.ndarray:
        return np.hstack(cols) if cols else np.zeros((size * n, 0))

    logger.debug(f"Generators n={n} M={spec.M}: L3' blocks {len(minus_cols)}/{len(plus_cols)}/{len(circ_cols)}")
    return GeneratorSet(
        l1=l1,
        l2=l2,
        l3=l3,
        l3_minus=_stack(minus_cols),
        l3_plus=_stack(plus_cols),
        l3_circ=_stack(circ_cols),
    )


def solution_hadamard(spec: ProblemSpec, w: int | None = None) -> np.ndarray:
    """H_N^s (solution columns), restricted to weight-w rows when w is given."""
    hadamard = hadamard_dense(spec.n)[:, list(spec.solutions)]
    if w is None:
        return hadamard
    rows = np.array([p.bit_count() == w for p in range(spec.N)])
    return hadamard[rows]


def eigenspace(matrix: np.ndarray, value: complex, rcond: float = NULL_RCOND) -> np.ndarray:
    """Orthonormal basis of ker(matrix - value·I)."""
    shifted = matrix - value * np.eye(matrix.shape[0])
    return sla.null_space(shifted, rcond=rcond)


def span_projector(basis: np.ndarray) -> np.ndarray:
    if basis.shape[1] == 0:
        return np.zeros((basis.shape[0], basis.shape[0]))
    q, _ = np.linalg.qr(basis)
    return q @ q.conj().T


def same_span(a: np.ndarray, b: np.ndarray, tol: float = SUBSPACE_TOL) -> bool:
    """Compare two column spans through their orthogonal projectors (Frobenius norm)."""
    return bool(np.linalg.norm(span_projector(a) - span_projector(b)) < tol)


def intersection_dim(a: np.ndarray, b: np.ndarray, tol: float = SUBSPACE_TOL) -> int:
    """Dimension of span(a) ∩ span(b) for orthonormal a and b (principal angles equal to 0)."""
    if a.shape[1] == 0 or b.shape[1] == 0:
        return 0
    cosines = np.linalg.svd(a.conj().T @ b, compute_uv=False)
    return int(np.count_nonzero(cosines > 1 - tol))
