import logging
import math
from functools import lru_cache

import numpy as np

from hypersearch.errors import InvalidInputError
from hypersearch.models.problem import ProblemSpec, WeightTable

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
RANK_FLOOR = 1e-14


def hamming_weight(p: int) -> int:
    """Number of 1-bits of a position index."""
    if p < 0:
        raise InvalidInputError(f"position must be non-negative, got {p}")
    return p.bit_count()


def binomial(n: int, k: int) -> int:
    """
    Exact binomial coefficient C(n, k).

    Args:
        n: non-negative integer
        k: any integer; C(n, k) = 0 outside [0, n]

    Returns:
        exact Python integer
    """
    if n < 0:
        raise InvalidInputError(f"binomial requires n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def zeta(w_m: int, w_p: int, n: int) -> int:
    """
    Weight-w_p words having an even overlap with a fixed weight-w_m mask.

    Args:
        w_m: weight of the mask
        w_p: weight of the counted words
        n: dimension

    Returns:
        Σ_l C(w_m, 2l) C(n - w_m, w_p - 2l)
    """
    return sum(binomial(w_m, 2 * l) * binomial(n - w_m, w_p - 2 * l) for l in range(w_p // 2 + 1))


def eta(w_p: int, w_m: int, n: int) -> int:
    """Σ over weight-w_p words ρ of (-1)^<ρ|μ> for any μ of weight w_m."""
    return 2 * zeta(w_m, w_p, n) - binomial(n, w_p)


@lru_cache(maxsize=None)
def weight_table(n: int) -> WeightTable:
    """
    η table for one dimension, built once and read-only.

    Returns:
        WeightTable with eta[w_p, w_m]
    """
    if n < 1 or n > 64:
        raise InvalidInputError(f"dimension must be in [1, 64], got {n}")
    table = np.array([[eta(w_p, w_m, n) for w_m in range(n + 1)] for w_p in range(n + 1)], dtype=np.int64)
    table.flags.writeable = False
    return WeightTable(n=n, eta=table)


def xor_weights(spec: ProblemSpec) -> np.ndarray:
    """M×M matrix of hamming_weight(solution_a XOR solution_b)."""
    sols = spec.solutions
    return np.array([[hamming_weight(a ^ b) for b in sols] for a in sols], dtype=np.int64)


def _eta_block(spec: ProblemSpec, w: int) -> np.ndarray:
    # N * Ξ_w, 정수 행렬
    return weight_table(spec.n).eta[w][xor_weights(spec)]


def xi_matrix(spec: ProblemSpec, w: int) -> np.ndarray:
    """
    Ξ_w = H^{s,w T} H^{s,w} from the η table.

    Args:
        spec: problem instance
        w: row weight in [0, n]

    Returns:
        M×M real symmetric matrix
    """
    if not 0 <= w <= spec.n:
        raise InvalidInputError(f"weight {w} outside [0, {spec.n}]")
    return _eta_block(spec, w).astype(np.float64) / float(spec.N)


def xi_stack(spec: ProblemSpec) -> np.ndarray:
    """All Ξ_w stacked as an (n+1, M, M) array."""
    table = weight_table(spec.n).eta
    return table[:, xor_weights(spec)].astype(np.float64) / float(spec.N)


def xi_eigensystem(spec: ProblemSpec, w: int, tol: float = RANK_TOL) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Eigenpairs of Ξ_w and the support mask that defines r_w.

    The decomposition is taken on the integer matrix N·Ξ_w so that the absolute
    floor does not depend on 2^n.

    Returns:
        (eigenvalues of Ξ_w ascending, orthonormal eigenvectors as columns, support mask)
    """
    if not 0 <= w <= spec.n:
        raise InvalidInputError(f"weight {w} outside [0, {spec.n}]")
    eigenvalues, vectors = np.linalg.eigh(_eta_block(spec, w).astype(np.float64))
    top = eigenvalues[-1]
    if top <= RANK_FLOOR:
        support = np.zeros(len(eigenvalues), dtype=bool)
    else:
        support = eigenvalues > max(tol * top, RANK_FLOOR)
    return eigenvalues / float(spec.N), vectors, support


def rank_xi(spec: ProblemSpec, w: int, tol: float = RANK_TOL) -> int:
    """r_w, the rank of Ξ_w (equivalently of H^{s,w})."""
    return int(np.count_nonzero(xi_eigensystem(spec, w, tol)[2]))


def xi_rank_profile(spec: ProblemSpec, tol: float = RANK_TOL) -> list[int]:
    return [rank_xi(spec, w, tol) for w in range(spec.n + 1)]


def effective_dim(spec: ProblemSpec, tol: float = RANK_TOL) -> int:
    """
    Dimension of the effective subspace, 2 + 2 Σ_{w=1}^{n-1} r_w.

    Raises:
        InvalidInputError: n < 2
    """
    if spec.n < 2:
        raise InvalidInputError("the spectral pipeline requires n >= 2")
    ranks = xi_rank_profile(spec, tol)
    dim = 2 + 2 * sum(ranks[1:spec.n])
    logger.debug(f"effective_dim n={spec.n} M={spec.M}: ranks={ranks} dim={dim}")
    return dim


def random_spec(n: int, m: int, seed: int | None = None) -> ProblemSpec:
    """Uniformly random solution set of size m, drawn without replacement."""
    size = 1 << n
    if not 1 <= m <= size:
        raise InvalidInputError(f"cannot draw {m} distinct solutions from {size} positions")
    rng = np.random.default_rng(seed)
    if n <= 20:
        picks = rng.choice(size, size=m, replace=False)
        return ProblemSpec(n=n, solutions=tuple(int(p) for p in picks))

    # 큰 n: 거절 샘플링
    chosen: set[int] = set()
    while len(chosen) < m:
        high = int(rng.integers(0, 1 << (n - 32))) if n > 32 else 0
        low = int(rng.integers(0, 1 << min(n, 32)))
        chosen.add((high << 32) | low if n > 32 else low)
    return ProblemSpec(n=n, solutions=tuple(sorted(chosen)))
