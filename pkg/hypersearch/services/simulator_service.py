import logging

import numpy as np

from hypersearch.config import settings
from hypersearch.errors import InvalidInputError, ResourceLimitError
from hypersearch.models.curve import CurveSource, SuccessCurve
from hypersearch.models.problem import ProblemSpec
from hypersearch.models.walk import WalkState

logger = logging.getLogger(__name__)

NORM_DRIFT_TOL = 1e-9


def uniform_state(n: int) -> WalkState:
    """|u>: every amplitude 1/√N_e."""
    if n < 1:
        raise InvalidInputError(f"dimension must be >= 1, got {n}")
    size = n * (1 << n)
    return WalkState(n=n, amplitudes=np.full(size, 1 / np.sqrt(size), dtype=np.complex128))


def apply_oracle(state: WalkState, spec: ProblemSpec) -> WalkState:
    """-G on every solution block: a <- a - 2 mean(a)."""
    blocks = state.blocks
    idx = list(spec.solutions)
    marked = blocks[idx]
    blocks[idx] = marked - 2 * marked.mean(axis=1, keepdims=True)
    return state


def apply_coin(state: WalkState) -> WalkState:
    """G on every block: b <- 2 mean(b) - b."""
    blocks = state.blocks
    means = blocks.mean(axis=1, keepdims=True)
    np.subtract(2 * means, blocks, out=blocks)
    return state


def apply_shift(state: WalkState) -> WalkState:
    """Swap (p, d) with (p XOR 2^(d-1), d) for every direction."""
    n = state.n
    blocks = state.blocks
    for d in range(n):
        # p = hi * 2^(d+1) + bit * 2^d + lo
        view = blocks.reshape(-1, 2, 1 << d, n)
        view[:, :, :, d] = view[:, ::-1, :, d].copy()
    return state


def apply_walk(state: WalkState, spec: ProblemSpec) -> WalkState:
    """One iteration Q = S C O."""
    return apply_shift(apply_coin(apply_oracle(state, spec)))


def fourier_transform(state: WalkState) -> WalkState:
    """
    F = H_N ⊗ I_n applied matrix-free.

    Fast Walsh-Hadamard butterflies over the position axis, every direction at once.
    """
    blocks = state.blocks
    size = blocks.shape[0]
    h = 1
    while h < size:
        view = blocks.reshape(-1, 2, h, state.n)
        upper = view[:, 0].copy()
        lower = view[:, 1]
        view[:, 0] += lower
        np.subtract(upper, lower, out=view[:, 1])
        h *= 2
    blocks /= np.sqrt(size)
    return state


def solution_overlap(state: WalkState, spec: ProblemSpec) -> complex:
    """<s|ψ> with |s> the normalised sum of |1_p>⊗|u_n> over solutions."""
    blocks = state.blocks[list(spec.solutions)]
    return complex(blocks.sum() / np.sqrt(spec.M * spec.n))


def simulate_curve(spec: ProblemSpec, t_max: int) -> SuccessCurve:
    """
    Direct simulation: apply Q t_max times to |u> and record |<s|ψ_t>|².

    Args:
        spec: problem instance
        t_max: last iteration, inclusive

    Returns:
        SuccessCurve with source DIRECT

    Raises:
        ResourceLimitError: n beyond settings.SIMULATION_MAX_N
    """
    if spec.n > settings.SIMULATION_MAX_N:
        raise ResourceLimitError(f"direct simulation limited to n <= {settings.SIMULATION_MAX_N}, got n={spec.n}")
    if t_max < 0:
        raise InvalidInputError(f"t_max must be >= 0, got {t_max}")

    state = uniform_state(spec.n)
    probabilities = np.empty(t_max + 1)
    probabilities[0] = abs(solution_overlap(state, spec)) ** 2
    for t in range(1, t_max + 1):
        apply_walk(state, spec)
        probabilities[t] = abs(solution_overlap(state, spec)) ** 2

    drift = abs(state.norm() - 1)
    if drift > NORM_DRIFT_TOL:
        logger.warning(f"Norm drift {drift:.3e} after {t_max} steps (n={spec.n})")

    argmax_t = int(np.argmax(probabilities))
    logger.info(f"Direct simulation n={spec.n} M={spec.M} t_max={t_max}: peak {probabilities[argmax_t]:.6f} at t={argmax_t}")
    return SuccessCurve(
        probabilities=probabilities,
        argmax_t=argmax_t,
        max_p=float(probabilities[argmax_t]),
        source=CurveSource.DIRECT,
    )
