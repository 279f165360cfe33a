"""
Eigenphases of Q inside the effective subspace and the components of |u> and |s>.

Every per-weight diagonal (D̂, T, W) is a length-(n+1) table keyed by Hamming
weight; the M×M matrices are assembled from the Ξ_w stack.

Next to the angle where D̂(w) has its pole the plain sum Σ D̂ Ξ loses its small
eigenvalues. The scan therefore works in a frame attached to the nearest
special point: with Y = ker Ξ_w and Ξ_w = R Λ Rᵀ, the R directions are scaled
by √|1/D̂(w)|. The scaled matrix is congruent to D_θ^s, stays finite through
the pole and has the same inertia.
"""
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from hypersearch.errors import InvalidInputError, SingularPhaseError
from hypersearch.models.problem import ProblemSpec
from hypersearch.models.scan import ScanOptions
from hypersearch.models.spectral import (
    ComponentKind,
    CriterionMinimum,
    DHatEntry,
    PhaseComponent,
    ScanCandidate,
    ScanResult,
    SpectralDecomposition,
)
from hypersearch.services.combinatorics_service import effective_dim, hamming_weight, xi_eigensystem, xi_stack

logger = logging.getLogger(__name__)

SINGULAR_TOL = 1e-14
CLOSURE_TOL = 1e-8

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def singular_phase(w: int, n: int) -> float:
    """Angle where D̂(w) has its pole: cos φ = 1 - 2w/n."""
    return float(np.arccos(1 - 2 * w / n))


def _special_points(n: int) -> np.ndarray:
    return np.array([0.0] + [singular_phase(w, n) for w in range(1, n)] + [np.pi])


def _denominators(theta, n: int) -> np.ndarray:
    """(1 - w/n) tan(θ/2) - (w/n) cot(θ/2), shape (..., n+1)."""
    ratio = np.arange(n + 1) / n
    half = np.asarray(theta, dtype=np.float64)[..., None] / 2
    tan = np.tan(half)
    return (1 - ratio) * tan - ratio / tan


def d_hat_entry(phi: float, w: int, n: int) -> DHatEntry:
    """
    D̂_φ(w) = 1 / ((1 - w/n) tan(φ/2) - (w/n) cot(φ/2)).

    Args:
        phi: angle in (0, π)
        w: weight in [0, n]
        n: dimension

    Returns:
        DHatEntry, flagged singular when the denominator vanishes
    """
    if not 0 < phi < math.pi:
        raise InvalidInputError(f"phi must lie in (0, pi), got {phi}")
    if not 0 <= w <= n:
        raise InvalidInputError(f"weight {w} outside [0, {n}]")
    denominator = float(_denominators(phi, n)[w])
    if abs(denominator) < SINGULAR_TOL:
        return DHatEntry(weight=w, singular=True)
    return DHatEntry(weight=w, value=1 / denominator)


def d_hat_table(theta: float, n: int) -> np.ndarray:
    """
    D̂_θ over all weights.

    Raises:
        SingularPhaseError: some weight has a vanishing denominator
    """
    denominators = _denominators(theta, n)
    singular = np.flatnonzero(np.abs(denominators) < SINGULAR_TOL)
    if singular.size:
        raise SingularPhaseError(float(theta), int(singular[0]))
    return 1 / denominators


def t_table(theta: float, n: int) -> np.ndarray:
    """T_θ(w) = (1 - w/n) tan²(θ/2) + (w/n) cot²(θ/2)."""
    ratio = np.arange(n + 1) / n
    tan2 = math.tan(theta / 2) ** 2
    return (1 - ratio) * tan2 + ratio / tan2


def f_transform(spec: ProblemSpec, weights, xi: np.ndarray | None = None) -> np.ndarray:
    """
    f(weights) = Σ_w weights(w) Ξ_w.

    Args:
        spec: problem instance
        weights: length-(n+1) table
        xi: precomputed Ξ stack

    Returns:
        M×M matrix
    """
    xi = xi_stack(spec) if xi is None else xi
    weights = np.asarray(weights)
    if weights.shape != (spec.n + 1,):
        raise InvalidInputError(f"weights must have length n+1={spec.n + 1}, got shape {weights.shape}")
    return np.tensordot(weights, xi, axes=1)


def d_s_matrix(spec: ProblemSpec, theta: float, xi: np.ndarray | None = None) -> np.ndarray:
    """D_θ^s = Σ_w D̂_θ(w) Ξ_w."""
    return f_transform(spec, d_hat_table(theta, spec.n), xi)


def criterion(spec: ProblemSpec, theta: float, xi: np.ndarray | None = None) -> float:
    """Least singular value of D_θ^s."""
    return float(np.linalg.svd(d_s_matrix(spec, theta, xi), compute_uv=False)[-1])


def criterion_grid(spec: ProblemSpec, thetas: np.ndarray, xi: np.ndarray | None = None) -> np.ndarray:
    """Batched criterion; +inf where D̂ is singular."""
    xi = xi_stack(spec) if xi is None else xi
    thetas = np.asarray(thetas, dtype=np.float64)
    denominators = _denominators(thetas, spec.n)
    bad = np.any(np.abs(denominators) < SINGULAR_TOL, axis=-1)
    denominators[bad] = 1.0
    matrices = np.einsum("gw,wab->gab", 1 / denominators, xi)
    values = np.linalg.svd(matrices, compute_uv=False)[:, -1]
    values[bad] = np.inf
    return values


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12,
                   max_iterations: int = 200) -> tuple[float, float]:
    """
    Golden-section search for the minimum of f on [a, b].

    Returns:
        (x, f(x)) of the best interior evaluation
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = (a + b) / 2
        return x, f(x)

    steps = min(max_iterations, int(math.ceil(math.log(tol / h) / math.log(INV_PHI))))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(steps - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    if yc < yd:
        return c, yc
    return d, yd


def kernel_dimension(singular_values: np.ndarray, zero_sv_tol: float, floor: float = 1e-12) -> int:
    """Number of singular values at most max(zero_sv_tol·σ_max, floor); input sorted descending."""
    if singular_values.size == 0:
        return 0
    cutoff = max(zero_sv_tol * float(singular_values[0]), floor)
    return int(np.count_nonzero(singular_values <= cutoff))


def scan_grid(spec: ProblemSpec, options: ScanOptions) -> list[np.ndarray]:
    """
    Uniform scan points k·theta_step of (0, π), one array per segment between special points.

    Points within `exclusion` of a singular phase are left out; the first and
    last segment start one step away from 0 and π.
    """
    step = options.theta_step
    specials = _special_points(spec.n)
    uniform = step * np.arange(1, int(math.ceil(math.pi / step)) + 1)
    uniform = uniform[uniform < math.pi - step / 2]

    segments = []
    last = len(specials) - 2
    for i, (lo, hi) in enumerate(zip(specials[:-1], specials[1:], strict=True)):
        lo_width = 0.0 if i == 0 else options.exclusion
        hi_width = 0.0 if i == last else options.exclusion
        segments.append(uniform[(uniform > lo + lo_width) & (uniform < hi - hi_width)])
    return segments


@dataclass(frozen=True)
class _PoleFrame:
    """Eigenbasis [ker Ξ_w | range Ξ_w] at the angle where D̂(w) has its pole."""

    weight: int
    angle: float
    ratio: float
    basis: np.ndarray
    null_dim: int
    range_eigs: np.ndarray
    # basisᵀ Ξ_v basis, pole slot zeroed
    rotated: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.range_eigs)

    @property
    def sin_angle(self) -> float:
        return 2 * math.sqrt(self.ratio * (1 - self.ratio))

    @property
    def cos_angle(self) -> float:
        return 1 - 2 * self.ratio


def _pole_frame(spec: ProblemSpec, w: int, xi: np.ndarray, rank_tol: float) -> _PoleFrame:
    eigenvalues, vectors, support = xi_eigensystem(spec, w, rank_tol)
    basis = np.hstack([vectors[:, ~support], vectors[:, support]])
    rotated = np.einsum("ai,vab,bj->vij", basis, xi, basis)
    rotated[w] = 0.0
    if w == 0:
        angle = 0.0
    elif w == spec.n:
        angle = math.pi
    else:
        angle = singular_phase(w, spec.n)
    return _PoleFrame(
        weight=w,
        angle=angle,
        ratio=w / spec.n,
        basis=basis,
        null_dim=int(np.count_nonzero(~support)),
        range_eigs=eigenvalues[support],
        rotated=rotated,
    )


def _pole_offsets(frame: _PoleFrame, n: int, offsets) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    sin θ, 1 - cos θ and the gaps 1 - cos θ - 2v/n at θ = angle + offset.

    D̂(v) = sin θ / gap(v); the gap of the pole weight is formed from the
    offset directly so it keeps its relative precision next to the pole.
    """
    offsets = np.atleast_1d(np.asarray(offsets, dtype=np.float64))
    half = np.sin(offsets / 2)
    shift = 2 * (frame.sin_angle * np.cos(offsets / 2) + frame.cos_angle * half) * half
    sine = frame.sin_angle * np.cos(offsets) + frame.cos_angle * np.sin(offsets)
    versine = shift + 2 * frame.ratio
    gaps = shift[:, None] + 2 * (frame.ratio - np.arange(n + 1) / n)
    return sine, versine, gaps


def _frame_d_hat(frame: _PoleFrame, sine: np.ndarray, gaps: np.ndarray) -> np.ndarray:
    safe = gaps.copy()
    safe[:, frame.weight] = 1.0
    d_hat = sine[:, None] / safe
    d_hat[:, frame.weight] = 0.0
    return d_hat


def _frame_scale(frame: _PoleFrame, pole_denominator: np.ndarray) -> np.ndarray:
    scale = np.ones((len(pole_denominator), frame.basis.shape[0]))
    scale[:, frame.null_dim:] = np.sqrt(np.abs(pole_denominator))[:, None]
    return scale


def _frame_matrices(frame: _PoleFrame, n: int, offsets) -> tuple[np.ndarray, np.ndarray]:
    """
    D_θ^s scaled in the pole frame, shape (G, M, M), with the scale vectors.

    The range block picks up sign(1/D̂(w))·Λ_w in place of D̂(w)·Ξ_w.
    """
    sine, _, gaps = _pole_offsets(frame, n, offsets)
    pole_denominator = gaps[:, frame.weight] / sine
    scale = _frame_scale(frame, pole_denominator)
    matrices = np.einsum("gv,vab->gab", _frame_d_hat(frame, sine, gaps), frame.rotated)
    matrices *= scale[:, :, None] * scale[:, None, :]
    idx = np.arange(frame.null_dim, frame.basis.shape[0])
    matrices[:, idx, idx] += np.sign(pole_denominator)[:, None] * frame.range_eigs
    return matrices, scale


def _positive_count(frame: _PoleFrame, n: int, offsets) -> np.ndarray:
    matrices, _ = _frame_matrices(frame, n, offsets)
    # 대각 스케일링 (관성 불변)
    diagonal = np.abs(np.diagonal(matrices, axis1=1, axis2=2))
    weights = np.where(diagonal > 0, 1 / np.sqrt(np.where(diagonal > 0, diagonal, 1.0)), 1.0)
    matrices = matrices * weights[:, :, None] * weights[:, None, :]
    return np.count_nonzero(np.linalg.eigvalsh(matrices) > 0, axis=-1)


def _off_pole_block(frame: _PoleFrame, n: int) -> np.ndarray:
    """Σ_{v≠w} D̂(v) Ξ_v at the pole angle, in frame coordinates."""
    sine, _, gaps = _pole_offsets(frame, n, 0.0)
    return np.tensordot(_frame_d_hat(frame, sine, gaps)[0], frame.rotated, axes=1)


def _pole_limits(frame: _PoleFrame, n: int, zero_sv_tol: float, floor: float) -> tuple[int, int, np.ndarray]:
    """
    Eigenvalue signs of K = Yᵀ B Y with Y = ker Ξ_w and B the off-pole part at the pole.

    Just above the pole the scaled matrix has rank + positive(K) positive
    eigenvalues, just below it positive(K) + zero(K).

    Returns:
        (positive count, zero count, kernel of K in Y coordinates)
    """
    y = frame.null_dim
    if y == 0:
        return 0, 0, np.zeros((0, 0))
    block = _off_pole_block(frame, n)
    values, vectors = np.linalg.eigh(block[:y, :y])
    scale = float(np.max(np.abs(np.linalg.eigvalsh(block))))
    cutoff = max(zero_sv_tol * scale, floor)
    zero = np.abs(values) <= cutoff
    return int(np.count_nonzero(values > cutoff)), int(np.count_nonzero(zero)), vectors[:, zero]


def _frame_kernel(frame: _PoleFrame, n: int, offset: float, multiplicity: int) -> tuple[np.ndarray, float]:
    matrices, _ = _frame_matrices(frame, n, [offset])
    values, vectors = np.linalg.eigh(matrices[0])
    order = np.argsort(np.abs(values))[:multiplicity]
    return vectors[:, order], float(np.abs(values[order[0]]))


def _monotone(counts: np.ndarray, high: int, low: int) -> np.ndarray:
    return np.maximum(np.minimum.accumulate(np.minimum(counts, high)), low)


def _isolate(frame: _PoleFrame, n: int, lo: float, hi: float, high: int, low: int,
             options: ScanOptions) -> list[tuple[float, float, int]]:
    """
    Split the offset bracket [lo, hi] holding `high - low` zeros until every
    piece is within refine_tol (relative to the distance from the pole).

    Returns:
        (lo, hi, zeros) per final piece
    """
    brackets = []
    pending = [(lo, hi, high, low, 0)]
    while pending:
        lo, hi, high, low, depth = pending.pop()
        if high <= low:
            continue
        if hi - lo <= options.refine_tol * max(abs(lo), abs(hi)) or depth >= options.max_iterations:
            brackets.append((lo, hi, high - low))
            continue
        mid = lo / 2 + hi / 2
        count = min(max(int(_positive_count(frame, n, mid)[0]), low), high)
        pending.append((mid, hi, count, low, depth + 1))
        pending.append((lo, mid, high, count, depth + 1))
    return sorted(brackets)


def _scan_segment(spec: ProblemSpec, left: _PoleFrame, right: _PoleFrame, start: int, end: int,
                  points: np.ndarray, options: ScanOptions) -> tuple[list[tuple[_PoleFrame, float, int]], int]:
    """
    Zeros of D_θ^s between two adjacent poles.

    D̂ decreases strictly off its poles, so the number of positive eigenvalues
    drops by one at every zero. The left half of the segment is worked in the
    left pole's frame and the right half in the right pole's frame.

    Returns:
        ([(frame, offset, multiplicity)], zeros that stayed attached to a pole)
    """
    n = spec.n
    if start < end:
        logger.warning(f"Sign count rises between poles {left.weight} and {right.weight} ({start} -> {end})")
        return [], 0
    if start == end:
        return [], 0

    half = (right.angle - left.angle) / 2
    left_offsets = np.append(points[points - left.angle < half] - left.angle, half)
    inner = points[points - left.angle > half] - right.angle
    left_counts = _monotone(_positive_count(left, n, left_offsets), start, end)
    middle = int(left_counts[-1])
    right_counts = _monotone(_positive_count(right, n, inner), middle, end) if inner.size else np.zeros(0, dtype=int)

    sweeps = (
        (left, np.concatenate([[0.0], left_offsets]), np.concatenate([[start], left_counts])),
        (right, np.concatenate([[-half], inner, [0.0]]), np.concatenate([[middle], right_counts, [end]])),
    )
    zeros: list[tuple[_PoleFrame, float, int]] = []
    unresolved = 0
    for frame, offsets, counts in sweeps:
        for j in np.flatnonzero(counts[:-1] > counts[1:]):
            brackets = _isolate(frame, n, float(offsets[j]), float(offsets[j + 1]), int(counts[j]), int(counts[j + 1]), options)
            for lo, hi, drop in brackets:
                offset = lo / 2 + hi / 2
                at_end = frame.weight in (0, n) and abs(offset) <= options.refine_tol
                if lo == 0.0 or hi == 0.0 or at_end:
                    logger.warning(f"{drop} zero(s) not separated from pole {frame.weight} (offset {offset:.3e})")
                    unresolved += drop
                    continue
                zeros.append((frame, offset, drop))
    return zeros, unresolved


def _criterion_minima(spec: ProblemSpec, segments: list[np.ndarray], values: np.ndarray, options: ScanOptions,
                      xi: np.ndarray) -> list[CriterionMinimum]:
    specials = _special_points(spec.n)

    def _objective(theta: float) -> float:
        try:
            return criterion(spec, theta, xi)
        except SingularPhaseError:
            return math.inf

    minima = []
    start = 0
    for points in segments:
        local = values[start:start + len(points)]
        for j in range(1, len(points) - 1):
            if not (local[j] < local[j - 1] and local[j] <= local[j + 1]):
                continue
            tol = options.refine_tol * min(1.0, float(np.min(np.abs(specials - points[j]))))
            phi, value = golden_section(_objective, points[j - 1], points[j + 1], tol, options.max_iterations)
            # 단봉이 아니면 격자점 사용
            if value > local[j]:
                phi, value = float(points[j]), float(local[j])
            singular_values = np.linalg.svd(d_s_matrix(spec, phi, xi), compute_uv=False)
            minima.append(CriterionMinimum(
                phi=phi,
                value=value,
                index=start + j,
                multiplicity=kernel_dimension(singular_values, options.zero_sv_tol, options.zero_sv_floor),
            ))
        start += len(points)
    return minima


def scan_and_refine(spec: ProblemSpec, options: ScanOptions | None = None) -> ScanResult:
    """
    Locate the regular eigenphases in (0, π).

    Each segment between special points is sampled on the scan grid. Sign
    counts of D_θ^s at the samples and at the segment ends bracket every zero,
    and bisection narrows each bracket to refine_tol. The multiplicity is the
    drop in the count; the kernel is read off at the refined phase.

    The criterion curve σ_min(D_θ^s) is evaluated on the same grid and its local
    minima refined by golden section; a minimum with no singular value below
    max(zero_sv_tol·σ_max, zero_sv_floor) counts as discarded.

    Args:
        spec: problem instance (n >= 2)
        options: scan settings

    Returns:
        ScanResult with candidates sorted by phase
    """
    options = options or ScanOptions()
    if spec.n < 2:
        raise InvalidInputError("the spectral pipeline requires n >= 2")

    n = spec.n
    xi = xi_stack(spec)
    frames = [_pole_frame(spec, w, xi, options.rank_tol) for w in range(n + 1)]
    limits = [_pole_limits(frame, n, options.zero_sv_tol, options.zero_sv_floor) for frame in frames]
    segments = scan_grid(spec, options)

    candidates = []
    unresolved = 0
    for w, points in enumerate(segments):
        left, right = frames[w], frames[w + 1]
        start = left.rank + limits[w][0]
        end = limits[w + 1][0] + limits[w + 1][1]
        zeros, missed = _scan_segment(spec, left, right, start, end, points, options)
        unresolved += missed
        for frame, offset, multiplicity in zeros:
            kernel, smallest = _frame_kernel(frame, n, offset, multiplicity)
            _, scale = _frame_matrices(frame, n, [offset])
            candidates.append(ScanCandidate(
                phi=frame.angle + offset,
                multiplicity=multiplicity,
                kernel=frame.basis @ (scale[0][:, None] * kernel),
                criterion=smallest,
                pole=frame.weight,
                offset=offset,
            ))

    grid = np.concatenate(segments)
    values = criterion_grid(spec, grid, xi)
    minima = _criterion_minima(spec, segments, values, options, xi)
    result = ScanResult(
        candidates=sorted(candidates, key=lambda c: c.phi),
        grid=grid,
        values=values,
        criterion_minima=minima,
        unresolved=unresolved,
    )
    logger.info(
        f"Scan n={n} M={spec.M}: {result.grid_size} grid points, {len(candidates)} zeros"
        f" ({sum(c.multiplicity for c in candidates)} with multiplicity), {result.minima} criterion minima,"
        f" {result.discarded} discarded, {unresolved} unresolved"
    )
    return result


def _project(gram: np.ndarray, raw: np.ndarray, rank_tol: float) -> np.ndarray:
    """
    Coordinates of |s> in an orthonormal eigenbasis: S⁻¹ Vᵀ s' from gram = V S² Vᵀ.
    """
    eigenvalues, vectors = np.linalg.eigh(gram)
    top = eigenvalues[-1] if eigenvalues.size else 0.0
    if top <= 0:
        return np.zeros(0)
    keep = eigenvalues > rank_tol * top
    return (vectors[:, keep].T @ raw) / np.sqrt(eigenvalues[keep])


def _u_factor(spec: ProblemSpec, phi: float) -> complex:
    """√(M/N)(1 - i cot(φ/2))."""
    return math.sqrt(spec.M / spec.N) * complex(1.0, -1.0 / math.tan(phi / 2))


def _frame_gram(frame: _PoleFrame, n: int, offset: float) -> tuple[np.ndarray, np.ndarray, float]:
    """
    f(D̂²(1 + T)) scaled in the pole frame, the scale vector and cot(θ/2).
    """
    sine, versine, gaps = _pole_offsets(frame, n, offset)
    pole_denominator = gaps[:, frame.weight] / sine
    scale = _frame_scale(frame, pole_denominator)[0]
    tan2 = float((versine[0] / sine[0]) ** 2)
    ratio = np.arange(n + 1) / n
    t = (1 - ratio) * tan2 + ratio / tan2
    d_hat = _frame_d_hat(frame, sine, gaps)[0]

    gram = np.tensordot(d_hat ** 2 * (1 + t), frame.rotated, axes=1) * np.outer(scale, scale)
    denominator = abs(float(pole_denominator[0]))
    if denominator > 0:
        idx = np.arange(frame.null_dim, frame.basis.shape[0])
        gram[idx, idx] += (1 + t[frame.weight]) / denominator * frame.range_eigs
    return gram, scale, float(sine[0] / versine[0])


def _frame_component(spec: ProblemSpec, frame: _PoleFrame, offset: float, kernel: np.ndarray,
                     rank_tol: float) -> PhaseComponent:
    gram_full, scale, cot_half = _frame_gram(frame, spec.n, offset)
    gram = kernel.T @ gram_full @ kernel
    raw = kernel.T @ (scale * (frame.basis.T @ np.ones(spec.M))) / math.sqrt(spec.M)
    s = _project(gram, raw, rank_tol).astype(np.complex128)
    return PhaseComponent(
        phi=frame.angle + offset,
        multiplicity=len(s),
        s_comp=s,
        u_comp=math.sqrt(spec.M / spec.N) * complex(1.0, -cot_half) * s,
        kind=ComponentKind.REGULAR,
    )


def components_regular(spec: ProblemSpec, phi: float, kernel: np.ndarray,
                       rank_tol: float = 1e-10, xi: np.ndarray | None = None) -> PhaseComponent:
    """
    Components of |s> and |u> in the eigenspace of a regular eigenphase.

    The correlation E1ᵀ f(D̂²(1+T)) E1 is formed in the frame of the nearest
    special point, where it stays finite.

    Args:
        spec: problem instance
        phi: refined eigenphase in (0, π), not singular
        kernel: M×m basis of ker D_φ^s
        rank_tol: relative cut on the correlation eigenvalues

    Returns:
        PhaseComponent of kind REGULAR (multiplicity 0 when the correlation degenerates)
    """
    if not 0 < phi < math.pi:
        raise InvalidInputError(f"phi must lie in (0, pi), got {phi}")
    d_hat_table(phi, spec.n)
    xi = xi_stack(spec) if xi is None else xi
    w = int(np.argmin(np.abs(_special_points(spec.n) - phi)))
    frame = _pole_frame(spec, w, xi, rank_tol)
    offset = phi - frame.angle
    sine, _, gaps = _pole_offsets(frame, spec.n, offset)
    scale = _frame_scale(frame, gaps[:, w] / sine)[0]
    return _frame_component(spec, frame, offset, (frame.basis.T @ kernel) / scale[:, None], rank_tol)


def components_minus_one(spec: ProblemSpec, rank_tol: float = 1e-10, xi: np.ndarray | None = None) -> PhaseComponent | None:
    """
    Component at φ = π, kernel of <h| with h_k = (-1)^{w_k}/√N.

    Returns:
        PhaseComponent of kind MINUS_ONE, or None when M = 1
    """
    if spec.M < 2:
        return None
    xi = xi_stack(spec) if xi is None else xi
    n = spec.n
    signs = np.array([(-1.0) ** hamming_weight(p) for p in spec.solutions])
    kernel = sla.null_space(signs[None, :])
    # <h|ε1> = 0 이므로 weight n 항은 사라진다
    one_plus_w = np.array([n / (n - w) if w < n else 0.0 for w in range(n + 1)])
    gram = kernel.T @ f_transform(spec, one_plus_w, xi) @ kernel
    raw = kernel.T @ (np.ones(spec.M) / math.sqrt(spec.M))
    s = _project(gram, raw, rank_tol).astype(np.complex128)
    return PhaseComponent(
        phi=math.pi,
        multiplicity=len(s),
        s_comp=s,
        u_comp=math.sqrt(spec.M / spec.N) * s,
        kind=ComponentKind.MINUS_ONE,
    )


def _singular_component(spec: ProblemSpec, frame: _PoleFrame, rank_tol: float, zero_sv_tol: float,
                        floor: float) -> PhaseComponent | None:
    y = frame.null_dim
    if y == 0:
        return None
    _, _, null = _pole_limits(frame, spec.n, zero_sv_tol, floor)
    if null.shape[1] == 0:
        return None

    block = _off_pole_block(frame, spec.n)
    # range 성분: Rᵀ B Y ε̂ + S z = 0
    z = -(block[y:, :y] @ null) / np.sqrt(frame.range_eigs)[:, None]
    gram_full, _, _ = _frame_gram(frame, spec.n, 0.0)
    gram = null.T @ gram_full[:y, :y] @ null + 2 * z.T @ z
    raw = null.T @ (frame.basis[:, :y].T @ np.ones(spec.M)) / math.sqrt(spec.M)
    s = _project(gram, raw, rank_tol).astype(np.complex128)
    if s.size == 0:
        return None
    return PhaseComponent(
        phi=frame.angle,
        multiplicity=len(s),
        s_comp=s,
        u_comp=_u_factor(spec, frame.angle) * s,
        kind=ComponentKind.SINGULAR,
        weight=frame.weight,
    )


def components_singular(spec: ProblemSpec, w: int, rank_tol: float = 1e-10, zero_sv_tol: float = 1e-8,
                        xi: np.ndarray | None = None, zero_sv_floor: float = 1e-12) -> PhaseComponent | None:
    """
    Component at cos φ = 1 - 2w/n, where D̂(w) has its pole.

    With Y = ker Ξ_w and Ξ_w = R Λ Rᵀ, the pairs (ε̂1, z) solving
    D^{s,p̄} Y ε̂1 + R Λ^{1/2} z = 0 are ε̂1 ∈ ker Yᵀ D^{s,p̄} Y and
    z = -Λ^{-1/2} Rᵀ D^{s,p̄} Y ε̂1. The correlation picks up 2 zᵀz from the
    weight-w slots (x̃ = i z).

    Returns:
        PhaseComponent of kind SINGULAR, or None when the component is absent
    """
    n = spec.n
    if not 1 <= w <= n - 1:
        raise InvalidInputError(f"singular weight must lie in [1, {n - 1}], got {w}")
    xi = xi_stack(spec) if xi is None else xi
    return _singular_component(spec, _pole_frame(spec, w, xi, rank_tol), rank_tol, zero_sv_tol, zero_sv_floor)


def _with_conjugates(components: list[PhaseComponent]) -> list[PhaseComponent]:
    paired = []
    for component in components:
        paired.append(component)
        if 0 < component.phi < math.pi:
            paired.append(component.conjugate())
    return paired


def _regular_components(spec: ProblemSpec, scan: ScanResult, frames: list[_PoleFrame], options: ScanOptions,
                        xi: np.ndarray) -> list[PhaseComponent]:
    components = []
    for candidate in scan.candidates:
        if candidate.pole is not None and candidate.offset is not None:
            frame = frames[candidate.pole]
            kernel, _ = _frame_kernel(frame, spec.n, candidate.offset, candidate.multiplicity)
            component = _frame_component(spec, frame, candidate.offset, kernel, options.rank_tol)
        else:
            component = components_regular(spec, candidate.phi, candidate.kernel, options.rank_tol, xi)
        if component.multiplicity:
            components.append(component)
    return components


def _closure(spec: ProblemSpec, components: list[PhaseComponent], expected: int) -> tuple[int, bool]:
    """
    found and the completeness flag: found == expected and both unit-circle sums equal 1 within CLOSURE_TOL.
    """
    found = sum(c.multiplicity for c in components)
    s_total = sum(c.s_weight for c in components)
    u_total = sum(c.u_weight for c in components)
    closed = abs(s_total - 1) <= CLOSURE_TOL and abs(u_total - 1) <= CLOSURE_TOL
    if found > expected:
        logger.warning(f"Overcount n={spec.n} M={spec.M}: found {found} components, expected {expected}")
    if not closed:
        logger.warning(f"Unit-circle closure off n={spec.n} M={spec.M}: sum |s|^2 = {s_total:.12f}, sum |u|^2 = {u_total:.12f}")
    return found, found == expected and closed


def decompose(spec: ProblemSpec, options: ScanOptions | None = None) -> SpectralDecomposition:
    """
    Full pipeline: dim 𝓔, scan, regular / minus-one / singular components,
    conjugates, completeness check with one finer rescan.

    Args:
        spec: problem instance (n >= 2)
        options: scan settings

    Returns:
        SpectralDecomposition; `complete` is False when components are missing,
        over-counted or do not close on the unit circle
    """
    options = options or ScanOptions()
    if spec.n < 2:
        raise InvalidInputError("the spectral pipeline requires n >= 2")

    xi = xi_stack(spec)
    dim_e = effective_dim(spec, options.rank_tol)
    # λ = +1 부분 (차원 M-1)은 만들지 않는다
    expected = dim_e - (spec.M - 1)
    frames = [_pole_frame(spec, w, xi, options.rank_tol) for w in range(spec.n + 1)]

    fixed: list[PhaseComponent] = []
    minus_one = components_minus_one(spec, options.rank_tol, xi)
    if minus_one is not None and minus_one.multiplicity:
        fixed.append(minus_one)
    for w in range(1, spec.n):
        singular = _singular_component(spec, frames[w], options.rank_tol, options.zero_sv_tol, options.zero_sv_floor)
        if singular is not None:
            fixed.append(singular)

    used = options
    scan = scan_and_refine(spec, used)
    components = _with_conjugates(_regular_components(spec, scan, frames, used, xi) + fixed)
    found, complete = _closure(spec, components, expected)

    rescanned = False
    if not complete and options.rescan:
        logger.warning(f"Found {found} of {expected} components; rescanning with step {options.theta_step / 2:.3e}")
        used = options.halved()
        scan = scan_and_refine(spec, used)
        components = _with_conjugates(_regular_components(spec, scan, frames, used, xi) + fixed)
        found, complete = _closure(spec, components, expected)
        rescanned = True

    components.sort(key=lambda c: c.phi)
    if complete:
        logger.info(f"Decomposition n={spec.n} M={spec.M}: dim_E={dim_e}, found {found}/{expected}")
    else:
        logger.warning(f"Incomplete decomposition n={spec.n} M={spec.M}: dim_E={dim_e}, found {found}/{expected}")

    return SpectralDecomposition(
        spec=spec,
        components=components,
        dim_E=dim_e,
        found=found,
        expected=expected,
        options=options,
        complete=complete,
        theta_step_used=used.theta_step,
        rescanned=rescanned,
        minima=scan.minima,
        discarded=scan.discarded,
        scan=scan,
    )
