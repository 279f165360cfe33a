import logging
import math

import numpy as np

from hypersearch.errors import IncompleteDecompositionError, InvalidInputError
from hypersearch.models.curve import CurveSource, SuccessCurve
from hypersearch.models.spectral import ComponentKind, SpectralDecomposition

logger = logging.getLogger(__name__)

CHUNK_STEPS = 1 << 12
CLIP_TOL = 1e-10


def probability_curve(decomp: SpectralDecomposition, t_max: int | None = None, strict: bool = False) -> SuccessCurve:
    """
    p_t = |Σ_k c_k e^{iφ_k t}|² with c_k = Σ_l s(k,l)* u(k,l).

    Args:
        decomp: spectral decomposition
        t_max: last iteration, inclusive (defaults to decomp.options.t_max)
        strict: refuse incomplete decompositions instead of flagging the curve

    Returns:
        SuccessCurve with source SPECTRAL, flagged approximate when decomp is incomplete
    """
    if strict and not decomp.complete:
        raise IncompleteDecompositionError(f"decomposition has {decomp.found} of {decomp.expected} components")
    t_max = decomp.options.t_max if t_max is None else t_max
    if t_max < 0:
        raise InvalidInputError(f"t_max must be >= 0, got {t_max}")

    components = [c for c in decomp.components if c.multiplicity]
    amplitudes = np.array([c.amplitude for c in components], dtype=np.complex128)
    rotation = np.exp(1j * np.array([c.phi for c in components]))

    probabilities = np.empty(t_max + 1)
    phasor = np.ones(len(components), dtype=np.complex128)
    t = 0
    while t <= t_max:
        count = min(CHUNK_STEPS, t_max + 1 - t)
        steps = np.empty((count, len(components)), dtype=np.complex128)
        steps[0] = phasor
        steps[1:] = rotation
        np.cumprod(steps, axis=0, out=steps)
        probabilities[t:t + count] = np.abs(steps @ amplitudes) ** 2
        # 위상 드리프트 보정
        phasor = steps[-1] * rotation
        phasor /= np.abs(phasor)
        t += count

    overshoot = float(probabilities.max()) - 1.0
    if overshoot > CLIP_TOL:
        logger.warning(f"Spectral curve exceeds 1 by {overshoot:.3e}")
    probabilities = np.clip(probabilities, 0.0, 1.0)

    argmax_t = int(np.argmax(probabilities))
    return SuccessCurve(
        probabilities=probabilities,
        argmax_t=argmax_t,
        max_p=float(probabilities[argmax_t]),
        source=CurveSource.SPECTRAL,
        approximate=not decomp.complete,
    )


def upper_bound(decomp: SpectralDecomposition) -> float:
    """
    (M/N) (Σ_k f_k Σ_l |s(k,l)|²)² with f_k = 1/|sin(φ_k/2)|, and f_k = 1 at φ = π.
    """
    spec = decomp.spec
    total = 0.0
    for component in decomp.components:
        if component.kind == ComponentKind.MINUS_ONE:
            factor = 1.0
        else:
            factor = 1.0 / abs(math.sin(component.phi / 2))
        total += factor * component.s_weight
    return spec.M / spec.N * total ** 2


def optimal_iteration(curve: SuccessCurve) -> tuple[int, float]:
    """Smallest t reaching the maximum of p_t."""
    if len(curve.probabilities) == 0:
        raise InvalidInputError("empty curve")
    t = int(np.argmax(curve.probabilities))
    return t, float(curve.probabilities[t])


def compare_curves(a: SuccessCurve, b: SuccessCurve) -> float:
    """max_t |p_t(a) - p_t(b)| over the common range."""
    length = min(len(a.probabilities), len(b.probabilities))
    if length == 0:
        return 0.0
    return float(np.max(np.abs(a.probabilities[:length] - b.probabilities[:length])))


def asymptotic_peak_time(n: int, m: int = 1) -> float:
    """(π/2)√(N/(2M)), the first-peak estimate for large n."""
    if n < 1 or m < 1:
        raise InvalidInputError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    return math.pi / 2 * math.sqrt((1 << n) / (2 * m))
