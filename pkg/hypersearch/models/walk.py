import numpy as np
from pydantic import BaseModel, ConfigDict


class WalkState(BaseModel):
    """
    Walk amplitudes, flat index p*n + (d-1) for position p and direction d.

    Operators update `amplitudes` in place.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int
    amplitudes: np.ndarray

    @property
    def blocks(self) -> np.ndarray:
        """(N, n) view, one row per position."""
        return self.amplitudes.reshape(-1, self.n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "WalkState":
        return WalkState(n=self.n, amplitudes=self.amplitudes.copy())


class GeneratorSet(BaseModel):
    """Orthonormal generator matrices of the walk eigenspaces (dense, small n only)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    l1: np.ndarray
    l2: np.ndarray
    l3: np.ndarray
    # Fourier 영역의 L3' 블록
    l3_minus: np.ndarray
    l3_plus: np.ndarray
    l3_circ: np.ndarray

    @property
    def l123(self) -> np.ndarray:
        return np.hstack([self.l1, self.l2, self.l3])

    @property
    def l3_prime(self) -> np.ndarray:
        return np.hstack([self.l3_minus, self.l3_plus, self.l3_circ])
