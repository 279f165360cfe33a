from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from hypersearch.models.problem import ProblemSpec
from hypersearch.models.scan import ScanOptions


class ComponentKind(str, Enum):
    """Enum for the case an eigenphase was obtained from"""
    REGULAR = "regular"
    MINUS_ONE = "minus_one"
    SINGULAR = "singular"


class DHatEntry(BaseModel):
    """D̂_φ(w), or a SINGULAR flag when its denominator vanishes."""

    model_config = ConfigDict(frozen=True)

    weight: int
    value: float | None = None
    singular: bool = False


class PhaseComponent(BaseModel):
    """
    One eigenphase of Q inside the effective subspace.

    s_comp and u_comp hold the coordinates of |s> and |u> in an orthonormal
    basis of the eigenspace; their order (index l) is the basis order.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    phi: float
    multiplicity: int = Field(ge=0)
    s_comp: np.ndarray
    u_comp: np.ndarray
    kind: ComponentKind = ComponentKind.REGULAR
    # singular_w(w)의 w
    weight: int | None = None

    def conjugate(self) -> "PhaseComponent":
        return self.model_copy(update={
            "phi": -self.phi,
            "s_comp": np.conj(self.s_comp),
            "u_comp": np.conj(self.u_comp),
        })

    @property
    def amplitude(self) -> complex:
        """<s|P_k|u>, independent of the eigenbasis choice."""
        return complex(np.sum(np.conj(self.s_comp) * self.u_comp))

    @property
    def s_weight(self) -> float:
        return float(np.sum(np.abs(self.s_comp) ** 2))

    @property
    def u_weight(self) -> float:
        return float(np.sum(np.abs(self.u_comp) ** 2))


class ScanCandidate(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    phi: float
    multiplicity: int
    kernel: np.ndarray
    criterion: float
    # 가장 가까운 특이점 weight와 그 점에서의 오프셋
    pole: int | None = None
    offset: float | None = None


class CriterionMinimum(BaseModel):
    """Refined local minimum of the criterion curve and its kernel dimension there."""

    model_config = ConfigDict(frozen=True)

    phi: float
    value: float
    index: int
    multiplicity: int

    @property
    def kept(self) -> bool:
        return self.multiplicity > 0


class ScanResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    candidates: list[ScanCandidate] = Field(default_factory=list)
    grid: np.ndarray = Field(default_factory=lambda: np.zeros(0))
    values: np.ndarray = Field(default_factory=lambda: np.zeros(0))
    criterion_minima: list[CriterionMinimum] = Field(default_factory=list)
    # 특이점에 붙어 분리되지 않은 영점 수
    unresolved: int = 0

    @property
    def grid_size(self) -> int:
        return len(self.grid)

    @property
    def minima(self) -> int:
        return len(self.criterion_minima)

    @property
    def discarded(self) -> int:
        return sum(1 for m in self.criterion_minima if not m.kept)


class SpectralDecomposition(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: ProblemSpec
    components: list[PhaseComponent]
    dim_E: int
    found: int
    expected: int
    options: ScanOptions
    complete: bool
    theta_step_used: float
    rescanned: bool = False
    minima: int = 0
    discarded: int = 0
    scan: ScanResult | None = None

    def nonzero_components(self, tol: float = 1e-10) -> list[PhaseComponent]:
        return [c for c in self.components if c.s_weight > tol * tol]

    def total_s_weight(self) -> float:
        return sum(c.s_weight for c in self.components)

    def total_u_weight(self) -> float:
        return sum(c.u_weight for c in self.components)
