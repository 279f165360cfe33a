from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict


class CurveSource(str, Enum):
    """Enum for how a success curve was produced"""
    SPECTRAL = "spectral"
    DIRECT = "direct"


class SuccessCurve(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    probabilities: np.ndarray
    argmax_t: int
    max_p: float
    source: CurveSource
    # 분해가 불완전하면 True
    approximate: bool = False

    @property
    def t_max(self) -> int:
        return len(self.probabilities) - 1
