import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

MAX_DIMENSION = 64


class ProblemSpec(BaseModel):
    """A search instance: hypercube dimension n and the M marked positions."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, le=MAX_DIMENSION)
    solutions: tuple[int, ...] = Field(min_length=1)

    @field_validator("solutions")
    @classmethod
    def _distinct_sorted(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if len(set(value)) != len(value):
            duplicates = sorted({p for p in value if value.count(p) > 1})
            raise ValueError(f"duplicate solution positions: {duplicates}")
        return tuple(sorted(value))

    @model_validator(mode="after")
    def _in_range(self) -> "ProblemSpec":
        out_of_range = [p for p in self.solutions if p < 0 or p >= self.N]
        if out_of_range:
            raise ValueError(f"solution positions {out_of_range} outside [0, {self.N - 1}] for n={self.n}")
        return self

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def Ne(self) -> int:
        return self.n * self.N

    @property
    def M(self) -> int:
        return len(self.solutions)


class WeightTable(BaseModel):
    """η(w_p, w_m) for one dimension, rows indexed by w_p and columns by w_m."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    eta: np.ndarray

    def value(self, w_p: int, w_m: int) -> int:
        return int(self.eta[w_p, w_m])
