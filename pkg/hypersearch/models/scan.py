import math
import re

from pydantic import BaseModel, ConfigDict, Field, field_validator

_PI_LITERAL = re.compile(r"^(?:(?P<num>[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)\s*\*\s*)?pi(?:\s*/\s*(?P<den>[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?))?$")


def parse_angle(value: str | float | int) -> float:
    """
    각도 리터럴 파싱

    Accepts plain numbers and the literals "pi", "pi/K", "K*pi" and "K*pi/L".

    Args:
        value: number or literal text

    Returns:
        angle in radians
    """
    if isinstance(value, bool):
        raise ValueError(f"not an angle: {value!r}")
    if isinstance(value, int | float):
        return float(value)

    text = value.strip().lower().replace(" ", "")
    match = _PI_LITERAL.match(text)
    if match:
        numerator = float(match.group("num")) if match.group("num") else 1.0
        denominator = float(match.group("den")) if match.group("den") else 1.0
        if denominator == 0:
            raise ValueError(f"zero denominator in angle literal {value!r}")
        return numerator * math.pi / denominator

    try:
        return float(text)
    except ValueError:
        raise ValueError(f"not an angle literal: {value!r}") from None


class ScanOptions(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    theta_step: float = Field(default=math.pi / 2000, gt=0, lt=math.pi / 4)
    refine_tol: float = Field(default=1e-12, gt=0)
    zero_sv_tol: float = Field(default=1e-8, gt=0)
    zero_sv_floor: float = Field(default=1e-12, ge=0)
    # None이면 2 * theta_step
    singular_exclusion: float | None = Field(default=None, gt=0)
    rank_tol: float = Field(default=1e-10, gt=0)
    max_iterations: int = Field(default=200, ge=1)
    rescan: bool = True
    t_max: int = Field(default=1000, ge=0)

    @field_validator("theta_step", "refine_tol", "singular_exclusion", mode="before")
    @classmethod
    def _angle_literal(cls, value):
        if value is None:
            return value
        return parse_angle(value)

    @property
    def exclusion(self) -> float:
        return self.singular_exclusion if self.singular_exclusion is not None else 2 * self.theta_step

    def halved(self) -> "ScanOptions":
        return self.model_copy(update={"theta_step": self.theta_step / 2})
