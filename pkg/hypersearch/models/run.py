from enum import Enum, IntEnum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field

from hypersearch.models.problem import ProblemSpec
from hypersearch.models.scan import ScanOptions


class RunMode(str, Enum):
    """Enum for CLI pipelines"""
    SIMULATE = "simulate"
    SPECTRAL = "spectral"
    COMPARE = "compare"
    BOUND = "bound"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class RunStatus(str, Enum):
    SUCCESS = "SUCCESS"
    INCOMPLETE = "INCOMPLETE"
    FAIL = "FAIL"


class ExitCode(IntEnum):
    OK = 0
    INCOMPLETE = 2
    INVALID_INPUT = 3
    RESOURCE_LIMIT = 4


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    spec: ProblemSpec
    mode: RunMode = RunMode.SPECTRAL
    options: ScanOptions = Field(default_factory=ScanOptions)
    t_max: int = Field(default=1000, ge=0)
    output: Path = Path("results")
    format: OutputFormat = OutputFormat.CSV
    seed: int | None = None


class RunRecord(BaseModel):
    """Diagnostics of one run; this is the `data` of the JSON envelope."""

    model_config = ConfigDict(frozen=True)

    config: RunConfig
    status: RunStatus
    exit_code: ExitCode
    dim_E: int | None = None
    found: int | None = None
    expected: int | None = None
    theta_step_used: float | None = None
    rescanned: bool = False
    minima: int | None = None
    discarded: int | None = None
    bound: float | None = None
    max_p: float | None = None
    argmax_t: int | None = None
    max_abs_diff: float | None = None
    wall_time: float = 0.0
    artifacts: list[str] = Field(default_factory=list)
