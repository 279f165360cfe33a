from typing import Any

from hypersearch.models.run import ExitCode


class HypersearchError(Exception):
    """Base error of the package. Carries the process exit code and a detail payload."""

    exit_code: ExitCode = ExitCode.INVALID_INPUT

    def __init__(self, detail: Any, exit_code: ExitCode | None = None):
        super().__init__(detail if isinstance(detail, str) else repr(detail))
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class InvalidInputError(HypersearchError):
    exit_code = ExitCode.INVALID_INPUT


class ResourceLimitError(HypersearchError):
    exit_code = ExitCode.RESOURCE_LIMIT


class IncompleteDecompositionError(HypersearchError):
    exit_code = ExitCode.INCOMPLETE


class SingularPhaseError(InvalidInputError):
    """D̂ has a pole at this angle; the weight tells which singular case applies."""

    def __init__(self, theta: float, weight: int):
        super().__init__(f"D_hat is singular at theta={theta!r} for weight {weight}")
        self.theta = theta
        self.weight = weight
