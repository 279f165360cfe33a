import logging
import sys
from argparse import Namespace
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from pydantic import ValidationError

from hypersearch.config import settings
from hypersearch.errors import InvalidInputError
from hypersearch.models.problem import MAX_DIMENSION
from hypersearch.models.run import RunConfig
from hypersearch.services.combinatorics_service import random_spec

logger = logging.getLogger(__name__)

CONFIG_KEYS = frozenset({
    "n", "solutions", "random_solutions", "mode",
    "theta_step", "refine_tol", "zero_sv_tol", "zero_sv_floor", "singular_exclusion",
    "t_max", "out", "format", "seed",
})
OPTION_KEYS = ("theta_step", "refine_tol", "zero_sv_tol", "zero_sv_floor", "singular_exclusion")

# 설정 파일 값을 덮어쓰는 CLI 플래그
FLAG_KEYS = ("n", "solutions", "random_solutions", "theta_step", "t_max", "out", "format", "zero_sv_tol", "seed")


def _format_errors(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "config"
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)


def _resolve_solutions(raw: dict[str, Any]) -> list[int]:
    solutions = raw.get("solutions")
    count = raw.get("random_solutions")
    if solutions is not None and count is not None:
        raise InvalidInputError("solutions and random_solutions are mutually exclusive")
    if solutions is not None:
        return solutions
    if count is None:
        raise InvalidInputError("solutions: field required (or give random_solutions)")

    n = raw.get("n")
    if not isinstance(n, int) or not 1 <= n <= MAX_DIMENSION:
        raise InvalidInputError(f"n: must be an integer in [1, {MAX_DIMENSION}], got {n!r}")
    if not isinstance(count, int):
        raise InvalidInputError(f"random_solutions: must be an integer, got {count!r}")
    seed = raw.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise InvalidInputError(f"seed: must be an integer, got {seed!r}")
    return list(random_spec(n, count, seed).solutions)


def config_from_mapping(raw: dict[str, Any]) -> RunConfig:
    """
    설정 딕셔너리를 RunConfig로 변환

    Args:
        raw: flat mapping with the documented config keys

    Returns:
        validated RunConfig

    Raises:
        InvalidInputError: unknown keys or any validation failure
    """
    unknown = sorted(set(raw) - CONFIG_KEYS)
    if unknown:
        raise InvalidInputError(f"unknown config keys: {', '.join(unknown)}")

    document: dict[str, Any] = {
        "spec": {"n": raw.get("n"), "solutions": _resolve_solutions(raw)},
        "options": {key: raw[key] for key in OPTION_KEYS if raw.get(key) is not None},
    }
    if raw.get("t_max") is not None:
        document["t_max"] = raw["t_max"]
        document["options"]["t_max"] = raw["t_max"]
    for key, field in (("mode", "mode"), ("out", "output"), ("format", "format"), ("seed", "seed")):
        if raw.get(key) is not None:
            document[field] = raw[key]
    document.setdefault("output", settings.RESULTS_DIR)

    try:
        return RunConfig.model_validate(document)
    except ValidationError as e:
        raise InvalidInputError(_format_errors(e)) from None


def load_toml(text: str, source: Path | None = None) -> dict[str, Any]:
    """TOML 문서를 딕셔너리로 읽고 오류는 InvalidInputError로 변환"""
    where = f" {source}" if source is not None else ""
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise InvalidInputError(f"malformed config{where}: {e}") from None


def read_config_file(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidInputError(f"cannot read config {path}: {e}") from None
    return load_toml(text, path)


def parse_config(text: str) -> RunConfig:
    """
    TOML 설정 파싱

    Args:
        text: UTF-8 TOML document

    Returns:
        validated RunConfig
    """
    return config_from_mapping(load_toml(text))


def _parse_solution_list(text: str) -> list[int]:
    try:
        return [int(item, 0) for item in text.split(",") if item.strip()]
    except ValueError:
        raise InvalidInputError(f"solutions: not a comma-separated integer list: {text!r}") from None


def build_config(args: Namespace) -> RunConfig:
    """
    Merge command-line flags over the optional --config file.

    Args:
        args: parsed command-line arguments (the subcommand sets `mode`)

    Returns:
        validated RunConfig
    """
    if getattr(args, "solutions", None) is not None and getattr(args, "random_solutions", None) is not None:
        raise InvalidInputError("--solutions and --random-solutions are mutually exclusive")

    raw: dict[str, Any] = {}
    if getattr(args, "config", None):
        raw = read_config_file(args.config)

    for key in FLAG_KEYS:
        value = getattr(args, key, None)
        if value is None:
            continue
        if key == "solutions":
            value = _parse_solution_list(value)
            raw.pop("random_solutions", None)
        elif key == "random_solutions":
            raw.pop("solutions", None)
        raw[key] = value
    raw["mode"] = args.mode

    config = config_from_mapping(raw)
    logger.debug(f"Run config: {config.model_dump(mode='json')}")
    return config
