import csv
import json
import logging
import math
from pathlib import Path

from pydantic import ValidationError

from hypersearch.errors import InvalidInputError
from hypersearch.models.curve import SuccessCurve
from hypersearch.models.response_models import ResultEnvelope
from hypersearch.models.run import OutputFormat, RunRecord
from hypersearch.models.spectral import ScanResult, SpectralDecomposition

logger = logging.getLogger(__name__)

DIAGNOSTICS_FILE = "diagnostics.json"
NONZERO_TOL = 1e-10
PHASE_COLUMNS = ("phi", "multiplicity", "l", "abs_s", "re_u", "im_u")
CRITERION_COLUMNS = ("theta", "sigma_min", "minimum")


def _number(value: float) -> str:
    return format(value, ".10g")


def get_output_dir(output: Path) -> Path:
    """
    결과 디렉토리 경로 가져오기 (없으면 생성)

    Returns:
        디렉토리 경로
    """
    output.mkdir(parents=True, exist_ok=True)
    return output


def phase_rows(decomp: SpectralDecomposition, tol: float = NONZERO_TOL) -> list[dict]:
    """
    One row per basis vector l of each nonzero component, phases ascending in (-π, π].
    """
    rows = []
    for component in sorted(decomp.components, key=lambda c: c.phi):
        for l, (s, u) in enumerate(zip(component.s_comp, component.u_comp, strict=True)):
            if abs(s) <= tol:
                continue
            rows.append({
                "phi": component.phi,
                "multiplicity": component.multiplicity,
                "l": l,
                "abs_s": float(abs(s)),
                "re_u": float(u.real),
                "im_u": float(u.imag),
            })
    return rows


def write_curve(curve: SuccessCurve, output: Path, fmt: OutputFormat, name: str = "curve") -> Path:
    """
    곡선 저장 (columns t, p_t)

    Args:
        curve: success curve
        output: output directory
        fmt: csv or json
        name: file stem

    Returns:
        written file path
    """
    path = get_output_dir(output) / f"{name}.{fmt.value}"
    if fmt == OutputFormat.CSV:
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["t", "p_t"])
            for t, p in enumerate(curve.probabilities):
                writer.writerow([t, _number(p)])
    else:
        data = {
            "source": curve.source.value,
            "approximate": curve.approximate,
            "argmax_t": curve.argmax_t,
            "max_p": curve.max_p,
            "t": list(range(len(curve.probabilities))),
            "p_t": curve.probabilities.tolist(),
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, ensure_ascii=False)
    logger.debug(f"Wrote {path}")
    return path


def write_phases(decomp: SpectralDecomposition, output: Path, fmt: OutputFormat) -> Path:
    """Eigenphase table with columns phi, multiplicity, l, abs_s, re_u, im_u."""
    rows = phase_rows(decomp)
    path = get_output_dir(output) / f"phases.{fmt.value}"
    if fmt == OutputFormat.CSV:
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(PHASE_COLUMNS)
            for row in rows:
                writer.writerow([
                    _number(row["phi"]),
                    row["multiplicity"],
                    row["l"],
                    _number(row["abs_s"]),
                    _number(row["re_u"]),
                    _number(row["im_u"]),
                ])
    else:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(rows, f, indent=2, ensure_ascii=False)
    logger.debug(f"Wrote {path} ({len(rows)} rows)")
    return path


def write_criterion(scan: ScanResult, output: Path, fmt: OutputFormat) -> Path:
    """
    σ_min 곡선 저장 (columns theta, sigma_min, minimum)

    The minimum column is "kept" or "discarded" at the grid point each local
    minimum was bracketed from and empty elsewhere.
    """
    marks = {m.index: "kept" if m.kept else "discarded" for m in scan.criterion_minima}
    path = get_output_dir(output) / f"criterion.{fmt.value}"
    if fmt == OutputFormat.CSV:
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(CRITERION_COLUMNS)
            for j, (theta, value) in enumerate(zip(scan.grid, scan.values, strict=True)):
                writer.writerow([_number(theta), _number(value), marks.get(j, "")])
    else:
        data = {
            "theta": scan.grid.tolist(),
            "sigma_min": [finite_or_none(float(v)) for v in scan.values],
            "minima": [
                {"phi": m.phi, "sigma_min": m.value, "index": m.index, "multiplicity": m.multiplicity, "kept": m.kept}
                for m in scan.criterion_minima
            ],
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, ensure_ascii=False)
    logger.debug(f"Wrote {path} ({scan.grid_size} points, {scan.minima} minima)")
    return path


def record_envelope(record: RunRecord) -> ResultEnvelope:
    """RunRecord wrapped in the {status, errorCode, data} envelope."""
    return ResultEnvelope(
        status=record.status.value,
        errorCode="" if record.exit_code == 0 else int(record.exit_code),
        data=record.model_dump(mode="json"),
    )


def write_diagnostics(record: RunRecord, output: Path) -> Path:
    path = get_output_dir(output) / DIAGNOSTICS_FILE
    path.write_text(record_envelope(record).render(), encoding="utf-8")
    return path


def load_record(path: Path | str) -> RunRecord:
    """
    diagnostics.json 읽기

    Raises:
        InvalidInputError: unreadable file or a document that is not a RunRecord envelope
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInputError(f"cannot read diagnostics {path}: {e}") from None

    envelope = ResultEnvelope.wrap(document)
    try:
        return RunRecord.model_validate(envelope.data)
    except ValidationError as e:
        raise InvalidInputError(f"{path} is not a run record: {e.error_count()} errors") from None


def finite_or_none(value: float | None) -> float | None:
    if value is None or not math.isfinite(value):
        return None
    return value
