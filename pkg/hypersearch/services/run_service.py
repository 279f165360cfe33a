import logging
import time

from hypersearch.models.curve import SuccessCurve
from hypersearch.models.run import ExitCode, RunConfig, RunMode, RunRecord, RunStatus
from hypersearch.models.spectral import SpectralDecomposition
from hypersearch.services.artifact_service import (
    finite_or_none,
    write_criterion,
    write_curve,
    write_diagnostics,
    write_phases,
)
from hypersearch.services.curve_service import compare_curves, optimal_iteration, probability_curve, upper_bound
from hypersearch.services.simulator_service import simulate_curve
from hypersearch.services.spectral_service import decompose

logger = logging.getLogger(__name__)


def _spectral(config: RunConfig) -> tuple[SpectralDecomposition, SuccessCurve | None]:
    decomp = decompose(config.spec, config.options)
    if config.mode == RunMode.BOUND:
        return decomp, None
    return decomp, probability_curve(decomp, config.t_max)


def run(config: RunConfig) -> RunRecord:
    """
    실행 파이프라인

    simulate writes the direct curve. spectral writes the phase table, the σ_min
    curve, the success curve and the bound; compare writes both curves and their
    max difference; bound only reports the bound. diagnostics.json is written in every mode.

    Args:
        config: validated run configuration

    Returns:
        RunRecord (status INCOMPLETE and exit code 2 when components are missing)

    Raises:
        HypersearchError: invalid input or resource caps, before any artifact is written
    """
    started = time.perf_counter()
    output, fmt = config.output, config.format
    artifacts = []
    fields: dict = {}
    complete = True

    logger.info(f"Run {config.mode.value}: n={config.spec.n} M={config.spec.M} t_max={config.t_max}")

    if config.mode == RunMode.SIMULATE:
        curve = simulate_curve(config.spec, config.t_max)
        artifacts.append(write_curve(curve, output, fmt))
        fields.update(max_p=curve.max_p, argmax_t=curve.argmax_t)
    else:
        decomp, curve = _spectral(config)
        complete = decomp.complete
        fields.update(
            dim_E=decomp.dim_E,
            found=decomp.found,
            expected=decomp.expected,
            theta_step_used=decomp.theta_step_used,
            rescanned=decomp.rescanned,
            minima=decomp.minima,
            discarded=decomp.discarded,
            bound=finite_or_none(upper_bound(decomp)),
        )

        if config.mode == RunMode.SPECTRAL:
            artifacts.append(write_phases(decomp, output, fmt))
            artifacts.append(write_criterion(decomp.scan, output, fmt))
            artifacts.append(write_curve(curve, output, fmt))
        elif config.mode == RunMode.COMPARE:
            direct = simulate_curve(config.spec, config.t_max)
            artifacts.append(write_curve(curve, output, fmt, "curve_spectral"))
            artifacts.append(write_curve(direct, output, fmt, "curve_direct"))
            fields["max_abs_diff"] = compare_curves(curve, direct)
            logger.info(f"Spectral vs direct: max |dp| = {fields['max_abs_diff']:.3e}")

        if curve is not None:
            t_star, p_star = optimal_iteration(curve)
            fields.update(max_p=p_star, argmax_t=t_star)

    status, exit_code = (RunStatus.SUCCESS, ExitCode.OK) if complete else (RunStatus.INCOMPLETE, ExitCode.INCOMPLETE)
    record = RunRecord(
        config=config,
        status=status,
        exit_code=exit_code,
        wall_time=time.perf_counter() - started,
        artifacts=[str(path) for path in artifacts],
        **fields,
    )
    write_diagnostics(record, output)

    if complete:
        logger.info(f"Run finished in {record.wall_time:.2f}s ({len(artifacts)} artifacts)")
    else:
        logger.warning(f"Run finished with an incomplete decomposition ({record.found}/{record.expected})")
    return record
