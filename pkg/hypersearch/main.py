import logging
import sys

from hypersearch.commands.cli import build_parser
from hypersearch.config import setup_logging
from hypersearch.errors import HypersearchError
from hypersearch.models.response_models import ResultEnvelope
from hypersearch.models.run import RunStatus
from hypersearch.services.artifact_service import record_envelope
from hypersearch.services.config_service import build_config
from hypersearch.services.run_service import run


def main(argv: list[str] | None = None) -> int:
    """
    CLI 진입점

    Prints the run envelope to stdout and returns the process exit code.
    """
    setup_logging()

    try:
        args = build_parser().parse_args(argv)
        record = run(build_config(args))
    except HypersearchError as exc:
        logging.error(f"Run failed ({int(exc.exit_code)}): {exc.detail}")
        envelope = ResultEnvelope(status=RunStatus.FAIL.value, errorCode=int(exc.exit_code), data=exc.detail)
        print(envelope.render())
        return int(exc.exit_code)

    print(record_envelope(record).render())
    return int(record.exit_code)


if __name__ == "__main__":
    sys.exit(main())
