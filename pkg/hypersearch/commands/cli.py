import argparse

from hypersearch import __version__
from hypersearch.errors import InvalidInputError
from hypersearch.models.run import OutputFormat, RunMode

COMMAND_HELP = {
    RunMode.SIMULATE: "direct simulation of the success curve",
    RunMode.SPECTRAL: "eigenphase table, spectral curve and bound",
    RunMode.COMPARE: "spectral and direct curves with their max difference",
    RunMode.BOUND: "upper bound on the success probability only",
}


class CommandParser(argparse.ArgumentParser):
    """Usage errors become InvalidInputError instead of exiting with status 2."""

    def error(self, message: str):
        raise InvalidInputError(f"{self.prog}: {message}")


def _common_options() -> argparse.ArgumentParser:
    common = CommandParser(add_help=False)
    common.add_argument("--config", help="TOML config file; flags override its values")
    common.add_argument("--n", type=int, help="hypercube dimension")
    common.add_argument("--solutions", help="comma-separated solution positions, e.g. 3,6")
    common.add_argument("--random-solutions", type=int, help="draw this many random solutions instead")
    common.add_argument("--seed", type=int, help="seed for --random-solutions")
    common.add_argument("--theta-step", help="scan grid step, number or literal such as pi/10000")
    common.add_argument("--zero-sv-tol", type=float, help="relative zero threshold for singular values")
    common.add_argument("--t-max", type=int, help="last iteration of the curve")
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], help="artifact format")
    return common


def build_parser() -> CommandParser:
    parser = CommandParser(prog="hypersearch", description="Success curves of quantum-walk search on the hypercube")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = _common_options()
    commands = parser.add_subparsers(dest="command", required=True, metavar="{simulate,spectral,compare,bound}")
    for mode, text in COMMAND_HELP.items():
        command = commands.add_parser(mode.value, parents=[common], help=text)
        command.set_defaults(mode=mode.value)
    return parser
