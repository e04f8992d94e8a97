"""
Command Line

Root application: global flags, logging setup and one subcommand per
pipeline stage. Exit codes are 0 on success, 2 for rejected input and 3 for
numerical failures.
"""

import logging
import sys
from typing import Literal, Optional, Sequence

from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, CliApp, CliSubCommand, SettingsConfigDict, SettingsError

from nanoribbon import ARTIFACT_VERSION, __version__
from nanoribbon.commands import (
    BornCommand,
    DispersionCommand,
    QCheckCommand,
    SMatrixCommand,
    SynthesizeCommand,
    ThresholdsCommand,
    TrapScanCommand,
    VerifyIdentitiesCommand,
    WaveCommand,
)
from nanoribbon.config import configure_workers
from nanoribbon.errors import RibbonValidationError, SolverError

logger = logging.getLogger(__name__)

LOG_FORMAT = "time=%(asctime)s level=%(levelname)s logger=%(name)s msg=%(message)s"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3

USAGE = (
    "usage: nanoribbon [--threads N] [--log-level LEVEL] [--version] "
    "{thresholds,dispersion,wave,qcheck,born,smatrix,trapscan,synthesize,verify-identities} ...\n"
    "run 'nanoribbon <command> --help' for the options of a command"
)


def configure_logging(level: str = "WARNING") -> None:
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger("nanoribbon").setLevel(level)


def version_string() -> str:
    return f"nanoribbon {__version__} (artifact format {ARTIFACT_VERSION})"


class NanoribbonCLI(BaseSettings):
    """Spectral and scattering computations for an armchair graphene nanoribbon."""

    model_config = SettingsConfigDict(
        cli_prog_name="nanoribbon",
        cli_kebab_case=True,
        case_sensitive=True,
        cli_implicit_flags=True,
        cli_exit_on_error=False,
        extra="forbid",
    )

    threads: Optional[int] = Field(default=None, ge=1, description="cap on worker threads")
    version: bool = Field(default=False, description="print the library and artifact format versions")
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(default="WARNING", description="log level")

    thresholds: CliSubCommand[ThresholdsCommand]
    dispersion: CliSubCommand[DispersionCommand]
    wave: CliSubCommand[WaveCommand]
    qcheck: CliSubCommand[QCheckCommand]
    born: CliSubCommand[BornCommand]
    smatrix: CliSubCommand[SMatrixCommand]
    trapscan: CliSubCommand[TrapScanCommand]
    synthesize: CliSubCommand[SynthesizeCommand]
    verify_identities: CliSubCommand[VerifyIdentitiesCommand]

    @classmethod
    def settings_customise_sources(
        cls, settings_cls, init_settings, env_settings, dotenv_settings, file_secret_settings
    ):
        return (init_settings,)

    def cli_cmd(self) -> None:
        """Run the selected subcommand."""
        configure_logging(self.log_level)
        if self.version:
            sys.stdout.write(version_string() + "\n")
            return
        configure_workers(self.threads)
        CliApp.run_subcommand(self)


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse argv, run one subcommand and map failures to exit codes.

    Args:
        argv: arguments without the program name (default: sys.argv[1:])

    Returns:
        0 on success, 2 for invalid input, 3 for solver failures
    """
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        CliApp.run(NanoribbonCLI, cli_args=args)
    except (ValidationError, SettingsError, RibbonValidationError) as exc:
        sys.stderr.write(f"error: {exc}\n{USAGE}\n")
        return EXIT_VALIDATION
    except SolverError as exc:
        logger.error("solver failure: %s", exc.message)
        sys.stderr.write(f"solver failure: {exc.message}\n")
        return EXIT_SOLVER
    except SystemExit as exc:
        # --help exits cleanly; argparse usage errors exit with 2
        return EXIT_OK if exc.code in (None, 0) else EXIT_VALIDATION
    return EXIT_OK


def main() -> None:
    sys.exit(run_command())
