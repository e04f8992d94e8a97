"""Inverse design of a trapping potential."""

import logging
from pathlib import Path
from typing import Optional

from pydantic import Field

from nanoribbon.commands.output import GeometryOptions, emit_json
from nanoribbon.config import SolverConfig, SynthesisConfig, get_run_config
from nanoribbon.synthesis import synthesize

logger = logging.getLogger(__name__)


class SynthesizeCommand(GeometryOptions):
    """Potential with a trapped mode at omega_N - eps, plus the design report."""

    N: int = Field(ge=2, description="threshold index")
    eps: float = Field(gt=0, description="distance below omega_N")
    bumps: Optional[int] = Field(default=None, ge=1, description="bump basis size (default: twice the index set)")
    config: Optional[Path] = Field(default=None, description="run configuration for solver and synthesis settings")
    out: Path = Field(description="potential JSON destination")
    report: Optional[Path] = Field(default=None, description="design report JSON")

    def cli_cmd(self) -> None:
        solver_config = SolverConfig()
        synthesis_config = SynthesisConfig()
        if self.config is not None:
            run = get_run_config(str(self.config.resolve()))
            solver_config, synthesis_config = run.solver, run.synthesis
        if self.bumps is not None:
            synthesis_config = synthesis_config.model_copy(update={"bumps": self.bumps})

        result = synthesize(self.geometry(), self.N, self.eps, synthesis_config, solver_config)
        self.out.parent.mkdir(parents=True, exist_ok=True)
        self.out.write_text(result.potential.to_json())
        logger.info("potential written to %s (delta=%.6e)", self.out, result.potential.delta)
        if self.report is not None:
            emit_json(result.to_artifact(), self.report)
