"""Threshold and dispersion tables."""

import logging
from pathlib import Path
from typing import Optional

from pydantic import ConfigDict, Field

from nanoribbon.commands.output import GeometryOptions, parse_stepped, write_csv
from nanoribbon.spectrum import dispersion_curves, thresholds

logger = logging.getLogger(__name__)

THRESHOLD_COLUMNS = ("k", "omega", "kappa", "j")
DISPERSION_COLUMNS = ("j", "kappa_sign", "lambda", "omega")


class ThresholdsCommand(GeometryOptions):
    """Ordered energy thresholds omega_k = |kappa_j|."""

    count: int = Field(default=3, ge=1, description="number of thresholds")
    out: Optional[Path] = Field(default=None, description="CSV destination (default: standard output)")

    def cli_cmd(self) -> None:
        table = thresholds(self.geometry(), self.count)
        logger.info("d* = %.6f, eps0 = %.6f", table.d_star, table.eps0)
        write_csv((e.to_dict() for e in table.entries), THRESHOLD_COLUMNS, self.out)


class DispersionCommand(GeometryOptions):
    """Dispersion branches omega = +-sqrt(kappa_j^2 + lambda^2) of the free ribbon."""

    model_config = ConfigDict(populate_by_name=True)

    lambda_grid: str = Field(default="-3:3:0.05", alias="lambda", description="longitudinal numbers min:max:step")
    branches: int = Field(default=3, ge=1, description="number of transverse branches")
    out: Optional[Path] = Field(default=None, description="CSV destination (default: standard output)")

    def cli_cmd(self) -> None:
        rows = dispersion_curves(self.geometry(), parse_stepped(self.lambda_grid), self.branches)
        write_csv((r.to_dict() for r in rows), DISPERSION_COLUMNS, self.out)
