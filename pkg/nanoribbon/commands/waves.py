"""Sampled wave fields."""

import logging
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import Field

from nanoribbon.commands.output import GeometryOptions, parse_grid, parse_interval, write_csv
from nanoribbon.models import write_json
from nanoribbon.waves import WaveFamily, WaveLabel, bc_residual, dirac_residual, make_wave
from nanoribbon.waves.fields import COMPONENTS

logger = logging.getLogger(__name__)

RESIDUAL_WARNING = 1e-8

WAVE_COLUMNS = ("x", "y") + tuple(f"{part}_{c}" for c in COMPONENTS for part in ("Re", "Im"))


class WaveCommand(GeometryOptions):
    """Samples of one wave family on a rectangular grid, with its Dirac and boundary residuals."""

    family: WaveFamily = Field(default=WaveFamily.OSCILLATORY_NORMALIZED, description="wave family")
    j: int = Field(default=1, ge=1, description="mode index")
    tau: Literal["+", "-"] = Field(default="+", description="direction")
    omega: Optional[float] = Field(default=None, description="energy for oscillatory waves")
    N: Optional[int] = Field(default=None, ge=1, description="threshold index for threshold families")
    eps: Optional[float] = Field(default=None, description="distance below omega_N")
    grid: str = Field(default="64x32", description="<nx>x<ny> sample grid")
    x_range: str = Field(default="-2:2", description="x interval a:b")
    out: Optional[Path] = Field(default=None, description="CSV destination (default: standard output)")
    report: Optional[Path] = Field(default=None, description="JSON file for the residuals")

    def cli_cmd(self) -> None:
        geom = self.geometry()
        label = WaveLabel(self.family, self.j, 1 if self.tau == "+" else -1)
        w = make_wave(label, geom, omega=self.omega, N=self.N, eps=self.eps)
        nx, ny = parse_grid(self.grid)
        a, b = parse_interval(self.x_range)
        X, Y = np.meshgrid(np.linspace(a, b, nx), np.linspace(0.0, geom.L, ny), indexing="ij")
        x, y = X.ravel(), Y.ravel()
        values = w.evaluate(x, y)

        residuals = {"dirac": dirac_residual(w, x, y), "boundary": bc_residual(w, X[:, 0])}
        logger.info("%s: dirac residual %.3e, boundary residual %.3e", label, residuals["dirac"], residuals["boundary"])
        if max(residuals.values()) > RESIDUAL_WARNING:
            logger.warning("%s residuals above %.0e: %s", label, RESIDUAL_WARNING, residuals)

        def rows():
            for i in range(x.size):
                row = {"x": x[i], "y": y[i]}
                for c, name in enumerate(COMPONENTS):
                    row[f"Re_{name}"] = values[c, i].real
                    row[f"Im_{name}"] = values[c, i].imag
                yield row

        write_csv(rows(), WAVE_COLUMNS, self.out)
        if self.report is not None:
            write_json(self.report, {"wave": str(label), "omega": w.omega, "residuals": residuals})
