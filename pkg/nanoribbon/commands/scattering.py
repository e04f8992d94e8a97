"""
Scattering Commands

Born matrix, full scattering matrix and trapped-mode scans for a potential
described by a run configuration (or a bare potential file).
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel, Field

from nanoribbon.commands.output import emit_json, parse_steps, write_csv
from nanoribbon.config import RunConfig, get_run_config
from nanoribbon.errors import ConfigurationError
from nanoribbon.models import PotentialSpec, write_json
from nanoribbon.quadrature import TensorGrid
from nanoribbon.scattering import ScatteringSolver, born_smatrix, trap_scan, trapped_criterion
from nanoribbon.scattering.born import default_grid
from nanoribbon.spectrum import RibbonGeometry, near_threshold

logger = logging.getLogger(__name__)

SCAN_COLUMNS = ("eps", "delta", "sigma_min", "detect")


class ConfigOptions(BaseModel):
    """Run configuration with optional overrides of the energy."""

    config: Path = Field(description="run configuration or potential JSON")
    N: Optional[int] = Field(default=None, ge=1, description="threshold index (overrides the config)")
    eps: Optional[float] = Field(default=None, description="distance below omega_N (overrides the config)")

    def load(self) -> Tuple[RunConfig, RibbonGeometry, PotentialSpec]:
        run = get_run_config(str(self.config.resolve()))
        return run, run.geometry.build(), run.load_potential()

    def threshold(self, run: RunConfig) -> int:
        N = self.N if self.N is not None else (run.regime.N if run.regime is not None else None)
        if N is None:
            raise ConfigurationError("no threshold index: give --N or set regime.N in the config")
        return N

    def energy(self, run: RunConfig) -> Tuple[Optional[int], Optional[float], Optional[float]]:
        """(N, eps, omega) with command-line values taking precedence."""
        regime = run.regime
        N = self.N if self.N is not None else (regime.N if regime is not None else None)
        eps = self.eps if self.eps is not None else (regime.eps if regime is not None else None)
        omega = regime.omega if regime is not None and (N is None or eps is None) else None
        if omega is None and (N is None or eps is None):
            raise ConfigurationError("no energy: give --N and --eps or set regime in the config")
        return N, eps, omega


class BornCommand(ConfigOptions):
    """First-order (Born) scattering matrix B with S = I - i delta B + O(delta^2)."""

    strict: bool = Field(default=False, description="fail when the quadrature refinement check fails")
    out: Optional[Path] = Field(default=None, description="JSON destination (default: standard output)")

    def cli_cmd(self) -> None:
        run, geom, potential = self.load()
        N, eps, omega = self.energy(run)
        if omega is not None:
            raise ConfigurationError("the Born matrix is evaluated near a threshold: give N and eps")
        quadrature = run.quadrature
        grid = None
        if potential.terms:
            base = default_grid(potential)
            grid = TensorGrid(
                base.x_range,
                base.y_range,
                panels=(max(base.panels[0], quadrature.panels[0]), quadrature.panels[1]),
                nodes_per_panel=quadrature.nodes_per_panel,
            )
        result = born_smatrix(potential, geom, N, eps, grid=grid, strict=self.strict)
        payload = result.to_dict()
        payload.update({"L": geom.L, "N": N, "eps": eps})
        emit_json(payload, self.out)


class SMatrixCommand(ConfigOptions):
    """Augmented (or, above threshold, standard) scattering matrix with its checks."""

    out: Optional[Path] = Field(default=None, description="JSON destination (default: standard output)")

    def cli_cmd(self) -> None:
        run, geom, potential = self.load()
        N, eps, omega = self.energy(run)
        solver = ScatteringSolver(geom, potential, run.solver)
        if omega is not None:
            S = solver.solve_omega(omega).smatrix
            criterion = None
        else:
            S = solver.solve(N, eps).smatrix
            criterion = trapped_criterion(S, near_threshold(geom, N, eps)).to_dict() if S.augmented else None
        logger.info("S-matrix of size %d, unitarity defect %.3e", S.size, S.unitarity_defect())
        emit_json(S.to_artifact(criterion), self.out)


class TrapScanCommand(ConfigOptions):
    """Trapped-mode criterion over a grid of eps below (eps > 0) or above (eps < 0) omega_N."""

    eps: str = Field(description="eps grid min:max:steps")
    refine: bool = Field(default=True, description="refine local minima of the criterion")
    out: Optional[Path] = Field(default=None, description="CSV destination (default: standard output)")
    dips: Optional[Path] = Field(default=None, description="JSON file for the refined dips")

    def cli_cmd(self) -> None:
        run, geom, potential = self.load()
        N = self.threshold(run)
        scan = trap_scan(
            potential,
            geom,
            N,
            parse_steps(self.eps),
            config=run.solver,
            detection_tol=run.synthesis.detection_tol,
            refine=self.refine,
        )
        write_csv((r.to_dict() for r in scan.rows), SCAN_COLUMNS, self.out)
        if self.dips is not None:
            write_json(self.dips, scan.to_dict())
