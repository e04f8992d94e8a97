"""
Identity Checks

q-form tables and the verification suite: the integration-by-parts norm
identity on random mode sums, biorthogonality, the energy-flux direction of
propagating waves and the T1/T3 relations of the normalised waves.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import Field, model_validator

from nanoribbon.commands.output import GeometryOptions, emit_json
from nanoribbon.errors import IdentityCheckError
from nanoribbon.quadrature import TensorGrid
from nanoribbon.spectrum import RibbonGeometry, thresholds
from nanoribbon.symplectic import DEFAULT_NQUAD, biorthogonality_table, energy_flux
from nanoribbon.waves import WaveBasis, gaussian_mode_sum, norm_identity_gap, standard_basis, t1, t3

logger = logging.getLogger(__name__)

NORM_IDENTITY_TOL = 1e-6
TABLE_TOL = 1e-9
SYMMETRY_TOL = 1e-10
ENVELOPE_REACH = 8.0


class QCheckCommand(GeometryOptions):
    """Biorthogonality table of the wave basis at one energy."""

    omega: Optional[float] = Field(default=None, description="energy away from thresholds")
    N: Optional[int] = Field(default=None, ge=1, description="threshold index")
    eps: Optional[float] = Field(default=None, gt=0, description="distance below omega_N")
    n_quad: int = Field(default=DEFAULT_NQUAD, ge=8, description="Gauss-Legendre nodes across the ribbon")
    out: Optional[Path] = Field(default=None, description="JSON destination (default: standard output)")

    @model_validator(mode="after")
    def _one_energy(self) -> "QCheckCommand":
        if self.omega is None and (self.N is None or self.eps is None):
            raise ValueError("give --omega, or --N together with --eps")
        return self

    def cli_cmd(self) -> None:
        report = biorthogonality_table(self.geometry(), omega=self.omega, N=self.N, eps=self.eps, n_quad=self.n_quad)
        logger.info("q-table max deviation %.3e", report.max_deviation)
        emit_json(report.to_dict(), self.out)


@dataclass
class CheckOutcome:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value < self.tol)

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tol": self.tol, "passed": self.passed}


@dataclass
class IdentityReport:
    L: float
    checks: List[CheckOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"L": self.L, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def norm_identity_checks(
    geom: RibbonGeometry, fields: int, modes: int, panels: int, nodes_per_panel: int, seed: int
) -> List[CheckOutcome]:
    """Relative norm-identity gap on random Gaussian-enveloped mode sums."""
    rng = np.random.default_rng(seed)
    j_indices = thresholds(geom, modes).j_indices
    box = (-ENVELOPE_REACH, ENVELOPE_REACH)
    grid = TensorGrid(box, (0.0, geom.L), panels=(panels, panels), nodes_per_panel=nodes_per_panel)
    outcomes = []
    for i in range(fields):
        a = rng.normal(size=modes) + 1j * rng.normal(size=modes)
        b = rng.normal(size=modes) + 1j * rng.normal(size=modes)
        w = gaussian_mode_sum(geom, j_indices, a, b, center=0.0, width=1.0)
        result = norm_identity_gap(w, box, grid)
        outcomes.append(
            CheckOutcome(f"norm identity field {i}", abs(result.gap) / max(result.lhs, 1.0), NORM_IDENTITY_TOL)
        )
    return outcomes


def flux_checks(basis: WaveBasis) -> List[CheckOutcome]:
    """Propagating waves transport energy in the direction of tau."""
    outcomes = []
    for key in basis.keys:
        flux = energy_flux(basis[key])
        wrong = 0.0 if np.sign(flux) == key[1] else abs(flux) + 1.0
        outcomes.append(CheckOutcome(f"flux direction w{key[0]}{'+' if key[1] > 0 else '-'}", wrong, 0.5))
    return outcomes


def symmetry_checks(basis: WaveBasis) -> List[CheckOutcome]:
    """T1 w_j^tau = i w_j^-tau and T3 w_j^tau = e^{i kappa_j L} w_j^-tau at sample points."""
    geom = basis.geom
    x, y = np.meshgrid(np.linspace(-2.0, 2.0, 9), np.linspace(0.0, geom.L, 7), indexing="ij")
    x, y = x.ravel(), y.ravel()
    t1_gap = 0.0
    t3_gap = 0.0
    for j, tau in basis.keys:
        w = basis[(j, tau)]
        partner = basis[(j, -tau)].evaluate(x, y)
        phase = np.exp(1j * basis.kappas[j - 1] * geom.L)
        t1_gap = max(t1_gap, float(np.max(np.abs(t1(w).evaluate(x, y) - 1j * partner))))
        t3_gap = max(t3_gap, float(np.max(np.abs(t3(w).evaluate(x, y) - phase * partner))))
    return [CheckOutcome("T1 relation", t1_gap, SYMMETRY_TOL), CheckOutcome("T3 relation", t3_gap, SYMMETRY_TOL)]


class VerifyIdentitiesCommand(GeometryOptions):
    """Run the identity suite and write a pass/fail report."""

    omega: Optional[float] = Field(default=None, description="energy for the propagating checks (default: between omega_1 and omega_2)")
    N: int = Field(default=2, ge=1, description="threshold index of the near-threshold table")
    eps: float = Field(default=0.01, gt=0, description="distance below omega_N")
    fields: int = Field(default=10, ge=1, description="random mode sums for the norm identity")
    modes: int = Field(default=6, ge=1, description="transverse modes per random field")
    panels: int = Field(default=16, ge=1, description="quadrature panels per direction")
    nodes_per_panel: int = Field(default=16, ge=2, description="Gauss-Legendre order per panel")
    seed: int = Field(default=0, description="seed of the random coefficients")
    out: Optional[Path] = Field(default=None, description="JSON report (default: standard output)")

    def cli_cmd(self) -> None:
        geom = self.geometry()
        table = thresholds(geom, 2)
        omega = self.omega if self.omega is not None else 0.5 * (table[1].omega + table[2].omega)
        report = IdentityReport(L=geom.L)
        report.checks.extend(
            norm_identity_checks(geom, self.fields, self.modes, self.panels, self.nodes_per_panel, self.seed)
        )

        standard = biorthogonality_table(geom, omega=omega)
        report.checks.append(CheckOutcome("biorthogonality", standard.max_deviation, TABLE_TOL))
        report.checks.append(CheckOutcome("q section independence", standard.section_deviation, TABLE_TOL))
        near = biorthogonality_table(geom, N=self.N, eps=self.eps)
        report.checks.append(CheckOutcome(f"biorthogonality N={self.N}", near.max_deviation, TABLE_TOL))

        basis = standard_basis(geom, omega)
        report.checks.extend(flux_checks(basis))
        report.checks.extend(symmetry_checks(basis))

        for check in report.checks:
            logger.info("%s: %.3e (tol %.0e)", check.name, check.value, check.tol)
        emit_json(report.to_dict(), self.out)
        if not report.passed:
            raise IdentityCheckError(report.failed)
