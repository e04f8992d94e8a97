"""
Born Approximation

First-order scattering: the overlap matrix B[a, b] = int P w_a . conj(w_b) of
the basis waves over the truncated potential support, with S = I - i delta B
+ O(delta^2).
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from nanoribbon.errors import QuadratureError
from nanoribbon.models import ComplexMatrix, PotentialSpec
from nanoribbon.quadrature import TensorGrid
from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.waves.basis import ChannelKey, WaveBasis, basis_for, key_name

logger = logging.getLogger(__name__)

QUADRATURE_TOL = 1e-8


@dataclass
class BornResult:
    """Overlap matrix with its quadrature diagnostics."""

    matrix: np.ndarray
    keys: List[ChannelKey]
    omega: float
    refinement_change: float
    grid_shape: tuple = field(default=(0, 0))

    @property
    def hermitian_defect(self) -> float:
        if self.matrix.size == 0:
            return 0.0
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def first_order_smatrix(self, delta: float) -> np.ndarray:
        return np.eye(len(self.keys)) - 1j * delta * self.matrix

    def to_dict(self) -> dict:
        return {
            "labels": [key_name(k) for k in self.keys],
            "omega": self.omega,
            "refinement_change": self.refinement_change,
            "hermitian_defect": self.hermitian_defect,
            "matrix": ComplexMatrix.from_array(self.matrix).model_dump(),
        }


def default_grid(potential: PotentialSpec) -> TensorGrid:
    (x0, x1), y_range = potential.support_box()
    panels_x = max(8, int(np.ceil((x1 - x0) * 4)))
    return TensorGrid((x0, x1), y_range, panels=(panels_x, 4), nodes_per_panel=16)


def overlap_matrix(basis: WaveBasis, potential: PotentialSpec, grid: TensorGrid) -> np.ndarray:
    """B[a, b] = int P w_a . conj(w_b) on the grid, P without the amplitude delta."""
    weighted = potential.evaluate(grid.X, grid.Y) * grid.W
    samples = np.stack([basis[key].evaluate(grid.X, grid.Y) for key in basis.keys])
    return np.einsum("aixy,bixy,xy->ab", samples, np.conj(samples), weighted)


def born_smatrix(
    potential: PotentialSpec,
    geom: RibbonGeometry,
    N: int,
    eps: float,
    grid: Optional[TensorGrid] = None,
    strict: bool = False,
    basis: Optional[WaveBasis] = None,
) -> BornResult:
    """
    First-order scattering matrix of the potential at omega_N - eps.

    Args:
        potential: potential shape; its delta is ignored
        geom: ribbon geometry
        N: threshold index
        eps: distance below omega_N (negative: above it, standard basis)
        grid: quadrature grid, default covers the truncated support
        strict: raise instead of logging when refinement changes the result
        basis: precomputed wave basis at the same energy

    Returns:
        BornResult whose matrix is Hermitian and independent of delta

    Raises:
        QuadratureError: strict mode and the doubled grid differs by more than 1e-8
    """
    basis = basis if basis is not None else basis_for(geom, N, eps)
    keys = list(basis.keys)
    if not potential.terms:
        return BornResult(np.zeros((len(keys), len(keys)), dtype=complex), keys, basis.omega, 0.0)

    grid = grid if grid is not None else default_grid(potential)
    coarse = overlap_matrix(basis, potential, grid)
    fine_grid = grid.refined()
    fine = overlap_matrix(basis, potential, fine_grid)
    change = float(np.max(np.abs(fine - coarse)))
    if change > QUADRATURE_TOL:
        if strict:
            raise QuadratureError(change, QUADRATURE_TOL)
        logger.warning(
            "Born quadrature changed by %.3e under refinement",
            change,
            extra={"N": N, "eps": eps, "change": change},
        )
    # symmetrise away the quadrature round-off
    matrix = 0.5 * (fine + fine.conj().T)
    logger.debug("Born matrix at omega=%.6f: norm %.3e", basis.omega, np.max(np.abs(matrix)))
    return BornResult(matrix, keys, basis.omega, change, fine_grid.X.shape)
