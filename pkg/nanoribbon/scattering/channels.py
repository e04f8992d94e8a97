"""
Solver Channels

Transverse channels of the folded cylinder kept by the solver, and the
closure columns that describe admissible behaviour at x = +X and x = -X.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.spectrum.thresholds import thresholds
from nanoribbon.waves.basis import WaveBasis
from nanoribbon.waves.families import evanescent_wave
from nanoribbon.waves.fields import ModalField


@dataclass
class ChannelSet:
    """
    The K channels with smallest |kappa|, in threshold order.

    Positions 0..M-1 carry the basis waves (j = 1..M); the rest are
    evanescent at the solve energy.
    """

    geom: RibbonGeometry
    basis: WaveBasis
    kappas: np.ndarray
    j_indices: np.ndarray

    @property
    def K(self) -> int:
        return len(self.kappas)

    @property
    def omega(self) -> float:
        return self.basis.omega

    @property
    def M(self) -> int:
        return self.basis.modes

    def vector(self, field: ModalField, x: float) -> np.ndarray:
        return field.coefficient_vector(x, self.kappas)

    def evanescent(self, position: int, direction: int, x_ref: float) -> ModalField:
        return evanescent_wave(self.geom, float(self.kappas[position]), self.omega, direction, x_ref)

    def closure(self, side: int, X: float) -> np.ndarray:
        """
        Columns spanning the admissible field at x = side * X.

        Right (side = +1): outgoing waves (j, +) then modes decaying to the right.
        Left (side = -1): outgoing waves (j, -) then modes decaying to the left.
        """
        x = side * X
        columns: List[np.ndarray] = []
        for j in range(1, self.M + 1):
            columns.append(self.vector(self.basis[(j, side)], x))
        for p in range(self.M, self.K):
            columns.append(self.vector(self.evanescent(p, side, x), x))
        return np.stack(columns, axis=1)

    def basis_matrix(self, x: float) -> np.ndarray:
        """Coefficient vectors of all basis waves at x, one column per key."""
        return np.stack([self.vector(self.basis[key], x) for key in self.basis.keys], axis=1)


def channel_set(geom: RibbonGeometry, basis: WaveBasis, K: int) -> ChannelSet:
    table = thresholds(geom, K)
    kappas = table.kappas
    if basis.modes and not np.allclose(kappas[: basis.modes], basis.kappas, atol=1e-12):
        raise ValueError("basis channels are not the leading threshold channels")
    return ChannelSet(geom=geom, basis=basis, kappas=kappas, j_indices=table.j_indices)
