"""
Ribbon Geometry

Width of the armchair strip, support of the potential and the transverse
quantisation kappa_j = pi + pi*j/L shared by every other module.
"""

import math
from dataclasses import dataclass

from nanoribbon.errors import RibbonValidationError, UnsupportedGeometryError

# Tolerance for detecting integer 2L (coinciding |kappa_j| values)
DEGENERACY_TOL = 1e-9

ENERGY_UNIT_NOTE = "energies in units of 2t/sqrt(3), t the nearest-neighbour hopping (eV)"


@dataclass(frozen=True)
class RibbonGeometry:
    """Strip (0, L) x R with a potential supported in |x| <= R0."""

    L: float
    R0: float = 3.0
    energy_unit_note: str = ENERGY_UNIT_NOTE

    def __post_init__(self):
        if not (self.L > 0 and math.isfinite(self.L)):
            raise RibbonValidationError(f"Ribbon width must be positive, got L={self.L!r}")
        if not (self.R0 > 0 and math.isfinite(self.R0)):
            raise RibbonValidationError(f"Support half-width must be positive, got R0={self.R0!r}")
        two_l = 2.0 * self.L
        if abs(two_l - round(two_l)) < DEGENERACY_TOL:
            raise UnsupportedGeometryError(self.L, "thresholds would coincide")

    def kappa(self, j):
        """Transverse number for Fourier index j (scalar or array)."""
        return math.pi * (1.0 + j / self.L)

    @property
    def bloch_phase(self) -> complex:
        """Quasi-periodic phase picked up over one folded period 2L."""
        return complex(math.cos(2 * math.pi * self.L), math.sin(2 * math.pi * self.L))

    def to_ev(self, omega: float, hopping_ev: float = 2.7) -> float:
        """Convert a dimensionless energy to eV for hopping energy t."""
        return omega * 2.0 * hopping_ev / math.sqrt(3.0)

    def with_support(self, R0: float) -> "RibbonGeometry":
        return RibbonGeometry(L=self.L, R0=R0, energy_unit_note=self.energy_unit_note)
