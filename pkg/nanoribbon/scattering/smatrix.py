"""
Scattering Matrix

Container for the (augmented) scattering matrix with its block split and the
structural checks: unitarity, the T1 relations and the T3 zero pattern.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from nanoribbon.models import ComplexMatrix, SMatrixArtifact
from nanoribbon.waves.basis import ChannelKey, key_name


@dataclass
class AugmentedScatteringMatrix:
    """
    Rows are incoming waves, columns outgoing waves, both ordered
    [(1,+), (1,-), ..., (N,+), (N,-)].

    With `augmented` set the last two indices are the exponential pair and
    the (dagger, dagger) block is the trailing 2x2 corner.
    """

    N: int
    entries: np.ndarray
    keys: List[ChannelKey]
    omega: float
    eps: float
    delta: float
    L: float
    parities: List[int] = field(default_factory=list)
    augmented: bool = True
    checks: Dict[str, float] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.keys)

    @property
    def labels(self) -> List[str]:
        return [key_name(k) for k in self.keys]

    def index(self, j: int, tau: int) -> int:
        return self.keys.index((j, tau))

    def entry(self, incoming: ChannelKey, outgoing: ChannelKey) -> complex:
        return complex(self.entries[self.keys.index(incoming), self.keys.index(outgoing)])

    @property
    def S_dd(self) -> np.ndarray:
        return self.entries[-2:, -2:]

    @property
    def S_pp(self) -> np.ndarray:
        return self.entries[:-2, :-2]

    @property
    def S_pd(self) -> np.ndarray:
        return self.entries[:-2, -2:]

    @property
    def S_dp(self) -> np.ndarray:
        return self.entries[-2:, :-2]

    def unitarity_defect(self) -> float:
        if self.size == 0:
            return 0.0
        product = self.entries @ self.entries.conj().T
        return float(np.max(np.abs(product - np.eye(self.size))))

    def t1_defect(self) -> float:
        """max |S[a, b] - S[flip b, flip a]| where flip reverses the direction."""
        if self.size == 0:
            return 0.0
        flip = [self.keys.index((j, -tau)) for j, tau in self.keys]
        mirrored = self.entries[np.ix_(flip, flip)].T
        return float(np.max(np.abs(self.entries - mirrored)))

    def t3_defect(self) -> float:
        """Largest entry coupling channels of opposite Fourier parity."""
        if not self.parities or self.size == 0:
            return 0.0
        par = np.array([self.parities[j - 1] for j, _ in self.keys])
        mask = par[:, None] != par[None, :]
        return float(np.max(np.abs(self.entries[mask]))) if mask.any() else 0.0

    def born_reduced(self) -> np.ndarray:
        """s = i (S - I) / delta, the first-order part (Born limit equals the overlap matrix)."""
        if self.delta == 0:
            raise ZeroDivisionError("reduced matrix needs delta != 0")
        return 1j * (self.entries - np.eye(self.size)) / self.delta

    def to_artifact(self, criterion: Optional[Dict[str, float]] = None) -> SMatrixArtifact:
        return SMatrixArtifact(
            L=self.L,
            N=self.N,
            eps=self.eps,
            omega=self.omega,
            delta=self.delta,
            augmented=self.augmented,
            labels=self.labels,
            S=ComplexMatrix.from_array(self.entries),
            checks=dict(self.checks),
            criterion=criterion,
        )

    def to_dict(self) -> dict:
        return self.to_artifact().model_dump()
