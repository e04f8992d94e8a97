"""
Synthesis Index Set

Labels alpha = (j, tau, part) of the moment conditions that pin down the
first-order scattering entries s[(j, tau), (N, +)] of a designed potential.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List

from nanoribbon.errors import RibbonValidationError
from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.spectrum.thresholds import thresholds

logger = logging.getLogger(__name__)


class Part(str, Enum):
    RE = "Re"
    IM = "Im"

    def take(self, value):
        return value.real if self is Part.RE else value.imag


@dataclass(frozen=True)
class SynthesisIndex:
    j: int
    tau: int
    part: Part

    @property
    def name(self) -> str:
        return f"{self.j}{'+' if self.tau > 0 else '-'}{self.part.value}"

    def __str__(self) -> str:
        return self.name


@dataclass
class SynthesisIndexSet:
    """
    Moment conditions for threshold N.

    `entries` is the base set; `protected` are the entries whose
    condition holds by reflection symmetry for y-symmetric potentials, and
    `supplementary` the conditions added for even-parity channels missing
    from the base set. `active` are the rows that enter the linear solves.
    """

    N: int
    ind_S: List[int]
    entries: List[SynthesisIndex]
    protected: List[SynthesisIndex] = field(default_factory=list)
    supplementary: List[SynthesisIndex] = field(default_factory=list)

    @property
    def target(self) -> SynthesisIndex:
        return SynthesisIndex(self.N, 1, Part.RE)

    @property
    def cardinality(self) -> int:
        return len(self.entries)

    @property
    def all_entries(self) -> List[SynthesisIndex]:
        return self.entries + self.supplementary

    @property
    def active(self) -> List[SynthesisIndex]:
        return [a for a in self.all_entries if a not in self.protected]

    def names(self) -> List[str]:
        return [a.name for a in self.entries]

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "ind_S": self.ind_S,
            "entries": self.names(),
            "protected": [a.name for a in self.protected],
            "supplementary": [a.name for a in self.supplementary],
            "active": [a.name for a in self.active],
        }


def base_channels(N: int) -> List[int]:
    """{1, 3, ..., N-1} for even N and {2, 4, ..., N-2} for odd N."""
    return list(range(1, N, 2)) if N % 2 == 0 else list(range(2, N - 1, 2))


def _channel_entries(j: int) -> List[SynthesisIndex]:
    return [SynthesisIndex(j, tau, part) for tau in (1, -1) for part in (Part.RE, Part.IM)]


def synthesis_index_set(geom: RibbonGeometry, N: int) -> SynthesisIndexSet:
    """
    Index set for threshold N, with the protection and supplement analysis.

    Channel j couples to channel N through cos((kappa_N - kappa_j) y), which is
    odd about L/2 when the Fourier indices differ by an odd number.
    """
    if N < 2:
        raise RibbonValidationError(f"synthesis needs N >= 2, got {N}")
    ind_s = base_channels(N)
    entries: List[SynthesisIndex] = []
    for j in ind_s:
        entries.extend(_channel_entries(j))
    entries.extend(
        [SynthesisIndex(N, -1, Part.RE), SynthesisIndex(N, -1, Part.IM), SynthesisIndex(N, 1, Part.RE)]
    )

    table = thresholds(geom, N)
    m_N = table[N].j_index

    def odd(j: int) -> bool:
        return (m_N - table[j].j_index) % 2 == 1

    protected = [a for a in entries if a.j < N and odd(a.j)]
    supplementary: List[SynthesisIndex] = []
    for j in range(1, N):
        if j not in ind_s and not odd(j):
            supplementary.extend(_channel_entries(j))

    index_set = SynthesisIndexSet(N=N, ind_S=ind_s, entries=entries, protected=protected, supplementary=supplementary)
    counted = 2 * (N + 1) + 3 if N % 2 == 0 else 2 * (N - 1) + 3
    if counted != index_set.cardinality:
        logger.info(
            "index set for N=%d has %d entries; the equation count formula gives %d",
            N,
            index_set.cardinality,
            counted,
            extra={"N": N, "cardinality": index_set.cardinality, "formula": counted},
        )
    if protected:
        logger.info(
            "%d conditions hold by reflection symmetry: %s",
            len(protected),
            ", ".join(a.name for a in protected),
        )
    if supplementary:
        logger.warning(
            "even-parity channels missing from the index set added as constraints: %s",
            ", ".join(a.name for a in supplementary),
        )
    return index_set
