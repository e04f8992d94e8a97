"""
Wave Basis

Normalised waves indexed by (j, tau) that label the rows and columns of a
scattering matrix: oscillatory waves for j < N plus the exponential pair at
j = N just below threshold N, or oscillatory waves only above it.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from nanoribbon.errors import EnergyRangeError, RibbonValidationError
from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.spectrum.thresholds import (
    NearThresholdData,
    near_threshold,
    propagating_modes,
    thresholds,
)
from nanoribbon.waves.families import normalized_exponential, oscillatory_wave
from nanoribbon.waves.fields import ModalField

logger = logging.getLogger(__name__)

ChannelKey = Tuple[int, int]


def key_name(key: ChannelKey) -> str:
    j, tau = key
    return f"{j}{'+' if tau > 0 else '-'}"


@dataclass
class WaveBasis:
    """
    Ordered basis [(1,+), (1,-), ..., (M,+), (M,-)].

    `exponential` is set when (M, +-) is the normalised exponential pair.
    """

    geom: RibbonGeometry
    omega: float
    keys: List[ChannelKey]
    waves: Dict[ChannelKey, ModalField]
    kappas: np.ndarray
    lambdas: np.ndarray
    j_indices: np.ndarray
    exponential: bool = False
    ntd: Optional[NearThresholdData] = None

    @property
    def size(self) -> int:
        return len(self.keys)

    @property
    def modes(self) -> int:
        return len(self.kappas)

    def __getitem__(self, key: ChannelKey) -> ModalField:
        return self.waves[key]

    def index(self, j: int, tau: int) -> int:
        return self.keys.index((j, tau))

    def flipped(self, position: int) -> int:
        j, tau = self.keys[position]
        return self.index(j, -tau)

    def names(self) -> List[str]:
        return [key_name(k) for k in self.keys]

    def parity(self, j: int) -> int:
        """Fourier-index parity of channel j."""
        return int(self.j_indices[j - 1]) % 2


def _oscillatory_block(geom: RibbonGeometry, omega: float):
    keys, waves, kappas, lambdas, indices = [], {}, [], [], []
    for mode in propagating_modes(geom, omega):
        for tau in (1, -1):
            keys.append((mode.j, tau))
            waves[(mode.j, tau)] = oscillatory_wave(
                geom, mode.kappa_j, mode.lambda_j, omega, tau, normalized=True, j=mode.j
            )
        kappas.append(mode.kappa_j)
        lambdas.append(mode.lambda_j)
        indices.append(mode.j_index)
    return keys, waves, kappas, lambdas, indices


def augmented_basis(geom: RibbonGeometry, N: int, eps: float) -> WaveBasis:
    """Oscillatory waves j < N and the exponential pair j = N at omega_N - eps."""
    ntd = near_threshold(geom, N, eps)
    keys, waves, kappas, lambdas, indices = _oscillatory_block(geom, ntd.omega_eps)
    if len(kappas) != N - 1:
        raise RibbonValidationError(
            f"expected {N - 1} propagating modes below threshold {N}, found {len(kappas)}"
        )
    for tau in (1, -1):
        keys.append((N, tau))
        waves[(N, tau)] = normalized_exponential(geom, ntd, tau)
    kappas.append(ntd.kappa_N)
    lambdas.append(ntd.lambda_eps)
    indices.append(thresholds(geom, N)[N].j_index)
    return WaveBasis(
        geom=geom,
        omega=ntd.omega_eps,
        keys=keys,
        waves=waves,
        kappas=np.array(kappas, dtype=float),
        lambdas=np.array(lambdas, dtype=complex),
        j_indices=np.array(indices, dtype=int),
        exponential=True,
        ntd=ntd,
    )


def standard_basis(geom: RibbonGeometry, omega: float) -> WaveBasis:
    """All propagating waves at omega (no threshold nearby)."""
    keys, waves, kappas, lambdas, indices = _oscillatory_block(geom, omega)
    return WaveBasis(
        geom=geom,
        omega=omega,
        keys=keys,
        waves=waves,
        kappas=np.array(kappas, dtype=float),
        lambdas=np.array(lambdas, dtype=complex),
        j_indices=np.array(indices, dtype=int),
    )


def basis_for(geom: RibbonGeometry, N: int, eps: float) -> WaveBasis:
    """
    Basis at omega = omega_N - eps.

    eps > 0 gives the augmented basis; eps < 0 means omega = omega_N + |eps|
    with N real modes, which must stay below omega_{N+1}.
    """
    if eps > 0:
        return augmented_basis(geom, N, eps)
    table = thresholds(geom, N + 1)
    omega = table[N].omega - eps
    if eps == 0 or omega >= table[N + 1].omega:
        raise EnergyRangeError(eps, -(table[N + 1].omega - table[N].omega), table.eps0_for(N), N)
    return standard_basis(geom, omega)
