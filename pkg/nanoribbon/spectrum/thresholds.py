"""
Thresholds and Dispersion

Energy thresholds omega_k = |kappa_k|, propagating modes at a given energy,
near-threshold data (imaginary wavenumber, the unit number d, sigma) and the
analyticity strip around the real axis.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from nanoribbon.errors import EnergyRangeError, RibbonValidationError, ThresholdCollisionError
from nanoribbon.spectrum.geometry import RibbonGeometry

logger = logging.getLogger(__name__)

COLLISION_TOL = 1e-12
EPS0_FACTOR = (1.0 + math.sqrt(2.0)) / 2.0
EPS0_SPACING_FRACTION = 0.9


@dataclass(frozen=True)
class ThresholdEntry:
    k: int
    omega: float
    kappa: float
    j_index: int

    def to_dict(self) -> dict:
        return {"k": self.k, "omega": self.omega, "kappa": self.kappa, "j": self.j_index}


@dataclass
class ThresholdTable:
    """Ordered thresholds with the spacing bound d* and the window eps0."""

    geom: RibbonGeometry
    entries: List[ThresholdEntry]
    d_star: float
    eps0: float

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, k: int) -> ThresholdEntry:
        """Entry for threshold k (1-based, like the physics labels)."""
        if k < 1 or k > len(self.entries):
            raise IndexError(f"threshold index {k} outside 1..{len(self.entries)}")
        return self.entries[k - 1]

    @property
    def omegas(self) -> np.ndarray:
        return np.array([e.omega for e in self.entries])

    @property
    def kappas(self) -> np.ndarray:
        return np.array([e.kappa for e in self.entries])

    @property
    def j_indices(self) -> np.ndarray:
        return np.array([e.j_index for e in self.entries], dtype=int)

    def eps0_for(self, N: int) -> float:
        """Near-threshold window below omega_N that never reaches omega_{N-1}."""
        previous = self[N - 1].omega if N > 1 else 0.0
        return min(self.eps0, EPS0_SPACING_FRACTION * (self[N].omega - previous))

    def to_dict(self) -> dict:
        return {
            "L": self.geom.L,
            "d_star": self.d_star,
            "eps0": self.eps0,
            "entries": [e.to_dict() for e in self.entries],
        }


@dataclass(frozen=True)
class ModeSpec:
    """Propagating transverse mode at energy omega."""

    j: int
    kappa_j: float
    lambda_j: float
    omega: float
    j_index: int = 0

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "kappa": self.kappa_j,
            "lambda": self.lambda_j,
            "omega": self.omega,
            "j_index": self.j_index,
        }


@dataclass(frozen=True)
class NearThresholdData:
    """Quantities at omega_eps = omega_N - eps just below threshold N."""

    N: int
    eps: float
    omega_N: float
    kappa_N: float
    omega_eps: float
    lambda_eps: complex
    d: complex
    sigma: float
    delta_sin: float
    cal_N: float

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "eps": self.eps,
            "omega_N": self.omega_N,
            "kappa_N": self.kappa_N,
            "omega_eps": self.omega_eps,
            "lambda_eps": [self.lambda_eps.real, self.lambda_eps.imag],
            "d": [self.d.real, self.d.imag],
            "sigma": self.sigma,
            "delta_sin": self.delta_sin,
            "cal_N": self.cal_N,
        }


def spacing_bound(geom: RibbonGeometry) -> float:
    """d* = (pi/L) * distance from 2L to the nearest integer."""
    two_l = 2.0 * geom.L
    return math.pi / geom.L * abs(two_l - round(two_l))


def _nearest_indices(geom: RibbonGeometry, count: int) -> List[int]:
    # |kappa_j| = (pi/L)|j + L|: the smallest values sit around j = -L
    centre = -geom.L
    lo = math.floor(centre) - count - 2
    hi = math.ceil(centre) + count + 2
    candidates = sorted(range(lo, hi + 1), key=lambda j: abs(j + geom.L))
    return candidates[:count]


def thresholds(geom: RibbonGeometry, count: int) -> ThresholdTable:
    """
    First `count` thresholds of the ribbon.

    Args:
        geom: ribbon geometry (2L non-integer is guaranteed by construction)
        count: number of thresholds

    Returns:
        ThresholdTable with omega_k strictly increasing
    """
    if count < 1:
        raise RibbonValidationError(f"count must be >= 1, got {count}")
    entries = []
    for k, j in enumerate(_nearest_indices(geom, count), start=1):
        kappa = geom.kappa(j)
        entries.append(ThresholdEntry(k=k, omega=abs(kappa), kappa=kappa, j_index=j))
    d_star = spacing_bound(geom)
    return ThresholdTable(geom=geom, entries=entries, d_star=d_star, eps0=EPS0_FACTOR * d_star)


def threshold_count_below(geom: RibbonGeometry, omega: float) -> int:
    """Number of thresholds strictly below omega."""
    # |j + L| < omega L / pi
    radius = omega * geom.L / math.pi
    lo = math.ceil(-geom.L - radius)
    hi = math.floor(-geom.L + radius)
    return sum(1 for j in range(lo, hi + 1) if abs(j + geom.L) < radius)


def propagating_modes(geom: RibbonGeometry, omega: float) -> List[ModeSpec]:
    """
    All transverse modes with |kappa_j| < omega, in threshold order.

    Raises:
        ThresholdCollisionError: omega equals a threshold within 1e-12
    """
    if omega <= 0:
        raise RibbonValidationError(f"omega must be positive, got {omega!r}")
    count = threshold_count_below(geom, omega)
    table = thresholds(geom, count + 1)
    for entry in table.entries:
        if abs(entry.omega - omega) <= COLLISION_TOL * max(1.0, omega):
            raise ThresholdCollisionError(omega, entry.omega, entry.k)
    modes = []
    for entry in table.entries[:count]:
        lam = math.sqrt((omega - entry.omega) * (omega + entry.omega))
        modes.append(
            ModeSpec(j=entry.k, kappa_j=entry.kappa, lambda_j=lam, omega=omega, j_index=entry.j_index)
        )
    return modes


def near_threshold(
    geom: RibbonGeometry, N: int, eps: float, table: Optional[ThresholdTable] = None
) -> NearThresholdData:
    """
    Data at omega = omega_N - eps.

    lambda_eps = i sqrt(eps) sqrt(2 omega_N - eps) and d = (lambda + 1)/(lambda - 1),
    which equals -exp(i sigma) with sigma = 2 arctan(Im lambda_eps).
    """
    if N < 1:
        raise RibbonValidationError(f"threshold index must be >= 1, got {N}")
    table = table if table is not None and len(table) >= N else thresholds(geom, N)
    upper = table.eps0_for(N)
    if not (0.0 < eps <= upper):
        raise EnergyRangeError(eps, 0.0, upper, N)
    entry = table[N]
    omega_eps = entry.omega - eps
    imag = math.sqrt(eps) * math.sqrt(2.0 * entry.omega - eps)
    lam = complex(0.0, imag)
    d = (lam + 1.0) / (lam - 1.0)
    sigma = 2.0 * math.atan(imag)
    return NearThresholdData(
        N=N,
        eps=eps,
        omega_N=entry.omega,
        kappa_N=entry.kappa,
        omega_eps=omega_eps,
        lambda_eps=lam,
        d=d,
        sigma=sigma,
        delta_sin=math.sin(sigma),
        cal_N=2.0 * math.sqrt(geom.L / omega_eps),
    )


def strip_gamma(geom: RibbonGeometry, N: int, eps: float) -> float:
    """
    Half-width gamma_N of the strip |Im lambda| <= gamma_N holding exactly the
    2(N-1) real and the two imaginary wavenumbers at omega_N - eps.
    """
    table = thresholds(geom, N + 1)
    if eps < 0 or eps > table.eps0_for(N):
        raise EnergyRangeError(eps, 0.0, table.eps0_for(N), N)
    omega = table[N].omega - eps
    im_n = math.sqrt(eps) * math.sqrt(2.0 * table[N].omega - eps) if eps > 0 else 0.0
    im_next = math.sqrt((table[N + 1].omega - omega) * (table[N + 1].omega + omega))
    upper = im_next - im_n
    if upper <= im_n:
        raise EnergyRangeError(eps, 0.0, table.eps0_for(N), N)
    return 0.5 * (im_n + upper)


def wavenumbers(geom: RibbonGeometry, omega: float, j_range: Sequence[int]) -> np.ndarray:
    """All roots +-sqrt(omega^2 - kappa_j^2) (complex) for the given Fourier indices."""
    kappa = geom.kappa(np.asarray(j_range, dtype=float))
    root = np.sqrt((omega ** 2 - kappa ** 2).astype(complex))
    return np.concatenate([root, -root])


@dataclass
class DispersionRow:
    j_index: int
    kappa_sign: int
    lam: float
    omega: float

    def to_dict(self) -> Dict[str, float]:
        return {"j": self.j_index, "kappa_sign": self.kappa_sign, "lambda": self.lam, "omega": self.omega}


def dispersion_curves(
    geom: RibbonGeometry,
    lambda_grid: Sequence[float],
    branch_count: int,
    both_signs: bool = True,
) -> List[DispersionRow]:
    """Rows (j, sign kappa_j, lambda, omega = +-sqrt(kappa_j^2 + lambda^2)) per branch."""
    table = thresholds(geom, branch_count)
    grid = np.asarray(list(lambda_grid), dtype=float)
    if not np.all(np.isfinite(grid)):
        raise RibbonValidationError("lambda grid must be finite")
    rows = []
    signs = (1, -1) if both_signs else (1,)
    for entry in table.entries:
        sign_kappa = 1 if entry.kappa > 0 else -1
        energies = np.hypot(entry.kappa, grid)
        for s in signs:
            for lam, omega in zip(grid, energies):
                rows.append(DispersionRow(entry.j_index, sign_kappa, float(lam), float(s * omega)))
    return rows
