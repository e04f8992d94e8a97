"""
Trapped-Mode Criterion

A trapped mode at omega_N - eps exists exactly when S_dd + d(eps) Y is
degenerate, Y the antidiagonal 2x2 unit. The scan evaluates the criterion on
an eps grid, above the threshold falls back to the smallest singular value of
the global system, and refines every dip with a bounded 1-D minimisation.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from nanoribbon.config import SolverConfig, get_worker_limit
from nanoribbon.errors import RibbonValidationError
from nanoribbon.models import PotentialSpec
from nanoribbon.scattering.smatrix import AugmentedScatteringMatrix
from nanoribbon.scattering.solver import ScatteringSolution, ScatteringSolver
from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.spectrum.thresholds import NearThresholdData, near_threshold
from nanoribbon.waves.basis import basis_for

logger = logging.getLogger(__name__)

UPSILON = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
DETECTION_TOL = 1e-4


@dataclass
class CriterionValue:
    sigma_min: float
    det: complex
    d: complex

    def to_dict(self) -> dict:
        return {
            "sigma_min": self.sigma_min,
            "det_real": self.det.real,
            "det_imag": self.det.imag,
            "d_real": self.d.real,
            "d_imag": self.d.imag,
        }


def criterion_matrix(S_dd: np.ndarray, d: complex) -> np.ndarray:
    return np.asarray(S_dd, dtype=complex) + d * UPSILON


def trapped_criterion(S: AugmentedScatteringMatrix, ntd: NearThresholdData) -> CriterionValue:
    """Smallest singular value and determinant of S_dd + d Y."""
    if not S.augmented:
        raise RibbonValidationError("the trapped-mode criterion needs the augmented scattering matrix")
    M = criterion_matrix(S.S_dd, ntd.d)
    sigma = np.linalg.svd(M, compute_uv=False)
    return CriterionValue(sigma_min=float(sigma[-1]), det=complex(np.linalg.det(M)), d=ntd.d)


@dataclass
class TrappedModeProfile:
    """
    Combination sum_tau a_tau z_{N tau} of the two exponential-channel kernel
    solutions selected by the near-null vector of the criterion matrix.
    """

    coefficients: np.ndarray
    sigma_min: float
    decay_right: float
    decay_left: float
    x_nodes: np.ndarray
    amplitude: np.ndarray

    def to_dict(self) -> dict:
        return {
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
            "sigma_min": self.sigma_min,
            "decay_right": self.decay_right,
            "decay_left": self.decay_left,
        }


def trapped_mode_profile(solution: ScatteringSolution, ntd: NearThresholdData) -> TrappedModeProfile:
    S = solution.smatrix
    M = criterion_matrix(S.S_dd, ntd.d)
    U, sigma, _ = np.linalg.svd(M)
    pair = np.conj(U[:, -1])
    coefficients = np.zeros(S.size, dtype=complex)
    coefficients[S.index(S.N, 1)] = pair[0]
    coefficients[S.index(S.N, -1)] = pair[1]
    states = solution.combination(coefficients)
    amplitude = np.linalg.norm(states, axis=1)
    peak = float(np.max(amplitude)) if amplitude.size else 0.0
    decay_right = float(amplitude[-1] / peak) if peak > 0 else 0.0
    decay_left = float(amplitude[0] / peak) if peak > 0 else 0.0
    logger.info(
        "trapped-mode profile: sigma_min=%.3e, |z(X)|/max=%.3e, |z(-X)|/max=%.3e",
        sigma[-1],
        decay_right,
        decay_left,
    )
    return TrappedModeProfile(
        coefficients=coefficients,
        sigma_min=float(sigma[-1]),
        decay_right=decay_right,
        decay_left=decay_left,
        x_nodes=solution.x_nodes,
        amplitude=amplitude,
    )


@dataclass
class ScanRow:
    eps: float
    delta: float
    sigma_min: float
    applicable: bool
    detect: bool = False

    def to_dict(self) -> dict:
        return {"eps": self.eps, "delta": self.delta, "sigma_min": self.sigma_min, "detect": int(self.detect)}


@dataclass
class ScanDip:
    eps: float
    delta: float
    sigma_min: float
    applicable: bool

    def to_dict(self) -> dict:
        return {"eps": self.eps, "delta": self.delta, "sigma_min": self.sigma_min, "applicable": self.applicable}


@dataclass
class TrapScan:
    N: int
    rows: List[ScanRow] = field(default_factory=list)
    dips: List[ScanDip] = field(default_factory=list)
    detection_tol: float = DETECTION_TOL

    @property
    def detections(self) -> List[ScanDip]:
        return [d for d in self.dips if d.sigma_min < self.detection_tol]

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "detection_tol": self.detection_tol,
            "rows": [r.to_dict() for r in self.rows],
            "dips": [d.to_dict() for d in self.dips],
        }


DeltaRule = Callable[[float], float]


class _ScanPoint:
    """Evaluates one eps with its own solver (no shared state between threads)."""

    def __init__(self, potential, geom, N, config, delta_rule):
        self.potential = potential
        self.geom = geom
        self.N = N
        self.config = config
        self.delta_rule = delta_rule

    def delta(self, eps: float) -> float:
        return float(self.delta_rule(eps)) if self.delta_rule is not None else self.potential.delta

    def __call__(self, eps: float) -> ScanRow:
        delta = self.delta(eps)
        solver = ScatteringSolver(self.geom, self.potential.with_delta(delta), self.config)
        if eps > 0:
            ntd = near_threshold(self.geom, self.N, eps)
            value = trapped_criterion(solver.solve(self.N, eps).smatrix, ntd).sigma_min
            return ScanRow(eps=eps, delta=delta, sigma_min=value, applicable=True)
        ratio = solver.sigma_min_ratio(basis_for(self.geom, self.N, eps))
        return ScanRow(eps=eps, delta=delta, sigma_min=ratio, applicable=False)


def _local_minima(values: np.ndarray) -> List[int]:
    minima = []
    for i in range(len(values)):
        left = values[i - 1] if i > 0 else np.inf
        right = values[i + 1] if i + 1 < len(values) else np.inf
        if values[i] <= left and values[i] < right:
            minima.append(i)
    return minima


def trap_scan(
    potential: PotentialSpec,
    geom: RibbonGeometry,
    N: int,
    eps_grid: Sequence[float],
    delta_rule: Optional[DeltaRule] = None,
    config: Optional[SolverConfig] = None,
    detection_tol: float = DETECTION_TOL,
    refine: bool = True,
) -> TrapScan:
    """
    Criterion values over an eps grid.

    Args:
        potential: potential shape and default amplitude
        geom: ribbon geometry
        N: threshold index
        eps_grid: eps values; negative entries mean omega_N + |eps|
        delta_rule: amplitude as a function of eps (default: the potential's delta)
        config: solver discretisation
        detection_tol: dips below this value count as trapped modes
        refine: refine local minima between neighbouring grid points

    Returns:
        TrapScan with one row per grid point, in grid order, and the refined dips
    """
    grid = [float(e) for e in eps_grid]
    if any(e == 0.0 for e in grid):
        raise RibbonValidationError("eps = 0 is the threshold itself; leave it out of the grid")
    point = _ScanPoint(potential, geom, N, config if config is not None else SolverConfig(), delta_rule)
    with ThreadPoolExecutor(max_workers=get_worker_limit()) as executor:
        rows = list(executor.map(point, grid))

    scan = TrapScan(N=N, rows=rows, detection_tol=detection_tol)
    for applicable in (True, False):
        side = sorted((r for r in rows if r.applicable is applicable), key=lambda r: r.eps)
        if not side:
            continue
        values = np.array([r.sigma_min for r in side])
        for i in _local_minima(values):
            dip = ScanDip(eps=side[i].eps, delta=side[i].delta, sigma_min=side[i].sigma_min, applicable=applicable)
            if refine and 0 < i < len(side) - 1:
                dip = _refine_dip(point, side[i - 1].eps, side[i + 1].eps, dip)
            scan.dips.append(dip)
            if dip.sigma_min < detection_tol:
                side[i].detect = True
    logger.info(
        "trap scan N=%d: %d points, %d dips, %d detections",
        N,
        len(rows),
        len(scan.dips),
        len(scan.detections),
        extra={"N": N, "points": len(rows)},
    )
    return scan


def _refine_dip(point: _ScanPoint, lo: float, hi: float, dip: ScanDip) -> ScanDip:
    result = minimize_scalar(lambda e: point(e).sigma_min, bounds=(lo, hi), method="bounded", options={"xatol": 1e-9})
    if result.fun < dip.sigma_min:
        eps = float(result.x)
        return ScanDip(eps=eps, delta=point.delta(eps), sigma_min=float(result.fun), applicable=dip.applicable)
    return dip
