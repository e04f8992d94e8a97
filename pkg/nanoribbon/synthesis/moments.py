"""
Moment Fields and Solves

The real fields upsilon_alpha whose integrals against a potential give its
first-order scattering entries, the Gaussian bump basis, and the least-norm
solves for the potentials Phi (unit target moment) and Psi^beta (identity
moment matrix).
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from nanoribbon.errors import RankDeficiencyError
from nanoribbon.models import BumpTerm, PotentialSpec
from nanoribbon.quadrature import TensorGrid
from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.spectrum.thresholds import thresholds
from nanoribbon.synthesis.index_set import Part, SynthesisIndex, SynthesisIndexSet, synthesis_index_set
from nanoribbon.waves.basis import WaveBasis, basis_for
from nanoribbon.waves.families import limit_exponential, oscillatory_wave
from nanoribbon.waves.fields import SpinorField

logger = logging.getLogger(__name__)

SVD_CUTOFF = 1e-12
BUMP_WIDTH = 0.25
SYNTHESIS_R0 = 2.0
MOMENT_RESIDUAL_TOL = 1e-10


def _product(w: SpinorField, w_bar: SpinorField, part: Optional[Part]) -> Callable:
    def field(x, y):
        value = np.sum(w.evaluate(x, y) * np.conj(w_bar.evaluate(x, y)), axis=0)
        return value.real if part is None else part.take(value)

    return field


def upsilon_from_waves(alpha: SynthesisIndex, waves: Dict, N: int) -> Callable:
    """upsilon_alpha = part(w_j^tau . conj(w_N^+)), or |w_N^+|^2 for the target index."""
    target = waves[(N, 1)]
    if alpha.j == N and alpha.tau == 1:
        return _product(target, target, None)
    return _product(waves[(alpha.j, alpha.tau)], target, alpha.part)


def upsilon(
    alpha: SynthesisIndex, geom: RibbonGeometry, N: int, eps: float, basis: Optional[WaveBasis] = None
) -> Callable:
    """
    The real field upsilon_alpha at omega_N - eps as a callable of (x, y).

    Args:
        alpha: index in the synthesis set of N
        geom: ribbon geometry
        N: threshold index
        eps: distance below omega_N
        basis: augmented basis at the same energy, if already built
    """
    basis = basis if basis is not None else basis_for(geom, N, eps)
    return upsilon_from_waves(alpha, basis.waves, N)


def limit_waves(geom: RibbonGeometry, N: int) -> Dict:
    """Oscillatory waves at omega_N and the eps -> 0 exponential pair."""
    table = thresholds(geom, N)
    omega = table[N].omega
    waves = {}
    for j in range(1, N):
        kappa = table[j].kappa
        lam = math.sqrt((omega - kappa) * (omega + kappa))
        for tau in (1, -1):
            waves[(j, tau)] = oscillatory_wave(geom, kappa, lam, omega, tau, j=j)
    for tau in (1, -1):
        waves[(N, tau)] = limit_exponential(geom, N, tau)
    return waves


def closed_form(alpha: SynthesisIndex, geom: RibbonGeometry, N: int) -> Callable:
    """
    Closed form of upsilon_alpha at eps = 0 in the limit-wave normalisation.

    Oscillatory indices use a_j(y) = omega_N/(4 L lambda_j) cos((kappa_N - kappa_j) y)
    with s = sign(kappa_N); the exponential ones are polynomials in x.
    """
    table = thresholds(geom, N)
    omega, kappa_N = table[N].omega, table[N].kappa
    s = 1.0 if kappa_N > 0 else -1.0
    L = geom.L

    if alpha.j == N:
        if alpha.tau == 1:
            return lambda x, y: omega / L * (2 * x**2 - 2 * s * x / omega + 1 / omega**2 + 2) + 0 * y
        if alpha.part is Part.RE:
            return lambda x, y: omega / L * (-4 * x**2 + 4 * s * x / omega - 2 / omega**2 + 4) + 0 * y
        # Im(w_N^- . conj(w_N^+)) = -Im(w_N^+ . conj(w_N^-))
        return lambda x, y: -omega / L * (8 * x - 4 * s / omega) + 0 * y

    kappa_j = table[alpha.j].kappa
    lam = math.sqrt((omega - kappa_j) * (omega + kappa_j))
    tau = alpha.tau
    c1 = 1 + s * kappa_j / omega + tau * lam / omega**2
    c2 = s * tau * lam / omega - kappa_j / omega**2
    c3 = -s * tau * lam / omega
    c4 = 1 + s * kappa_j / omega

    def field(x, y):
        a = omega / (4 * L * lam) * np.cos((kappa_N - kappa_j) * y)
        p = c1 + x * c3
        q = c2 + x * c4
        if alpha.part is Part.RE:
            return a * (p * np.cos(lam * x) + tau * q * np.sin(lam * x))
        # imaginary part of the conjugate product
        return -a * (q * np.cos(lam * x) - tau * p * np.sin(lam * x))

    return field


def expected_ratio(alpha: SynthesisIndex, geom: RibbonGeometry, N: int) -> float:
    """Direct-over-closed scale factor implied by the wave normalisation."""
    if alpha.j == N:
        return 0.5 if alpha.tau == 1 else 0.25
    table = thresholds(geom, N)
    omega, kappa_j = table[N].omega, table[alpha.j].kappa
    return 2.0 * math.sqrt(math.sqrt((omega - kappa_j) * (omega + kappa_j)))


@dataclass
class ClosedFormCheck:
    name: str
    ratio: float
    spread: float
    expected: float

    def to_dict(self) -> dict:
        return {"name": self.name, "ratio": self.ratio, "spread": self.spread, "expected": self.expected}


def closed_form_checks(
    index_set: SynthesisIndexSet, geom: RibbonGeometry, grid: Optional[TensorGrid] = None
) -> List[ClosedFormCheck]:
    """
    Ratio direct/closed of every upsilon at eps = 0 over a sample grid.

    The ratio is taken where the closed form is not small; `spread` is its
    relative variation, which vanishes when the two agree up to one scale.
    """
    N = index_set.N
    grid = grid if grid is not None else TensorGrid((-1.5, 1.5), (0.0, geom.L), panels=(4, 2), nodes_per_panel=8)
    waves = limit_waves(geom, N)
    checks = []
    for alpha in index_set.all_entries:
        direct = upsilon_from_waves(alpha, waves, N)(grid.X, grid.Y)
        closed = closed_form(alpha, geom, N)(grid.X, grid.Y)
        mask = np.abs(closed) > 1e-3 * np.max(np.abs(closed))
        ratios = direct[mask] / closed[mask]
        ratio = float(np.median(ratios))
        spread = float(np.max(np.abs(ratios - ratio)) / abs(ratio)) if ratio != 0 else float("inf")
        check = ClosedFormCheck(alpha.name, ratio, spread, expected_ratio(alpha, geom, N))
        checks.append(check)
        logger.info(
            "closed form %s: direct/closed = %.10f (spread %.1e, expected %.10f)",
            alpha.name,
            ratio,
            spread,
            check.expected,
            extra=check.to_dict(),
        )
    return checks


def default_bumps(
    geom: RibbonGeometry, count: int, R0: float = SYNTHESIS_R0, width: float = BUMP_WIDTH
) -> List[BumpTerm]:
    """Unit Gaussians with x-centres equispaced in [-R0/2, R0/2], y-symmetric about L/2."""
    centres = np.linspace(-R0 / 2.0, R0 / 2.0, count) if count > 1 else np.array([0.0])
    return [BumpTerm(amp=1.0, x0=float(c), sx=width, y0=geom.L / 2.0, sy=geom.L / 4.0) for c in centres]


def moment_grid(geom: RibbonGeometry, bumps: Sequence[BumpTerm], tol: float = 1e-12) -> TensorGrid:
    reach = max(abs(b.x0) + b.x_extent(tol) for b in bumps)
    panels = max(8, int(math.ceil(2 * reach * 4)))
    return TensorGrid((-reach, reach), (0.0, geom.L), panels=(panels, 4), nodes_per_panel=16)


def bump_samples(bumps: Sequence[BumpTerm], grid: TensorGrid, tol: float = 1e-12) -> np.ndarray:
    return np.stack([b.x_factor(grid.X, tol) * b.y_factor(grid.Y) for b in bumps])


def upsilon_samples(
    entries: Sequence[SynthesisIndex], basis: WaveBasis, N: int, grid: TensorGrid
) -> np.ndarray:
    return np.stack([upsilon_from_waves(a, basis.waves, N)(grid.X, grid.Y) for a in entries])


def moment_matrix(
    entries: Sequence[SynthesisIndex],
    bumps: Sequence[BumpTerm],
    geom: RibbonGeometry,
    basis: WaveBasis,
    N: int,
    grid: Optional[TensorGrid] = None,
) -> np.ndarray:
    """M[alpha, k] = int bump_k upsilon_alpha over the bump support."""
    grid = grid if grid is not None else moment_grid(geom, bumps)
    ups = upsilon_samples(entries, basis, N, grid)
    samples = bump_samples(bumps, grid)
    return np.einsum("axy,kxy,xy->ak", ups, samples, grid.W)


def potential_moments(
    potential: PotentialSpec, entries: Sequence[SynthesisIndex], basis: WaveBasis, N: int, grid: TensorGrid
) -> np.ndarray:
    ups = upsilon_samples(entries, basis, N, grid)
    return grid.integrate(ups * potential.evaluate(grid.X, grid.Y))


def gram_matrix(entries: Sequence[SynthesisIndex], basis: WaveBasis, N: int, grid: TensorGrid) -> np.ndarray:
    """G[alpha, beta] = int upsilon_alpha upsilon_beta; positive definite for independent fields."""
    ups = upsilon_samples(entries, basis, N, grid)
    return np.einsum("axy,bxy,xy->ab", ups, ups, grid.W)


@dataclass
class MomentSolve:
    """Least-norm bump coefficients for one or more moment targets."""

    coefficients: np.ndarray
    singular_values: np.ndarray
    residual: float

    @property
    def condition(self) -> float:
        return float(self.singular_values[0] / self.singular_values[-1])

    def to_dict(self) -> dict:
        return {
            "coefficients": np.asarray(self.coefficients).tolist(),
            "singular_values": self.singular_values.tolist(),
            "residual": self.residual,
            "condition": self.condition,
        }


def least_norm(matrix: np.ndarray, rhs: np.ndarray) -> MomentSolve:
    """
    Minimum-norm solution of matrix @ c = rhs by SVD.

    Raises:
        RankDeficiencyError: a singular value falls below 1e-12 sigma_max
    """
    U, sigma, Vh = np.linalg.svd(matrix, full_matrices=False)
    if sigma.size == 0 or sigma[-1] <= SVD_CUTOFF * sigma[0] or matrix.shape[0] > matrix.shape[1]:
        raise RankDeficiencyError(sigma)
    coefficients = Vh.conj().T @ ((U.conj().T @ rhs) / (sigma[:, None] if rhs.ndim == 2 else sigma))
    residual = float(np.max(np.abs(matrix @ coefficients - rhs)))
    if residual > MOMENT_RESIDUAL_TOL:
        logger.warning("moment solve residual %.3e above %.1e", residual, MOMENT_RESIDUAL_TOL)
    logger.debug("moment solve: condition %.3e, residual %.3e", sigma[0] / sigma[-1], residual)
    return MomentSolve(coefficients=np.real_if_close(coefficients), singular_values=sigma, residual=residual)


def _setup(geom, N, eps, index_set, basis):
    index_set = index_set if index_set is not None else synthesis_index_set(geom, N)
    basis = basis if basis is not None else basis_for(geom, N, eps)
    return index_set, basis


def solve_phi(
    bumps: Sequence[BumpTerm],
    geom: RibbonGeometry,
    N: int,
    eps: float,
    index_set: Optional[SynthesisIndexSet] = None,
    basis: Optional[WaveBasis] = None,
    grid: Optional[TensorGrid] = None,
) -> MomentSolve:
    """
    Bump coefficients of Phi: moment 1 for the target index, 0 for every other active index.

    Raises:
        RankDeficiencyError: the bumps do not span the active moment conditions
    """
    index_set, basis = _setup(geom, N, eps, index_set, basis)
    active = index_set.active
    matrix = moment_matrix(active, bumps, geom, basis, N, grid)
    rhs = np.array([1.0 if a == index_set.target else 0.0 for a in active])
    return least_norm(matrix, rhs)


def solve_psis(
    bumps: Sequence[BumpTerm],
    geom: RibbonGeometry,
    N: int,
    eps: float,
    index_set: Optional[SynthesisIndexSet] = None,
    basis: Optional[WaveBasis] = None,
    grid: Optional[TensorGrid] = None,
) -> MomentSolve:
    """Bump coefficients of Psi^beta (one column per active index) with identity moment matrix."""
    index_set, basis = _setup(geom, N, eps, index_set, basis)
    active = index_set.active
    matrix = moment_matrix(active, bumps, geom, basis, N, grid)
    return least_norm(matrix, np.eye(len(active)))


def assemble_potential(
    geom: RibbonGeometry, bumps: Sequence[BumpTerm], coefficients: np.ndarray, R0: float, delta: float = 0.0
) -> PotentialSpec:
    terms = [b.model_copy(update={"amp": float(c)}) for b, c in zip(bumps, coefficients)]
    return PotentialSpec(L=geom.L, R0=R0, delta=delta, terms=terms)

