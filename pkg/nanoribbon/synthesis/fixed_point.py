"""
Trapped-Mode Synthesis

Builds a potential P = Phi + sum_beta eta_beta Psi^beta whose scattering
matrix at omega_N - eps satisfies the trap conditions: the entries coupling
(N, +) to every active index vanish and Re s[(N,+),(N,+)] = 1, with the
amplitude delta = -sin(sigma). The coefficients eta come from a fixed-point
iteration driven by the full solver; a final 1-D search on delta drives the
criterion to zero.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from nanoribbon.config import SolverConfig, SynthesisConfig
from nanoribbon.errors import ContractionError, EnergyRangeError
from nanoribbon.models import BumpTerm, PotentialSpec, SynthesisArtifact
from nanoribbon.scattering.criterion import trapped_criterion
from nanoribbon.scattering.smatrix import AugmentedScatteringMatrix
from nanoribbon.scattering.solver import ScatteringSolver
from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.spectrum.thresholds import NearThresholdData, near_threshold
from nanoribbon.synthesis.index_set import SynthesisIndex, SynthesisIndexSet, synthesis_index_set
from nanoribbon.synthesis.moments import (
    ClosedFormCheck,
    MomentSolve,
    assemble_potential,
    closed_form_checks,
    default_bumps,
    gram_matrix,
    moment_grid,
    potential_moments,
    solve_phi,
    solve_psis,
)
from nanoribbon.waves.basis import basis_for

logger = logging.getLogger(__name__)

# sin(sigma) <= 1/2
MAX_SIN_SIGMA = 0.5
DIVERGENCE_FACTOR = 10.0


@dataclass
class SynthesisResult:
    N: int
    eps: float
    sigma: float
    delta_design: float
    delta: float
    index_set: SynthesisIndexSet
    phi: MomentSolve
    psis: MomentSolve
    eta: np.ndarray
    potential: PotentialSpec
    iterations: int
    history: List[float]
    final_sigma_min: float
    moments_phi: Dict[str, float] = field(default_factory=dict)
    gram_spectrum: List[float] = field(default_factory=list)
    closed_forms: List[ClosedFormCheck] = field(default_factory=list)

    @property
    def eta_by_name(self) -> Dict[str, float]:
        values = {a.name: 0.0 for a in self.index_set.all_entries}
        values.update({a.name: float(v) for a, v in zip(self.index_set.active, self.eta)})
        return values

    @property
    def psi_by_name(self) -> Dict[str, List[float]]:
        """Bump coefficients of Psi^beta for every index; zero columns where the moment vanishes by symmetry."""
        columns = np.asarray(self.psis.coefficients, dtype=float).reshape(len(self.phi.coefficients), -1)
        values = {a.name: [0.0] * columns.shape[0] for a in self.index_set.all_entries}
        values.update({a.name: columns[:, i].tolist() for i, a in enumerate(self.index_set.active)})
        return values

    def delta_scaling(self, omega_N: float) -> float:
        """|delta| / (sqrt(eps) 2 sqrt(2 omega_N)); tends to 1 as eps -> 0."""
        return abs(self.delta_design) / (math.sqrt(self.eps) * 2.0 * math.sqrt(2.0 * omega_N))

    def to_artifact(self) -> SynthesisArtifact:
        return SynthesisArtifact(
            L=self.potential.L,
            N=self.N,
            eps=self.eps,
            sigma=self.sigma,
            delta_design=self.delta_design,
            delta=self.delta,
            index_set=self.index_set.names(),
            active=[a.name for a in self.index_set.active],
            moments_phi=self.moments_phi,
            gram_spectrum=self.gram_spectrum,
            iterations=self.iterations,
            history=self.history,
            eta=self.eta_by_name,
            psi=self.psi_by_name,
            final_sigma_min=self.final_sigma_min,
            closed_form_ratios={c.name: c.ratio for c in self.closed_forms},
        )


def reduced_entries(S: AugmentedScatteringMatrix, entries: List[SynthesisIndex], N: int) -> np.ndarray:
    """s_alpha = part(s[(j, tau), (N, +)]) with s = i (S - I) / delta; Re s[(N,+),(N,+)] for the target."""
    s = S.born_reduced()
    col = S.index(N, 1)
    values = []
    for alpha in entries:
        entry = s[S.index(alpha.j, alpha.tau), col]
        values.append(entry.real if alpha.j == N and alpha.tau == 1 else alpha.part.take(entry))
    return np.array(values, dtype=float)


class _Design:
    """Potential family P(eta) over a fixed bump basis."""

    def __init__(self, geom: RibbonGeometry, bumps: List[BumpTerm], phi: MomentSolve, psis: MomentSolve, R0: float):
        self.geom = geom
        self.bumps = bumps
        self.phi = np.asarray(phi.coefficients, dtype=float)
        self.psis = np.asarray(psis.coefficients, dtype=float)
        self.R0 = R0

    def potential(self, eta: np.ndarray, delta: float) -> PotentialSpec:
        coefficients = self.phi + self.psis @ eta
        shape = assemble_potential(self.geom, self.bumps, coefficients, self.R0, delta)
        return shape.model_copy(update={"R0": max(self.R0, shape.extent())})


def _check_energy(geom: RibbonGeometry, N: int, eps: float) -> NearThresholdData:
    ntd = near_threshold(geom, N, eps)
    if ntd.delta_sin > MAX_SIN_SIGMA:
        # sin(sigma) = 1/2 at Im lambda = tan(pi/12)
        t = math.tan(math.pi / 12.0)
        limit = ntd.omega_N - math.sqrt(ntd.omega_N**2 - t * t)
        raise EnergyRangeError(eps, 0.0, limit, N)
    return ntd


def fixed_point_eta(
    phi: MomentSolve,
    psis: MomentSolve,
    bumps: List[BumpTerm],
    geom: RibbonGeometry,
    N: int,
    eps: float,
    config: Optional[SynthesisConfig] = None,
    solver_config: Optional[SolverConfig] = None,
    index_set: Optional[SynthesisIndexSet] = None,
) -> SynthesisResult:
    """
    Solve for eta by the iteration eta <- eta + (target - s(delta P(eta))).

    Args:
        phi: bump coefficients of Phi
        psis: bump coefficients of the Psi^beta, one column per active index
        bumps: the bump basis both were solved on
        geom: ribbon geometry
        N: threshold index
        eps: design distance below omega_N
        config: iteration and refinement controls
        solver_config: discretisation of the scattering solves
        index_set: synthesis index set of N

    Returns:
        SynthesisResult with the sup-normalised potential

    Raises:
        EnergyRangeError: sin(sigma) > 1/2
        ContractionError: the steps grow instead of contracting
    """
    config = config if config is not None else SynthesisConfig()
    solver_config = solver_config if solver_config is not None else SolverConfig()
    index_set = index_set if index_set is not None else synthesis_index_set(geom, N)
    ntd = _check_energy(geom, N, eps)
    active = index_set.active
    target = np.array([1.0 if a == index_set.target else 0.0 for a in active])
    design = _Design(geom, list(bumps), phi, psis, config.R0)

    delta = -ntd.delta_sin
    eta = np.zeros(len(active))
    history: List[float] = []
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        potential = design.potential(eta, delta)
        S = ScatteringSolver(geom, potential, solver_config).solve(N, eps).smatrix
        step = target - reduced_entries(S, active, N)
        eta = eta + step
        size = float(np.max(np.abs(step)))
        history.append(size)
        logger.info(
            "fixed point iteration %d: step %.3e",
            iterations,
            size,
            extra={"iteration": iterations, "step": size},
        )
        if size < config.step_tol:
            break
        if not math.isfinite(size) or size > DIVERGENCE_FACTOR * history[0]:
            raise ContractionError(history)
        if len(history) >= 4 and history[-1] > history[-2] > history[-3] > history[-4]:
            raise ContractionError(history)
    else:
        logger.warning(
            "fixed point stopped after %d iterations with step %.3e",
            config.max_iterations,
            history[-1],
        )

    if config.refine_delta:
        delta = _refine_delta(design, eta, delta, geom, N, eps, ntd, config, solver_config)

    potential = design.potential(eta, delta)
    final = trapped_criterion(ScatteringSolver(geom, potential, solver_config).solve(N, eps).smatrix, ntd)
    normalized = potential.normalized()
    logger.info(
        "synthesis N=%d eps=%.3e: delta=%.6e sigma_min=%.3e after %d iterations",
        N,
        eps,
        normalized.delta,
        final.sigma_min,
        iterations,
        extra={"N": N, "eps": eps, "delta": normalized.delta, "sigma_min": final.sigma_min},
    )
    return SynthesisResult(
        N=N,
        eps=eps,
        sigma=ntd.sigma,
        delta_design=delta,
        delta=normalized.delta,
        index_set=index_set,
        phi=phi,
        psis=psis,
        eta=eta,
        potential=normalized,
        iterations=iterations,
        history=history,
        final_sigma_min=final.sigma_min,
    )


def _refine_delta(design, eta, delta, geom, N, eps, ntd, config, solver_config) -> float:
    """Bounded search of delta in [lo, hi] |delta| (sign kept) minimising the criterion."""
    lo, hi = config.refine_bounds
    sign = 1.0 if delta > 0 else -1.0

    def objective(magnitude: float) -> float:
        potential = design.potential(eta, sign * magnitude)
        S = ScatteringSolver(geom, potential, solver_config).solve(N, eps).smatrix
        return trapped_criterion(S, ntd).sigma_min

    result = minimize_scalar(
        objective, bounds=(lo * abs(delta), hi * abs(delta)), method="bounded", options={"xatol": 1e-12}
    )
    logger.info("delta refined from %.8e to %.8e (sigma_min %.3e)", delta, sign * result.x, result.fun)
    return float(sign * result.x)


def synthesize(
    geom: RibbonGeometry,
    N: int,
    eps: float,
    config: Optional[SynthesisConfig] = None,
    solver_config: Optional[SolverConfig] = None,
) -> SynthesisResult:
    """
    Full inverse design at omega_N - eps.

    Builds the index set and bump basis, solves for Phi and the Psi^beta,
    records the Gram spectrum and the closed-form cross-checks, then runs the
    fixed point.
    """
    config = config if config is not None else SynthesisConfig()
    _check_energy(geom, N, eps)
    index_set = synthesis_index_set(geom, N)
    count = config.bumps if config.bumps is not None else 2 * index_set.cardinality
    bumps = default_bumps(geom, count, config.R0, config.bump_width)
    basis = basis_for(geom, N, eps)
    grid = moment_grid(geom, bumps)

    gram = gram_matrix(index_set.all_entries, basis, N, grid)
    spectrum = np.linalg.eigvalsh(gram)
    logger.info("upsilon Gram spectrum: min %.3e, max %.3e", spectrum[0], spectrum[-1])

    phi = solve_phi(bumps, geom, N, eps, index_set=index_set, basis=basis, grid=grid)
    psis = solve_psis(bumps, geom, N, eps, index_set=index_set, basis=basis, grid=grid)
    phi_potential = assemble_potential(geom, bumps, phi.coefficients, config.R0)
    moments = potential_moments(phi_potential, index_set.all_entries, basis, N, grid)

    result = fixed_point_eta(phi, psis, bumps, geom, N, eps, config, solver_config, index_set)
    result.moments_phi = {a.name: float(m) for a, m in zip(index_set.all_entries, moments)}
    result.gram_spectrum = [float(v) for v in spectrum]
    result.closed_forms = closed_form_checks(index_set, geom)
    return result
