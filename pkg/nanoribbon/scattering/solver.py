"""
Scattering Solver

Full solve of (D + delta P - omega) z = 0 on the valley-folded cylinder.

The folded coefficients c(x) = (a_1..a_K, b_1..b_K) of the K retained
channels obey c' = A(x) c with

    A(x) = [[diag kappa, -i omega + i delta H(x)], [-i omega + i delta H(x), -diag kappa]]

where H(x) couples the channels through the cosine transforms of the
potential. One fourth-order Magnus propagator per grid cell links
neighbouring nodes, and exact modal closures at x = +-X fix the incoming data
and leave the outgoing and decaying amplitudes free. All cells and both
closures form one sparse square system, factorised once and solved for every
incoming wave.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from scipy.linalg import expm
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import splu

from nanoribbon.config import ResolvedSolver, SolverConfig
from nanoribbon.errors import IllConditionedError, InsufficientDomainError
from nanoribbon.models import PotentialSpec
from nanoribbon.scattering.channels import ChannelSet, channel_set
from nanoribbon.scattering.smatrix import AugmentedScatteringMatrix
from nanoribbon.spectrum.geometry import RibbonGeometry
from nanoribbon.symplectic.qform import qform_coefficients
from nanoribbon.waves.basis import ChannelKey, WaveBasis, basis_for, key_name, standard_basis
from nanoribbon.waves.fields import FoldedField

logger = logging.getLogger(__name__)

GAUSS_OFFSET = math.sqrt(3.0) / 6.0
POWER_ITERATIONS = 30


@dataclass
class SolveDiagnostics:
    residual: float = 0.0
    condition: float = 0.0
    sigma_min: float = 0.0
    unitarity: float = 0.0
    t1: float = 0.0
    t3: Optional[float] = None
    extraction_gap: float = 0.0
    remainder: float = 0.0
    truncation_energy: float = 0.0
    elapsed: float = 0.0

    def to_dict(self) -> Dict[str, float]:
        values = {
            "residual": self.residual,
            "condition": self.condition,
            "sigma_min": self.sigma_min,
            "unitarity": self.unitarity,
            "t1": self.t1,
            "extraction_gap": self.extraction_gap,
            "remainder": self.remainder,
            "truncation_energy": self.truncation_energy,
            "elapsed": self.elapsed,
        }
        if self.t3 is not None:
            values["t3"] = self.t3
        return values


@dataclass
class AsymptoticDecomposition:
    """
    Basis coefficients of a solution near one end of the ribbon.

    `coefficients` come from q-pairing with every basis wave at `section_x`;
    the remainder is what the basis waves leave unexplained there, and
    `decay_rate` its exponential rate between the extraction sections.
    """

    side: int
    section_x: float
    coefficients: Dict[str, complex]
    remainder_norm: float
    decay_rate: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "side": "+inf" if self.side > 0 else "-inf",
            "section_x": self.section_x,
            "coefficients": {k: [v.real, v.imag] for k, v in self.coefficients.items()},
            "remainder_norm": self.remainder_norm,
            "decay_rate": self.decay_rate,
        }


@dataclass
class ScatteringSolution:
    """
    Kernel solutions for every incoming basis wave.

    states[r] holds the folded coefficients at every grid node for the
    solution whose incoming wave is basis key r.
    """

    smatrix: AugmentedScatteringMatrix
    channels: ChannelSet
    resolved: ResolvedSolver
    x_nodes: np.ndarray
    states: np.ndarray
    beta_right: np.ndarray
    beta_left: np.ndarray
    diagnostics: SolveDiagnostics = field(default_factory=SolveDiagnostics)

    @property
    def basis(self) -> WaveBasis:
        return self.channels.basis

    def state(self, key: ChannelKey) -> np.ndarray:
        return self.states[self.basis.index(*key)]

    def kernel_field(self, key: ChannelKey) -> FoldedField:
        """Spline reconstruction of the kernel solution with incoming wave `key`."""
        return FoldedField.from_samples(
            self.channels.geom,
            self.basis.omega,
            self.channels.kappas,
            self.x_nodes,
            self.state(key),
            label=f"z[{key_name(key)}]",
        )

    def combination(self, coefficients: np.ndarray) -> np.ndarray:
        """Node coefficients of sum_r coefficients[r] z_r."""
        return np.tensordot(np.asarray(coefficients, dtype=complex), self.states, axes=(0, 0))

    def decomposition(self, key: ChannelKey, side: int) -> AsymptoticDecomposition:
        return decompose(self.channels, self.x_nodes, self.state(key), side, self.resolved.extraction_offset)


def magnus_propagators(
    kappas: np.ndarray,
    omega: float,
    potential: PotentialSpec,
    x_nodes: np.ndarray,
    n_quad: int,
) -> np.ndarray:
    """
    Fourth-order Magnus step matrices G_i with c(x_{i+1}) = G_i c(x_i).

    Cells where the truncated potential vanishes at both Gauss points share
    the exact free propagator.
    """
    K = len(kappas)
    h = float(x_nodes[1] - x_nodes[0])
    diag = np.diag(kappas).astype(complex)
    coupling = -1j * omega * np.eye(K)
    free = np.block([[diag, coupling], [coupling, -diag]])
    cells = len(x_nodes) - 1
    G = np.broadcast_to(expm(h * free), (cells, 2 * K, 2 * K)).copy()
    if potential.is_zero:
        return G

    left = x_nodes[:-1]
    gauss = np.stack([left + h * (0.5 - GAUSS_OFFSET), left + h * (0.5 + GAUSS_OFFSET)], axis=-1)
    profiles = potential.x_profiles(gauss)
    active = np.flatnonzero(np.any(profiles != 0.0, axis=(0, 2)))
    if active.size == 0:
        return G

    H_t = potential.transverse_matrices(kappas, n_quad)
    H = np.einsum("tcg,tqp->cgqp", profiles[:, active, :], H_t)
    A = np.broadcast_to(free, (active.size, 2, 2 * K, 2 * K)).copy()
    shift = 1j * potential.delta * H
    A[:, :, :K, K:] += shift
    A[:, :, K:, :K] += shift
    A1, A2 = A[:, 0], A[:, 1]
    omega_cells = 0.5 * h * (A1 + A2) + (math.sqrt(3.0) / 12.0) * h * h * (A2 @ A1 - A1 @ A2)
    G[active] = expm(omega_cells)
    logger.debug("Magnus: %d of %d cells carry the potential", active.size, cells)
    return G


def assemble_system(G: np.ndarray, E_right: np.ndarray, E_left: np.ndarray):
    """
    Sparse matrix over unknowns [c_0 .. c_n, beta_R, beta_L].

    Rows: c_{i+1} - G_i c_i = 0, then c_n - E_R beta_R and c_0 - E_L beta_L.
    """
    cells, m, _ = G.shape
    K = m // 2
    nodes = cells + 1
    size = nodes * m + 2 * K
    r = np.arange(m)

    base = (np.arange(cells) * m)[:, None, None]
    g_rows = np.broadcast_to(base + r[None, :, None], G.shape)
    g_cols = np.broadcast_to(base + r[None, None, :], G.shape)
    ident = np.arange(cells * m)

    right_row = cells * m
    left_row = nodes * m
    beta_r = nodes * m
    beta_l = nodes * m + K
    blk_r, blk_c = np.meshgrid(r, np.arange(K), indexing="ij")

    rows = [g_rows.ravel(), ident, right_row + r, right_row + blk_r.ravel(), left_row + r, left_row + blk_r.ravel()]
    cols = [
        g_cols.ravel(),
        m + ident,
        cells * m + r,
        beta_r + blk_c.ravel(),
        r,
        beta_l + blk_c.ravel(),
    ]
    data = [
        -G.ravel(),
        np.ones(cells * m, dtype=complex),
        np.ones(m, dtype=complex),
        -E_right.ravel(),
        np.ones(m, dtype=complex),
        -E_left.ravel(),
    ]
    matrix = coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(size, size)
    )
    return matrix.tocsc()


def smallest_singular_value(lu, size: int, iterations: int = POWER_ITERATIONS) -> float:
    """Inverse power iteration on (A^H A)^{-1} with a fixed seed."""
    rng = np.random.default_rng(0)
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    v /= np.linalg.norm(v)
    growth = 1.0
    for _ in range(iterations):
        w = lu.solve(lu.solve(v), trans="H")
        growth = float(np.linalg.norm(w))
        if growth == 0.0 or not np.isfinite(growth):
            return 0.0
        v = w / growth
    return 1.0 / math.sqrt(growth)


def pairing_coefficients(channels: ChannelSet, c: np.ndarray, x: float) -> Dict[ChannelKey, complex]:
    """beta_b = q(u, w_b) / q(w_b, w_b) for every basis key, with q(w_b, w_b) = i tau_b."""
    L = channels.geom.L
    coefficients = {}
    for key in channels.basis.keys:
        vec = channels.vector(channels.basis[key], x)
        coefficients[key] = qform_coefficients(c, vec, L) / (1j * key[1])
    return coefficients


def _remainder(channels: ChannelSet, c: np.ndarray, x: float, coefficients: Dict[ChannelKey, complex]) -> float:
    explained = sum(
        (coef * channels.vector(channels.basis[key], x) for key, coef in coefficients.items()),
        np.zeros_like(c),
    )
    return float(np.linalg.norm(c - explained))


def decompose(
    channels: ChannelSet, x_nodes: np.ndarray, states: np.ndarray, side: int, offset: float
) -> AsymptoticDecomposition:
    outer = len(x_nodes) - 1 if side > 0 else 0
    inner = int(np.argmin(np.abs(x_nodes - (x_nodes[outer] - side * offset))))
    x_out, x_in = float(x_nodes[outer]), float(x_nodes[inner])
    coefficients = pairing_coefficients(channels, states[outer], x_out)
    rem_out = _remainder(channels, states[outer], x_out, coefficients)
    rem_in = _remainder(channels, states[inner], x_in, pairing_coefficients(channels, states[inner], x_in))
    rate = None
    if rem_out > 0.0 and rem_in > 0.0 and x_in != x_out:
        rate = math.log(rem_in / rem_out) / abs(x_out - x_in)
    return AsymptoticDecomposition(
        side=side,
        section_x=x_out,
        coefficients={key_name(k): v for k, v in coefficients.items()},
        remainder_norm=rem_out,
        decay_rate=rate,
    )


class ScatteringSolver:
    """
    Folded-cylinder solver for one potential.

    Args:
        geom: ribbon geometry
        potential: potential, with its amplitude delta
        config: discretisation; unset values are derived per energy
    """

    def __init__(self, geom: RibbonGeometry, potential: PotentialSpec, config: Optional[SolverConfig] = None):
        self.geom = geom
        self.potential = potential
        self.config = config if config is not None else SolverConfig()

    def resolve(self, basis: WaveBasis) -> ResolvedSolver:
        return self.config.resolve(self.geom, max(basis.modes, 1), self.potential.extent(), basis.omega)

    def solve(self, N: int, eps: float) -> ScatteringSolution:
        """Scattering at omega_N - eps; eps < 0 means omega_N + |eps| with the standard basis."""
        return self.solve_basis(basis_for(self.geom, N, eps), N=N, eps=eps)

    def solve_omega(self, omega: float) -> ScatteringSolution:
        """Standard scattering matrix away from thresholds."""
        basis = standard_basis(self.geom, omega)
        return self.solve_basis(basis, N=basis.modes, eps=float("nan"))

    def _factorise(self, resolved: ResolvedSolver, channels: ChannelSet, potential: PotentialSpec):
        x_nodes = np.linspace(-resolved.X, resolved.X, resolved.steps + 1)
        G = magnus_propagators(channels.kappas, channels.omega, potential, x_nodes, resolved.n_quad)
        matrix = assemble_system(G, channels.closure(1, resolved.X), channels.closure(-1, resolved.X))
        try:
            lu = splu(matrix)
        except RuntimeError as exc:
            logger.error("factorisation failed: %s", exc)
            raise IllConditionedError(float("inf")) from exc
        return x_nodes, matrix, lu

    def system_sigma_min(self, basis: WaveBasis, free: bool = False) -> float:
        """Smallest singular value of the global system (of the free problem with `free`)."""
        resolved = self.resolve(basis)
        channels = channel_set(self.geom, basis, resolved.K)
        potential = self.potential.with_delta(0.0) if free else self.potential
        _, matrix, lu = self._factorise(resolved, channels, potential)
        return smallest_singular_value(lu, matrix.shape[0])

    def sigma_min_ratio(self, basis: WaveBasis) -> float:
        """System smallest singular value relative to the free system at the same energy."""
        free = self.system_sigma_min(basis, free=True)
        return self.system_sigma_min(basis) / free if free > 0 else float("inf")

    def solve_basis(self, basis: WaveBasis, N: Optional[int] = None, eps: float = float("nan")) -> ScatteringSolution:
        """
        Solve for every incoming wave of `basis` and extract the scattering matrix.

        Raises:
            IllConditionedError: singular factorisation or condition above the limit
            InsufficientDomainError: extraction sections disagree by more than 10 tol
        """
        started = time.perf_counter()
        resolved = self.resolve(basis)
        channels = channel_set(self.geom, basis, resolved.K)
        K, M = channels.K, channels.M
        x_nodes, matrix, lu = self._factorise(resolved, channels, self.potential)
        size = matrix.shape[0]
        nodes = len(x_nodes)
        m = 2 * K

        rhs = np.zeros((size, basis.size), dtype=complex)
        right_row, left_row = (nodes - 1) * m, nodes * m
        for r, key in enumerate(basis.keys):
            if key[1] > 0:
                rhs[left_row : left_row + m, r] = channels.vector(basis[key], -resolved.X)
            else:
                rhs[right_row : right_row + m, r] = channels.vector(basis[key], resolved.X)
        solution = lu.solve(rhs)

        diagnostics = SolveDiagnostics()
        residual = matrix @ solution - rhs
        diagnostics.residual = float(np.max(np.linalg.norm(residual, axis=0) / np.linalg.norm(rhs, axis=0)))
        norm1 = float(abs(matrix).sum(axis=0).max())
        diagnostics.sigma_min = smallest_singular_value(lu, size)
        diagnostics.condition = norm1 / diagnostics.sigma_min if diagnostics.sigma_min > 0 else float("inf")
        if diagnostics.condition > resolved.max_condition:
            raise IllConditionedError(diagnostics.condition, diagnostics.residual)

        states = solution[: nodes * m].T.reshape(basis.size, nodes, m)
        beta_right = solution[nodes * m : nodes * m + K].T
        beta_left = solution[nodes * m + K :].T

        entries = np.zeros((basis.size, basis.size), dtype=complex)
        for c, (j, tau) in enumerate(basis.keys):
            entries[:, c] = beta_right[:, j - 1] if tau > 0 else beta_left[:, j - 1]

        parities = [basis.parity(j) for j in range(1, M + 1)]
        smatrix = AugmentedScatteringMatrix(
            N=N if N is not None else M,
            entries=entries,
            keys=list(basis.keys),
            omega=basis.omega,
            eps=eps,
            delta=self.potential.delta,
            L=self.geom.L,
            parities=parities,
            augmented=basis.exponential,
        )
        diagnostics.unitarity = smatrix.unitarity_defect()
        diagnostics.t1 = smatrix.t1_defect()
        if self.potential.is_y_symmetric():
            diagnostics.t3 = smatrix.t3_defect()
        diagnostics.remainder = float(
            max(np.max(np.abs(beta_right[:, M:]), initial=0.0), np.max(np.abs(beta_left[:, M:]), initial=0.0))
        )
        diagnostics.extraction_gap = self._extraction_gap(channels, x_nodes, states, beta_right, beta_left, resolved)
        last = np.abs(states[:, :, K - 1]) ** 2 + np.abs(states[:, :, m - 1]) ** 2
        total = np.sum(np.abs(states) ** 2, axis=2)
        diagnostics.truncation_energy = float(np.max(last) / np.max(total)) if np.max(total) > 0 else 0.0
        diagnostics.elapsed = time.perf_counter() - started

        self._report(diagnostics, resolved, basis)
        smatrix.checks = diagnostics.to_dict()
        return ScatteringSolution(
            smatrix=smatrix,
            channels=channels,
            resolved=resolved,
            x_nodes=x_nodes,
            states=states,
            beta_right=beta_right,
            beta_left=beta_left,
            diagnostics=diagnostics,
        )

    def _extraction_gap(
        self,
        channels: ChannelSet,
        x_nodes: np.ndarray,
        states: np.ndarray,
        beta_right: np.ndarray,
        beta_left: np.ndarray,
        resolved: ResolvedSolver,
    ) -> float:
        """Largest disagreement of q-paired outgoing coefficients between X and X - offset."""
        gap = 0.0
        for side, beta in ((1, beta_right), (-1, beta_left)):
            outer = len(x_nodes) - 1 if side > 0 else 0
            inner = int(np.argmin(np.abs(x_nodes - side * (resolved.X - resolved.extraction_offset))))
            for r in range(states.shape[0]):
                for node in (outer, inner):
                    paired = pairing_coefficients(channels, states[r, node], float(x_nodes[node]))
                    for j in range(1, channels.M + 1):
                        gap = max(gap, abs(paired[(j, side)] - beta[r, j - 1]))
        return float(gap)

    def _report(self, diagnostics: SolveDiagnostics, resolved: ResolvedSolver, basis: WaveBasis) -> None:
        extra = {"omega": basis.omega, "K": resolved.K, "X": resolved.X, **diagnostics.to_dict()}
        logger.info(
            "solve at omega=%.8f: K=%d X=%.2f steps=%d residual=%.2e condition=%.2e unitarity=%.2e",
            basis.omega,
            resolved.K,
            resolved.X,
            resolved.steps,
            diagnostics.residual,
            diagnostics.condition,
            diagnostics.unitarity,
            extra=extra,
        )
        limit = 10.0 * resolved.tol
        if diagnostics.extraction_gap > limit:
            raise InsufficientDomainError(diagnostics.extraction_gap, limit)
        if diagnostics.unitarity > limit:
            logger.warning("unitarity defect %.3e above %.1e", diagnostics.unitarity, limit, extra=extra)
        if diagnostics.t1 > limit:
            logger.warning("T1 defect %.3e above %.1e", diagnostics.t1, limit, extra=extra)
        if diagnostics.truncation_energy > resolved.tol:
            logger.warning(
                "last retained channel carries %.3e of the energy; increase J_modes",
                diagnostics.truncation_energy,
                extra=extra,
            )


def solve_scattering(
    potential: PotentialSpec,
    geom: RibbonGeometry,
    N: int,
    eps: float,
    config: Optional[SolverConfig] = None,
) -> AugmentedScatteringMatrix:
    """
    Augmented scattering matrix at omega_N - eps.

    Args:
        potential: potential with its amplitude delta
        geom: ribbon geometry
        N: threshold index
        eps: distance below omega_N, in (0, eps0]; negative values give the
            standard matrix at omega_N + |eps|
        config: solver discretisation

    Returns:
        AugmentedScatteringMatrix with the solver diagnostics in `checks`
    """
    return ScatteringSolver(geom, potential, config).solve(N, eps).smatrix

