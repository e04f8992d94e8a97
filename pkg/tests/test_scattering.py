import numpy as np
import pytest

from nanoribbon.config import SolverConfig
from nanoribbon.errors import RibbonValidationError
from nanoribbon.models import BumpTerm, PotentialSpec
from nanoribbon.scattering import (
    AugmentedScatteringMatrix,
    ScatteringSolver,
    born_smatrix,
    criterion_matrix,
    overlap_matrix,
    solve_scattering,
    trap_scan,
    trapped_criterion,
)
from nanoribbon.scattering.born import default_grid
from nanoribbon.spectrum import near_threshold
from nanoribbon.waves import augmented_basis

KEYS = [(1, 1), (1, -1), (2, 1), (2, -1)]


def identity_matrix(augmented=True):
    return AugmentedScatteringMatrix(
        N=2, entries=np.eye(4, dtype=complex), keys=list(KEYS), omega=1.57261, eps=0.01,
        delta=0.0, L=1.33, augmented=augmented,
    )


class TestSolver:
    def test_zero_potential_is_identity(self, geom, solver_config):
        S = solve_scattering(PotentialSpec.zero(geom.L), geom, 2, 0.01, solver_config)
        assert S.labels == ["1+", "1-", "2+", "2-"]
        np.testing.assert_allclose(S.entries, np.eye(4), atol=1e-8)

    def test_example_potential_structure(self, geom, example_phi, solver_config):
        S = solve_scattering(example_phi, geom, 2, 0.01, solver_config)
        assert S.augmented
        assert S.unitarity_defect() < 1e-6
        assert S.t1_defect() < 1e-6
        assert np.max(np.abs(S.entries - np.eye(4))) > 1e-6

    def test_symmetric_potential_decouples_parities(self, geom, symmetric_potential, solver_config):
        S = solve_scattering(symmetric_potential, geom, 2, 0.01, solver_config)
        assert S.t3_defect() < 1e-6

    def test_above_threshold(self, geom, example_phi, solver_config):
        S = solve_scattering(example_phi, geom, 2, -0.01, solver_config)
        assert not S.augmented
        assert S.size == 4
        assert S.unitarity_defect() < 1e-6

    def test_kernel_field_outgoing(self, geom, example_phi, solver_config):
        solution = ScatteringSolver(geom, example_phi, solver_config).solve(2, 0.01)
        right = solution.decomposition((1, 1), 1)
        assert right.to_dict()
        assert solution.kernel_field((1, 1)).omega == pytest.approx(solution.basis.omega)

    def test_artifact(self, geom, solver_config):
        S = solve_scattering(PotentialSpec.zero(geom.L), geom, 2, 0.01, solver_config)
        artifact = S.to_artifact()
        np.testing.assert_allclose(artifact.S.to_array(), S.entries)
        assert artifact.labels == S.labels

    def test_grid_refinement(self, geom, example_phi):
        coarse = solve_scattering(example_phi, geom, 2, 0.01, SolverConfig(J_modes=6, points_per_unit=48))
        fine = solve_scattering(example_phi, geom, 2, 0.01, SolverConfig(J_modes=6, points_per_unit=96))
        assert np.max(np.abs(coarse.entries - fine.entries)) < 1e-6

    def test_extraction_consistency(self, geom, example_phi):
        config = SolverConfig(J_modes=6, margin=3.0)
        solution = ScatteringSolver(geom, example_phi, config).solve(2, 0.01)
        assert solution.diagnostics.extraction_gap < 10 * solution.resolved.tol
        assert solution.smatrix.checks["extraction_gap"] == solution.diagnostics.extraction_gap
        wider = solve_scattering(example_phi, geom, 2, 0.01, config.model_copy(update={"margin": 5.0}))
        np.testing.assert_allclose(wider.entries, solution.smatrix.entries, atol=1e-6)


class TestBorn:
    def test_zero_potential(self, geom):
        result = born_smatrix(PotentialSpec.zero(geom.L), geom, 2, 0.01)
        assert np.all(result.matrix == 0)

    def test_hermitian_overlap(self, geom, example_phi):
        basis = augmented_basis(geom, 2, 0.01)
        B = overlap_matrix(basis, example_phi, default_grid(example_phi))
        np.testing.assert_allclose(B, B.conj().T, atol=1e-12)

    def test_refinement_stable(self, geom, example_phi):
        result = born_smatrix(example_phi, geom, 2, 0.01, strict=True)
        assert result.refinement_change < 1e-8
        assert result.to_dict()["labels"] == ["1+", "1-", "2+", "2-"]

    def test_delta_independent(self, geom, example_phi):
        a = born_smatrix(example_phi, geom, 2, 0.01).matrix
        b = born_smatrix(example_phi.with_delta(0.5), geom, 2, 0.01).matrix
        np.testing.assert_allclose(a, b)

    @pytest.mark.slow
    def test_matches_small_amplitude_solve(self, geom, example_phi):
        delta = 1e-4
        S = solve_scattering(example_phi.with_delta(delta), geom, 2, 0.01, SolverConfig(J_modes=6))
        B = born_smatrix(example_phi, geom, 2, 0.01).matrix
        assert np.max(np.abs(S.born_reduced() - B)) < 1e-2 * np.max(np.abs(B))

    @pytest.mark.slow
    def test_second_order_remainder(self, geom, example_phi):
        B = born_smatrix(example_phi, geom, 2, 0.01).matrix
        deltas = np.array([1e-2, 3e-3, 1e-3])
        remainders = []
        for delta in deltas:
            S = solve_scattering(example_phi.with_delta(delta), geom, 2, 0.01, SolverConfig(J_modes=6))
            remainders.append(np.max(np.abs(S.entries - (np.eye(S.size) - 1j * delta * B))))
        slope = np.polyfit(np.log(deltas), np.log(remainders), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.2)


class TestCriterion:
    def test_identity_matrix(self, geom):
        ntd = near_threshold(geom, 2, 0.01)
        value = trapped_criterion(identity_matrix(), ntd)
        assert value.sigma_min == pytest.approx(0.34979, abs=1e-4)
        assert abs(value.det) == pytest.approx(abs(1 - ntd.d ** 2))
        assert abs(value.det) > 0.5

    def test_singular_for_matching_block(self, geom):
        ntd = near_threshold(geom, 2, 0.01)
        S = identity_matrix()
        S.entries[2:, 2:] = -ntd.d * np.array([[0, 1], [1, 0]])
        assert np.allclose(criterion_matrix(S.S_dd, ntd.d), 0)
        assert trapped_criterion(S, ntd).sigma_min == pytest.approx(0.0, abs=1e-14)

    def test_requires_augmented(self, geom):
        with pytest.raises(RibbonValidationError):
            trapped_criterion(identity_matrix(augmented=False), near_threshold(geom, 2, 0.01))

    def test_scan_rejects_threshold(self, geom, example_phi):
        with pytest.raises(RibbonValidationError):
            trap_scan(example_phi, geom, 2, [0.01, 0.0])

    @pytest.mark.slow
    def test_small_scan(self, geom, example_phi, solver_config):
        scan = trap_scan(example_phi, geom, 2, [0.02, 0.01, -0.01], config=solver_config, refine=False)
        assert [row.eps for row in scan.rows] == [0.02, 0.01, -0.01]
        assert [row.applicable for row in scan.rows] == [True, True, False]
        assert all(row.sigma_min > 0 for row in scan.rows)
        assert scan.to_dict()["N"] == 2

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [1, 2])
    def test_random_weak_potentials_trap_nothing(self, geom, solver_config, seed):
        rng = np.random.default_rng(seed)
        terms = [
            BumpTerm(amp=rng.uniform(-1, 1), x0=rng.uniform(-1, 1), sx=0.5, y0=rng.uniform(0.2, 1.1), sy=0.3)
            for _ in range(3)
        ]
        potential = PotentialSpec(L=geom.L, R0=3.0, delta=1e-3, terms=terms)
        # above omega_2, and well below it
        scan = trap_scan(potential, geom, 2, [-0.05, -0.02, -0.01, -0.005, 0.2, 0.3, 0.4], config=solver_config)
        assert scan.detections == []
        assert all(row.sigma_min > 1e-2 for row in scan.rows)
