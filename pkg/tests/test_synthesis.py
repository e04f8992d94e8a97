import math

import numpy as np
import pytest

from nanoribbon.config import SolverConfig, SynthesisConfig
from nanoribbon.errors import EnergyRangeError, RankDeficiencyError, RibbonValidationError
from nanoribbon.models import PotentialSpec
from nanoribbon.scattering import trap_scan
from nanoribbon.spectrum import RibbonGeometry, near_threshold
from nanoribbon.synthesis import (
    MomentSolve,
    Part,
    SynthesisIndex,
    SynthesisResult,
    closed_form_checks,
    default_bumps,
    gram_matrix,
    moment_matrix,
    solve_phi,
    solve_psis,
    synthesis_index_set,
    synthesize,
)
from nanoribbon.synthesis.fixed_point import _check_energy
from nanoribbon.synthesis.index_set import base_channels
from nanoribbon.synthesis.moments import least_norm, moment_grid
from nanoribbon.waves import augmented_basis


class TestIndexSet:
    def test_second_threshold(self, geom):
        index_set = synthesis_index_set(geom, 2)
        assert index_set.cardinality == 7
        assert index_set.ind_S == [1]
        assert len(index_set.protected) == 4
        assert [a.name for a in index_set.active] == ["2-Re", "2-Im", "2+Re"]
        assert index_set.supplementary == []
        assert index_set.target == SynthesisIndex(2, 1, Part.RE)

    def test_rejects_first_threshold(self, geom):
        with pytest.raises(RibbonValidationError):
            synthesis_index_set(geom, 1)

    @pytest.mark.parametrize("N, expected", [(2, [1]), (3, []), (4, [1, 3]), (5, [2]), (7, [2, 4])])
    def test_base_channels(self, N, expected):
        assert base_channels(N) == expected

    def test_to_dict(self, geom):
        data = synthesis_index_set(geom, 2).to_dict()
        assert data["active"] == ["2-Re", "2-Im", "2+Re"]
        assert len(data["entries"]) == 7


class TestMoments:
    @pytest.fixture
    def setup(self, geom):
        index_set = synthesis_index_set(geom, 2)
        bumps = default_bumps(geom, 2 * index_set.cardinality)
        basis = augmented_basis(geom, 2, 0.01)
        return index_set, bumps, basis, moment_grid(geom, bumps)

    def test_default_bumps(self, geom):
        bumps = default_bumps(geom, 5)
        assert [b.x0 for b in bumps] == pytest.approx([-1.0, -0.5, 0.0, 0.5, 1.0])
        assert all(b.y0 == pytest.approx(geom.L / 2) for b in bumps)

    def test_phi_moments(self, geom, setup):
        index_set, bumps, basis, grid = setup
        phi = solve_phi(bumps, geom, 2, 0.01, index_set=index_set, basis=basis, grid=grid)
        M = moment_matrix(index_set.active, bumps, geom, basis, 2, grid)
        np.testing.assert_allclose(M @ phi.coefficients, [0.0, 0.0, 1.0], atol=1e-8)
        assert phi.residual < 1e-8

    def test_psi_moments(self, geom, setup):
        index_set, bumps, basis, grid = setup
        psis = solve_psis(bumps, geom, 2, 0.01, index_set=index_set, basis=basis, grid=grid)
        M = moment_matrix(index_set.active, bumps, geom, basis, 2, grid)
        np.testing.assert_allclose(M @ psis.coefficients, np.eye(3), atol=1e-8)

    def test_least_norm_rejects_zero(self):
        with pytest.raises(RankDeficiencyError):
            least_norm(np.zeros((2, 4)), np.ones(2))

    def test_least_norm_rejects_too_few_bumps(self):
        rng = np.random.default_rng(0)
        with pytest.raises(RankDeficiencyError):
            least_norm(rng.normal(size=(3, 2)), np.ones(3))

    def test_least_norm_minimum(self):
        solve = least_norm(np.array([[1.0, 1.0]]), np.array([2.0]))
        np.testing.assert_allclose(solve.coefficients, [1.0, 1.0])

    def test_closed_forms(self, geom):
        for check in closed_form_checks(synthesis_index_set(geom, 2), geom):
            assert check.spread < 1e-8, check.name
            assert check.ratio == pytest.approx(check.expected, rel=1e-8), check.name

    @pytest.mark.parametrize("N", [2, 3, 4])
    @pytest.mark.parametrize("eps", [1e-2, 1e-3])
    def test_gram_positive_definite(self, geom, N, eps):
        index_set = synthesis_index_set(geom, N)
        grid = moment_grid(geom, default_bumps(geom, 2 * index_set.cardinality))
        G = gram_matrix(index_set.all_entries, augmented_basis(geom, N, eps), N, grid)
        eigenvalues = np.linalg.eigvalsh(G)
        assert eigenvalues[0] > 1e-10 * eigenvalues[-1]


class TestEnergyRange:
    def test_far_below_threshold(self, geom):
        with pytest.raises(EnergyRangeError):
            _check_energy(geom, 2, 0.05)

    def test_design_amplitude(self, geom):
        ntd = _check_energy(geom, 2, 0.01)
        assert ntd.delta_sin == pytest.approx(near_threshold(geom, 2, 0.01).delta_sin)
        assert ntd.delta_sin < 0.5

    @pytest.mark.parametrize("eps", [1e-2, 1e-3, 1e-4])
    def test_design_amplitude_asymptotics(self, geom, eps):
        ntd = near_threshold(geom, 2, eps)
        ratio = ntd.delta_sin / (math.sqrt(eps) * 2 * math.sqrt(2 * ntd.omega_N))
        assert ratio == pytest.approx(1.0, abs=0.05)


class TestSynthesisReport:
    @pytest.fixture
    def result(self, geom):
        index_set = synthesis_index_set(geom, 2)
        phi = MomentSolve(coefficients=np.ones(4), singular_values=np.ones(3), residual=0.0)
        psis = MomentSolve(coefficients=np.arange(12.0).reshape(4, 3), singular_values=np.ones(3), residual=0.0)
        return SynthesisResult(
            N=2, eps=1e-3, sigma=0.11, delta_design=-0.11, delta=-0.1, index_set=index_set, phi=phi,
            psis=psis, eta=np.array([0.1, 0.2, 0.3]), potential=PotentialSpec.zero(geom.L), iterations=2,
            history=[0.1, 1e-9], final_sigma_min=1e-6,
        )

    def test_every_index_reported(self, result):
        artifact = result.to_artifact()
        assert len(artifact.eta) == len(artifact.psi) == 7
        for alpha in result.index_set.protected:
            assert artifact.eta[alpha.name] == 0.0
            assert artifact.psi[alpha.name] == [0.0] * 4
        assert artifact.eta["2+Re"] == pytest.approx(0.3)
        assert artifact.psi["2+Re"] == [2.0, 5.0, 8.0, 11.0]

    def test_delta_scaling(self, result):
        omega_N = 1.58261
        expected = 0.11 / (math.sqrt(1e-3) * 2 * math.sqrt(2 * omega_N))
        assert result.delta_scaling(omega_N) == pytest.approx(expected)


@pytest.mark.slow
class TestSynthesize:
    EPS = 1e-3

    @pytest.fixture(scope="class")
    def solver_config(self):
        return SolverConfig(J_modes=6, points_per_unit=32)

    @pytest.fixture(scope="class")
    def result(self, solver_config):
        return synthesize(RibbonGeometry(L=1.33), 2, self.EPS, SynthesisConfig(), solver_config)

    def test_trapped_mode(self, geom, result):
        ntd = near_threshold(geom, 2, self.EPS)
        assert result.sigma == pytest.approx(ntd.sigma)
        assert result.iterations <= 20
        assert result.history[-1] <= result.history[0]
        assert result.final_sigma_min < 1e-4
        assert result.potential.sup_norm() <= 1.0 + 1e-9
        assert np.sign(result.delta_design) == -np.sign(ntd.delta_sin)
        assert 0.8 <= result.delta_scaling(ntd.omega_N) <= 1.2

    def test_report(self, result):
        artifact = result.to_artifact()
        assert artifact.active == ["2-Re", "2-Im", "2+Re"]
        assert set(artifact.eta) == {a.name for a in result.index_set.all_entries}
        assert set(artifact.psi) == set(artifact.eta)
        assert artifact.final_sigma_min == result.final_sigma_min

    def test_single_dip_below_threshold(self, geom, result, solver_config):
        grid = 2.5e-4 * 2.0 ** np.arange(9)
        scan = trap_scan(result.potential, geom, 2, grid, config=solver_config)
        assert len(scan.detections) == 1
        assert 5e-4 < scan.detections[0].eps < 2e-3
