import numpy as np
import pytest

from nanoribbon.errors import RegimeMismatchError, RibbonValidationError
from nanoribbon.quadrature import TensorGrid
from nanoribbon.spectrum import near_threshold, thresholds
from nanoribbon.waves import (
    FoldedField,
    WaveFamily,
    WaveLabel,
    ZeroField,
    augmented_basis,
    bc_residual,
    dirac_residual,
    gaussian_mode_sum,
    make_wave,
    negative_energy_partner,
    norm_identity_gap,
    standard_basis,
    t1,
    t1_coefficients,
    t2,
    t3,
    t3_coefficients,
    threshold_waves,
)

OMEGA = 1.57261


@pytest.fixture
def points(geom):
    X, Y = np.meshgrid(np.linspace(-2.0, 2.0, 11), np.linspace(0.0, geom.L, 9), indexing="ij")
    return X.ravel(), Y.ravel()


class TestWaveFamilies:
    @pytest.mark.parametrize("tau", [1, -1])
    def test_oscillatory_solves_free_problem(self, geom, points, tau):
        w = make_wave(WaveLabel(WaveFamily.OSCILLATORY_NORMALIZED, 1, tau), geom, omega=OMEGA)
        assert dirac_residual(w, *points) < 1e-10
        assert bc_residual(w, points[0]) < 1e-12

    @pytest.mark.parametrize("family", [WaveFamily.THRESHOLD0, WaveFamily.THRESHOLD1])
    def test_threshold_waves(self, geom, points, family):
        w = make_wave(WaveLabel(family, 2), geom, N=2)
        assert w.omega == pytest.approx(thresholds(geom, 2)[2].omega)
        assert dirac_residual(w, *points) < 1e-10
        assert bc_residual(w, points[0]) < 1e-12

    @pytest.mark.parametrize(
        "family",
        [
            WaveFamily.NEAR_EXP_RAW,
            WaveFamily.NEAR_EXP_ANALYTIC_PLUS,
            WaveFamily.NEAR_EXP_ANALYTIC_MINUS,
            WaveFamily.NEAR_EXP_NORMALIZED,
        ],
    )
    def test_exponential_waves(self, geom, points, family):
        w = make_wave(WaveLabel(family, 2), geom, N=2, eps=0.01)
        assert w.omega == pytest.approx(near_threshold(geom, 2, 0.01).omega_eps)
        assert dirac_residual(w, *points) < 1e-10
        assert bc_residual(w, points[0]) < 1e-12

    def test_threshold_wave_needs_eps_zero(self, geom):
        with pytest.raises(RegimeMismatchError):
            make_wave(WaveLabel(WaveFamily.THRESHOLD0, 2), geom, N=2, eps=0.01)

    def test_too_few_modes(self, geom):
        with pytest.raises(RegimeMismatchError):
            make_wave(WaveLabel(WaveFamily.OSCILLATORY, 2, 1), geom, omega=OMEGA)

    def test_invalid_tau(self):
        with pytest.raises(RibbonValidationError):
            WaveLabel(WaveFamily.OSCILLATORY, 1, 0)

    def test_negative_energy_partner(self, geom, points):
        w = make_wave(WaveLabel(WaveFamily.OSCILLATORY, 1, 1), geom, omega=OMEGA)
        partner = negative_energy_partner(w)
        assert partner.omega == -OMEGA
        assert dirac_residual(partner, *points) < 1e-10
        assert bc_residual(partner, points[0]) < 1e-12

    def test_analytic_pair_limits(self, geom, points):
        # w^{eps+} -> w_N^0 and w^{eps-} -> i w_N^1 as eps -> 0
        w0 = make_wave(WaveLabel(WaveFamily.THRESHOLD0, 2), geom, N=2)
        even = make_wave(WaveLabel(WaveFamily.NEAR_EXP_ANALYTIC_PLUS, 2), geom, N=2, eps=1e-8)
        np.testing.assert_allclose(even.evaluate(*points), w0.evaluate(*points), atol=1e-6)
        w1 = make_wave(WaveLabel(WaveFamily.THRESHOLD1, 2), geom, N=2)
        odd = make_wave(WaveLabel(WaveFamily.NEAR_EXP_ANALYTIC_MINUS, 2), geom, N=2, eps=1e-8)
        np.testing.assert_allclose(odd.evaluate(*points), 1j * w1.evaluate(*points), atol=1e-6)

    def test_analytic_pair_converges_linearly(self, geom, points):
        w0, w1 = threshold_waves(geom, 2)
        even_limit, odd_limit = w0.evaluate(*points), 1j * w1.evaluate(*points)
        eps_values = np.array([1e-2, 1e-3, 1e-4])
        even_gaps, odd_gaps = [], []
        for eps in eps_values:
            even = make_wave(WaveLabel(WaveFamily.NEAR_EXP_ANALYTIC_PLUS, 2), geom, N=2, eps=eps)
            odd = make_wave(WaveLabel(WaveFamily.NEAR_EXP_ANALYTIC_MINUS, 2), geom, N=2, eps=eps)
            even_gaps.append(np.max(np.abs(even.evaluate(*points) - even_limit)))
            odd_gaps.append(np.max(np.abs(odd.evaluate(*points) - odd_limit)))
        for gaps in (even_gaps, odd_gaps):
            slope = np.polyfit(np.log(eps_values), np.log(gaps), 1)[0]
            assert slope == pytest.approx(1.0, abs=0.15)


class TestSymmetries:
    def test_t1_swaps_direction(self, geom, points):
        basis = standard_basis(geom, OMEGA)
        for j, tau in basis.keys:
            np.testing.assert_allclose(
                t1(basis[(j, tau)]).evaluate(*points), 1j * basis[(j, -tau)].evaluate(*points), atol=1e-12
            )

    def test_t3_relation(self, geom, points):
        basis = standard_basis(geom, OMEGA)
        for j, tau in basis.keys:
            phase = np.exp(1j * basis.kappas[j - 1] * geom.L)
            np.testing.assert_allclose(
                t3(basis[(j, tau)]).evaluate(*points), phase * basis[(j, -tau)].evaluate(*points), atol=1e-12
            )

    def test_t1_on_coefficients(self, geom):
        basis = augmented_basis(geom, 2, 0.01)
        w = basis[(1, 1)]
        c = w.coefficient_vector(0.3, basis.kappas)
        mapped = t1_coefficients(c)
        expected = 1j * basis[(1, -1)].coefficient_vector(0.3, basis.kappas)
        np.testing.assert_allclose(mapped, expected, atol=1e-12)


class TestFoldedField:
    def test_spline_reconstruction(self, geom, points):
        basis = standard_basis(geom, OMEGA)
        w = basis[(1, 1)]
        nodes = np.linspace(-3.0, 3.0, 601)
        samples = np.array([w.coefficient_vector(x, basis.kappas) for x in nodes])
        folded = FoldedField.from_samples(geom, OMEGA, basis.kappas, nodes, samples)
        np.testing.assert_allclose(folded.evaluate(*points), w.evaluate(*points), atol=1e-8)
        assert bc_residual(folded, points[0]) < 1e-12


class TestNormIdentity:
    def test_mode_sum(self, geom):
        rng = np.random.default_rng(3)
        j_indices = thresholds(geom, 4).j_indices
        a = rng.normal(size=4) + 1j * rng.normal(size=4)
        b = rng.normal(size=4) + 1j * rng.normal(size=4)
        w = gaussian_mode_sum(geom, j_indices, a, b, center=0.2, width=0.8)
        grid = TensorGrid((-7.0, 7.0), (0.0, geom.L), panels=(16, 8), nodes_per_panel=16)
        result = norm_identity_gap(w, (-7.0, 7.0), grid)
        assert result.lhs > 0
        assert abs(result.gap) < 1e-7 * result.lhs

    def test_zero_field(self, geom):
        result = norm_identity_gap(ZeroField(geom, 1.0), (-1.0, 1.0))
        assert (result.lhs, result.rhs, result.gap) == (0.0, 0.0, 0.0)


class TestReflections:
    def test_t2_squares_to_minus_identity(self, geom, points):
        w = standard_basis(geom, OMEGA)[(1, 1)]
        np.testing.assert_allclose(t2(t2(w)).evaluate(*points), -w.evaluate(*points), atol=1e-14)

    def test_t3_coefficients_involution(self, geom):
        basis = standard_basis(geom, OMEGA)
        c = basis[(1, 1)].coefficient_vector(0.3, basis.kappas)
        twice = t3_coefficients(t3_coefficients(c, basis.kappas, geom.L), basis.kappas, geom.L)
        np.testing.assert_allclose(twice, c, atol=1e-14)


class TestThresholdValues:
    def test_w0_at_origin(self, geom):
        w0, _ = threshold_waves(geom, 2)
        # sgn kappa_2 = -1
        np.testing.assert_allclose(w0.evaluate(0.0, 0.0).ravel(), [1.0, 1j, -1j, -1.0], atol=1e-14)
