import numpy as np
import pytest

from nanoribbon.symplectic import (
    QR,
    Cutoff,
    biorthogonality_table,
    energy_flux,
    incoming_cut,
    outgoing_cut,
    q_section_independence,
    q_value,
    qform,
    qform_coefficients,
    qform_matrix,
    smooth_step,
)
from nanoribbon.waves import augmented_basis, standard_basis
from nanoribbon.waves.families import threshold_waves

OMEGA = 1.57261


class TestSmoothStep:
    def test_limits(self):
        value, deriv = smooth_step(np.array([-1.0, 0.0, 0.5, 1.0, 2.0]))
        np.testing.assert_allclose(value, [0.0, 0.0, 0.5, 1.0, 1.0], atol=1e-15)
        assert deriv[0] == 0.0 and deriv[-1] == 0.0

    def test_derivative_matches_difference(self):
        t = np.linspace(0.05, 0.95, 19)
        h = 1e-6
        _, deriv = smooth_step(t)
        numeric = (smooth_step(t + h)[0] - smooth_step(t - h)[0]) / (2 * h)
        np.testing.assert_allclose(deriv, numeric, atol=1e-6)

    def test_cutoff_sides(self):
        right, left = Cutoff(2.0, 1), Cutoff(2.0, -1)
        np.testing.assert_allclose(right([1.9, 3.1]), [0.0, 1.0])
        np.testing.assert_allclose(left([-3.1, -1.9]), [1.0, 0.0])
        np.testing.assert_allclose(right(np.array([2.4])), left(np.array([-2.4])))

    def test_cutoff_rejects_side(self):
        with pytest.raises(ValueError):
            Cutoff(2.0, 0)


class TestQForm:
    def test_raw_oscillatory_value(self, geom):
        report = biorthogonality_table(geom, omega=OMEGA, include_cut=False)
        raw = next(e for e in report.entries if e.name == "q(w1+, w1+) raw")
        assert raw.value.real == pytest.approx(0.0, abs=1e-10)
        assert raw.value.imag == pytest.approx(4.6204, abs=1e-3)

    def test_normalized_basis(self, geom):
        basis = standard_basis(geom, OMEGA)
        assert q_value(basis[(1, 1)], basis[(1, 1)]) == pytest.approx(1j, abs=1e-12)
        assert q_value(basis[(1, -1)], basis[(1, -1)]) == pytest.approx(-1j, abs=1e-12)
        assert abs(q_value(basis[(1, 1)], basis[(1, -1)])) < 1e-12

    def test_threshold_pairing(self, geom):
        w0, w1 = threshold_waves(geom, 2)
        assert q_value(w0, w1) == pytest.approx(-1.68077, abs=1e-4)

    def test_anti_hermitian(self, geom):
        basis = augmented_basis(geom, 2, 0.01)
        a, b = basis[(1, 1)], basis[(2, -1)]
        assert q_value(a, b) == pytest.approx(-np.conj(q_value(b, a)), abs=1e-12)

    def test_section_independence(self, geom):
        basis = augmented_basis(geom, 2, 0.01)
        for a in basis.keys:
            for b in basis.keys:
                assert q_section_independence(basis[a], basis[b], [-2.0, 0.0, 1.5, 3.7]) < 1e-10

    def test_result_record(self, geom):
        basis = standard_basis(geom, OMEGA)
        result = qform(basis[(1, 1)], basis[(1, 1)], a=0.7)
        assert result.section_x == 0.7
        assert result.to_dict()["value"] == pytest.approx([0.0, 1.0], abs=1e-12)

    def test_energy_flux_sign(self, geom):
        basis = standard_basis(geom, OMEGA)
        assert energy_flux(basis[(1, 1)]) == pytest.approx(OMEGA ** 2, rel=1e-10)
        assert energy_flux(basis[(1, -1)]) == pytest.approx(-(OMEGA ** 2), rel=1e-10)


class TestCoefficientForm:
    def test_matches_quadrature(self, geom):
        basis = augmented_basis(geom, 2, 0.01)
        x = 0.4
        for a in basis.keys:
            for b in basis.keys:
                ca = basis[a].coefficient_vector(x, basis.kappas)
                cb = basis[b].coefficient_vector(x, basis.kappas)
                assert qform_coefficients(ca, cb, geom.L) == pytest.approx(
                    q_value(basis[a], basis[b], x), abs=1e-10
                )

    def test_gram_matrix(self, geom):
        basis = standard_basis(geom, OMEGA)
        columns = np.column_stack([basis[key].coefficient_vector(0.0, basis.kappas) for key in basis.keys])
        expected = np.diag([1j * key[1] for key in basis.keys])
        np.testing.assert_allclose(qform_matrix(columns, geom.L), expected, atol=1e-12)


class TestCutWaves:
    def test_two_sided_form(self, geom):
        basis = standard_basis(geom, OMEGA)
        R0 = geom.R0
        W = outgoing_cut(basis[(1, 1)], 1, R0)
        V = incoming_cut(basis[(1, 1)], 1, R0)
        R = R0 + 1.5
        assert QR(W, W, R) == pytest.approx(1j, abs=1e-10)
        assert QR(V, V, R) == pytest.approx(-1j, abs=1e-10)
        assert abs(QR(W, V, R)) < 1e-10


class TestTables:
    def test_oscillatory_table(self, geom):
        report = biorthogonality_table(geom, omega=OMEGA)
        assert report.passed(1e-9)
        assert report.to_dict()["N"] is None

    def test_near_threshold_table(self, geom):
        report = biorthogonality_table(geom, N=2, eps=0.01)
        assert report.passed(1e-9), [e.name for e in report.entries if e.deviation >= 1e-9]
        names = {e.name for e in report.entries}
        assert {"q(wN0, wN1)", "q(w eps+, w eps-)", "q(wN+, wN-) raw"} <= names
