import math

import numpy as np
import pytest

from nanoribbon.errors import EnergyRangeError, ThresholdCollisionError, UnsupportedGeometryError
from nanoribbon.spectrum import (
    RibbonGeometry,
    dispersion_curves,
    near_threshold,
    propagating_modes,
    spacing_bound,
    strip_gamma,
    threshold_count_below,
    thresholds,
    wavenumbers,
)


class TestGeometry:
    def test_integer_two_l_rejected(self):
        with pytest.raises(UnsupportedGeometryError):
            RibbonGeometry(L=1.5)

    def test_integer_l_rejected(self):
        with pytest.raises(UnsupportedGeometryError):
            RibbonGeometry(L=2.0)

    def test_kappa(self, geom):
        assert geom.kappa(0) == pytest.approx(math.pi)
        assert geom.kappa(-1) == pytest.approx(math.pi * 0.33 / 1.33)

    def test_energy_units(self, geom):
        assert geom.to_ev(1.0, hopping_ev=2.7) == pytest.approx(2 * 2.7 / math.sqrt(3))


class TestThresholds:
    def test_first_three(self, geom):
        table = thresholds(geom, 3)
        np.testing.assert_allclose(
            table.omegas, [math.pi * 0.33 / 1.33, math.pi * 0.67 / 1.33, math.pi], rtol=1e-12
        )
        np.testing.assert_allclose(table.omegas, [0.77955, 1.58261, math.pi], atol=1e-4)
        assert list(table.j_indices) == [-1, -2, 0]

    def test_strictly_increasing(self):
        table = thresholds(RibbonGeometry(L=2.37), 12)
        assert np.all(np.diff(table.omegas) > 0)

    def test_spacing_bound(self, geom):
        assert spacing_bound(geom) == pytest.approx(0.80310, abs=1e-4)
        table = thresholds(geom, 10)
        assert np.min(np.diff(table.omegas)) >= spacing_bound(geom) - 1e-12

    def test_matches_enumeration_at_random_widths(self):
        rng = np.random.default_rng(11)
        widths = [L for L in rng.uniform(0.3, 10.0, size=40) if abs(2 * L - round(2 * L)) > 1e-3][:20]
        assert len(widths) == 20
        for L in widths:
            geom = RibbonGeometry(L=L)
            table = thresholds(geom, 12)
            # |kappa_j| over a window wide enough for the first 12 values
            span = int(math.ceil(L)) + 20
            enumerated = sorted(abs(math.pi + math.pi * j / L) for j in range(-span, span + 1))[:12]
            np.testing.assert_allclose(table.omegas, enumerated, rtol=0, atol=1e-10)
            gaps = np.diff(table.omegas)
            assert np.all(gaps >= spacing_bound(geom) - 1e-12)
            assert np.all(gaps <= math.pi / L + 1e-12)

    def test_count_below(self, geom):
        assert threshold_count_below(geom, 1.0) == 1
        assert threshold_count_below(geom, 1.6) == 2
        assert threshold_count_below(geom, 0.5) == 0

    def test_to_dict_columns(self, geom):
        assert set(thresholds(geom, 1)[1].to_dict()) == {"k", "omega", "kappa", "j"}


class TestPropagatingModes:
    def test_single_mode(self, geom):
        modes = propagating_modes(geom, 1.57261)
        assert len(modes) == 1
        assert modes[0].kappa_j == pytest.approx(0.77955, abs=1e-4)
        assert modes[0].lambda_j == pytest.approx(1.36580, abs=1e-4)

    def test_below_first_threshold(self, geom):
        assert propagating_modes(geom, 0.5) == []

    def test_two_modes_above_second_threshold(self, geom):
        modes = propagating_modes(geom, 1.58261 + 0.01)
        assert len(modes) == 2
        assert modes[1].kappa_j == pytest.approx(-1.58261, abs=1e-5)

    def test_threshold_collision(self, geom):
        with pytest.raises(ThresholdCollisionError):
            propagating_modes(geom, thresholds(geom, 2)[2].omega)

    def test_wavenumbers_roots(self, geom):
        roots = wavenumbers(geom, 1.2, [-1, -2])
        assert roots[0].imag == 0 and roots[0].real > 0
        assert roots[1].real == pytest.approx(0.0) and roots[1].imag > 0
        np.testing.assert_allclose(roots[2:], -roots[:2])


class TestNearThreshold:
    def test_lambda_and_d(self, geom):
        ntd = near_threshold(geom, 2, 0.01)
        assert ntd.lambda_eps.real == 0.0
        assert ntd.lambda_eps.imag == pytest.approx(0.177629, abs=1e-6)
        assert ntd.d.real == pytest.approx(-0.93883, abs=1e-5)
        assert ntd.d.imag == pytest.approx(-0.34440, abs=2e-5)
        assert abs(ntd.d) == pytest.approx(1.0, abs=1e-14)

    def test_sigma_relation(self, geom):
        ntd = near_threshold(geom, 2, 0.01)
        assert ntd.d == pytest.approx(-np.exp(1j * ntd.sigma), abs=1e-14)
        assert ntd.delta_sin == pytest.approx(math.sin(ntd.sigma))

    def test_eps_out_of_range(self, geom):
        with pytest.raises(EnergyRangeError):
            near_threshold(geom, 2, 0.0)
        with pytest.raises(EnergyRangeError):
            near_threshold(geom, 2, 10.0)

    def test_strip(self, geom):
        gamma = strip_gamma(geom, 2, 0.01)
        assert gamma == pytest.approx(0.5 * (0.17763 + 2.54200), abs=1e-4)


class TestDispersion:
    def test_inverse_of_modes(self, geom):
        rows = dispersion_curves(geom, [1.36580], 1)
        positive = [r for r in rows if r.omega > 0]
        assert positive[0].omega == pytest.approx(1.57261, abs=1e-4)

    def test_both_signs(self, geom):
        rows = dispersion_curves(geom, np.linspace(-1, 1, 5), 2)
        assert len(rows) == 2 * 2 * 5
        energies = np.array([r.omega for r in rows])
        np.testing.assert_allclose(np.sort(energies[energies > 0]), np.sort(-energies[energies < 0]))
        assert set(rows[0].to_dict()) == {"j", "kappa_sign", "lambda", "omega"}
