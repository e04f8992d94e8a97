import json

import numpy as np
import pytest
from pydantic import ValidationError

from nanoribbon.config import (
    RegimeConfig,
    RunConfig,
    SolverConfig,
    SynthesisConfig,
    configure_workers,
    get_worker_limit,
    load_config_from_json,
)
from nanoribbon.errors import ConfigurationError
from nanoribbon.models import BumpTerm, PotentialSpec


class TestPotentialSpec:
    def test_example_value(self, example_phi):
        assert example_phi.evaluate(-0.32, 0.67) == pytest.approx(0.0474, abs=1e-4)

    def test_json_round_trip(self, example_phi):
        text = example_phi.to_json()
        assert "truncation_tol" not in text
        again = PotentialSpec.from_json(text)
        assert again.to_json() == text

    def test_from_file(self, example_phi, tmp_path):
        path = tmp_path / "phi.json"
        path.write_text(example_phi.to_json())
        assert PotentialSpec.from_json(path) == example_phi
        assert PotentialSpec.from_json(str(path)) == example_phi

    def test_rejects_unknown_fields(self):
        with pytest.raises(ValidationError):
            PotentialSpec.model_validate({"L": 1.33, "R0": 1.0, "shape": "disc"})

    def test_rejects_non_positive_width(self):
        with pytest.raises(ValidationError):
            BumpTerm(amp=1.0, x0=0.0, sx=0.0, y0=0.5, sy=0.2)

    def test_normalized(self):
        spec = PotentialSpec(
            L=1.33, R0=1.0, delta=0.01, terms=[BumpTerm(amp=3.0, x0=0.0, sx=0.3, y0=0.5, sy=0.2)]
        )
        normed = spec.normalized()
        assert normed.sup_norm() == pytest.approx(1.0, abs=1e-12)
        assert normed.delta == pytest.approx(0.03)
        X, Y = np.meshgrid(np.linspace(-1, 1, 9), np.linspace(0, 1.33, 7))
        np.testing.assert_allclose(normed.delta * normed.evaluate(X, Y), spec.delta * spec.evaluate(X, Y))

    def test_symmetry(self, example_phi, symmetric_potential):
        assert symmetric_potential.is_y_symmetric()
        assert not example_phi.is_y_symmetric()

    def test_zero(self):
        zero = PotentialSpec.zero(1.33)
        assert zero.is_zero
        assert zero.extent() == 0.0
        assert zero.sup_norm() == 0.0

    def test_transverse_matrices_symmetric(self, example_phi):
        H = example_phi.transverse_matrices([0.7795, -1.5826, 3.1416])
        assert H.shape == (3, 3, 3)
        np.testing.assert_allclose(H, np.transpose(H, (0, 2, 1)))


class TestRunConfig:
    def test_bare_potential_file(self, example_phi, tmp_path):
        path = tmp_path / "phi.json"
        path.write_text(example_phi.to_json())
        run = RunConfig(**load_config_from_json(path))
        assert run.geometry.L == 1.33
        assert run.geometry.R0 == pytest.approx(5.8)
        assert run.regime is None
        assert run.load_potential() == example_phi

    def test_relative_potential_path(self, example_phi, tmp_path):
        (tmp_path / "phi.json").write_text(example_phi.to_json())
        config = tmp_path / "run.json"
        config.write_text(
            json.dumps(
                {"geometry": {"L": 1.33}, "regime": {"N": 2, "eps": 0.01}, "potential_path": "phi.json"}
            )
        )
        run = RunConfig(**load_config_from_json(config))
        assert run.regime.N == 2
        assert run.load_potential().delta == pytest.approx(0.01)

    def test_width_mismatch(self, example_phi, tmp_path):
        (tmp_path / "phi.json").write_text(example_phi.to_json())
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"geometry": {"L": 1.37}, "potential_path": "phi.json"}))
        run = RunConfig(**load_config_from_json(config))
        with pytest.raises(ConfigurationError):
            run.load_potential()

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_config_from_json(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigurationError):
            load_config_from_json(path)

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigurationError):
            load_config_from_json(path)

    def test_missing_potential_path(self, tmp_path):
        with pytest.raises(ValidationError):
            RunConfig(geometry={"L": 1.33}, potential_path=tmp_path / "absent.json")

    def test_ignores_environment(self, monkeypatch):
        monkeypatch.setenv("GEOMETRY", '{"L": 2.37}')
        with pytest.raises(ValidationError):
            RunConfig()

    def test_regime_needs_energy(self):
        with pytest.raises(ValidationError):
            RegimeConfig(N=2)
        assert RegimeConfig(omega=1.2).omega == 1.2


class TestSolverConfig:
    def test_defaults(self, geom):
        resolved = SolverConfig().resolve(geom, 2, 0.5, 1.57)
        assert resolved.K == 10
        assert resolved.X >= 7.0
        assert resolved.h == pytest.approx(2 * resolved.X / resolved.steps)

    def test_too_few_channels(self, geom):
        with pytest.raises(ConfigurationError):
            SolverConfig(J_modes=5).resolve(geom, 2, 0.5, 1.57)

    def test_interval_inside_support(self, geom):
        with pytest.raises(ConfigurationError):
            SolverConfig(X=0.6).resolve(geom, 2, 0.5, 1.57)

    def test_explicit_grid(self, geom):
        resolved = SolverConfig(X=8.0, nx=401).resolve(geom, 2, 0.5, 1.57)
        assert resolved.steps == 400
        assert resolved.h == pytest.approx(0.04)


class TestSynthesisConfig:
    def test_bounds_order(self):
        with pytest.raises(ValidationError):
            SynthesisConfig(refine_bounds=(1.1, 1.2))

    def test_defaults(self):
        config = SynthesisConfig()
        assert config.R0 == 2.0
        assert config.refine_delta


class TestWorkers:
    def test_rejects_zero(self):
        with pytest.raises(ConfigurationError):
            configure_workers(0)

    def test_limit(self):
        configure_workers(2)
        try:
            assert get_worker_limit() == 2
        finally:
            configure_workers(None)
        assert get_worker_limit() >= 1
