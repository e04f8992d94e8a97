import csv
import json

import numpy as np
import pytest

from nanoribbon import __version__
from nanoribbon.main import EXIT_OK, EXIT_VALIDATION, run_command


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


@pytest.fixture
def zero_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps(
            {
                "geometry": {"L": 1.33},
                "regime": {"N": 2, "eps": 0.01},
                "solver": {"J_modes": 6, "points_per_unit": 24, "margin": 3.0},
            }
        )
    )
    return path


class TestSpectrumCommands:
    def test_thresholds(self, tmp_path):
        out = tmp_path / "thresholds.csv"
        assert run_command(["thresholds", "--L", "1.33", "--count", "3", "--out", str(out)]) == EXIT_OK
        rows = read_csv(out)
        assert list(rows[0]) == ["k", "omega", "kappa", "j"]
        np.testing.assert_allclose([float(r["omega"]) for r in rows], [0.77949, 1.58261, np.pi], atol=1e-4)

    def test_thresholds_stdout(self, capsys):
        assert run_command(["thresholds", "--L", "1.33", "--count", "2"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "k,omega,kappa,j"
        assert len(lines) == 3

    def test_flags_keep_their_case(self, tmp_path):
        out = tmp_path / "thresholds.csv"
        args = ["thresholds", "--L", "1.33", "--R0", "2.5", "--count", "1", "--out", str(out)]
        assert run_command(args) == EXIT_OK
        assert len(read_csv(out)) == 1

    def test_lowercase_width_rejected(self):
        assert run_command(["thresholds", "--l", "1.33"]) == EXIT_VALIDATION

    def test_missing_width(self):
        assert run_command(["thresholds", "--count", "3"]) == EXIT_VALIDATION

    def test_unsupported_width(self, capsys):
        assert run_command(["thresholds", "--L", "1.5"]) == EXIT_VALIDATION
        assert "usage: nanoribbon" in capsys.readouterr().err

    def test_dispersion(self, tmp_path):
        out = tmp_path / "dispersion.csv"
        args = ["dispersion", "--L", "1.33", "--lambda", "0:1:0.5", "--branches", "2", "--out", str(out)]
        assert run_command(args) == EXIT_OK
        rows = read_csv(out)
        assert list(rows[0]) == ["j", "kappa_sign", "lambda", "omega"]
        assert len(rows) == 2 * 2 * 3


class TestGlobalFlags:
    def test_version(self, capsys):
        assert run_command(["--version"]) == EXIT_OK
        assert __version__ in capsys.readouterr().out

    def test_bad_thread_count(self):
        assert run_command(["--threads", "0", "thresholds", "--L", "1.33"]) == EXIT_VALIDATION


class TestWaveCommands:
    def test_wave_csv(self, tmp_path):
        out, report = tmp_path / "wave.csv", tmp_path / "wave.json"
        args = [
            "wave", "--L", "1.33", "--family", "oscillatory_normalized", "--j", "1", "--tau", "+",
            "--omega", "1.57261", "--grid", "3x2", "--out", str(out), "--report", str(report),
        ]
        assert run_command(args) == EXIT_OK
        rows = read_csv(out)
        assert len(rows) == 6
        assert list(rows[0])[:4] == ["x", "y", "Re_u", "Im_u"]
        residuals = json.loads(report.read_text())
        assert residuals["residuals"]["dirac"] < 1e-10

    def test_wave_needs_energy(self):
        assert run_command(["wave", "--L", "1.33", "--family", "oscillatory"]) == EXIT_VALIDATION

    def test_qcheck(self, tmp_path):
        out = tmp_path / "q.json"
        assert run_command(["qcheck", "--L", "1.33", "--N", "2", "--eps", "0.01", "--out", str(out)]) == EXIT_OK
        table = json.loads(out.read_text())
        assert table["max_deviation"] < 1e-9
        assert table["N"] == 2

    def test_qcheck_needs_energy(self):
        assert run_command(["qcheck", "--L", "1.33"]) == EXIT_VALIDATION


class TestScatteringCommands:
    def test_smatrix_zero_potential(self, zero_config, tmp_path):
        out = tmp_path / "S.json"
        assert run_command(["smatrix", "--config", str(zero_config), "--out", str(out)]) == EXIT_OK
        artifact = json.loads(out.read_text())
        S = np.array(artifact["S"]["real"]) + 1j * np.array(artifact["S"]["imag"])
        np.testing.assert_allclose(S, np.eye(4), atol=1e-8)
        assert artifact["labels"] == ["1+", "1-", "2+", "2-"]
        assert artifact["criterion"]["sigma_min"] == pytest.approx(0.34979, abs=1e-4)

    def test_born_zero_potential(self, zero_config, tmp_path):
        out = tmp_path / "born.json"
        assert run_command(["born", "--config", str(zero_config), "--out", str(out)]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["N"] == 2
        assert np.all(np.array(payload["matrix"]["real"]) == 0)

    def test_missing_config(self, tmp_path):
        assert run_command(["smatrix", "--config", str(tmp_path / "absent.json")]) == EXIT_VALIDATION

    def test_scan_rejects_threshold(self, zero_config):
        assert run_command(["trapscan", "--config", str(zero_config), "--eps=-0.01:0.01:3"]) == EXIT_VALIDATION

    def test_synthesize_rejects_first_threshold(self, tmp_path, capsys):
        args = ["synthesize", "--L", "1.33", "--N", "1", "--eps", "0.01", "--out", str(tmp_path / "phi.json")]
        assert run_command(args) == EXIT_VALIDATION
        assert "greater than or equal to 2" in capsys.readouterr().err
