import csv
import json

import numpy as np
import pytest

from easc.cli import main

SYSTEM_PW2 = {
    "omega0": 1.0,
    "coupling": 0.08,
    "gamma1": 0.001,
    "gamma2": 0.002,
    "spectrum1": {"type": "power_law", "exponent": 2},
    "spectrum2": {"type": "power_law", "exponent": 2},
}


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, list(reader)


class TestTrajectory:
    def test_ep_coalescence_row(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "system": {
                    "gamma1": 0.02,
                    "gamma2": 0.01,
                    "ei_mode": "off",
                },
                "trajectory": {"omega_min": 0.0, "omega_max": 0.01, "steps": 21},
            },
        )
        out = tmp_path / "out"
        assert main(["trajectory", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_csv(out / "trajectory.csv")
        assert header == ["omega_coupling", "re_w1", "im_w1", "re_w2", "im_w2"]
        # row at Omega = 0.005 shows the coalesced pair
        row = next(r for r in rows if abs(float(r[0]) - 0.005) < 1e-12)
        w1 = complex(float(row[1]), float(row[2]))
        w2 = complex(float(row[3]), float(row[4]))
        assert abs(w1 - w2) < 1e-8
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["subcommand"] == "trajectory"

    def test_manifest_round_trip(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "system": SYSTEM_PW2,
                "trajectory": {"omega_min": 0.0, "omega_max": 0.05, "steps": 11},
            },
        )
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        assert main(["trajectory", "--config", str(cfg), "--out", str(out1)]) == 0
        assert (
            main(
                [
                    "trajectory",
                    "--config",
                    str(out1 / "manifest.json"),
                    "--out",
                    str(out2),
                ]
            )
            == 0
        )
        assert (out1 / "trajectory.csv").read_bytes() == (
            out2 / "trajectory.csv"
        ).read_bytes()


class TestValidation:
    def test_negative_rate_rejected(self, tmp_path):
        cfg = write_config(
            tmp_path, {"system": {"gamma1": -0.01, "gamma2": 0.01}}
        )
        out = tmp_path / "out"
        assert main(["trajectory", "--config", str(cfg), "--out", str(out)]) == 2
        assert not (out / "trajectory.csv").exists()

    def test_unknown_key_rejected(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {"system": {"gamma1": 0.01, "gamma2": 0.01, "gamme3": 1.0}},
        )
        assert (
            main(["trajectory", "--config", str(cfg), "--out", str(tmp_path / "o")])
            == 2
        )

    def test_missing_config_file(self, tmp_path):
        assert (
            main(
                [
                    "trajectory",
                    "--config",
                    str(tmp_path / "nope.json"),
                    "--out",
                    str(tmp_path / "o"),
                ]
            )
            == 2
        )

    def test_override_applies(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "system": {"gamma1": 0.02, "gamma2": 0.01, "ei_mode": "off"},
                "trajectory": {"omega_min": 0.0, "omega_max": 0.01, "steps": 5},
            },
        )
        out = tmp_path / "out"
        code = main(
            [
                "trajectory",
                "--config",
                str(cfg),
                "--out",
                str(out),
                "--set",
                "trajectory.steps=3",
            ]
        )
        assert code == 0
        _, rows = read_csv(out / "trajectory.csv")
        assert len(rows) == 3


class TestDynamics:
    def test_fig5_nonzero_interaction(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "system": SYSTEM_PW2,
                "dynamics": {
                    "t_end": 500.0,
                    "dt": 0.01,
                    "frame": "rotating",
                },
            },
        )
        out = tmp_path / "out"
        assert main(["dynamics", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_csv(out / "observables.csv")
        x = [abs(float(r[header.index("x")])) for r in rows]
        assert max(x) > 0.01
        report = json.loads((out / "dynamics_comparison.json").read_text())
        assert report["max_x_deviation"] <= 1e-6
        header, rows = read_csv(out / "amplitudes.csv")
        assert header == ["t", "re_a1", "im_a1", "re_a2", "im_a2"]


class TestSplitting:
    def test_splitting_csv(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "system": {"gamma1": 0.01, "gamma2": 0.02, "ei_mode": "off"},
                "splitting": {"omega_min": 0.0, "omega_max": 0.02, "steps": 41},
            },
        )
        out = tmp_path / "out"
        assert main(["splitting", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_csv(out / "splitting.csv")
        assert header == ["omega_coupling", "re_splitting"]
        below = [abs(float(r[1])) for r in rows if float(r[0]) < 0.0049]
        assert max(below) < 1e-10


class TestCriticalCoupling:
    def test_exponent_sweep(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "system": {"gamma1": 0.01, "gamma2": 0.02},
                "critical_coupling": {"ratio": 2.0, "exponents": [1, 2]},
            },
        )
        out = tmp_path / "out"
        code = main(["critical-coupling", "--config", str(cfg), "--out", str(out)])
        assert code == 0
        doc = json.loads((out / "critical_coupling.json").read_text())
        values = [r["omega_cp"] for r in doc["results"]]
        assert values[0] > values[1] > 0.0
        assert all(r["converged"] for r in doc["results"])


class TestUsc:
    def test_usc_csv(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "system": {"gamma1": 0.0, "gamma2": 0.0},
                "usc": {"omega_min": 0.001, "omega_max": 0.3, "steps": 16},
            },
        )
        out = tmp_path / "out"
        assert main(["usc", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_csv(out / "usc.csv")
        assert header == [
            "omega_coupling",
            "w_rwa_s",
            "w_rwa_a",
            "w_full_s",
            "w_full_a",
            "overlap_s",
            "overlap_a",
        ]
        for r in rows:
            om = float(r[0])
            assert float(r[3]) == pytest.approx(
                np.sqrt(1 + 2 * om + 4 * om * om), rel=1e-12
            )


class TestPhaseDiagram:
    def test_small_grid(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "system": {
                    "gamma1": 0.01,
                    "gamma2": 0.02,
                    "spectrum1": {"type": "power_law", "exponent": 2},
                    "spectrum2": {"type": "power_law", "exponent": 2},
                },
                "phase_diagram": {
                    "gamma1_min": 1e-3,
                    "gamma1_max": 1.0,
                    "gamma1_points": 10,
                    "omega_min": 1e-4,
                    "omega_max": 0.1,
                    "omega_points": 15,
                    "ratio": 2.0,
                },
            },
        )
        out = tmp_path / "out"
        assert main(["phase-diagram", "--config", str(cfg), "--out", str(out)]) == 0
        header, rows = read_csv(out / "phase_diagram.csv")
        assert header == ["gamma1", "omega", "regime", "delta", "e_int_1", "e_int_2"]
        assert len(rows) == 150
        summary = json.loads((out / "phase_diagram_summary.json").read_text())
        assert summary["omega_cp"] is not None


class TestOracle:
    def test_oracle_report(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "system": {
                    "coupling": 0.05,
                    "gamma1": 0.02,
                    "gamma2": 0.01,
                    "spectrum1": {"type": "power_law", "exponent": 2},
                    "spectrum2": {"type": "power_law", "exponent": 2},
                },
                "oracle": {"mode_count": 2800},
            },
        )
        out = tmp_path / "out"
        assert main(["oracle", "--config", str(cfg), "--out", str(out)]) == 0
        doc = json.loads((out / "oracle.json").read_text())
        assert doc["residual"] < 0.05
        assert max(max(row) for row in doc["relative_errors"]) < 0.05

    def test_short_run_is_numerical_failure(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "system": {
                    "coupling": 0.05,
                    "gamma1": 0.02,
                    "gamma2": 0.01,
                },
                "oracle": {"mode_count": 600, "t_end": 60.0},
            },
        )
        out = tmp_path / "out"
        code = main(["oracle", "--config", str(cfg), "--out", str(out)])
        assert code == 3
        assert not (out / "oracle.json").exists()


class TestTabulatedIngestion:
    def test_spectrum_from_csv(self, tmp_path):
        (tmp_path / "dos.csv").write_text(
            "omega,rho\n0.9,0.5\n1.0,1.0\n1.1,1.5\n", encoding="utf-8"
        )
        cfg = write_config(
            tmp_path,
            {
                "system": {
                    "coupling": 0.05,
                    "gamma1": 0.01,
                    "gamma2": 0.02,
                    "spectrum1": {"type": "tabulated", "path": "dos.csv"},
                    "spectrum2": {"type": "tabulated", "path": "dos.csv"},
                },
                "trajectory": {"omega_min": 0.0, "omega_max": 0.05, "steps": 5},
            },
        )
        out = tmp_path / "out"
        assert main(["trajectory", "--config", str(cfg), "--out", str(out)]) == 0
