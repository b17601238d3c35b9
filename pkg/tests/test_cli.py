"""End-to-end CLI runs: exit codes, artifacts, manifests, determinism."""

import json

import numpy as np
import pytest

from legendreflow.cli import main
from legendreflow.curveio import (
    read_curve_csv,
    render_svg,
    sha256_of,
    write_curve_csv,
)
from legendreflow.curves import LegendreCurve, uniform_grid
from legendreflow.errors import ValidationError
from legendreflow.spectral import SpectralBeta, reconstruct_centered_curve


def run(argv):
    return main(argv)


class TestSimulate:
    def test_snapshots_and_manifest(self, tmp_path):
        code = run(["simulate", "--n", "1", "--mode", "2:1",
                    "--times", "0,0.5,1", "--outdir", str(tmp_path)])
        assert code == 0
        for idx in range(3):
            assert (tmp_path / f"flow_{idx:03d}.csv").exists()
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert set(manifest["outputs"]) == {f"flow_{i:03d}.csv" for i in range(3)}
        for name, digest in manifest["outputs"].items():
            assert sha256_of(tmp_path / name) == digest

    def test_snapshot_round_trip(self, tmp_path):
        run(["simulate", "--n", "1", "--mode", "2:1", "--times", "0.5",
             "--outdir", str(tmp_path)])
        curve, extras = read_curve_csv(tmp_path / "flow_000.csv")
        assert extras["t"] == 0.5
        assert curve.grid_size == 512
        expected = np.exp(-3.0 * 0.5) * np.cos(2 * curve.grid)
        assert np.max(np.abs(extras["beta"] - expected)) < 1e-12

    def test_deterministic(self, tmp_path):
        for sub in ("a", "b"):
            run(["simulate", "--n", "1", "--mode", "2:1", "--times", "0,1",
                 "--outdir", str(tmp_path / sub)])
        for name in ("flow_000.csv", "flow_001.csv"):
            assert (tmp_path / "a" / name).read_bytes() \
                == (tmp_path / "b" / name).read_bytes()

    def test_conflicting_sources_rejected(self, tmp_path):
        code = run(["simulate", "--mode", "2:1",
                    "--curve", str(tmp_path / "missing.csv"),
                    "--outdir", str(tmp_path)])
        assert code == 2


class TestSelfSimilar:
    def test_single_profile(self, tmp_path):
        code = run(["self-similar", "--n", "1", "--m", "2", "--c1", "1.5",
                    "--outdir", str(tmp_path)])
        assert code == 0
        assert (tmp_path / "profile_n1_m2.csv").exists()
        svg = (tmp_path / "profile_n1_m2.svg").read_text()
        assert svg.startswith("<?xml") and "<polygon" in svg

    def test_catalog(self, tmp_path):
        code = run(["self-similar", "--catalog", "--outdir", str(tmp_path)])
        assert code == 0
        rows = json.loads((tmp_path / "catalog.json").read_text())
        assert len(rows) == 12
        by_key = {(r["n"], r["m"]): r for r in rows}
        assert by_key[(1, 3)]["lap_count"] == 2
        assert by_key[(1, 3)]["cusp_count"] == 3
        assert by_key[(1, 2)]["cusp_count"] == 4
        for r in rows:
            assert (tmp_path / r["svg"]).exists()
            assert (tmp_path / r["csv"]).exists()

    def test_m_equals_n_rejected(self, tmp_path):
        code = run(["self-similar", "--n", "1", "--m", "1", "--c1", "1",
                    "--outdir", str(tmp_path)])
        assert code == 2

    def test_missing_parameters_rejected(self, tmp_path):
        code = run(["self-similar", "--n", "1", "--outdir", str(tmp_path)])
        assert code == 2


class TestReparam:
    def test_normalizes_warped_circle(self, tmp_path):
        u = uniform_grid(512)
        psi = u + 0.3 * np.sin(u)
        nu = np.stack([np.sin(psi), -np.cos(psi)], axis=-1)
        src = tmp_path / "warped.csv"
        write_curve_csv(src, LegendreCurve(positions=nu, normals=nu))
        code = run(["reparam", "--curve", str(src), "--outdir", str(tmp_path)])
        assert code == 0
        out, extras = read_curve_csv(tmp_path / "normalized.csv")
        assert np.max(np.abs(extras["ell"] - 1.0)) < 1e-4

    def test_missing_file_rejected(self, tmp_path):
        code = run(["reparam", "--curve", str(tmp_path / "nope.csv"),
                    "--outdir", str(tmp_path)])
        assert code == 2


class TestCusps:
    def test_two_mode_series(self, tmp_path):
        code = run(["cusps", "--n", "1", "--a0", "0.01", "--mode", "2:1",
                    "--times", "0.5,2.0", "--outdir", str(tmp_path)])
        assert code == 0
        lines = (tmp_path / "zero_counts.csv").read_text().strip().splitlines()
        assert lines[0] == "t,z,events"
        assert lines[1].split(",")[1] == "4"
        assert lines[2].split(",")[1] == "0"
        report = json.loads((tmp_path / "cusp_report.json").read_text())
        assert len(report["events"]) == 1
        assert abs(report["events"][0]["t_event"] - np.log(100.0) / 4.0) < 1e-3


class TestConverge:
    def test_two_mode_rate(self, tmp_path):
        code = run(["converge", "--n", "1", "--mode", "2:1", "--mode", "4:0.1",
                    "--outdir", str(tmp_path)])
        assert code == 0
        report = json.loads((tmp_path / "convergence.json").read_text())
        assert report["predicted_rate"] == -12.0
        assert abs(report["fitted_rate"] + 12.0) < 0.12
        assert report["leading_mode"] == 2


class TestOracleCheck:
    def test_beta_equation(self, tmp_path):
        code = run(["oracle-check", "--equation", "beta", "--n", "1",
                    "--mode", "2:1", "--samples", "256", "--dt", "1e-3",
                    "--T", "0.25", "--outdir", str(tmp_path)])
        assert code == 0
        report = json.loads((tmp_path / "oracle_check.json").read_text())
        assert report["error"] < 5e-5
        assert report["observed_order"] >= 1.9

    def test_phi_equation(self, tmp_path):
        code = run(["oracle-check", "--equation", "phi", "--samples", "128",
                    "--dt", "2e-4", "--T", "1.0", "--outdir", str(tmp_path)])
        assert code == 0
        report = json.loads((tmp_path / "oracle_check.json").read_text())
        assert report["gradient_bounds_ok"]
        assert report["winding_ok"]


class TestCurveIO:
    def test_round_trip_preserves_bits(self, tmp_path):
        s = SpectralBeta.from_modes(1, modes={2: (1.0, -0.3)})
        curve = reconstruct_centered_curve(s, 128)
        path = write_curve_csv(tmp_path / "c.csv", curve)
        loaded, _ = read_curve_csv(path)
        assert np.array_equal(loaded.positions, curve.positions)
        assert np.array_equal(loaded.normals, curve.normals)

    def test_malformed_csv_rejected(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n0,0\n")
        with pytest.raises(ValidationError):
            read_curve_csv(bad)

    def test_svg_is_deterministic(self):
        u = uniform_grid(64)
        pts = np.stack([np.cos(u), np.sin(u)], axis=-1)
        assert render_svg(pts) == render_svg(pts)

    def test_svg_rejects_point(self):
        with pytest.raises(ValidationError):
            render_svg(np.zeros((10, 2)))
