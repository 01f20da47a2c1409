"""Command-line driver: files, formats, determinism, exit codes."""
import csv
import math
import subprocess
import sys

import numpy as np
import pytest

import mitospec as ms
from mitospec.cli import ConfigError, parse_initial_condition

P = ms.ModelParams()


def run_cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "mitospec", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
        timeout=600,
    )


def read_csv(path):
    """Returns (comment_line, header, rows) from one of our output files."""
    with open(path, newline="") as fh:
        comment = fh.readline().rstrip("\n")
        rows = list(csv.reader(fh))
    assert comment.startswith("#")
    return comment, rows[0], rows[1:]


@pytest.fixture(scope="module")
def eigen_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("eigen")
    res = run_cli(["eigen", "--out", str(out)], out)
    assert res.returncode == 0, res.stderr
    return out


@pytest.fixture(scope="module")
def simulate_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("sim")
    res = run_cli(["simulate", "--ic", "f0", "--times", "0,1,2", "--out", str(out)], out)
    assert res.returncode == 0, res.stderr
    return out


class TestEigenCommand:
    def test_files_present(self, eigen_dir):
        for name in ("eigen_table.csv", "biorthogonality.csv", "residuals.csv", "eigenfunctions.svg"):
            assert (eigen_dir / name).exists()

    def test_eigen_table_values(self, eigen_dir):
        _, header, rows = read_csv(eigen_dir / "eigen_table.csv")
        assert header[:2] == ["m", "eigenvalue"]
        assert [int(r[0]) for r in rows] == [0, 1, 2, 3, 4, 5]
        eigs = [float(r[1]) for r in rows]
        assert eigs == [1.0, 0.0, -0.5, -0.75, -0.875, -0.9375]

    def test_series_coefficients_start_with_one(self, eigen_dir):
        _, header, rows = read_csv(eigen_dir / "eigen_table.csv")
        col = header.index("series_coefficients")
        for r in rows:
            first = float(r[col].split(",")[0])
            assert first == 1.0

    def test_biorthogonality_is_identity(self, eigen_dir):
        _, header, rows = read_csv(eigen_dir / "biorthogonality.csv")
        n = len(rows)
        for i, r in enumerate(rows):
            for j in range(n):
                got = float(r[1 + j])
                want = 1.0 if i == j else 0.0
                assert abs(got - want) < 1e-8

    def test_residuals_small(self, eigen_dir):
        _, header, rows = read_csv(eigen_dir / "residuals.csv")
        col = header.index("sup_residual_relative")
        for r in rows:
            assert float(r[col]) < 1e-12

    def test_svg_is_wellformed(self, eigen_dir):
        text = (eigen_dir / "eigenfunctions.svg").read_text()
        assert text.startswith("<svg")
        assert text.rstrip().endswith("</svg>")
        # one polyline per plotted eigenfunction
        assert text.count("<polyline") >= 5

    def test_rerun_is_byte_identical(self, eigen_dir, tmp_path):
        res = run_cli(["eigen", "--out", str(tmp_path)], tmp_path)
        assert res.returncode == 0
        for name in ("eigen_table.csv", "biorthogonality.csv", "residuals.csv", "eigenfunctions.svg"):
            assert (tmp_path / name).read_bytes() == (eigen_dir / name).read_bytes()


class TestSimulateCommand:
    def test_files_present(self, simulate_dir):
        assert (simulate_dir / "snapshots.csv").exists()
        assert (simulate_dir / "mass.csv").exists()
        assert not (simulate_dir / "eigenfunctions.svg").exists()

    def test_mass_tracks_exponential(self, simulate_dir):
        _, header, rows = read_csv(simulate_dir / "mass.csv")
        t_col = header.index("t")
        err_col = header.index("relative_error")
        final = rows[-1]
        assert float(final[t_col]) == pytest.approx(2.0, abs=1e-9)
        assert abs(float(final[err_col])) <= 0.01

    def test_expected_mass_column(self, simulate_dir):
        _, header, rows = read_csv(simulate_dir / "mass.csv")
        m_col = header.index("total_mass")
        e_col = header.index("expected_mass")
        m0 = float(rows[0][m_col])
        for r in rows:
            t = float(r[0])
            assert float(r[e_col]) == pytest.approx(m0 * math.exp(t), rel=1e-12)

    def test_snapshots_long_format(self, simulate_dir):
        _, header, rows = read_csv(simulate_dir / "snapshots.csv")
        assert header == ["t", "x", "u"]
        times = sorted({float(r[0]) for r in rows})
        assert times == pytest.approx([0.0, 1.0, 2.0], abs=1e-9)
        per_time = len(rows) // len(times)
        assert per_time == 6001

    def test_stationary_mode_snapshot(self, tmp_path):
        res = run_cli(
            ["simulate", "--ic", "f1", "--times", "0,1", "--cells", "6000", "--out", str(tmp_path)],
            tmp_path,
        )
        assert res.returncode == 0, res.stderr
        _, header, rows = read_csv(tmp_path / "snapshots.csv")
        by_t = {}
        for r in rows:
            by_t.setdefault(float(r[0]), []).append(float(r[2]))
        t0, t1 = (np.array(by_t[t]) for t in sorted(by_t))
        g = ms.make_grid(30.0, 6000)
        drift = ms.weighted_l1_norm(t1 - t0, g, 0)
        assert drift <= 5.0 * g.h

    def test_negative_ic_warns_but_succeeds(self, tmp_path):
        res = run_cli(
            ["simulate", "--ic", "mode-mix(0,1)", "--times", "0,0.5", "--cells", "1500",
             "--xmax", "30", "--out", str(tmp_path)],
            tmp_path,
        )
        assert res.returncode == 0, res.stderr
        assert "negative" in res.stderr.lower()
        assert (tmp_path / "mass.csv").exists()


@pytest.fixture(scope="module")
def expansion_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("exp")
    res = run_cli(
        ["expansion", "--ic", "gaussian(5,1)", "--order", "0", "--k", "2", "--out", str(out)],
        out,
    )
    assert res.returncode == 0, res.stderr
    return out


class TestExpansionCommand:
    def test_files_present(self, expansion_dir):
        assert (expansion_dir / "expansion.csv").exists()
        assert (expansion_dir / "residual_decay.svg").exists()

    def test_fitted_rate_near_stationary(self, expansion_dir):
        _, header, rows = read_csv(expansion_dir / "expansion.csv")
        fit_col = header.index("fitted_rate")
        tgt_col = header.index("target_rate")
        fitted = float(rows[0][fit_col])
        assert float(rows[0][tgt_col]) == 0.0
        assert abs(fitted) <= 0.05

    def test_alpha_columns_present(self, expansion_dir):
        _, header, rows = read_csv(expansion_dir / "expansion.csv")
        assert "alpha_0" in header
        a0 = float(rows[0][header.index("alpha_0")])
        # unnormalized gaussian has mass sqrt(2 pi); alpha_0 = mass / basis mass
        expect = math.sqrt(2 * math.pi) / ms.moment(ms.primal_eigenfunction(0, P), 0)
        assert a0 == pytest.approx(expect, rel=1e-3)

    def test_not_inconclusive(self, expansion_dir):
        _, header, rows = read_csv(expansion_dir / "expansion.csv")
        col = header.index("inconclusive")
        assert rows[0][col] == "0"

    def test_order1_within_15_percent(self, tmp_path):
        res = run_cli(
            ["expansion", "--ic", "gaussian(5,1)", "--order", "1", "--k", "3", "--out", str(tmp_path)],
            tmp_path,
        )
        assert res.returncode == 0, res.stderr
        _, header, rows = read_csv(tmp_path / "expansion.csv")
        fitted = float(rows[0][header.index("fitted_rate")])
        assert fitted == pytest.approx(-0.5, rel=0.15)

    def test_exact_mix_sits_at_floor(self, tmp_path):
        res = run_cli(
            ["expansion", "--ic", "mode-mix(1,1)", "--order", "1", "--out", str(tmp_path)],
            tmp_path,
        )
        assert res.returncode == 0, res.stderr
        _, header, rows = read_csv(tmp_path / "expansion.csv")
        floor = float(rows[0][header.index("floor_estimate")])
        assert rows[0][header.index("inconclusive")] == "1"
        for r in rows:
            assert float(r[header.index("residual")]) <= 2.0 * floor

    def test_svg_logy(self, tmp_path_factory, expansion_dir):
        text = (expansion_dir / "residual_decay.svg").read_text()
        assert "<svg" in text and "</svg>" in text


class TestSpectrumCommand:
    def test_table_values(self, tmp_path):
        res = run_cli(["spectrum", "--a", "0,-0.5,-0.875", "--out", str(tmp_path)], tmp_path)
        assert res.returncode == 0, res.stderr
        _, header, rows = read_csv(tmp_path / "spectrum.csv")
        assert header == ["a", "k_a", "m_a", "dominant_eigenvalues"]
        assert [float(r[0]) for r in rows] == [0.0, -0.5, -0.875]
        assert [float(r[1]) for r in rows] == [1.0, 2.0, 4.0]
        assert [int(r[2]) for r in rows] == [0, 1, 3]
        assert rows[0][3] == "1"
        assert rows[1][3] == "1,0"
        assert rows[2][3] == "1,0,-0.5,-0.75"

    def test_out_of_range_abscissa(self, tmp_path):
        res = run_cli(["spectrum", "--a", "1.5", "--out", str(tmp_path)], tmp_path)
        assert res.returncode == 2


class TestConfigHandling:
    def test_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# spectrum sweep\nb = 1.0\na = 0,-0.5\nout = %s\n" % tmp_path)
        res = run_cli(["spectrum", "--config", str(cfg)], tmp_path)
        assert res.returncode == 0, res.stderr
        assert (tmp_path / "spectrum.csv").exists()

    def test_flag_overrides_config(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("a = 0\nout = %s\n" % tmp_path)
        res = run_cli(["spectrum", "--config", str(cfg), "--a", "-0.5"], tmp_path)
        assert res.returncode == 0, res.stderr
        _, _, rows = read_csv(tmp_path / "spectrum.csv")
        assert len(rows) == 1 and float(rows[0][0]) == -0.5

    def test_unknown_config_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus = 1\n")
        res = run_cli(["spectrum", "--config", str(cfg), "--a", "0"], tmp_path)
        assert res.returncode == 2
        assert "bogus" in res.stderr

    def test_dt_must_match_grid(self, tmp_path):
        res = run_cli(
            ["simulate", "--ic", "f0", "--times", "0,0.1", "--dt", "0.123", "--out", str(tmp_path)],
            tmp_path,
        )
        assert res.returncode == 2

    def test_dt_matching_accepted(self, tmp_path):
        # default grid: 30 / 6000 = 0.005, and g = 1
        res = run_cli(
            ["simulate", "--ic", "f0", "--times", "0,0.05", "--dt", "0.005", "--out", str(tmp_path)],
            tmp_path,
        )
        assert res.returncode == 0, res.stderr

    def test_unknown_ic(self, tmp_path):
        res = run_cli(
            ["simulate", "--ic", "wavelet(3)", "--times", "0,1", "--out", str(tmp_path)],
            tmp_path,
        )
        assert res.returncode == 2

    def test_unknown_command(self, tmp_path):
        res = run_cli(["transmogrify"], tmp_path)
        assert res.returncode == 2


class TestCsvFormat:
    def test_comment_line_has_version_and_params(self, eigen_dir):
        comment, _, _ = read_csv(eigen_dir / "eigen_table.csv")
        assert "mitospec" in comment
        assert "g=" in comment and "b=" in comment

    def test_newline_endings(self, eigen_dir):
        raw = (eigen_dir / "eigen_table.csv").read_bytes()
        assert b"\r" not in raw
        assert raw.endswith(b"\n")

    def test_full_precision(self, simulate_dir):
        # %.17g keeps the round trip exact
        _, header, rows = read_csv(simulate_dir / "mass.csv")
        val = rows[-1][header.index("total_mass")]
        assert float(val) == float("%.17g" % float(val))
        assert "." in val or "e" in val


class TestTailMassWarning:
    def test_gaussian_near_boundary_warns(self, tmp_path):
        res = run_cli(
            ["simulate", "--ic", "gaussian(28,1)", "--times", "0,0.1", "--cells", "1500",
             "--out", str(tmp_path)],
            tmp_path,
        )
        assert res.returncode == 0
        assert "xmax" in res.stderr.lower()

    def test_centered_gaussian_quiet(self, tmp_path):
        res = run_cli(
            ["simulate", "--ic", "gaussian(5,1)", "--times", "0,0.1", "--cells", "1500",
             "--out", str(tmp_path)],
            tmp_path,
        )
        assert res.returncode == 0
        assert "xmax" not in res.stderr.lower()


class TestInitialConditionParsing:
    def setup_method(self):
        self.grid = ms.make_grid(30.0, 1500)

    def test_mode_names(self):
        for spec, m in (("f0", 0), ("f1", 1), ("f3", 3)):
            u = parse_initial_condition(spec, self.grid, P)
            expect = ms.sample(ms.primal_eigenfunction(m, P), self.grid)
            assert np.allclose(u, expect, rtol=0, atol=1e-12)

    def test_gaussian(self):
        u = parse_initial_condition("gaussian(5,1)", self.grid, P)
        x = self.grid.nodes
        assert np.allclose(u, np.exp(-0.5 * (x - 5.0) ** 2), rtol=1e-12)

    def test_indicator(self):
        u = parse_initial_condition("indicator(1,2)", self.grid, P)
        x = self.grid.nodes
        inside = (x >= 1.0) & (x <= 2.0)
        assert np.all(u[inside] == 1.0)
        assert np.all(u[~inside] == 0.0)

    def test_mode_mix(self):
        u = parse_initial_condition("mode-mix(2,3)", self.grid, P)
        expect = 2.0 * ms.sample(ms.primal_eigenfunction(0, P), self.grid) + 3.0 * ms.sample(
            ms.primal_eigenfunction(1, P), self.grid
        )
        assert np.allclose(u, expect, rtol=1e-12, atol=1e-15)

    def test_csv_file(self, tmp_path):
        path = tmp_path / "ic.csv"
        path.write_text("x,u\n0,0\n10,1\n30,0\n")
        u = parse_initial_condition(str(path), self.grid, P)
        assert u[0] == 0.0
        node = np.argmin(np.abs(self.grid.nodes - 10.0))
        assert u[node] == pytest.approx(1.0, abs=1e-12)
        # linear interpolation between the anchor points
        mid = np.argmin(np.abs(self.grid.nodes - 5.0))
        assert u[mid] == pytest.approx(0.5, abs=1e-3)

    def test_csv_must_increase(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0,0\n2,1\n1,0\n")
        with pytest.raises(ConfigError):
            parse_initial_condition(str(path), self.grid, P)

    def test_unknown_spec(self):
        with pytest.raises(ConfigError):
            parse_initial_condition("chirp(1)", self.grid, P)

    def test_bad_arity(self):
        with pytest.raises(ConfigError):
            parse_initial_condition("gaussian(1)", self.grid, P)
