import math

import numpy as np
import pytest

from qst.cli import main
from qst.io import (
    ORACLE_HEADER,
    SWEEP_HEADER,
    TRAJECTORY_HEADER,
    ConfigError,
    RunConfig,
    fmt,
    parse_config,
    parse_number,
    read_csv,
    read_summary,
    render_config,
)


def write_config(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def column(path, name):
    header, rows = read_csv(path)
    k = header.index(name)
    return np.array([float(r[k]) for r in rows])


class TestConfig:
    def test_parse_and_expressions(self):
        cfg = parse_config("# comment\ng1 = 1\nj = 2/sqrt(3)  # pst\ntheta = pi/4\nxi = 0.01\n")
        assert cfg.j == pytest.approx(2 / math.sqrt(3))
        assert cfg.theta == pytest.approx(math.pi / 4)
        assert cfg.rates().kappa_a == 0.01 and cfg.rates().gamma_2 == 0.001

    @pytest.mark.parametrize("text,line", [
        ("g1 = 1\nbogus = 3\n", 2),
        ("g1 = 1\n\ng1 = 2\n", 3),
        ("g1 1\n", 1),
        ("theta = __import__('os')\n", 1),
        ("xi = 0.03\nkappa_a = 0.1\n", 2),
        ("fock_dim = 2.5\n", 1),
    ])
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ConfigError) as info:
            parse_config(text, "c.cfg")
        assert info.value.line == line
        assert f"c.cfg:{line}:" in str(info.value)

    def test_semantic_validation(self):
        with pytest.raises(ConfigError):
            parse_config("theta = 3\n")
        with pytest.raises(ConfigError):
            parse_config("dt = 0\n")

    def test_explicit_rates(self):
        cfg = parse_config("kappa_a = 0.1\nGamma_2 = 0.2\n")
        r = cfg.rates()
        assert (r.kappa_a, r.kappa_b, r.Gamma_2) == (0.1, 0.0, 0.2)

    def test_round_trip(self):
        cfg = parse_config("g1 = 1.1\nj = 2/sqrt(3)\ntheta = pi/5\nxi = 0.01\nzeta = 0.002\ndt = 0.001\nt_max = 3\n")
        assert parse_config(render_config(cfg)) == cfg
        assert parse_config(render_config(RunConfig())) == RunConfig()

    def test_parse_number(self):
        assert parse_number("-1e-3") == -0.001
        assert parse_number("3*pi/2") == pytest.approx(3 * math.pi / 2)
        for bad in ("", "1/0", "x", "pi(", "2**2000.0"):
            with pytest.raises(ValueError):
                parse_number(bad)

    def test_fmt(self):
        assert fmt(-1e-12) == "0.000000"
        assert fmt(0.1234567) == "0.123457"
        assert fmt(1) == "1.000000"


class TestEvolve:
    def test_stationary_theta(self, tmp_path):
        cfg = write_config(tmp_path, "theta = pi/2\nj = 1.16\nt_max = 10\n")
        assert main(["evolve", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
        header, rows = read_csv(tmp_path / "o" / "trajectory.csv")
        assert tuple(header) == TRAJECTORY_HEADER
        assert all(r[header.index("F")] == "1.000000" for r in rows)
        f = column(tmp_path / "o" / "trajectory.csv", "F")
        assert np.abs(f - 1).max() <= 1e-9

    def test_outputs_bounded_and_deterministic(self, tmp_path):
        cfg = write_config(tmp_path, "j = 1.2\nt_max = 8\n")
        for out in ("a", "b"):
            assert main(["evolve", "--config", cfg, "--out", str(tmp_path / out)]) == 0
        a = (tmp_path / "a" / "trajectory.csv").read_bytes()
        assert a == (tmp_path / "b" / "trajectory.csv").read_bytes()
        assert b"\r" not in a
        header, rows = read_csv(tmp_path / "a" / "trajectory.csv")
        values = np.array([[float(x) for x in r] for r in rows])
        assert values[:, 2:7].min() >= 0 and values[:, 2:7].max() <= 1
        assert all(len(x.split(".")[1]) == 6 for x in rows[5])

    def test_summary_round_trip(self, tmp_path):
        text = "g1 = 1\ng2 = 1\nj = 1.16\ntheta = pi/4\nxi = 0.03\nzeta = 0.001\nt_max = 6\n"
        cfg_path = write_config(tmp_path, text)
        assert main(["evolve", "--config", cfg_path, "--out", str(tmp_path)]) == 0
        echoed, results = read_summary(tmp_path / "summary.txt")
        assert echoed == parse_config(text)
        assert results["regime"] == "intermediate"
        assert float(results["F_star"]) == pytest.approx(0.9617, abs=2e-3)
        assert float(results["max_trace_dev"]) <= 1e-6
        assert float(results["min_eig"]) >= -1e-6
        assert "runtime_s" in results

    def test_output_path_from_config(self, tmp_path):
        out = tmp_path / "from_cfg"
        cfg = write_config(tmp_path, f"t_max = 1\noutput_path = {out}\n")
        assert main(["evolve", "--config", cfg]) == 0
        assert (out / "trajectory.csv").exists() and (out / "summary.txt").exists()

    def test_malformed_config_exit_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "g1 = 1\nwat = 2\n")
        assert main(["evolve", "--config", cfg]) == 2
        assert ":2:" in capsys.readouterr().err
        assert main(["evolve", "--config", str(tmp_path / "missing.cfg")]) == 2

    def test_divergence_exit_3(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "j = 10\ndt = 0.5\nt_max = 300\nrecord_every = 1\n")
        with pytest.warns(RuntimeWarning):
            assert main(["evolve", "--config", cfg, "--out", str(tmp_path)]) == 3
        assert "diverged" in capsys.readouterr().err

    def test_fig1_preset_ceiling(self, tmp_path):
        cfg = write_config(tmp_path, "j = 0.1\nxi = 0.03\nzeta = 0.001\ntheta = pi/4\ng1 = 1\ng2 = 1\n")
        assert main(["evolve", "--config", cfg, "--out", str(tmp_path)]) == 0
        _, results = read_summary(tmp_path / "summary.txt")
        assert float(results["F_star"]) < 0.70

    def test_fig2_preset_level(self, tmp_path):
        cfg = write_config(tmp_path, "j = 10\nxi = 0.03\nzeta = 0.001\ntheta = pi/4\ng1 = 1\ng2 = 1\n")
        assert main(["evolve", "--config", cfg, "--out", str(tmp_path)]) == 0
        _, results = read_summary(tmp_path / "summary.txt")
        assert float(results["F_star"]) == pytest.approx(0.75, abs=0.05)


class TestSweep:
    def test_j_axis(self, tmp_path):
        cfg = write_config(tmp_path, "t_max = 6\n")
        assert main(["sweep", "--config", cfg, "--axis", "J", "--from", "1.0", "--to", "1.3", "--points", "4",
                     "--out", str(tmp_path)]) == 0
        header, rows = read_csv(tmp_path / "sweep_J.csv")
        assert tuple(header) == SWEEP_HEADER
        np.testing.assert_allclose([float(r[0]) for r in rows], [1.0, 1.1, 1.2, 1.3])
        assert all(r[3] == "intermediate" for r in rows)

    def test_xi_values(self, tmp_path):
        cfg = write_config(tmp_path, "j = 10\n")
        assert main(["sweep", "--config", cfg, "--axis", "xi", "--values", "0.003,0.01,0.03",
                     "--out", str(tmp_path)]) == 0
        f = column(tmp_path / "sweep_xi.csv", "F_star")
        assert f[0] > 0.95 and f[1] > 0.90 and f[2] < f[1] < f[0]

    @pytest.mark.parametrize("extra", [["--points", "0", "--from", "0.1", "--to", "1"],
                                       ["--values", "1.0,0.5"],
                                       ["--from", "0.1"]])
    def test_bad_grid_exit_2(self, tmp_path, extra):
        cfg = write_config(tmp_path, "t_max = 1\n")
        assert main(["sweep", "--config", cfg, "--axis", "J", "--out", str(tmp_path)] + extra) == 2


class TestOracle:
    def test_pst(self, tmp_path):
        assert main(["oracle", "--g1", "1", "--j", str(2 / math.sqrt(3)), "--g2", "1", "--tmax", "4",
                     "--out", str(tmp_path)]) == 0
        header, _ = read_csv(tmp_path / "oracle.csv")
        assert tuple(header) == ORACLE_HEADER
        t, p4 = column(tmp_path / "oracle.csv", "t"), column(tmp_path / "oracle.csv", "p4")
        k = int(np.argmax(p4))
        assert p4[k] >= 0.999999 and abs(t[k] - 2.7207) < 1e-3

    def test_qubit_cavity_rabi(self, tmp_path):
        assert main(["oracle", "--g1", "1", "--j", "0", "--g2", "1", "--tmax", "5", "--out", str(tmp_path)]) == 0
        t, p1 = column(tmp_path / "oracle.csv", "t"), column(tmp_path / "oracle.csv", "p1")
        # six-decimal output rounding bounds the agreement
        assert np.abs(p1 - np.cos(t) ** 2).max() <= 5e-7 + 1e-9

    def test_decoupled_qubit(self, tmp_path):
        assert main(["oracle", "--g1", "0", "--j", "1", "--g2", "0", "--tmax", "3", "--out", str(tmp_path)]) == 0
        assert np.all(column(tmp_path / "oracle.csv", "p1") == 1.0)

    def test_negative_coupling_exit_2(self, tmp_path):
        assert main(["oracle", "--g1", "-1", "--j", "1", "--g2", "1", "--tmax", "1", "--out", str(tmp_path)]) == 2


class TestReproduce:
    def test_unknown_id(self, tmp_path):
        assert main(["reproduce", "fig9", "--out", str(tmp_path)]) == 2

    def test_fig1_files(self, tmp_path):
        assert main(["reproduce", "fig1", "--out", str(tmp_path)]) == 0
        names = sorted(p.name for p in tmp_path.glob("fig1_xi*.csv"))
        assert names == ["fig1_xi0.003.csv", "fig1_xi0.01.csv", "fig1_xi0.03.csv"]
        manifest = (tmp_path / "fig1_manifest.txt").read_text()
        assert "fig1_xi0.01.csv.xi = 0.010000" in manifest
        assert "fig1_xi0.03.csv.J = 0.100000" in manifest

    def test_fig3b_p4_dominates(self, tmp_path):
        assert main(["reproduce", "fig3b", "--out", str(tmp_path)]) == 0
        path = tmp_path / "fig3b_populations.csv"
        p1, p2, p3, p4 = (column(path, f"P{n}") for n in (1, 2, 3, 4))
        # P3 starts at the prepared cos^2(theta); compare against its revivals only
        first_min = int(np.argmax(np.diff(p3) > 0))
        assert p4.max() > max(p1.max(), p2.max(), p3[first_min:].max())

    def test_fig3d_monotone(self, tmp_path):
        assert main(["reproduce", "fig3d", "--out", str(tmp_path)]) == 0
        f = column(tmp_path / "fig3d_theta.csv", "F_star")
        assert len(f) == 9 and np.all(np.diff(f) >= 0)
