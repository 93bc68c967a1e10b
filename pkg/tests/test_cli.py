import json
import math

import numpy as np

from liepid import cli, verify

PENDULUM_SETS = ["w=1", "b=100", "k_P=1000", "k_I=1", "k_D=600",
                 f"theta_target={math.pi / 2}"]


def run_pendulum(tmp_path, extra=(), t_end="0.5"):
    out = tmp_path / "traj.csv"
    argv = ["pendulum", "--out", str(out), "--quiet",
            "--set", f"t_end={t_end}"]
    for s in (*PENDULUM_SETS, *extra):
        argv += ["--set", s]
    return cli.main(argv), out


class TestScenarioRuns:
    def test_pendulum_writes_csv_and_exits_zero(self, tmp_path, capsys):
        code, out = run_pendulum(tmp_path)
        assert code == 0
        assert out.exists()

    def test_pendulum_summary_reports_finals(self, tmp_path, capsys):
        out = tmp_path / "p.csv"
        argv = ["pendulum", "--out", str(out)]
        for s in PENDULUM_SETS:
            argv += ["--set", s]
        assert cli.main(argv) == 0
        text = capsys.readouterr().out
        assert "theta_final=1.570796" in text
        assert "kI_uI_final=1.000" in text

    def test_vehicle_summary_matches_prediction(self, tmp_path, capsys):
        out = tmp_path / "v.csv"
        argv = ["vehicle", "--out", str(out),
                "--set", "v_x=1", "--set", "v_y=0.1",
                "--set", "omega_0=1", "--set", "k_P=1"]
        assert cli.main(argv) == 0
        text = capsys.readouterr().out
        assert "omega_P_final=0.0916" in text
        assert "predicted=0.0916" in text

    def test_vehicle_integral_summary(self, tmp_path, capsys):
        out = tmp_path / "vi.csv"
        argv = ["vehicle-integral", "--out", str(out),
                "--set", "v_x=1", "--set", "v_y=0.1", "--set", "omega_0=1",
                "--set", "k_P=1", "--set", "k_I=0.1"]
        assert cli.main(argv) == 0
        text = capsys.readouterr().out
        assert "omega_I_final=1.000" in text
        assert "predicted=1.000" in text


class TestConfigHandling:
    def test_missing_required_key_exits_2_and_names_it(self, tmp_path, capsys):
        argv = ["pendulum", "--out", str(tmp_path / "x.csv"),
                "--set", "w=1", "--set", "b=100", "--set", "k_I=1",
                "--set", "k_D=600", "--set", "theta_target=1.5"]
        assert cli.main(argv) == 2
        assert "k_P" in capsys.readouterr().err

    def test_unknown_key_exits_2_and_names_it(self, tmp_path, capsys):
        code, _ = run_pendulum(tmp_path, extra=["bogus=1"])
        assert code == 2
        assert "bogus" in capsys.readouterr().err

    def test_config_file_read_and_overridden_by_set(self, tmp_path):
        cfg = {"w": 1.0, "b": 100.0, "k_P": 1000.0, "k_I": 1.0,
               "k_D": 600.0, "theta_target": 0.5, "t_end": 0.2}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        out = tmp_path / "t.csv"
        assert cli.main(["pendulum", "--config", str(path), "--out", str(out),
                         "--quiet", "--set", "theta_target=0.25"]) == 0
        meta, _ = cli.read_trajectory_csv(str(out))
        assert meta["theta_target"] == "0.25"

    def test_config_echo_includes_defaults(self, tmp_path):
        code, out = run_pendulum(tmp_path)
        assert code == 0
        meta, _ = cli.read_trajectory_csv(str(out))
        # defaults resolved and echoed even though never set
        assert "h" in meta and meta["h"] == "0.001"
        assert "beta" in meta
        raw = out.read_text().splitlines()
        assert all(line.startswith("#") for line in raw[:3])

    def test_bad_set_syntax_exits_2(self, tmp_path, capsys):
        assert cli.main(["pendulum", "--set", "w"]) == 2

    def test_nonnumeric_config_value_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"w": "heavy"}))
        assert cli.main(["pendulum", "--config", str(path)]) == 2


class TestCsvRoundTrip:
    def test_monitor_series_bit_exact(self, tmp_path):
        code, out = run_pendulum(tmp_path, t_end="0.3")
        assert code == 0
        from liepid.pendulum import benchmark_config, simulate_pendulum
        traj = simulate_pendulum(benchmark_config(t_end=0.3))
        _, columns = cli.read_trajectory_csv(str(out))
        assert np.array_equal(columns["t"], traj.times)
        for i, name in enumerate(traj.state_names):
            assert np.array_equal(columns[name], traj.states[:, i])
        for name in ("V", "theta_err", "ki_ui_plus_ub"):
            assert np.array_equal(columns[name], traj.monitors[name])

    def test_column_order_is_t_states_monitors(self, tmp_path):
        code, out = run_pendulum(tmp_path)
        header = [line for line in out.read_text().splitlines()
                  if not line.startswith("#")][0]
        cols = header.split(",")
        assert cols[:4] == ["t", "theta", "omega", "u_I"]
        assert set(cols[4:]) == {"V", "theta_err", "ki_ui_plus_ub"}


class TestSweep:
    def test_single_point_sufficient_verdict_true(self, tmp_path):
        out = tmp_path / "sweep.csv"
        speed = math.hypot(1.0, 0.1)
        phi = math.atan2(0.1, 1.0)
        assert cli.main(["sweep", "--grid", f"phi={phi},",
                         "--set", f"speed={speed}", "--set", "k_I=0.1",
                         "--classifier", "routh-sufficient",
                         "--out", str(out), "--quiet"]) == 0
        rows = [line for line in out.read_text().splitlines()
                if not line.startswith("#")]
        assert rows[0] == "omega_0,k_P,k_I,speed,phi,verdict,margin"
        assert len(rows) == 2
        assert rows[1].split(",")[5] == "1"

    def test_aligned_grid_all_stable(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert cli.main(["sweep", "--grid", "phi=0,", "--grid", "k_P=0.2:1:3",
                         "--classifier", "routh-sufficient",
                         "--out", str(out), "--quiet"]) == 0
        rows = [line.split(",") for line in out.read_text().splitlines()
                if not line.startswith("#") and "verdict" not in line]
        assert len(rows) == 3
        assert all(r[5] == "1" for r in rows)

    def test_eigen_agrees_with_routh_exact(self, tmp_path):
        grids = ["--grid", "phi=-0.6:0.6:5", "--grid", "k_P=0.3:2:4",
                 "--grid", "omega_0=0.5:1.5:3"]
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        assert cli.main(["sweep", *grids, "--classifier", "routh-exact",
                         "--out", str(out_a), "--quiet"]) == 0
        assert cli.main(["sweep", *grids, "--classifier", "eigen",
                         "--out", str(out_b), "--quiet"]) == 0

        def verdicts(path):
            return [line.split(",")[5] for line in path.read_text().splitlines()
                    if not line.startswith("#") and "verdict" not in line]

        assert verdicts(out_a) == verdicts(out_b)

    def test_rows_in_lexicographic_grid_order(self, tmp_path):
        out = tmp_path / "s.csv"
        assert cli.main(["sweep", "--grid", "omega_0=1,2", "--grid", "k_I=0.1,0.2",
                         "--out", str(out), "--quiet"]) == 0
        rows = [line.split(",") for line in out.read_text().splitlines()
                if not line.startswith("#") and "verdict" not in line]
        seen = [(float(r[0]), float(r[2])) for r in rows]
        assert seen == [(1.0, 0.1), (1.0, 0.2), (2.0, 0.1), (2.0, 0.2)]

    def test_empty_grid_exits_2(self, capsys):
        assert cli.main(["sweep", "--quiet"]) == 2


class TestVerifyCommand:
    def test_fresh_build_passes(self, capsys):
        assert cli.main(["verify"]) == 0
        out = capsys.readouterr().out
        names = [line.split()[0] for line in out.splitlines()
                 if " PASS " in line or " FAIL " in line]
        assert len(names) == len(set(names))
        expected = {r.name for r in verify.run_invariant_suite()}
        assert set(names) == expected

    def test_corrupted_tolerance_exits_1(self, monkeypatch, capsys):
        monkeypatch.setitem(verify.DEFAULT_TOLERANCES, "grad_phi_fd", 1e-30)
        assert cli.main(["verify", "--quiet"]) == 1


class TestExitCodes:
    def test_numerical_failure_exits_3(self, tmp_path, capsys, recwarn):
        # undamped loop (k_D far below b) grows ~e^{199 t} and overflows
        argv = ["pendulum", "--out", str(tmp_path / "x.csv"), "--quiet",
                "--set", "w=1", "--set", "b=200", "--set", "k_P=1000",
                "--set", "k_I=1", "--set", "k_D=1",
                "--set", "theta_target=1.5", "--set", "t_end=5"]
        assert cli.main(argv) == 3
        assert "numerical" in capsys.readouterr().err
