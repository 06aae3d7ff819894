import json

from duffamp.cli import main


def run(*args):
    return main(list(args))


BISTABLE_FLAGS = ["--gamma", "2", "--delta", "-2", "--chi", "1"]


class TestSteady:
    def test_single_pump_table(self, capsys):
        code = run("steady", *BISTABLE_FLAGS, "--eps-p", "0.9747")
        assert code == 0
        out = capsys.readouterr().out
        assert "middle" in out and "lower" in out and "upper" in out
        assert out.count("false") == 1  # only the middle row is unstable

    def test_zero_pump(self, capsys):
        assert run("steady", *BISTABLE_FLAGS, "--eps-p", "0") == 0
        out = capsys.readouterr().out
        assert "lower" in out

    def test_curve_csv(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        code = run("steady", "--gamma", "2", "--delta", "-1", "--chi", "1",
                   "--curve", "0:1.5:51", "--out", str(out))
        assert code == 0
        header = out.read_text().splitlines()[0]
        assert header == "eps_p,I_p,n0,branch,stable,re_lambda_plus,im_lambda_plus,lambda_sq,phi0"
        assert (tmp_path / "curve.meta.json").exists()

    def test_curve_requires_out(self, capsys):
        assert run("steady", *BISTABLE_FLAGS, "--curve", "0:1:11") == 2

    def test_requires_pump_or_curve(self):
        assert run("steady", *BISTABLE_FLAGS) == 2


class TestSurfaces:
    def test_gain_csv(self, tmp_path):
        out = tmp_path / "gain.csv"
        code = run("gain", *BISTABLE_FLAGS, "--n0", "0.05:0.45:11",
                   "--signal-detuning", "-6:6:21", "--out", str(out))
        assert code == 0
        header = out.read_text().splitlines()[0]
        assert header == "delta,n0,branch,lambda_sq,nu,g,near_critical"

    def test_gain_requires_out(self):
        assert run("gain", *BISTABLE_FLAGS) == 2

    def test_noise_theta_modes_give_distinct_datasets(self, tmp_path):
        args = ["noise", *BISTABLE_FLAGS, "--n0", "0.05:0.45:6",
                "--signal-detuning", "-4:4:11"]
        a, b = tmp_path / "opt.csv", tmp_path / "fix.csv"
        assert run(*args, "--theta-mode", "optimal", "--out", str(a)) == 0
        assert run(*args, "--theta-mode", "fixed", "--theta", "0.3", "--out", str(b)) == 0
        assert a.read_text() != b.read_text()

    def test_minforce_dips_below_reference(self, tmp_path):
        out = tmp_path / "minforce.csv"
        code = run("minforce", "--gamma", "2", "--delta", "-1", "--chi", "1",
                   "--out", str(out))
        assert code == 0
        rows = out.read_text().splitlines()
        header = rows[0].split(",")
        minimum = [float(row.split(",")[header.index("eps_s_min")]) for row in rows[1:]]
        assert min(minimum) < 0.5  # below 0.25 * gamma

    def test_empty_grid_exits_3(self, tmp_path):
        code = run("gain", *BISTABLE_FLAGS, "--n0", "0.6:0.7:5",
                   "--out", str(tmp_path / "x.csv"))
        assert code == 3

    def test_plot_writes_png(self, tmp_path):
        out = tmp_path / "gain.csv"
        code = run("gain", *BISTABLE_FLAGS, "--n0", "0.05:0.45:8",
                   "--signal-detuning", "-6:6:11", "--out", str(out), "--plot")
        assert code == 0
        assert (tmp_path / "gain.png").exists()


class TestConfigFile:
    def test_file_supplies_model(self, tmp_path, capsys):
        cfg = tmp_path / "run.ini"
        cfg.write_text(
            "[model]\ngamma = 2.0\ndelta = -2.0\nchi = 1.0\n\n"
            "[drive]\neps_p = 0.9747\n"
        )
        assert run("steady", "--config", str(cfg)) == 0
        assert "middle" in capsys.readouterr().out

    def test_flags_override_file(self, tmp_path, capsys):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[model]\ngamma = 2.0\ndelta = -2.0\nchi = 1.0\n")
        # delta flag makes the system monostable: single fixed point
        assert run("steady", "--config", str(cfg), "--delta", "-1",
                   "--eps-p", "0.9747") == 0
        out = capsys.readouterr().out
        assert "single" in out and "middle" not in out

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[model]\ngamma = 2.0\ndelta = -2.0\nchi = 1.0\ngama = 3\n")
        assert run("steady", "--config", str(cfg), "--eps-p", "1") == 2
        assert "gama" in capsys.readouterr().err

    def test_unknown_section_rejected(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[modell]\ngamma = 2.0\n")
        assert run("steady", "--config", str(cfg), "--eps-p", "1") == 2

    def test_missing_config_file(self, tmp_path):
        assert run("steady", "--config", str(tmp_path / "nope.ini"), "--eps-p", "1") == 2

    def test_missing_gamma_is_config_error(self):
        assert run("steady", "--delta", "-2", "--chi", "1", "--eps-p", "1") == 2

    def test_chi_from_geometry(self, capsys):
        code = run("steady", "--gamma", "2", "--delta", "-2",
                   "--m-star", "4.5e-18", "--a-c", "1e-9", "--q-factor", "1e4",
                   "--eps-p", "0.5")
        assert code == 0
        assert "chi=0.000338254" in capsys.readouterr().out


class TestVerify:
    def test_report_file(self, tmp_path, capsys, monkeypatch):
        # tiny sample counts keep this a plumbing test; the full-budget run
        # lives in the acceptance suite
        import duffamp.cli as cli_module
        import duffamp.verify as verify_module

        def quick(seed):
            return [
                verify_module.check_gain_matrix_inverse(samples=20, seed=seed),
                verify_module.check_pump_slope(samples=20, seed=seed),
            ]

        monkeypatch.setattr(cli_module, "run_all", lambda seed: quick(seed))
        report = tmp_path / "report.json"
        code = run("verify", "--seed", "7", "--report", str(report))
        assert code == 0
        payload = json.loads(report.read_text())
        assert payload["seed"] == 7
        assert all(check["passed"] for check in payload["checks"])
        out = capsys.readouterr().out
        assert "PASS" in out


class TestParser:
    def test_help_exits_zero(self, capsys):
        assert run("--help") == 0
        out = capsys.readouterr().out
        for name in ("steady", "gain", "noise", "minforce", "verify"):
            assert name in out

    def test_subcommand_help_lists_flags(self, capsys):
        assert run("noise", "--help") == 0
        out = capsys.readouterr().out
        for flag in ("--gamma", "--delta", "--chi", "--theta-mode", "--lo-sideband",
                     "--mask-lambda-sq", "--branch", "--out", "--config"):
            assert flag in out

    def test_unknown_subcommand_exits_2(self, capsys):
        assert run("frobnicate") == 2

    def test_version(self, capsys):
        assert run("--version") == 0
        assert "duffamp" in capsys.readouterr().out


class TestDeterminism:
    def test_repeated_runs_byte_identical(self, tmp_path):
        for args, name in [
            (["steady", "--gamma", "2", "--delta", "-2", "--chi", "1",
              "--curve", "0:1.5:31"], "steady.csv"),
            (["gain", *BISTABLE_FLAGS, "--n0", "0.05:0.45:9",
              "--signal-detuning", "-6:6:15"], "gain.csv"),
            (["noise", *BISTABLE_FLAGS, "--n0", "0.05:0.45:9",
              "--signal-detuning", "-6:6:15"], "noise.csv"),
            (["minforce", "--gamma", "2", "--delta", "-1", "--chi", "1",
              "--n0", "0.05:1:17"], "minforce.csv"),
        ]:
            first = tmp_path / f"a_{name}"
            second = tmp_path / f"b_{name}"
            assert run(*args, "--out", str(first)) == 0
            assert run(*args, "--out", str(second)) == 0
            assert first.read_bytes() == second.read_bytes()
