"""
End-to-end runs of the command-line surface on short series.
"""
import json

import numpy as np
import pandas as pd
import pytest

import quann.cli as cli
import quann.rqa.recurrence as recurrence_mod
from quann.cli import main
from quann.plotting.pgm import read_pgm

SHORT = ["--steps", "400", "--drop", "100"]


def _csv(path):
    return pd.read_csv(path)


class TestUsage:
    def test_no_command(self, workdir):
        assert main([]) == 64

    def test_unknown_command(self, workdir):
        assert main(["train"]) == 64

    def test_help(self, workdir, capsys):
        assert main(["--help"]) == 0
        assert "select-pattern" in capsys.readouterr().out

    def test_preset_and_arch_are_exclusive(self, workdir):
        assert main(["dynamics", "--preset", "example3", "--arch", "a.json"]) == 64

    def test_bad_number(self, workdir):
        assert main(["dynamics", "--p", "high"]) == 64

    def test_unexpected_failure(self, workdir, monkeypatch):
        def boom(*args, **kwargs):
            raise RuntimeError("boom")
        monkeypatch.setattr(cli, "run_dynamics", boom)
        assert main(["dynamics", "--steps", "20", "--drop", "5", "--out", "o"]) == 1


class TestSelectPattern:
    def test_uniform_input(self, workdir, capsys):
        assert main(["select-pattern", "--q", "10", "--out", "sel"]) == 0
        assert capsys.readouterr().out.startswith("PASS max_deviation=")
        df = _csv(workdir / "sel" / "final_state.csv")
        assert list(df.columns) == ["basis_index", "pattern", "re", "im"]
        assert len(df) == 16
        # all weight sits on input pattern 10
        firing = df[np.hypot(df["re"], df["im"]) > 1e-9]
        assert set(firing["basis_index"] // 4) == {2}

    def test_basis_input(self, workdir):
        assert main(["select-pattern", "--q", "0", "--psi0", "0", "--out", "sel"]) == 0

    def test_amplitude_file(self, workdir):
        (workdir / "psi.csv").write_text("1,0\n0,1\n1,1\n0,0\n", encoding="utf-8")
        assert main(["select-pattern", "--q", "01", "--psi0", "psi.csv", "--out", "sel"]) == 0

    @pytest.mark.parametrize("argv", [
        ["--q", "102"],
        ["--q", "10", "--m", "3"],
        ["--q", "111111"],
        ["--q", "10", "--psi0", "1"],
    ])
    def test_usage_errors(self, workdir, argv):
        assert main(["select-pattern", "--out", "sel"] + argv) == 64

    def test_bad_amplitude_file(self, workdir):
        (workdir / "psi.csv").write_text("1,0\n", encoding="utf-8")
        assert main(["select-pattern", "--q", "01", "--psi0", "psi.csv", "--out", "sel"]) == 65

    def test_verification_failure(self, workdir, monkeypatch):
        import quann.experiments.patterns as patterns
        monkeypatch.setattr(patterns, "VERIFY_TOL", -1.0)
        assert main(["select-pattern", "--q", "1", "--out", "sel"]) == 2
        assert (workdir / "sel" / "final_state.csv").exists()

    def test_psi0_from_config_file(self, workdir):
        (workdir / "c.json").write_text(json.dumps({"psi0": "1"}), encoding="utf-8")
        assert main(["select-pattern", "--q", "0", "--config", "c.json", "--out", "sel"]) == 0
        df = _csv(workdir / "sel" / "final_state.csv")
        # input held at 0, output carries psi0 xor q = 1
        firing = df[np.hypot(df["re"], df["im"]) > 1e-9]
        assert list(firing["basis_index"]) == [1]


class TestBooleanRep:
    def _table(self, workdir, text):
        path = workdir / "g.csv"
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_xor(self, workdir, capsys):
        table = self._table(workdir, "00,0\n01,1\n10,1\n11,0\n")
        assert main(["boolean-rep", "--g-table", table, "--out", "b"]) == 0
        assert "PASS" in capsys.readouterr().out
        assert len(_csv(workdir / "b" / "final_state.csv")) == 1 << 4

    def test_two_outputs(self, workdir):
        table = self._table(workdir, "00,11\n01,10\n10,00\n11,01\n")
        assert main(["boolean-rep", "--g-table", table, "--n", "2", "--m", "2", "--out", "b"]) == 0

    def test_width_flags_must_match(self, workdir):
        table = self._table(workdir, "0,0\n1,1\n")
        assert main(["boolean-rep", "--g-table", table, "--n", "2", "--out", "b"]) == 64

    @pytest.mark.parametrize("text", ["00,0\n01,1\n10,1\n", "0,1\n0,0\n1,1\n", "0,2\n1,0\n", ""])
    def test_bad_tables(self, workdir, text):
        assert main(["boolean-rep", "--g-table", self._table(workdir, text), "--out", "b"]) == 65

    def test_missing_table(self, workdir):
        assert main(["boolean-rep", "--g-table", "nope.csv", "--out", "b"]) == 65

    def test_takes_no_settings_file(self, workdir):
        table = self._table(workdir, "0,1\n1,0\n")
        assert main(["boolean-rep", "--g-table", table, "--config", "c.json"]) == 64


class TestDynamics:
    def test_single_p(self, workdir):
        assert main(["dynamics", "--p", "0.5", "--steps", "50", "--drop", "10", "--out", "d"]) == 0
        df = _csv(workdir / "d" / "energy.csv")
        assert list(df.columns) == ["p", "l", "energy_J"]
        assert len(df) == 40
        assert df["l"].iloc[0] == 10 and df["l"].iloc[-1] == 49
        assert df["energy_J"].between(0.0, 3.0).all()

    def test_sweep(self, workdir):
        argv = ["dynamics", "--p-start", "0", "--p-stop", "0.1", "--p-step", "0.05",
                "--steps", "20", "--drop", "5", "--out", "d"]
        assert main(argv) == 0
        df = _csv(workdir / "d" / "energy.csv")
        assert len(df) == 3 * 15
        assert list(df["p"].unique()) == [0.0, 0.05, 0.1]
        assert (df.groupby("p")["l"].apply(list).map(lambda l: l == list(range(5, 20)))).all()

    def test_p_zero_row_count(self, workdir):
        assert main(["dynamics", "--p", "0", "--steps", "30", "--drop", "10", "--out", "d"]) == 0
        assert len(_csv(workdir / "d" / "energy.csv")) == 20

    def test_steps_must_exceed_drop(self, workdir):
        assert main(["dynamics", "--steps", "10", "--drop", "10"]) == 64

    def test_env_selection(self, workdir):
        assert main(["dynamics", "--env", "2", "--steps", "20", "--drop", "5", "--out", "d"]) == 0
        assert main(["dynamics", "--env", "7", "--steps", "20", "--drop", "5", "--out", "e"]) == 64

    def test_default_output_folder(self, workdir):
        assert main(["dynamics", "--steps", "20", "--drop", "5"]) == 0
        folders = list((workdir / "runs").glob("*_dynamics"))
        assert len(folders) == 1
        assert (folders[0] / "energy.csv").exists()

    def test_deterministic_lf_output(self, workdir):
        argv = ["dynamics", "--steps", "60", "--drop", "10", "--out"]
        assert main(argv + ["a"]) == 0
        assert main(argv + ["b"]) == 0
        first = (workdir / "a" / "energy.csv").read_bytes()
        assert first == (workdir / "b" / "energy.csv").read_bytes()
        assert b"\r\n" not in first

    def test_config_file_and_flag_override(self, workdir):
        cfg = {"p": 0.3, "commands": {"dynamics": {"steps": 30, "drop": 5}}}
        (workdir / "c.json").write_text(json.dumps(cfg), encoding="utf-8")
        assert main(["dynamics", "--config", "c.json", "--out", "d"]) == 0
        df = _csv(workdir / "d" / "energy.csv")
        assert len(df) == 25 and (df["p"] == 0.3).all()
        assert main(["dynamics", "--config", "c.json", "--steps", "40", "--out", "e"]) == 0
        assert len(_csv(workdir / "e" / "energy.csv")) == 35

    def test_bad_config_file(self, workdir):
        (workdir / "c.json").write_text("{", encoding="utf-8")
        assert main(["dynamics", "--config", "c.json"]) == 65

    def test_architecture_file(self, workdir):
        gate = [[1, 0], [0, 0], [0, 0], [1, 0]]
        flip = [[0, 0], [1, 0], [1, 0], [0, 0]]
        doc = {"neurons": 2, "edges": [[1, 2], [2, 1]],
               "links": {"1": {"0": flip, "1": gate}, "2": {"0": gate, "1": flip}}}
        (workdir / "a.json").write_text(json.dumps(doc), encoding="utf-8")
        assert main(["dynamics", "--arch", "a.json", "--steps", "20", "--drop", "5", "--out", "d"]) == 0
        assert _csv(workdir / "d" / "energy.csv")["energy_J"].between(0.0, 2.0).all()

    def test_missing_architecture_file(self, workdir):
        assert main(["dynamics", "--arch", "none.json", "--steps", "20", "--drop", "5"]) == 65


class TestRqa:
    def test_summary(self, workdir):
        argv = ["rqa", "--dim", "3", "--radii", "sigma:0.5:2.0:0.1", "--out", "r"] + SHORT
        assert main(argv) == 0
        df = _csv(workdir / "r" / "summary.csv")
        assert len(df) == 16
        for col in ("radius_sigma", "radius", "max_pct", "min_pct", "mean_pct",
                    "median_pct", "std_pct", "lines"):
            assert col in df.columns
        assert (df["max_pct"] <= 100.0).all()
        assert df["lines"].is_monotonic_increasing
        assert (workdir / "r" / "full_lines.csv").exists()
        assert (workdir / "r" / "distances.csv").exists()

    def test_eigenstates(self, workdir):
        argv = ["rqa", "--mode", "eigenstates", "--dim", "3", "--radii", "0.4", "--out", "r"] + SHORT
        assert main(argv) == 0
        df = _csv(workdir / "r" / "eigenstates.csv")
        assert list(df["env_index"]) == [1, 2, 3, 4, 5, 6]
        assert df["permutation"].iloc[0] == "L3L2L1"
        assert df["permutation"].iloc[-1] == "L1L2L3"

    def test_epochs(self, workdir):
        argv = ["rqa", "--mode", "epochs", "--epochs", "2", "--epoch-size", "100", "--dim", "3",
                "--radii", "sigma:1:2:0.5", "--out", "r"] + SHORT
        assert main(argv) == 0
        df = _csv(workdir / "r" / "epochs.csv")
        assert len(df) == 2 * 3
        assert (workdir / "r" / "persistent_lines.csv").exists()

    def test_epochs_need_data(self, workdir):
        argv = ["rqa", "--mode", "epochs", "--epochs", "5", "--epoch-size", "100", "--dim", "3"] + SHORT
        assert main(argv) == 64

    def test_epochs_split_kept_values_exactly(self, workdir):
        # 300 kept values, three sequential epochs of 100 values each
        argv = ["rqa", "--mode", "epochs", "--epochs", "3", "--epoch-size", "100", "--dim", "7",
                "--radii", "0.4", "--out", "r"] + SHORT
        assert main(argv) == 0
        df = _csv(workdir / "r" / "epochs.csv")
        assert list(df["epoch"]) == [1, 2, 3]
        for col in ("mean_pct", "median_pct", "std_pct", "lines", "min_period", "max_period"):
            assert col in df.columns
        assert ((df["median_pct"] >= 0.0) & (df["median_pct"] <= 100.0)).all()

    def test_epoch_too_short_to_embed(self, workdir):
        argv = ["rqa", "--mode", "epochs", "--epochs", "2", "--epoch-size", "6", "--dim", "7"] + SHORT
        assert main(argv) == 64

    def test_series_without_diagonals(self, workdir):
        argv = ["rqa", "--steps", "1007", "--drop", "1000", "--dim", "7", "--radii", "0.4", "--out", "r"]
        assert main(argv) == 0
        df = _csv(workdir / "r" / "summary.csv")
        assert df["lines"].iloc[0] == 0
        assert np.isnan(df["mean_pct"].iloc[0])

    def test_empty_radius_list(self, workdir):
        assert main(["rqa", "--radii="] + SHORT) == 64



class TestCorrDim:
    def test_single_epoch(self, workdir):
        argv = ["corr-dim", "--dims", "3", "--epochs", "1", "--epoch-size", "500",
                "--steps", "700", "--drop", "100", "--radii", "sigma:1.0:1.7:0.1", "--out", "c"]
        assert main(argv) == 0
        df = _csv(workdir / "c" / "corr_dim.csv")
        assert len(df) == 1
        assert list(df.columns) == ["epoch", "d_E", "lag", "D2", "r_squared", "p_value", "std_err"]
        assert df["D2"].iloc[0] > 0

    def test_grid(self, workdir):
        argv = ["corr-dim", "--dims", "3:4", "--epochs", "2", "--epoch-size", "300",
                "--steps", "800", "--drop", "100", "--radii", "sigma:1.0:1.7:0.1", "--out", "c"]
        assert main(argv) == 0
        df = _csv(workdir / "c" / "corr_dim.csv")
        assert list(zip(df["epoch"], df["d_E"])) == [(1, 3), (1, 4), (2, 3), (2, 4)]

    def test_radii_outside_scaling_region(self, workdir):
        argv = ["corr-dim", "--dims", "3", "--epochs", "1", "--epoch-size", "200",
                "--radii", "1e-12,2e-12,3e-12"] + SHORT
        assert main(argv) == 3

    def test_insufficient_data(self, workdir):
        argv = ["corr-dim", "--dims", "3", "--epochs", "4", "--epoch-size", "1000"] + SHORT
        assert main(argv) == 64


class TestRecPlot:
    def test_image(self, workdir):
        argv = ["rec-plot", "--steps", "200", "--drop", "100", "--dim", "3", "--out", "p"]
        assert main(argv) == 0
        image = read_pgm(workdir / "p" / "recurrence.pgm")
        assert image.shape == (98, 98)
        assert image.diagonal().all()
        assert np.array_equal(image, image.T)

    def test_guard(self, workdir, monkeypatch):
        monkeypatch.setattr(recurrence_mod, "MAX_PLOT_POINTS", 10)
        assert main(["rec-plot", "--steps", "200", "--drop", "100", "--dim", "3"]) == 3

    def test_extra_radii_are_reported(self, workdir, caplog):
        argv = ["rec-plot", "--steps", "200", "--drop", "100", "--dim", "3", "--radii", "0.4,0.8", "--out", "p"]
        with caplog.at_level("WARNING", logger="quann.experiments.recurrence"):
            assert main(argv) == 0
        assert "ignoring 1 more" in caplog.text


class TestProbScan:
    def test_single_row(self, workdir):
        argv = ["prob-scan", "--p-start", "0.5", "--p-stop", "0.5", "--p-step", "0.1",
                "--dims", "3", "--out", "s"] + SHORT
        assert main(argv) == 0
        df = _csv(workdir / "s" / "prob_scan.csv")
        assert len(df) == 1
        assert list(df.columns) == ["p", "d_E", "lag", "radius", "probability"]

    def test_grid_never_aborts(self, workdir):
        argv = ["prob-scan", "--p-start", "0", "--p-stop", "1", "--p-step", "0.5",
                "--dims", "3:4", "--out", "s"] + SHORT
        assert main(argv) == 0
        df = _csv(workdir / "s" / "prob_scan.csv")
        assert len(df) == 6
        probs = df["probability"].dropna()
        assert ((probs >= 0.0) & (probs <= 1.0)).all()
