"""End-to-end tests of the command-line entry point."""

import json

import pytest

from oscillab.cli import build_parser, main

TINY_N = {"base": 2, "first": 1, "count": 5}


def write_config(tmp_path, payload):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(payload))
    return str(path)


class TestParser:
    def test_all_subcommands_present(self):
        parser = build_parser()
        for name in ("verify-hormander", "oscillation", "strong-p", "weak11",
                     "h1", "bmo", "fstar", "transfer"):
            args = parser.parse_args([name])
            assert args.command == name
            assert args.threads == 1
            assert not args.no_figures

    def test_missing_subcommand_exits(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_unknown_subcommand_exits(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["laplace"])


class TestMain:
    def test_passing_run_exits_zero(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "n": TINY_N, "t_start": 2.0, "doublings": 2,
            "time_step": 0.125, "points": [0.1875],
            "functions": ["cosine"],
        })
        out = str(tmp_path / "transfer")
        code = main(["transfer", "--config", cfg, "--out", out,
                     "--no-figures"])
        assert code == 0
        text = capsys.readouterr().out
        assert f"wrote {out}.csv" in text
        assert f"wrote {out}.json" in text
        assert "verdict within_bound: PASS" in text
        assert "verdict bound_decreases: PASS" in text

    def test_failing_verdict_exits_one(self, tmp_path, capsys):
        # two rounds of the h1 atom band with widths 1 and 64: the spread
        # exceeds any ceiling this tight, so the band verdict fails
        cfg = write_config(tmp_path, {
            "n": TINY_N, "side": "line", "step": 0.125,
            "width_exponents": [0, 6], "translations": 1,
            "band_ceiling": 1.01,
        })
        code = main(["h1", "--config", cfg,
                     "--out", str(tmp_path / "h1"), "--no-figures"])
        assert code == 1
        assert "verdict uniform_band: FAIL" in capsys.readouterr().out

    def test_output_files_exist(self, tmp_path):
        cfg = write_config(tmp_path, {"n": TINY_N, "points": [0.5, 1.5]})
        out = tmp_path / "sweep"
        main(["oscillation", "--config", cfg, "--out", str(out),
              "--no-figures"])
        assert out.with_suffix(".csv").exists()
        assert out.with_suffix(".json").exists()
        assert not list(tmp_path.glob("*.png"))

    def test_figures_written_by_default(self, tmp_path):
        cfg = write_config(tmp_path, {"n": TINY_N, "points": [0.5, 1.5]})
        out = tmp_path / "sweep"
        main(["oscillation", "--config", cfg, "--out", str(out)])
        assert list(tmp_path.glob("sweep_*.png"))

    def test_seed_override_changes_random_family(self, tmp_path):
        cfg = write_config(tmp_path, {
            "n": TINY_N, "family_kinds": ["random"], "family_count": 1,
            "lambda_points": 4, "step": 0.125,
        })
        out_a, out_b, out_c = (str(tmp_path / k) for k in "abc")
        main(["weak11", "--config", cfg, "--out", out_a, "--seed", "1",
              "--no-figures"])
        main(["weak11", "--config", cfg, "--out", out_b, "--seed", "2",
              "--no-figures"])
        main(["weak11", "--config", cfg, "--out", out_c, "--seed", "1",
              "--no-figures"])
        csv_a = (tmp_path / "a.csv").read_text()
        assert csv_a != (tmp_path / "b.csv").read_text()
        assert csv_a == (tmp_path / "c.csv").read_text()

    def test_repeat_runs_are_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, {
            "n": TINY_N, "family_count": 2, "circle_cells": 16,
            "samples": 64,
        })
        main(["fstar", "--config", cfg, "--out", str(tmp_path / "one"),
              "--no-figures"])
        main(["fstar", "--config", cfg, "--out", str(tmp_path / "two"),
              "--no-figures", "--threads", "2"])
        assert ((tmp_path / "one.csv").read_bytes()
                == (tmp_path / "two.csv").read_bytes())

    def test_default_out_base(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        cfg = write_config(tmp_path, {"n": TINY_N, "points": [1.0]})
        main(["oscillation", "--config", cfg, "--no-figures"])
        assert (tmp_path / "oscillab_oscillation.csv").exists()
