"""Tests for the experiment layer: reports, configs, families, experiments.

Experiments here run on deliberately tiny window ladders and families so
the whole file stays fast; the full-size defaults are exercised by the
acceptance suite.
"""

import csv
import io
import json
import math

import numpy as np
import pytest

from oscillab.grid import indicator, lp_norm
from oscillab.lab import (
    DEFAULTS,
    EXPERIMENTS,
    ExperimentReport,
    build_line_function,
    circle_family,
    exp_bmo,
    exp_fstar_ratio,
    exp_h1,
    exp_hormander,
    exp_oscillation,
    exp_strong_p,
    exp_transference,
    exp_weak_11,
    line_block_profile,
    line_family,
    line_operator_profile,
    load_config,
    render_report_csv,
    run_experiment,
    write_report,
)
from oscillab.oscillation import OscillationConfig, oscillation_line
from oscillab.sequences import LacunarySequence, build_blocks

TINY_N = {"base": 2, "first": 1, "count": 5}  # windows 1 .. 16


def tiny_report():
    return ExperimentReport(
        "demo", ("name", "count", "value", "ok"),
        (("alpha", 3, 0.1 + 0.2, True), ("beta", -1, 2.0, False)),
        {"top": 2.0}, {"all_good": True},
    )


class TestReportPlumbing:
    def test_row_width_is_validated(self):
        with pytest.raises(ValueError):
            ExperimentReport("demo", ("a", "b"), (("only",),), {}, {})

    def test_passed_requires_every_verdict(self):
        good = ExperimentReport("demo", ("a",), (), {}, {"x": True, "y": True})
        bad = ExperimentReport("demo", ("a",), (), {}, {"x": True, "y": False})
        empty = ExperimentReport("demo", ("a",), (), {}, {})
        assert good.passed and not bad.passed and empty.passed

    def test_csv_cell_formats(self):
        text = render_report_csv(tiny_report())
        lines = text.splitlines()
        assert lines[0] == "name,count,value,ok"
        assert lines[1].split(",") == ["alpha", "3", repr(0.1 + 0.2), "true"]
        assert lines[2].split(",") == ["beta", "-1", "2.0", "false"]

    def test_csv_floats_round_trip(self):
        text = render_report_csv(tiny_report())
        parsed = list(csv.reader(io.StringIO(text)))
        assert float(parsed[1][2]) == 0.1 + 0.2

    def test_csv_refuses_cells_needing_quotes(self):
        report = ExperimentReport("demo", ("a",), (("x,y",),), {}, {})
        with pytest.raises(ValueError):
            render_report_csv(report)

    def test_write_report_files(self, tmp_path):
        base = tmp_path / "out"
        written = write_report(tiny_report(), base, figures=False)
        assert written == [str(base) + ".csv", str(base) + ".json"]
        payload = json.loads((tmp_path / "out.json").read_text())
        assert payload["experiment"] == "demo"
        assert payload["row_count"] == 2
        assert payload["passed"] is True
        assert payload["summary"]["top"] == 2.0

    def test_write_report_strips_known_suffix(self, tmp_path):
        write_report(tiny_report(), tmp_path / "out.csv", figures=False)
        assert (tmp_path / "out.csv").exists()
        assert (tmp_path / "out.json").exists()

    def test_non_finite_summary_values_become_strings(self, tmp_path):
        report = ExperimentReport("demo", ("a",), (), {"bound": math.inf}, {})
        write_report(report, tmp_path / "r", figures=False)
        payload = json.loads((tmp_path / "r.json").read_text())
        assert payload["summary"]["bound"] == "inf"

    def test_figures_rendered_next_to_csv(self, tmp_path):
        report = exp_oscillation({"n": dict(TINY_N),
                                  "points": {"start": 0.0, "stop": 4.0,
                                             "count": 9}})
        written = write_report(report, tmp_path / "osc", figures=True)
        pngs = [p for p in written if p.endswith(".png")]
        assert pngs
        for p in pngs:
            assert (tmp_path / p.split("/")[-1]).exists()


class TestConfigHandling:
    def test_load_config_round_trip(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"s": 3.0, "n": [1, 2, 4]}))
        assert load_config(path) == {"s": 3.0, "n": [1, 2, 4]}

    def test_load_config_rejects_non_object_root(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text("[1, 2]")
        with pytest.raises(ValueError):
            load_config(path)

    def test_unknown_keys_are_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            exp_oscillation({"bogus": 1})
        with pytest.raises(ValueError, match="unknown"):
            exp_hormander({"riemann": {"nope": 1}})

    def test_unknown_experiment_name(self):
        with pytest.raises(ValueError):
            run_experiment("laplace", {})

    def test_registry_matches_defaults(self):
        assert set(EXPERIMENTS) == set(DEFAULTS)

    def test_explicit_sequences_and_k_max(self):
        report = exp_oscillation({"n": [1, 2, 4, 8], "m": [1, 2, 3, 4, 6, 8],
                                  "k_max": 3,
                                  "points": [0.5, 1.5]})
        assert report.summary["pair"]["n"] == [1, 2, 4, 8]
        assert report.summary["pair"]["m"] == [1, 2, 3, 4, 6, 8]
        assert report.summary["pair"]["k_max"] == 3

    def test_build_line_function_csv_kind_needs_path(self):
        with pytest.raises(ValueError):
            build_line_function({"kind": "csv"}, 0.25)


class TestFamilies:
    def test_line_family_prefix_stable(self):
        short = line_family(["random", "haar"], 3, 0.25, seed=5)
        long = line_family(["random", "haar"], 6, 0.25, seed=5)
        by_label = dict(long)
        for label, f in short:
            g = by_label[label]
            assert g.origin == f.origin and g.step == f.step
            assert np.array_equal(g.samples, f.samples)

    def test_line_family_deterministic(self):
        a = line_family(["random"], 4, 0.25, seed=9)
        b = line_family(["random"], 4, 0.25, seed=9)
        for (la, fa), (lb, fb) in zip(a, b):
            assert la == lb
            assert np.array_equal(fa.samples, fb.samples)

    def test_line_family_seed_matters(self):
        a = line_family(["random"], 1, 0.25, seed=1)[0][1]
        b = line_family(["random"], 1, 0.25, seed=2)[0][1]
        assert not (a.origin == b.origin
                    and len(a.samples) == len(b.samples)
                    and np.array_equal(a.samples, b.samples))

    def test_line_family_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            line_family(["spline"], 1, 0.25, seed=0)

    def test_circle_family_prefix_stable(self):
        short = circle_family(["random"], 2, 16, seed=3)
        long = circle_family(["random"], 5, 16, seed=3)
        for (la, fa), (lb, fb) in zip(short, long):
            assert la == lb
            assert np.array_equal(fa.values, fb.values)

    def test_circle_family_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            circle_family(["wavelet"], 1, 16, seed=0)

    def test_circle_family_kinds(self):
        members = circle_family(["random", "indicator", "harmonic"], 2, 16, 0)
        assert len(members) == 6
        labels = [label for label, _ in members]
        assert labels[0] == "random-00" and labels[-1] == "harmonic-01"


class TestProfiles:
    def setup_method(self):
        n = LacunarySequence((1, 2, 4, 8), 2.0)
        self.osc = OscillationConfig(build_blocks(n, n, 3), 2.0)
        self.f = indicator(0.0, 1.0, 0.25)

    def test_line_operator_profile_matches_pointwise(self):
        profile, tail = line_operator_profile(self.osc, self.f)
        assert profile.origin == self.f.origin
        assert profile.end >= self.f.end + self.osc.largest_window - 1e-9
        mids = profile.origin + (np.arange(len(profile.samples)) + 0.5) * profile.step
        for x, v in zip(mids[::5], profile.samples[::5]):
            single = oscillation_line(self.osc, self.f, float(x))
            assert v == pytest.approx(single.value, abs=1e-12)
            assert tail == single.tail_bound

    def test_block_profile_norm_is_operator_profile(self):
        profile, _ = line_operator_profile(self.osc, self.f)
        block = line_block_profile(self.osc, self.f)
        assert np.allclose(block.cellwise_norm().samples, profile.samples,
                           atol=1e-12)


class TestOscillationExperiment:
    def test_rows_and_summary(self):
        report = exp_oscillation({"n": dict(TINY_N),
                                  "points": [0.5, 1.0, 2.0]})
        assert report.columns == ("x", "value", "tail_bound")
        assert len(report.rows) == 3
        assert report.summary["max_value"] == max(r[1] for r in report.rows)
        assert report.verdicts["values_finite"]

    def test_deterministic_csv(self):
        cfg = {"n": dict(TINY_N), "function": {"kind": "random", "b": 2.0},
               "points": {"start": 0.0, "stop": 8.0, "count": 17}}
        a = render_report_csv(exp_oscillation(cfg))
        b = render_report_csv(exp_oscillation(cfg))
        assert a == b

    def test_empty_points_rejected(self):
        with pytest.raises(ValueError):
            exp_oscillation({"n": dict(TINY_N), "points": []})


class TestHormanderExperiment:
    def test_small_pair_verdicts(self):
        report = exp_hormander({
            "n": dict(TINY_N),
            "y_values": [0.5, -0.5, 2.0],
            "riemann": {"k_max": 4, "step": 1e-3, "y_values": [1.0],
                        "rel_tol": 1e-4},
        })
        assert report.passed
        assert report.verdicts["within_ceiling"]
        assert report.verdicts["negative_region_zero"]
        assert report.verdicts["riemann_agrees"]
        assert report.summary["ceiling"] == pytest.approx(4.0)
        checks = report.summary["riemann"]["checks"]
        assert checks and all(c["relative_error"] <= 1e-4 for c in checks)

    def test_rejects_empty_sweep(self):
        with pytest.raises(ValueError):
            exp_hormander({"n": dict(TINY_N), "y_values": []})


class TestStrongPExperiment:
    CFG = {"n": dict(TINY_N), "step": 1.0 / 16, "family_count": 2,
           "family_kinds": ["indicator", "random"], "p_values": [1.5, 2.0],
           "side": "line"}

    def test_summary_sup_is_row_max(self):
        report = exp_strong_p(dict(self.CFG))
        for key, sup in report.summary["sup_ratio"].items():
            side, p = key.split("_p")
            rows = [r for r in report.rows
                    if r[1] == side and f"{r[2]:g}" == p]
            assert sup == max(r[5] for r in rows)

    def test_threads_do_not_change_output(self):
        a = render_report_csv(exp_strong_p(dict(self.CFG), threads=1))
        b = render_report_csv(exp_strong_p(dict(self.CFG), threads=3))
        assert a == b

    def test_ratio_column_consistent(self):
        report = exp_strong_p(dict(self.CFG))
        for case, side, p, fn, on, ratio in report.rows:
            assert ratio == pytest.approx(on / fn)

    def test_ergodic_side(self):
        report = exp_strong_p({"n": dict(TINY_N), "family_count": 1,
                               "p_values": [2.0], "side": "ergodic",
                               "circle_cells": 16, "circle_samples": 64})
        assert {r[1] for r in report.rows} == {"ergodic"}
        assert report.verdicts["ratios_finite"]

    def test_rejects_bad_side(self):
        with pytest.raises(ValueError):
            exp_strong_p({"n": dict(TINY_N), "side": "sideways"})


class TestWeak11Experiment:
    CFG = {"n": dict(TINY_N), "step": 1.0 / 16, "family_count": 2,
           "family_kinds": ["indicator", "haar"], "lambda_points": 6}

    def test_rows_encode_consistent_l1(self):
        report = exp_weak_11(dict(self.CFG))
        by_case = {}
        for case, lam, measure, ratio in report.rows:
            if ratio > 1e-12:
                by_case.setdefault(case, []).append(measure * lam / ratio)
        assert by_case
        for values in by_case.values():
            assert max(values) == pytest.approx(min(values), rel=1e-9)

    def test_argmax_points_at_best_row(self):
        report = exp_weak_11(dict(self.CFG))
        best = max(report.rows, key=lambda r: r[3])
        assert report.summary["sup_ratio"] == best[3]
        assert report.summary["argmax"]["case"] == best[0]
        assert report.summary["argmax"]["lambda"] == best[1]

    def test_rejects_bad_span_and_points(self):
        with pytest.raises(ValueError):
            exp_weak_11({"n": dict(TINY_N), "lambda_span": [1.0, 0.5]})
        with pytest.raises(ValueError):
            exp_weak_11({"n": dict(TINY_N), "lambda_points": 1})


class TestH1Experiment:
    def test_line_band_summary(self):
        report = exp_h1({"n": dict(TINY_N), "side": "line",
                         "step": 1.0 / 16,
                         "width_exponents": [0, 1], "translations": 2})
        line = [r for r in report.rows if r[1] == "line"]
        assert line
        band = report.summary["line_band"]
        assert band["max"] == max(r[3] for r in line)
        assert band["min"] == min(r[3] for r in line)
        assert band["ratio"] == pytest.approx(band["max"] / band["min"])
        assert report.verdicts["uniform_band"] == (band["ratio"] <= 3.0)

    def test_ergodic_side_diagnostics(self):
        report = exp_h1({"n": dict(TINY_N), "side": "ergodic",
                         "frequencies": [1, 2], "phases": 1,
                         "k_terms": 400, "hilbert_samples": 64,
                         "circle_samples": 128,
                         "diagnostic_ceiling": 0.5})
        rows = [r for r in report.rows if r[1] == "ergodic"]
        assert len(rows) == 2
        assert report.summary["ergodic_sup_ratio"] == max(r[5] for r in rows)
        assert report.summary["hilbert_diagnostic_max"] == max(r[6] for r in rows)
        assert "hilbert_tail_small" in report.verdicts


class TestBmoExperiment:
    def test_forms_and_sups(self):
        report = exp_bmo({"n": dict(TINY_N), "step": 1.0 / 16,
                          "family_count": 1, "family_kinds": ["indicator"],
                          "max_depth": 4, "circle_count": 1,
                          "circle_cells": 32, "ebmo_n_max": 16,
                          "ebmo_samples": 32})
        forms = {r[1] for r in report.rows}
        assert forms == {"scalar", "vector", "ebmo"}
        for form, sup in report.summary["sup_ratio"].items():
            assert sup == max(r[4] for r in report.rows if r[1] == form)
        assert report.verdicts["ratios_finite"]


class TestFstarExperiment:
    def test_rows_and_ratio(self):
        report = exp_fstar_ratio({"n": dict(TINY_N), "family_count": 2,
                                  "circle_cells": 16, "samples": 64})
        assert report.columns == ("case", "o_l1", "fstar_l1", "ratio")
        for case, o_l1, star_l1, ratio in report.rows:
            assert ratio == pytest.approx(o_l1 / star_l1)
        assert report.summary["sup_ratio"] == max(r[3] for r in report.rows)
        assert report.summary["n_max"] == 16


class TestTransferExperiment:
    CFG = {"n": dict(TINY_N), "t_start": 2.0, "doublings": 2,
           "time_step": 1.0 / 8, "points": [0.1875],
           "functions": ["cosine", "indicator"], "indicator_cells": 16}

    def test_discrepancy_within_certificate(self):
        report = exp_transference(dict(self.CFG))
        assert report.verdicts["within_bound"]
        assert report.verdicts["bound_decreases"]
        assert report.passed
        for row in report.rows:
            assert row[6] <= row[7] + 1e-9

    def test_k_line_grows_with_horizon(self):
        report = exp_transference(dict(self.CFG))
        for (case, x) in {(r[0], r[1]) for r in report.rows}:
            ks = [r[3] for r in report.rows if (r[0], r[1]) == (case, x)]
            assert ks == sorted(ks)
            assert ks[0] < ks[-1]

    def test_rejects_horizon_reaching_ladder_top(self):
        cfg = dict(self.CFG)
        cfg["doublings"] = 4  # horizons up to 32 >= largest window 16
        with pytest.raises(ValueError):
            exp_transference(cfg)

    def test_rejects_too_small_t_start(self):
        cfg = dict(self.CFG)
        cfg["t_start"] = 1.0
        with pytest.raises(ValueError):
            exp_transference(cfg)

    def test_rejects_dyadic_mode(self):
        cfg = dict(self.CFG)
        cfg["mode"] = "dyadic"
        with pytest.raises(ValueError):
            exp_transference(cfg)

    def test_rejects_unknown_function(self):
        cfg = dict(self.CFG)
        cfg["functions"] = ["sawtooth"]
        with pytest.raises(ValueError):
            exp_transference(cfg)

    def test_rejects_misfit_time_step(self):
        cfg = dict(self.CFG)
        cfg["time_step"] = 0.3
        with pytest.raises(ValueError):
            exp_transference(cfg)


class TestRunExperiment:
    def test_dispatch(self):
        report = run_experiment("fstar", {"n": dict(TINY_N), "family_count": 1,
                                          "circle_cells": 8, "samples": 32})
        assert report.experiment == "fstar"

    def test_registry_covers_all_commands(self):
        assert sorted(EXPERIMENTS) == [
            "bmo", "fstar", "h1", "oscillation", "strong-p",
            "transfer", "verify-hormander", "weak11",
        ]
