"""Piecewise-constant grid functions: exact integrals, norms, loaders."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscillab.grid import (
    GridFunction,
    add,
    distribution_bound,
    from_csv,
    indicator,
    lp_norm,
    random_bounded,
    sup_norm,
    tent,
    window_average,
)


def riemann_integral_to(f: GridFunction, t: float) -> float:
    """Independent cell-walk oracle for the prefix integral."""
    total = 0.0
    for i, v in enumerate(f.samples):
        lo = f.origin + i * f.step
        hi = lo + f.step
        overlap = min(hi, t) - lo
        if overlap > 0:
            total += v * min(overlap, f.step)
    return total


class TestIntegralTo:
    def test_indicator_closed_form(self):
        f = indicator(0.0, 1.0, 1.0 / 8)
        for t, expect in [(-1.0, 0.0), (0.0, 0.0), (0.25, 0.25), (1.0, 1.0), (3.0, 1.0)]:
            assert f.integral_to(t) == pytest.approx(expect, abs=1e-15)

    def test_array_argument(self):
        f = indicator(0.0, 2.0, 0.25)
        ts = np.array([-0.5, 0.5, 1.75, 2.5])
        np.testing.assert_allclose(f.integral_to(ts), [0.0, 0.5, 1.75, 2.0], atol=1e-15)

    @settings(max_examples=60, deadline=None)
    @given(
        values=st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=12),
        t=st.floats(-2, 6, allow_nan=False),
    )
    def test_matches_cell_walk_oracle(self, values, t):
        f = GridFunction(-0.5, 0.3, np.array(values))
        assert f.integral_to(t) == pytest.approx(riemann_integral_to(f, t), rel=1e-12, abs=1e-12)

    def test_interval_additivity(self):
        rng = np.random.default_rng(3)
        f = GridFunction(0.0, 0.125, rng.normal(size=40))
        a, b, c = 0.3, 1.7, 4.1
        left = f.integral_to(b) - f.integral_to(a)
        right = f.integral_to(c) - f.integral_to(b)
        assert left + right == pytest.approx(f.integral_to(c) - f.integral_to(a), abs=1e-12)


class TestWindowAverage:
    def test_indicator_overlap_formula(self):
        f = indicator(0.0, 1.0, 1.0 / 16)
        for n in (1.0, 2.0, 4.0):
            for x in (0.25, 1.0, 1.5, 3.0, 5.0):
                overlap = max(0.0, min(x, 1.0) - max(x - n, 0.0))
                assert window_average(f, n, x) == pytest.approx(overlap / n, abs=1e-14)

    def test_window_must_be_positive(self):
        f = indicator(0.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            window_average(f, 0.0, 1.0)


class TestNorms:
    def test_indicator_lp(self):
        f = indicator(0.5, 2.5, 0.125)
        for p in (1.0, 2.0, 3.0):
            assert lp_norm(f, p) == pytest.approx(2.0 ** (1.0 / p), rel=1e-14)

    def test_tent_l1(self):
        # tent of height 1 over width w has area w/2
        f = tent(0.0, 2.0, 1.0 / 256)
        assert lp_norm(f, 1.0) == pytest.approx(1.0, rel=1e-3)

    def test_tent_sup(self):
        f = tent(0.0, 2.0, 1.0 / 64)
        assert sup_norm(f) <= 1.0
        assert sup_norm(f) >= 1.0 - 2.0 / 64

    def test_lp_requires_p_geq_1(self):
        f = indicator(0.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            lp_norm(f, 0.5)

    def test_huge_values_stay_finite(self):
        f = GridFunction(0.0, 1.0, np.array([1e300, 5e299]))
        assert math.isfinite(lp_norm(f, 2.0))


class TestDistribution:
    def test_indicator_exact(self):
        f = indicator(0.0, 3.0, 0.25)
        assert distribution_bound(f, 0.5) == pytest.approx(0.5 * 3.0, abs=1e-15)
        assert distribution_bound(f, 1.0) == 0.0  # strict inequality in the set

    @settings(max_examples=60, deadline=None)
    @given(
        values=st.lists(st.floats(-4, 4, allow_nan=False), min_size=1, max_size=20),
        lam=st.floats(0.01, 5.0),
    )
    def test_chebyshev_exact_on_grid(self, values, lam):
        f = GridFunction(0.0, 0.2, np.array(values))
        assert distribution_bound(f, lam) <= lp_norm(f, 1.0) + 1e-12


class TestCombinators:
    def test_add_aligned(self):
        f = indicator(0.0, 1.0, 0.25)
        g = indicator(0.5, 2.0, 0.25)
        h = add(f, g)
        assert h.value_at(0.25) == 1.0
        assert h.value_at(0.75) == 2.0
        assert h.value_at(1.75) == 1.0

    def test_add_misaligned_raises(self):
        f = indicator(0.0, 1.0, 0.25)
        g = indicator(0.1, 1.1, 0.25)
        with pytest.raises(ValueError):
            add(f, g)

    def test_add_different_steps_raises(self):
        f = indicator(0.0, 1.0, 0.25)
        g = indicator(0.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            add(f, g)

    def test_shifted(self):
        f = indicator(0.0, 1.0, 0.25)
        g = f.shifted(2.5)
        assert g.value_at(2.75) == 1.0
        assert g.value_at(0.5) == 0.0
        assert g.integral_to(10.0) == pytest.approx(1.0)

    def test_scaled(self):
        f = indicator(0.0, 1.0, 0.25)
        assert f.scaled(-3.0).value_at(0.5) == -3.0

    def test_value_outside_support_is_zero(self):
        f = indicator(0.0, 1.0, 0.25)
        assert f.value_at(-0.01) == 0.0
        assert f.value_at(1.0) == 0.0  # half-open cells


class TestGenerators:
    def test_random_bounded_range(self):
        rng = np.random.default_rng(0)
        f = random_bounded(0.0, 2.0, 0.125, rng)
        assert np.all(np.abs(f.samples) <= 1.0)
        assert f.end == pytest.approx(2.0)

    def test_from_csv_roundtrip(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("index,value\n0,1.5\n2,-0.25\n")
        f = from_csv(path, origin=1.0, step=0.5)
        assert f.origin == 1.0
        np.testing.assert_allclose(f.samples, [1.5, 0.0, -0.25])

    def test_from_csv_comment_and_blank(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("# cells\n\n0, 2.0\n1, 3.0\n")
        f = from_csv(path, origin=0.0, step=1.0)
        np.testing.assert_allclose(f.samples, [2.0, 3.0])

    def test_from_csv_negative_index_raises(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("-1,1.0\n")
        with pytest.raises(ValueError):
            from_csv(path, origin=0.0, step=1.0)

    def test_indicator_step_must_divide(self):
        f = indicator(0.0, 1.0, 0.3)
        # width rounds to the nearest whole number of cells
        assert f.samples.size == 3
