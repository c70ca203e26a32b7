"""The block-valued averaging kernel and its integral regularity checks.

At each real x the kernel carries one entry per block member (m, k):

    (1/m) 1_[0,m)(x) - (1/n_k) 1_[0,n_k)(x),

so convolving a function with the kernel yields exactly the differences of
sliding-window averages that the oscillation operator aggregates.  The
regularity question is whether the translation defect

    integral over |x| > cutoff*|y| of || K(x-y) - K(x) ||_B dx

stays bounded uniformly in y.  Everything here rides on one structural
fact: x -> ||K(x-y) - K(x)||_B is piecewise constant, with breakpoints only
at 0, y and at w, w+y over the distinct window lengths w.  Integrals over
any region therefore reduce to finite sums of piece value times piece
length, with no quadrature error; a midpoint Riemann rule is provided
purely as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .block_space import (
    BlockVector,
    WindowLayout,
    _check_exponent,
    aggregate_rows,
    vector_from_window_values,
    window_layout,
)
from .sequences import LacunaryPair

# verdicts allow one part in a million of rounding slack on the analytic
# ceiling before declaring a violation
CEILING_SLACK = 1e-6


def _average_rows(windows: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Row j holds (1/w_j) 1_[0, w_j)(x); shape (len(windows), len(x))."""
    w = windows[:, None]
    return ((x >= 0.0) & (x < w)) / w


def kernel_at(pair: LacunaryPair, s: float, x: float) -> BlockVector:
    """The kernel's block vector at a single point."""
    layout = window_layout(pair)
    column = _average_rows(layout.windows, np.array([float(x)]))[:, 0]
    return vector_from_window_values(layout, _check_exponent(s), column)


def kernel_norm_at(pair: LacunaryPair, s: float, x):
    """||K(x)||_B, vectorized over x."""
    layout = window_layout(pair)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = aggregate_rows(layout, _average_rows(layout.windows, xs), s)
    return float(out[0]) if np.ndim(x) == 0 else out


def kernel_difference_norm(pair: LacunaryPair, s: float, x, y: float):
    """||K(x - y) - K(x)||_B, vectorized over x."""
    layout = window_layout(pair)
    out = _difference_norm(layout, s, np.atleast_1d(np.asarray(x, dtype=float)), float(y))
    return float(out[0]) if np.ndim(x) == 0 else out


def _difference_norm(layout: WindowLayout, s: float, xs: np.ndarray, y: float) -> np.ndarray:
    rows = _average_rows(layout.windows, xs - y) - _average_rows(layout.windows, xs)
    return aggregate_rows(layout, rows, s)


def difference_breakpoints(pair: LacunaryPair, y: float) -> np.ndarray:
    """Sorted points where x -> K(x-y) - K(x) can jump."""
    w = np.asarray(pair.window_lengths(), dtype=float)
    return np.unique(np.concatenate(([0.0, float(y)], w, w + float(y))))


def support_interval(pair: LacunaryPair, y: float) -> tuple[float, float]:
    """Interval outside which K(x-y) - K(x) vanishes identically."""
    top = float(pair.largest_window)
    return min(0.0, float(y)), top + max(0.0, float(y))


def _pieces_on(layout: WindowLayout, s: float, y: float,
               lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """(lengths, values) of the constant pieces of the difference norm on [lo, hi]."""
    if hi <= lo:
        return np.empty(0), np.empty(0)
    bps = difference_breakpoints(layout.pair, y)
    bps = bps[(bps > lo) & (bps < hi)]
    edges = np.concatenate(([lo], bps, [hi]))
    mids = 0.5 * (edges[:-1] + edges[1:])
    return np.diff(edges), _difference_norm(layout, s, mids, y)


def hormander_ceiling(pair: LacunaryPair) -> float:
    """Analytic bound for the regularity integral at cutoff >= 1.

    Splitting ||K(x-y)-K(x)||_B <= (sup over member windows of the two
    shifted-indicator bumps) and integrating gives |y| * sum 1/w over
    windows w >= |y| for each of the two sequences; the certified growth
    ratios r turn those sums into geometric series worth r/(r-1) each.
    """
    a, b = pair.m_set.ratio_bound, pair.n.ratio_bound
    return a / (a - 1.0) + b / (b - 1.0)


@dataclass(frozen=True)
class HormanderResult:
    """One translation-defect integral with its verdict inputs."""

    y: float
    cutoff: float
    integral: float
    negative_region_integral: float
    ceiling: float

    @property
    def within_ceiling(self) -> bool:
        return self.integral <= self.ceiling + CEILING_SLACK


def hormander_integral(pair: LacunaryPair, s: float, y: float,
                       cutoff: float = 4.0) -> HormanderResult:
    """Exact integral of ||K(x-y) - K(x)||_B over {|x| > cutoff * |y|}.

    The x < -cutoff*|y| portion is reported separately; for any cutoff > 1
    it is empty of kernel support and comes out exactly 0.
    """
    _check_exponent(s)
    y = float(y)
    if y == 0.0:
        raise ValueError("translation y must be nonzero")
    if cutoff <= 0.0:
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    layout = window_layout(pair)
    ay = abs(y)
    lo, hi = support_interval(pair, y)
    neg_len, neg_val = _pieces_on(layout, s, y, lo, min(hi, -cutoff * ay))
    pos_len, pos_val = _pieces_on(layout, s, y, max(lo, cutoff * ay), hi)
    negative = float(neg_len @ neg_val)
    return HormanderResult(
        y=y,
        cutoff=float(cutoff),
        integral=negative + float(pos_len @ pos_val),
        negative_region_integral=negative,
        ceiling=hormander_ceiling(pair),
    )


def hormander_integral_riemann(pair: LacunaryPair, s: float, y: float,
                               cutoff: float = 4.0, step: float = 1e-3,
                               chunk: int = 1 << 18) -> float:
    """Midpoint Riemann cross-check on the fixed grid {j*step} anchored at 0.

    Deliberately ignorant of the breakpoint structure.  Cost grows linearly
    with the largest window divided by the step; keep the pair small.
    """
    _check_exponent(s)
    if step <= 0.0:
        raise ValueError("step must be positive")
    layout = window_layout(pair)
    y = float(y)
    ay = abs(y)
    lo, hi = support_interval(pair, y)
    j0, j1 = math.floor(lo / step), math.ceil(hi / step)
    total = 0.0
    for start in range(j0, j1, chunk):
        mids = (np.arange(start, min(start + chunk, j1), dtype=float) + 0.5) * step
        mids = mids[np.abs(mids) > cutoff * ay]
        if mids.size:
            total += step * float(np.sum(_difference_norm(layout, s, mids, y)))
    return total


def shell_condition_values(pair: LacunaryPair, s: float, y: float, r: float,
                           shells: int | None = None,
                           first_shell: int = 2) -> np.ndarray:
    """Weighted L^r shell readings of the translation defect.

    Shell k is {x : 2^k |y| < |x| <= 2^(k+1) |y|}, starting at
    k = first_shell; its value is

        (integral over the shell of ||K(x-y)-K(x)||_B^r dx)^(1/r)
            * |shell|^(1 - 1/r),

    read at r = inf as (sup over the shell) * |shell|.  The weight is the
    conjugate-exponent normalization that makes the r = 1 values plain
    shell integrals, so they sum to the cutoff-2^first_shell regularity
    integral; summability of the values is exactly the shell-wise L^r
    regularity requirement.

    With `shells` omitted, values are returned up to the last shell meeting
    the kernel support; all later shells are identically 0.
    """
    _check_exponent(s)
    y = float(y)
    if y == 0.0:
        raise ValueError("translation y must be nonzero")
    if not (r == math.inf or r >= 1.0):
        raise ValueError(f"shell exponent r must be >= 1 or inf, got {r}")
    if first_shell < 0:
        raise ValueError("first_shell must be >= 0")
    layout = window_layout(pair)
    ay = abs(y)
    lo, hi = support_interval(pair, y)
    if shells is None:
        shells = 1
        while 2.0 ** (first_shell + shells) * ay < max(hi, -lo):
            shells += 1
    out = np.zeros(shells)
    for i in range(shells):
        r0, r1 = 2.0 ** (first_shell + i) * ay, 2.0 ** (first_shell + i + 1) * ay
        lengths = []
        values = []
        for a, b in ((max(lo, r0), min(hi, r1)), (max(lo, -r1), min(hi, -r0))):
            piece_len, piece_val = _pieces_on(layout, s, y, a, b)
            lengths.append(piece_len)
            values.append(piece_val)
        lengths = np.concatenate(lengths)
        values = np.concatenate(values)
        measure = 2.0 * (r1 - r0)  # both signs
        if r == math.inf:
            out[i] = (float(values.max()) if values.size else 0.0) * measure
        else:
            raw = float(np.sum(lengths * values**r))
            out[i] = raw ** (1.0 / r) * measure ** (1.0 - 1.0 / r)
    return out
