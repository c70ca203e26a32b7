"""Oscillation of averaging windows along a lacunary block structure.

For a window pair (n, M) the operator aggregates, block by block, the worst
deviation of the m-window average from the reference n_k-window average,

    ( sum_k ( max over block members m of |A_m - A_{n_k}| )^s )^(1/s),

with averages taken either by sliding windows on the line or along a
rotation orbit.  A config in dyadic mode reads both sequences as exponents
and exercises the same machinery over windows 2^e.

The block sum is truncated at the pair's k_max; every evaluation reports a
rigorous bound for the dropped tail next to the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ergodic as _ergodic
from .block_space import _check_exponent, aggregate_rows, window_layout
from .grid import GridFunction, lp_norm
from .sequences import LacunaryPair, build_blocks, dyadic_powers

MODES = ("direct", "dyadic")


@dataclass(frozen=True, eq=False)
class OscillationConfig:
    """Window structure, aggregation exponent, and window interpretation."""

    pair: LacunaryPair
    s: float
    mode: str = "direct"

    def __post_init__(self):
        object.__setattr__(self, "s", _check_exponent(self.s))
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "dyadic":
            effective = build_blocks(
                dyadic_powers(self.pair.n), dyadic_powers(self.pair.m_set), self.pair.k_max
            )
        else:
            effective = self.pair
        object.__setattr__(self, "effective_pair", effective)
        object.__setattr__(self, "layout", window_layout(effective))

    @property
    def largest_window(self) -> int:
        return self.effective_pair.largest_window


@dataclass(frozen=True)
class OscillationResult:
    """Truncated oscillation value plus a bound on what truncation dropped."""

    value: float
    tail_bound: float


def truncation_tail_bound(cfg: OscillationConfig, l1_norm: float) -> float:
    """Bound for the l^s tail over the blocks beyond k_max (line case).

    Every dropped block satisfies |A_m f - A_{n_k} f| <= 2 ||f||_1 / n_k,
    and the certified growth ratio of the reference sequence turns the tail
    into a geometric series starting at the first dropped reference window.
    """
    rho = cfg.effective_pair.n.ratio_bound
    s = cfg.s
    head = 2.0 * float(l1_norm) / cfg.largest_window
    return head * (1.0 - rho ** (-s)) ** (-1.0 / s)


def oscillation_line(cfg: OscillationConfig, f: GridFunction, x: float) -> OscillationResult:
    values, tail = oscillation_line_profile(cfg, f, np.array([float(x)]))
    return OscillationResult(float(values[0]), tail)


def oscillation_line_profile(cfg: OscillationConfig, f: GridFunction,
                             xs) -> tuple[np.ndarray, float]:
    """Oscillation at each x, and the (x-independent) truncation tail bound."""
    xs = np.asarray(xs, dtype=float)
    layout = cfg.layout
    lead = f.integral_to(xs)
    rows = np.empty((len(layout.windows), len(xs)))
    for i, w in enumerate(layout.windows):
        rows[i] = (lead - f.integral_to(xs - w)) / w
    return aggregate_rows(layout, rows, cfg.s), truncation_tail_bound(cfg, lp_norm(f, 1))


def ergodic_tail_bound(cfg: OscillationConfig, system: _ergodic.RotationSystem,
                       f: _ergodic.CircleFunction) -> float:
    """Tail bound for the orbit case.

    For flows, |A_t f - mean f| <= R / (t * theta) with R the range of the
    centered antiderivative of f over one period, which bounds each dropped
    block by 2R / (theta * n_k) and sums geometrically as on the line.  No
    comparable finite certificate is implemented for map averages, so map
    configs report inf.
    """
    if system.is_map:
        return math.inf
    rho = cfg.effective_pair.n.ratio_bound
    head = 2.0 * f.centered_antiderivative_range() / (system.theta * cfg.largest_window)
    return head * (1.0 - rho ** (-cfg.s)) ** (-1.0 / cfg.s)


def _require_horizon(cfg: OscillationConfig, f) -> None:
    needed = float(cfg.largest_window)
    horizon = getattr(f, "horizon", math.inf)
    if horizon < needed:
        raise ValueError(
            f"orbit horizon {horizon} is shorter than the {needed} time units "
            f"the largest window needs"
        )


def oscillation_ergodic(cfg: OscillationConfig, system: _ergodic.RotationSystem,
                        f: _ergodic.CircleFunction, x: float) -> OscillationResult:
    values, tail = oscillation_ergodic_profile(cfg, system, f, np.array([float(x)]))
    return OscillationResult(float(values[0]), tail)


def oscillation_ergodic_profile(cfg: OscillationConfig, system: _ergodic.RotationSystem,
                                f: _ergodic.CircleFunction,
                                xs) -> tuple[np.ndarray, float]:
    _require_horizon(cfg, f)
    layout = cfg.layout
    rows = _ergodic.average_matrix(system, f, layout.windows, np.asarray(xs, dtype=float))
    return aggregate_rows(layout, rows, cfg.s), ergodic_tail_bound(cfg, system, f)
