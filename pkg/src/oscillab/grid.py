"""Compactly supported functions on a uniform grid, integrated exactly.

A GridFunction is piecewise constant: cell i covers
[origin + i*step, origin + (i+1)*step) and carries one real value.  The
prefix integral turns every window average

    (1/n) * integral of f over [x - n, x]

into two antiderivative lookups, with window endpoints anywhere on the real
line: an endpoint inside a cell picks up the exact partial-cell
contribution, so no quadrature error enters anywhere downstream.
"""

from __future__ import annotations

import csv as _csv
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Piecewise-constant function: value ``samples[i]`` on cell i."""

    origin: float
    step: float
    samples: np.ndarray
    # cumulative[i] = step * sum(samples[:i]); rebuilt at construction
    cumulative: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a nonempty 1-d array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "origin", float(self.origin))
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "cumulative", prefix_integral(samples, self.step))

    @property
    def end(self) -> float:
        return self.origin + self.step * len(self.samples)

    @property
    def support(self) -> tuple[float, float]:
        return (self.origin, self.end)

    def value_at(self, x):
        """Cell value at x (0 outside the support).  Scalar or array."""
        xs = np.asarray(x, dtype=float)
        u = (xs - self.origin) / self.step
        idx = np.floor(u).astype(np.int64)
        inside = (idx >= 0) & (idx < len(self.samples))
        vals = np.where(inside, self.samples[np.clip(idx, 0, len(self.samples) - 1)], 0.0)
        return float(vals) if np.isscalar(x) else vals

    def integral_to(self, t):
        """Exact integral of f over (-inf, t].  Scalar or array."""
        ts = np.asarray(t, dtype=float)
        u = np.clip((ts - self.origin) / self.step, 0.0, float(len(self.samples)))
        idx = np.minimum(u.astype(np.int64), len(self.samples) - 1)
        out = self.cumulative[idx] + self.samples[idx] * (u - idx) * self.step
        return float(out) if np.isscalar(t) else out

    def shifted(self, tau: float) -> "GridFunction":
        return GridFunction(self.origin + tau, self.step, self.samples)

    def scaled(self, c: float) -> "GridFunction":
        return GridFunction(self.origin, self.step, float(c) * self.samples)


def prefix_integral(samples: np.ndarray, step: float) -> np.ndarray:
    """cumulative[i] = step * sum(samples[:i]); cumulative[0] = 0."""
    out = np.zeros(len(samples) + 1)
    np.cumsum(samples, out=out[1:])
    out[1:] *= step
    return out


def add(f: GridFunction, g: GridFunction) -> GridFunction:
    """Pointwise sum of two functions sharing a step, origins aligned to it."""
    if abs(f.step - g.step) > 1e-15 * f.step:
        raise ValueError("cannot add grid functions with different steps")
    off = (g.origin - f.origin) / f.step
    if abs(off - round(off)) > 1e-9:
        raise ValueError("origins differ by a non-integer number of cells")
    off = int(round(off))
    lo = min(0, off)
    hi = max(len(f.samples), off + len(g.samples))
    samples = np.zeros(hi - lo)
    samples[-lo : -lo + len(f.samples)] += f.samples
    samples[off - lo : off - lo + len(g.samples)] += g.samples
    return GridFunction(f.origin + lo * f.step, f.step, samples)


def window_average(f: GridFunction, n: float, x) -> float | np.ndarray:
    """Average of f over the window [x - n, x]; exact, 0 off the support."""
    if n <= 0:
        raise ValueError(f"window length must be positive, got {n}")
    xs = np.asarray(x, dtype=float)
    out = (f.integral_to(xs) - f.integral_to(xs - n)) / n
    return float(out) if np.isscalar(x) else out


def lp_norm(f: GridFunction, p: float) -> float:
    """(step * sum |samples|^p)^(1/p) for p >= 1."""
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    mags = np.abs(f.samples)
    top = float(mags.max(initial=0.0))
    if top == 0.0:
        return 0.0
    return top * float(f.step * np.sum((mags / top) ** p)) ** (1.0 / p)


def sup_norm(f: GridFunction) -> float:
    return float(np.max(np.abs(f.samples), initial=0.0))


def distribution_bound(f: GridFunction, lam: float) -> float:
    """lam times the measure of {|f| > lam} (cell-counting semantics)."""
    if lam <= 0:
        raise ValueError(f"level must be positive, got {lam}")
    return lam * f.step * int(np.count_nonzero(np.abs(f.samples) > lam))


# ---------------------------------------------------------------------------
# built-in generators
# ---------------------------------------------------------------------------

def indicator(a: float, b: float, step: float) -> GridFunction:
    """Height-1 indicator of [a, b], with b - a snapped to a whole cell count."""
    if b <= a:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    count = max(1, int(round((b - a) / step)))
    return GridFunction(a, step, np.ones(count))


def tent(a: float, b: float, step: float) -> GridFunction:
    """Tent profile on [a, b]: 0 at the ends, peak 1 at the midpoint.

    Cells carry the tent's value at their midpoint.
    """
    if b <= a:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    count = max(2, int(round((b - a) / step)))
    mids = a + (np.arange(count) + 0.5) * step
    half = (b - a) / 2.0
    vals = np.maximum(0.0, 1.0 - np.abs(mids - (a + half)) / half)
    return GridFunction(a, step, vals)


def random_bounded(
    a: float, b: float, step: float, rng: np.random.Generator,
    low: float = -1.0, high: float = 1.0,
) -> GridFunction:
    """Independent uniform[low, high] cell values on [a, b]."""
    if b <= a:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    count = max(1, int(round((b - a) / step)))
    return GridFunction(a, step, rng.uniform(low, high, size=count))


def from_csv(path, origin: float, step: float) -> GridFunction:
    """Load cell values from a two-column CSV of (cell index, value).

    Missing indices default to 0; a non-numeric header row is skipped.
    """
    cells: dict[int, float] = {}
    with open(path, newline="") as fh:
        for row in _csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                idx, val = int(row[0]), float(row[1])
            except ValueError:
                continue  # header
            if idx < 0:
                raise ValueError(f"cell index must be >= 0, got {idx}")
            cells[idx] = val
    if not cells:
        raise ValueError(f"no (index, value) rows found in {path}")
    samples = np.zeros(max(cells) + 1)
    for idx, val in cells.items():
        samples[idx] = val
    return GridFunction(origin, step, samples)
