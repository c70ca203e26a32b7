"""Circle rotations and the discrete ergodic operators built on them.

The model systems are the rotation map tau(x) = x + theta (mod 1) and the
translation flow U_t(x) = x + t*theta (mod 1); theta defaults to sqrt(2)-1,
an irrational surrogate at machine precision.  Circle functions come in two
exactly integrable flavours -- piecewise constant on a uniform circle grid,
and a single harmonic a*cos(2*pi*(j*u + phase)) -- so flow averages

    (1/n) * integral_0^n f(U_t x) dt
        = (F(x + n*theta) - F(x)) / (n*theta),   F = unwrapped antiderivative,

need no quadrature.  The pointwise operators (maximal, Hilbert, sharp,
EBMO) act along the discrete orbit x + i*theta; for flow systems they use
the time-1 map, which is the same rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

THETA_DEFAULT = math.sqrt(2.0) - 1.0

_TWO_PI = 2.0 * math.pi


def _frac(v):
    return v - np.floor(v)


@dataclass(frozen=True)
class RotationSystem:
    """Rotation by theta on the circle [0, 1), as a map or a flow."""

    theta: float = THETA_DEFAULT
    kind: str = "flow"

    def __post_init__(self):
        if not (0.0 < self.theta < 1.0):
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        if self.kind not in ("map", "flow"):
            raise ValueError(f"kind must be 'map' or 'flow', got {self.kind!r}")

    @property
    def is_map(self) -> bool:
        return self.kind == "map"

    def advance(self, x, t):
        """U_t x (flow) or tau^t x (map, integer t); vectorized."""
        return _frac(np.asarray(x, dtype=float) + t * self.theta)


class CircleFunction:
    """Base for 1-periodic functions with exact antiderivatives.

    ``antiderivative(v)`` is the unwrapped integral of the periodic
    extension from 0 to v (v any real); ``abs_antiderivative`` is the same
    for |f|.  ``horizon`` caps how far along an orbit the function may be
    evaluated; the built-in families are global (horizon = inf).
    """

    horizon: float = math.inf

    def value_at(self, u):
        raise NotImplementedError

    def mean(self) -> float:
        raise NotImplementedError

    def antiderivative(self, v):
        raise NotImplementedError

    def abs_antiderivative(self, v):
        raise NotImplementedError

    def centered_antiderivative_range(self) -> float:
        """max - min over [0, 1] of the antiderivative of f - mean(f).

        The centered antiderivative is 1-periodic, so this range certifies
        |time average over [x, x+L] - mean| <= range / L for every window.
        """
        raise NotImplementedError


class CirclePiecewise(CircleFunction):
    """Piecewise-constant circle function: values[i] on [i/N, (i+1)/N)."""

    def __init__(self, values):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("values must be a nonempty 1-d array")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        self.values = values
        self.cells = len(values)
        self._cum = np.zeros(self.cells + 1)
        np.cumsum(values, out=self._cum[1:])
        self._cum /= self.cells
        self._abs_cum = np.zeros(self.cells + 1)
        np.cumsum(np.abs(values), out=self._abs_cum[1:])
        self._abs_cum /= self.cells

    def value_at(self, u):
        idx = np.minimum((_frac(np.asarray(u, dtype=float)) * self.cells).astype(np.int64),
                         self.cells - 1)
        out = self.values[idx]
        return float(out) if np.ndim(u) == 0 else out

    def mean(self) -> float:
        return float(self._cum[-1])

    def _unit(self, r, cum, vals):
        u = np.clip(r * self.cells, 0.0, float(self.cells))
        i = np.minimum(u.astype(np.int64), self.cells - 1)
        return cum[i] + vals[i] * (u - i) / self.cells

    def _wrap(self, v, cum, vals):
        vs = np.asarray(v, dtype=float)
        whole = np.floor(vs)
        out = whole * cum[-1] + self._unit(vs - whole, cum, vals)
        return float(out) if np.ndim(v) == 0 else out

    def antiderivative(self, v):
        return self._wrap(v, self._cum, self.values)

    def abs_antiderivative(self, v):
        return self._wrap(v, self._abs_cum, np.abs(self.values))

    def centered_antiderivative_range(self) -> float:
        # the centered antiderivative is piecewise linear with nodes at the
        # cell edges, so its extremes sit on the edges
        edges = self._cum - np.arange(self.cells + 1) * (self._cum[-1] / self.cells)
        return float(edges.max() - edges.min())


class CircleHarmonic(CircleFunction):
    """f(u) = amplitude * cos(2 pi (frequency*u + phase)), phase in turns."""

    def __init__(self, amplitude: float = 1.0, frequency: int = 1, phase: float = 0.0):
        if int(frequency) != frequency or frequency < 1:
            raise ValueError(f"frequency must be a positive integer, got {frequency}")
        self.amplitude = float(amplitude)
        self.frequency = int(frequency)
        self.phase = float(phase)

    def value_at(self, u):
        out = self.amplitude * np.cos(_TWO_PI * (self.frequency * np.asarray(u, dtype=float)
                                                 + self.phase))
        return float(out) if np.ndim(u) == 0 else out

    def mean(self) -> float:
        return 0.0

    def antiderivative(self, v):
        j = self.frequency
        vs = np.asarray(v, dtype=float)
        out = self.amplitude * (np.sin(_TWO_PI * (j * vs + self.phase))
                                - math.sin(_TWO_PI * self.phase)) / (_TWO_PI * j)
        return float(out) if np.ndim(v) == 0 else out

    def abs_antiderivative(self, v):
        # integral of |cos| accumulated over quarter-period pieces:
        # G(t) = int_0^t |cos 2 pi w| dw has G(t + 1/2) = G(t) + 1/pi and
        # G(r) = sin(2 pi r)/(2 pi) on [0, 1/4], (2 - sin(2 pi r))/(2 pi)
        # on (1/4, 1/2].
        j = self.frequency
        vs = np.asarray(v, dtype=float)
        out = (abs(self.amplitude) / j) * (self._abs_cos_integral(j * vs + self.phase)
                                           - self._abs_cos_integral(self.phase))
        return float(out) if np.ndim(v) == 0 else out

    @staticmethod
    def _abs_cos_integral(t):
        ts = np.asarray(t, dtype=float)
        halves = np.floor(2.0 * ts)
        r = ts - 0.5 * halves
        sin_part = np.sin(_TWO_PI * r)
        psi = np.where(r <= 0.25, sin_part, 2.0 - sin_part) / _TWO_PI
        return halves / math.pi + psi

    def centered_antiderivative_range(self) -> float:
        return abs(self.amplitude) / (math.pi * self.frequency)


@dataclass(frozen=True)
class HorizonLimited(CircleFunction):
    """Wrapper declaring that only orbit times within [-horizon, horizon]
    are trusted; operators needing a longer orbit must refuse it."""

    base: CircleFunction
    horizon: float = math.inf

    def value_at(self, u):
        return self.base.value_at(u)

    def mean(self) -> float:
        return self.base.mean()

    def antiderivative(self, v):
        return self.base.antiderivative(v)

    def abs_antiderivative(self, v):
        return self.base.abs_antiderivative(v)

    def centered_antiderivative_range(self) -> float:
        return self.base.centered_antiderivative_range()


def circle_indicator(a: float, b: float, cells: int) -> CirclePiecewise:
    """Indicator of the arc [a, b) on a grid of `cells` cells (by midpoint).

    A wrapped arc (a > b) is allowed.
    """
    if cells < 1:
        raise ValueError("cells must be >= 1")
    mids = _frac((np.arange(cells) + 0.5) / cells)
    a, b = _frac(np.asarray(a, float)), _frac(np.asarray(b, float))
    inside = (mids >= a) & (mids < b) if a <= b else (mids >= a) | (mids < b)
    return CirclePiecewise(inside.astype(float))


def random_circle(cells: int, rng: np.random.Generator,
                  low: float = -1.0, high: float = 1.0) -> CirclePiecewise:
    return CirclePiecewise(rng.uniform(low, high, size=cells))


# ---------------------------------------------------------------------------
# orbit machinery
# ---------------------------------------------------------------------------

def orbit_values(system: RotationSystem, f: CircleFunction, x, count: int,
                 start: int = 0) -> np.ndarray:
    """f along the discrete orbit: f(x + i*theta) for i = start..start+count-1."""
    i = np.arange(start, start + count)
    return np.asarray(f.value_at(float(x) + i * system.theta))


def orbit_matrix(system: RotationSystem, f: CircleFunction, xs: np.ndarray,
                 count: int, start: int = 0) -> np.ndarray:
    """Shape (count, len(xs)): row i holds f(xs + (start+i)*theta)."""
    i = np.arange(start, start + count, dtype=float)[:, None]
    return np.asarray(f.value_at(np.asarray(xs, dtype=float)[None, :] + i * system.theta))


def ergodic_average(system: RotationSystem, f: CircleFunction, n, x) -> float:
    """Time average over the first n units of the orbit of x.

    Map systems take integer n >= 1 (Birkhoff sum / n); flows take any real
    n > 0 and integrate the orbit segment exactly through the antiderivative.
    """
    if system.is_map:
        if n != int(n) or n < 1:
            raise ValueError(f"map averages need integer n >= 1, got {n}")
        return float(np.mean(orbit_values(system, f, x, int(n))))
    if n <= 0:
        raise ValueError(f"flow averages need n > 0, got {n}")
    x = float(x)
    span = n * system.theta
    return float((f.antiderivative(x + span) - f.antiderivative(x)) / span)


def average_matrix(system: RotationSystem, f: CircleFunction, ns, xs) -> np.ndarray:
    """A_n f(x) for every n in `ns` and x in `xs`; shape (len(ns), len(xs))."""
    xs = np.asarray(xs, dtype=float)
    ns = np.asarray(ns, dtype=float)
    if np.any(ns <= 0):
        raise ValueError("window lengths must be positive")
    if system.is_map:
        if np.any(ns != np.round(ns)):
            raise ValueError("map averages need integer window lengths")
        top = int(ns.max())
        sums = np.zeros((top + 1, len(xs)))
        np.cumsum(orbit_matrix(system, f, xs, top), axis=0, out=sums[1:])
        return sums[ns.astype(np.int64)] / ns[:, None]
    spans = ns[:, None] * system.theta
    lead = f.antiderivative(xs[None, :] + spans)
    return (lead - np.asarray(f.antiderivative(xs))[None, :]) / spans


def ergodic_maximal(system: RotationSystem, f: CircleFunction, x,
                    n_max: int) -> float:
    """max over 1 <= n <= n_max of the orbit average of |f| at x."""
    return float(maximal_profile(system, f, np.array([float(x)]), n_max)[0])


def maximal_profile(system: RotationSystem, f: CircleFunction, xs,
                    n_max: int) -> np.ndarray:
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    vals = np.abs(orbit_matrix(system, f, np.asarray(xs, dtype=float), int(n_max)))
    sums = np.cumsum(vals, axis=0)
    sums /= np.arange(1, int(n_max) + 1, dtype=float)[:, None]
    return sums.max(axis=0)


@dataclass(frozen=True)
class HilbertResult:
    """Truncated two-sided orbit Hilbert sum plus a convergence diagnostic:
    the change contributed by the last half of the terms."""

    value: float
    tail_increment: float
    k_terms: int


def ergodic_hilbert(system: RotationSystem, f: CircleFunction, x,
                    k_terms: int) -> HilbertResult:
    """sum_{k=1}^{K} (f(x + k*theta) - f(x - k*theta)) / k at a point."""
    values, increments = hilbert_profile(system, f, np.array([float(x)]), k_terms)
    return HilbertResult(float(values[0]), float(increments[0]), int(k_terms))


def hilbert_profile(system: RotationSystem, f: CircleFunction, xs,
                    k_terms: int, chunk: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Hilbert sums over many base points.

    Returns (partial sums at k_terms, |change over the last half of the
    terms|).  The sums run over the orbit of the rotation, so they are the
    same for the map and for the flow through its time-1 map.
    """
    if k_terms < 1:
        raise ValueError(f"k_terms must be >= 1, got {k_terms}")
    xs = np.asarray(xs, dtype=float)
    total = np.zeros(len(xs))
    at_half = np.zeros(len(xs))
    half = int(k_terms) // 2
    for start in range(1, int(k_terms) + 1, chunk):
        ks = np.arange(start, min(start + chunk, int(k_terms) + 1), dtype=float)
        fwd = np.asarray(f.value_at(xs[None, :] + ks[:, None] * system.theta))
        bwd = np.asarray(f.value_at(xs[None, :] - ks[:, None] * system.theta))
        terms = (fwd - bwd) / ks[:, None]
        total += terms.sum(axis=0)
        inside = ks <= half
        if np.any(inside):
            at_half += terms[inside].sum(axis=0)
    return total, np.abs(total - at_half)


SHARP_VARIANTS = ("centered", "absolute")


def ergodic_sharp(system: RotationSystem, f: CircleFunction, x, n_max: int,
                  variant: str = "centered") -> float:
    """Worst mean deviation along the orbit, over window lengths n <= n_max.

    The window value is (1/n) sum_{i<n} |f(tau^i x) - c_n(x)| where the
    recentering c_n is the plain orbit mean ("centered") or the orbit mean
    of |f| ("absolute").  Centered is mean-shift invariant; absolute is
    kept as a distinct convention, and the two agree wherever f >= 0.
    """
    return float(sharp_profile(system, f, np.array([float(x)]), n_max, variant)[0])


def sharp_profile(system: RotationSystem, f: CircleFunction, xs, n_max: int,
                  variant: str = "centered") -> np.ndarray:
    if variant not in SHARP_VARIANTS:
        raise ValueError(f"variant must be one of {SHARP_VARIANTS}, got {variant!r}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    vals = orbit_matrix(system, f, np.asarray(xs, dtype=float), int(n_max))
    centers = np.cumsum(np.abs(vals) if variant == "absolute" else vals, axis=0)
    centers /= np.arange(1, int(n_max) + 1, dtype=float)[:, None]
    best = np.zeros(vals.shape[1])
    for n in range(1, int(n_max) + 1):
        dev = np.abs(vals[:n] - centers[n - 1][None, :]).sum(axis=0) / n
        np.maximum(best, dev, out=best)
    return best


def ebmo_norm(system: RotationSystem, f: CircleFunction, n_max: int,
              variant: str = "centered", sample_points=None,
              samples: int = 2048) -> float:
    """Max of the sharp function over a sample grid of base points.

    This is a lower bound for the essential sup defining the EBMO norm; the
    default grid is `samples` equispaced midpoints of the circle.
    """
    if sample_points is None:
        if samples < 1:
            raise ValueError("samples must be >= 1")
        sample_points = (np.arange(samples) + 0.5) / samples
    sample_points = np.asarray(sample_points, dtype=float)
    if sample_points.size == 0:
        raise ValueError("sample grid is empty")
    return float(sharp_profile(system, f, sample_points, n_max, variant).max())
