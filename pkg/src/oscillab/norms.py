"""Hardy-space atoms, truncated Hilbert transforms, and BMO estimators.

The line Hilbert transform of a piecewise-constant function is computed
exactly: the integrand (f(x+t) - f(x-t))/t is a constant over t-pieces cut
by the grid edges, so each piece integrates to value * log(t1/t0).  BMO
norms scan three interval families -- a dyadic ladder over the domain and
its two third-shifted copies -- whose best mean oscillation is reported as
a certified lower bound for the supremum over all intervals.  Mean
oscillations themselves are exact on the grid semantics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .block_space import BlockVector, _check_exponent
from .ergodic import CircleFunction, RotationSystem, hilbert_profile
from .grid import GridFunction, lp_norm
from .sequences import LacunaryPair

ATOM_SHAPES = ("haar", "randomized")


@dataclass(frozen=True, eq=False)
class Atom:
    """Mean-zero profile on an interval, sup-bounded by 1 / |interval|."""

    interval: tuple[float, float]
    profile: GridFunction

    def __post_init__(self):
        a, b = self.interval
        if not b > a:
            raise ValueError(f"degenerate interval [{a}, {b}]")
        bound = 1.0 / (b - a)
        sup = float(np.max(np.abs(self.profile.samples)))
        if sup > bound * (1.0 + 1e-12):
            raise ValueError(f"atom profile exceeds the sup bound {bound}")
        mass = self.profile.cumulative[-1]
        if abs(mass) > 1e-12 * bound:
            raise ValueError(f"atom profile has nonzero mean ({mass})")
        lo, hi = self.profile.support
        if lo < a - 1e-12 * (b - a) or hi > b + 1e-12 * (b - a):
            raise ValueError("atom profile sticks out of its interval")

    @property
    def width(self) -> float:
        return self.interval[1] - self.interval[0]


def make_atom(a: float, b: float, shape: str = "haar", cells: int = 64,
              rng: np.random.Generator | None = None) -> Atom:
    """Construct an atom on [a, b].

    "haar": +1/(b-a) on the left half, -1/(b-a) on the right half.
    "randomized": an rng-drawn bounded profile, recentred to mean zero and
    rescaled so its sup meets the atom bound exactly.
    """
    if b <= a:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if shape not in ATOM_SHAPES:
        raise ValueError(f"shape must be one of {ATOM_SHAPES}, got {shape!r}")
    cells = max(2, int(cells) + int(cells) % 2)
    height = 1.0 / (b - a)
    if shape == "haar":
        vals = np.full(cells, height)
        vals[cells // 2:] *= -1.0
    else:
        if rng is None:
            raise ValueError("randomized atoms need an rng")
        vals = rng.uniform(-1.0, 1.0, size=cells)
        vals -= vals.mean()
        peak = np.max(np.abs(vals))
        if peak == 0.0:  # astronomically unlikely; keep the contract anyway
            vals = np.full(cells, height)
            vals[cells // 2:] *= -1.0
        else:
            vals *= height / peak
    return Atom((a, b), GridFunction(a, (b - a) / cells, vals))


# ---------------------------------------------------------------------------
# Hilbert transforms and H^1 norms
# ---------------------------------------------------------------------------

def hilbert_line(f: GridFunction, x: float, epsilon: float | None = None) -> float:
    """Truncated odd-window transform  int_{t > eps} (f(x+t) - f(x-t))/t dt.

    Exact on the grid semantics.  The inner cutoff defaults to one grid
    step and may not sink below half a step, where the piecewise-constant
    model stops resembling a principal value.
    """
    if epsilon is None:
        epsilon = f.step
    if epsilon < f.step / 2.0:
        raise ValueError(f"epsilon={epsilon} below half a grid step {f.step}")
    x = float(x)
    edges = f.origin + f.step * np.arange(len(f.samples) + 1)
    candidates = np.concatenate([edges - x, x - edges])
    outer = float(candidates.max())
    if outer <= epsilon:
        return 0.0
    inner = candidates[(candidates > epsilon) & (candidates < outer)]
    cuts = np.concatenate(([epsilon], np.unique(inner), [outer]))
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    piece = f.value_at(x + mids) - f.value_at(x - mids)
    return float(np.sum(piece * np.log(cuts[1:] / cuts[:-1])))


def h1_norm_line(f: GridFunction, epsilon: float | None = None, *,
                 resolution: int = 4, margin: float = 8.0) -> float:
    """||f||_1 plus the L^1 size of the truncated transform.

    The transform decays only when f has mean zero, so this is meant for
    atoms and their combinations.  Its L^1 norm is estimated by midpoint
    sampling at `resolution` points per grid cell over the support widened
    by `margin` support-lengths on both sides; convergence is the caller's
    to judge (halve epsilon, raise resolution, and compare).
    """
    lo, hi = f.support
    width = hi - lo
    step = f.step / max(1, int(resolution))
    count = int(math.ceil(width * (1.0 + 2.0 * margin) / step))
    mids = (lo - margin * width) + (np.arange(count) + 0.5) * step
    total = 0.0
    for x in mids:
        total += abs(hilbert_line(f, float(x), epsilon))
    return lp_norm(f, 1) + total * step


@dataclass(frozen=True)
class ErgodicH1Result:
    """||f||_1 + ||Hf||_1 with the Hilbert truncation diagnostic."""

    value: float
    l1: float
    hilbert_l1: float
    tail_increment_l1: float
    k_terms: int
    samples: int


def h1_norm_ergodic(system: RotationSystem, f: CircleFunction, k_terms: int,
                    samples: int = 4096) -> ErgodicH1Result:
    """Orbit H^1 surrogate: exact ||f||_1 on the circle plus a sample-mean
    estimate of ||Hf||_1 at `k_terms` Hilbert terms.

    The diagnostic is the sample-mean |change over the last half of the
    Hilbert terms|, the honest instability scale of the truncation.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    points = (np.arange(samples) + 0.5) / samples
    values, increments = hilbert_profile(system, f, points, k_terms)
    l1 = float(f.abs_antiderivative(1.0) - f.abs_antiderivative(0.0))
    hilbert_l1 = float(np.mean(np.abs(values)))
    return ErgodicH1Result(
        value=l1 + hilbert_l1,
        l1=l1,
        hilbert_l1=hilbert_l1,
        tail_increment_l1=float(np.mean(increments)),
        k_terms=int(k_terms),
        samples=int(samples),
    )


# ---------------------------------------------------------------------------
# BMO via three shifted dyadic ladders
# ---------------------------------------------------------------------------

def _three_family_intervals(lo: float, hi: float, max_depth: int):
    """Yield (starts, width) batches: dyadic subdivisions of [lo, hi] and
    their two third-shifted copies, every interval meeting [lo, hi]."""
    span = hi - lo
    for depth in range(max_depth + 1):
        width = span / 2.0 ** depth
        for shift in (0.0, width / 3.0, 2.0 * width / 3.0):
            first = lo + shift - width
            count = int(math.ceil((hi - first) / width))
            yield first + width * np.arange(count), width


def default_bmo_domain(origin: float, end: float) -> tuple[float, float]:
    """Support padded by its own length on both sides, so edge oscillation
    against the surrounding zeros is visible to the interval families."""
    length = end - origin
    return origin - length, end + length


def mean_oscillation(f: GridFunction, a: float, b: float) -> float:
    """(1/|I|) * integral over I of |f - mean of f over I|; exact, with the
    part of I outside the support reading f = 0."""
    if b <= a:
        raise ValueError(f"degenerate interval [{a}, {b}]")
    length = b - a
    f_mean = (f.integral_to(b) - f.integral_to(a)) / length
    s0, s1 = max(a, f.origin), min(b, f.end)
    if s1 <= s0:
        return abs(f_mean)  # interval misses the support entirely
    i0 = int(np.floor((s0 - f.origin) / f.step))
    i1 = min(int(np.ceil((s1 - f.origin) / f.step)), len(f.samples))
    idx = np.arange(max(i0, 0), i1)
    cell_lo = f.origin + idx * f.step
    overlap = np.clip(np.minimum(cell_lo + f.step, s1) - np.maximum(cell_lo, s0), 0.0, None)
    inside = float(np.sum(overlap * np.abs(f.samples[idx] - f_mean)))
    outside = length - float(np.sum(overlap))
    return (inside + outside * abs(f_mean)) / length


def bmo_norm(f: GridFunction, max_depth: int = 10,
             domain: tuple[float, float] | None = None) -> float:
    """Best mean oscillation over the three shifted dyadic ladders.

    A certified lower bound for the supremum over all intervals; raising
    max_depth can only raise the answer.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    lo, hi = domain if domain is not None else default_bmo_domain(*f.support)
    best = 0.0
    for starts, width in _three_family_intervals(lo, hi, max_depth):
        for t in starts:
            best = max(best, mean_oscillation(f, float(t), float(t) + width))
    return best


# ---------------------------------------------------------------------------
# block-vector-valued functions and BMO(B)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BlockGridFunction:
    """A block vector on every cell of a uniform grid (zero off support).

    ``data[i]`` is cell i's vector with all blocks concatenated in block
    order; ``pair`` and ``s`` fix the layout and the norm.
    """

    origin: float
    step: float
    pair: LacunaryPair
    s: float
    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", _check_exponent(self.s))
        if self.step <= 0:
            raise ValueError("grid step must be positive")
        sizes = [len(b) for b in self.pair.blocks]
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[0] == 0 or data.shape[1] != sum(sizes):
            raise ValueError(
                f"data must have shape (cells, {sum(sizes)}), got {data.shape}"
            )
        object.__setattr__(self, "data", data)
        bounds = np.cumsum([0] + sizes)
        object.__setattr__(self, "_bounds", bounds)

    @property
    def cells(self) -> int:
        return self.data.shape[0]

    @property
    def end(self) -> float:
        return self.origin + self.step * self.cells

    def vector_at(self, i: int) -> BlockVector:
        row = self.data[i]
        b = self._bounds
        return BlockVector(
            self.pair, self.s,
            tuple(row[b[k]:b[k + 1]] for k in range(self.pair.k_max)),
        )

    def _row_norms(self, rows: np.ndarray) -> np.ndarray:
        """b_norm of each row of a (count, entries) matrix."""
        rows = np.abs(np.atleast_2d(rows))
        b = self._bounds
        peaks = np.zeros((rows.shape[0], self.pair.k_max))
        for k in range(self.pair.k_max):
            if b[k + 1] > b[k]:
                peaks[:, k] = rows[:, b[k]:b[k + 1]].max(axis=1)
        top = peaks.max(axis=1)
        safe = np.where(top > 0.0, top, 1.0)
        body = np.sum((peaks / safe[:, None]) ** self.s, axis=1) ** (1.0 / self.s)
        return np.where(top > 0.0, safe * body, 0.0)

    def cellwise_norm(self) -> GridFunction:
        """The scalar function x -> ||F(x)||_B on the same grid."""
        return GridFunction(self.origin, self.step, self._row_norms(self.data))


def random_block_grid(pair: LacunaryPair, s: float, origin: float, step: float,
                      cells: int, rng: np.random.Generator,
                      low: float = -1.0, high: float = 1.0) -> BlockGridFunction:
    width = sum(len(b) for b in pair.blocks)
    return BlockGridFunction(origin, step, pair, s,
                             rng.uniform(low, high, size=(cells, width)))


def vector_mean_oscillation(F: BlockGridFunction, a: float, b: float) -> float:
    """(1/|I|) * integral over I of ||F - F_I||_B, with the componentwise
    average F_I; exact on the cell semantics."""
    if b <= a:
        raise ValueError(f"degenerate interval [{a}, {b}]")
    length = b - a
    s0, s1 = max(a, F.origin), min(b, F.end)
    if s1 <= s0:
        return 0.0  # F and F_I both vanish there
    i0 = max(int(np.floor((s0 - F.origin) / F.step)), 0)
    i1 = min(int(np.ceil((s1 - F.origin) / F.step)), F.cells)
    idx = np.arange(i0, i1)
    cell_lo = F.origin + idx * F.step
    overlap = np.clip(np.minimum(cell_lo + F.step, s1) - np.maximum(cell_lo, s0), 0.0, None)
    mean_row = overlap @ F.data[idx] / length
    inside = float(overlap @ F._row_norms(F.data[idx] - mean_row))
    outside = length - float(np.sum(overlap))
    return (inside + outside * float(F._row_norms(mean_row)[0])) / length


def bmo_vector_norm(F: BlockGridFunction, max_depth: int = 10,
                    domain: tuple[float, float] | None = None) -> float:
    """Block-valued analogue of bmo_norm over the same interval families."""
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    lo, hi = domain if domain is not None else default_bmo_domain(F.origin, F.end)
    best = 0.0
    for starts, width in _three_family_intervals(lo, hi, max_depth):
        for t in starts:
            best = max(best, vector_mean_oscillation(F, float(t), float(t) + width))
    return best
