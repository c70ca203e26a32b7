"""Lacunary sequences and the block index structure they induce.

A sequence of positive integers is *lacunary* when every consecutive ratio
stays at or above a fixed bound alpha > 1, so the sequence grows at least
geometrically.  Two lacunary sequences together carve the second one into
blocks: block k collects the members of the second sequence lying between
consecutive members k and k+1 of the first.  Both endpoints count, so a
member sitting exactly on a shared boundary appears in two adjacent blocks.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

# Relative slack on the floating-point ratio comparison; sequence entries are
# exact integers but the bound alpha is a float.
RATIO_SLACK = 1e-12


def validate_lacunary(values, alpha: float) -> bool:
    """True iff ``values`` is strictly increasing with every consecutive
    ratio >= ``alpha`` and ``alpha`` > 1.

    An ``alpha`` <= 1 is not a lacunarity bound and fails validation; empty
    or non-positive input is a usage error and raises.
    """
    vals = [int(v) for v in values]
    if not vals:
        raise ValueError("empty sequence cannot be validated")
    if min(vals) < 1:
        raise ValueError(f"sequence entries must be positive integers, got {min(vals)}")
    if alpha <= 1.0:
        return False
    for prev, cur in zip(vals, vals[1:]):
        if cur <= prev:
            return False
        if cur / prev < alpha * (1.0 - RATIO_SLACK):
            return False
    return True


@dataclass(frozen=True)
class LacunarySequence:
    """Strictly increasing positive integers with a certified growth ratio."""

    values: tuple[int, ...]
    ratio_bound: float

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        object.__setattr__(self, "ratio_bound", float(self.ratio_bound))
        if not validate_lacunary(self.values, self.ratio_bound):
            head = ", ".join(str(v) for v in self.values[:6])
            raise ValueError(f"({head}, ...) is not lacunary at ratio {self.ratio_bound}")

    def __len__(self) -> int:
        return len(self.values)

    def tail_sum_constant(self) -> float:
        """C with  sum over entries v >= y of 1/v  <=  C / y, any y > 0
        below the largest entry; follows from the geometric growth."""
        rho = self.ratio_bound
        return rho / (rho - 1.0)


def geometric_sequence(base: int, first: int, count: int) -> LacunarySequence:
    """first, first*base, ..., first*base**(count-1), certified at ratio base."""
    if base < 2 or first < 1 or count < 1:
        raise ValueError("need integer base >= 2, first >= 1, count >= 1")
    return LacunarySequence(tuple(first * base**i for i in range(count)), float(base))


def dyadic_powers(seq: LacunarySequence) -> LacunarySequence:
    """Map each entry e to 2**e.

    Strictly increasing integer exponents have gaps >= 1, so the image is
    lacunary at ratio 2**min(gap) >= 2.
    """
    if seq.values[-1] > 62:
        raise ValueError(f"2**{seq.values[-1]} exceeds the supported window range")
    gaps = [b - a for a, b in zip(seq.values, seq.values[1:])]
    ratio = 2.0 ** min(gaps) if gaps else 2.0
    return LacunarySequence(tuple(2**e for e in seq.values), ratio)


def lacunary_tail_sum(seq: LacunarySequence, y: float) -> float:
    """Sum of 1/v over entries v >= y (0 for an empty tail)."""
    if y <= 0:
        raise ValueError("tail cutoff must be positive")
    return float(sum(1.0 / v for v in seq.values if v >= y))


@dataclass(frozen=True)
class LacunaryPair:
    """Two lacunary sequences plus the block decomposition of the second.

    ``blocks[k]`` (k = 0 .. k_max-1) lists, in increasing order, the members
    m of ``m_set`` with ``n.values[k] <= m <= n.values[k+1]``.  Empty blocks
    are allowed and contribute nothing downstream.
    """

    n: LacunarySequence
    m_set: LacunarySequence
    k_max: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.k_max < 1 or self.k_max > len(self.n.values) - 1:
            raise ValueError(
                f"k_max={self.k_max} needs 1 <= k_max <= {len(self.n.values) - 1} "
                f"(one less than the first sequence's length)"
            )
        if self.blocks != compute_blocks(self.n, self.m_set, self.k_max):
            raise ValueError("blocks are inconsistent with the generating sequences")

    @property
    def largest_window(self) -> int:
        """Largest averaging length any block can reference."""
        return self.n.values[self.k_max]

    def window_lengths(self) -> tuple[int, ...]:
        """Sorted distinct window lengths used by the block structure."""
        lengths = set(self.n.values[: self.k_max + 1])
        for block in self.blocks:
            lengths.update(block)
        return tuple(sorted(lengths))

    def truncated(self, k_max: int) -> "LacunaryPair":
        """The same pair restricted to its first ``k_max`` blocks."""
        if k_max == self.k_max:
            return self
        return build_blocks(self.n, self.m_set, k_max)


def compute_blocks(
    n: LacunarySequence, m_set: LacunarySequence, k_max: int
) -> tuple[tuple[int, ...], ...]:
    """blocks[k] = sorted {m in m_set : n[k] <= m <= n[k+1]}."""
    if k_max < 1 or k_max > len(n.values) - 1:
        raise ValueError(
            f"k_max={k_max} needs 1 <= k_max <= {len(n.values) - 1} "
            f"(one less than the first sequence's length)"
        )
    out = []
    for k in range(k_max):
        lo, hi = n.values[k], n.values[k + 1]
        i = bisect_left(m_set.values, lo)
        j = bisect_right(m_set.values, hi)
        out.append(tuple(m_set.values[i:j]))
    return tuple(out)


def build_blocks(n: LacunarySequence, m_set: LacunarySequence, k_max: int) -> LacunaryPair:
    """Assemble a LacunaryPair with freshly computed blocks."""
    return LacunaryPair(n=n, m_set=m_set, k_max=k_max, blocks=compute_blocks(n, m_set, k_max))
