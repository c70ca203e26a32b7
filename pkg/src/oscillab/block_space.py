"""Block vectors normed by an l^s sum of per-block sup norms.

The coordinate layout comes from a LacunaryPair: one finite group of entries
per block, one entry per block member.  The exponent s >= 2 is part of the
space, not of the norm call, so vectors built over different exponents never
mix silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sequences import LacunaryPair


def _check_exponent(s: float) -> float:
    s = float(s)
    if not np.isfinite(s) or s < 2.0:
        raise ValueError(f"block-space exponent must be finite and >= 2, got {s}")
    return s


@dataclass(frozen=True, eq=False)
class BlockVector:
    """One finite group of real entries per block of ``pair``."""

    pair: LacunaryPair
    s: float
    entries: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "s", _check_exponent(self.s))
        groups = tuple(np.asarray(g, dtype=float) for g in self.entries)
        if len(groups) != self.pair.k_max:
            raise ValueError(
                f"expected {self.pair.k_max} entry groups, got {len(groups)}"
            )
        for k, (g, block) in enumerate(zip(groups, self.pair.blocks)):
            if g.shape != (len(block),):
                raise ValueError(
                    f"group {k} has shape {g.shape}, block needs ({len(block)},)"
                )
        object.__setattr__(self, "entries", groups)


def zero_vector(pair: LacunaryPair, s: float) -> BlockVector:
    return BlockVector(pair, s, tuple(np.zeros(len(b)) for b in pair.blocks))


def _same_space(u: BlockVector, v: BlockVector) -> None:
    if u.pair != v.pair or u.s != v.s:
        raise ValueError("block vectors live in different spaces (pair or exponent differ)")


def b_norm(v: BlockVector) -> float:
    """(sum over blocks of (max abs entry)^s)^(1/s); empty blocks count 0."""
    peaks = np.array(
        [np.max(np.abs(g)) if g.size else 0.0 for g in v.entries], dtype=float
    )
    top = float(peaks.max(initial=0.0))
    if top == 0.0:
        return 0.0
    # factor out the largest peak so large exponents cannot overflow
    return top * float(np.sum((peaks / top) ** v.s)) ** (1.0 / v.s)


def b_add(u: BlockVector, v: BlockVector) -> BlockVector:
    _same_space(u, v)
    return BlockVector(u.pair, u.s, tuple(a + b for a, b in zip(u.entries, v.entries)))


def b_scale(c: float, v: BlockVector) -> BlockVector:
    return BlockVector(v.pair, v.s, tuple(float(c) * g for g in v.entries))


# ---------------------------------------------------------------------------
# window-indexed aggregation
#
# Both the kernel and the oscillation operators reduce to the same step:
# given one number per distinct window length (per evaluation point), form
# member-minus-reference differences inside each block, take the block max
# of absolute values, and combine blocks in l^s.  The layout ties window
# lengths to block positions once so the reduction can run on whole arrays.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowLayout:
    """Row bookkeeping for arrays indexed by distinct window length."""

    pair: LacunaryPair
    windows: np.ndarray                       # sorted distinct lengths, float
    refs: tuple[int, ...]                     # row of n_k per block
    members: tuple[np.ndarray, ...]           # rows of each block's members


def window_layout(pair: LacunaryPair) -> WindowLayout:
    lengths = pair.window_lengths()
    row_of = {w: i for i, w in enumerate(lengths)}
    refs = tuple(row_of[pair.n.values[k]] for k in range(pair.k_max))
    members = tuple(
        np.array([row_of[m] for m in block], dtype=np.intp) for block in pair.blocks
    )
    return WindowLayout(pair, np.asarray(lengths, dtype=float), refs, members)


def aggregate_rows(layout: WindowLayout, rows: np.ndarray, s: float) -> np.ndarray:
    """l^s over blocks of max_m |rows[m] - rows[n_k]|, per column.

    ``rows`` has one row per layout window; the result has one value per
    column.  The largest block peak is factored out so big exponents stay
    inside floating-point range.
    """
    s = _check_exponent(s)
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    peaks = np.zeros((layout.pair.k_max, rows.shape[1]))
    for k, (ref, member_rows) in enumerate(zip(layout.refs, layout.members)):
        if member_rows.size:
            peaks[k] = np.max(np.abs(rows[member_rows] - rows[ref]), axis=0)
    top = peaks.max(axis=0)
    safe = np.where(top > 0.0, top, 1.0)
    body = np.sum((peaks / safe) ** s, axis=0) ** (1.0 / s)
    return np.where(top > 0.0, safe * body, 0.0)


def vector_from_window_values(layout: WindowLayout, s: float,
                              column: np.ndarray) -> BlockVector:
    """BlockVector of member-minus-reference differences of one column."""
    column = np.asarray(column, dtype=float)
    entries = tuple(
        column[member_rows] - column[ref]
        for ref, member_rows in zip(layout.refs, layout.members)
    )
    return BlockVector(layout.pair, s, entries)
