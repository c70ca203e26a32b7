"""Deterministic experiment harness behind the command-line interface.

Each experiment reads a configuration dictionary (defaults overridable via a
JSON file), computes a table of rows, and returns an ExperimentReport whose
summary values are plain reductions of those rows -- every reported sup is
the max of a visible column.  Verdicts are named boolean checks; a report
passes when all of them hold.

Determinism contract: identical config and seed produce byte-identical CSV
rows.  Randomized family members draw from generators keyed by
``SeedSequence(seed, spawn_key=(kind, index))``, so enlarging a family keeps
every existing member unchanged.  Parallel row computation (``threads > 1``)
preserves input order when merging.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ergodic import (
    THETA_DEFAULT,
    CircleFunction,
    CircleHarmonic,
    CirclePiecewise,
    RotationSystem,
    circle_indicator,
    ebmo_norm,
    maximal_profile,
    random_circle,
)
from .grid import (
    GridFunction,
    distribution_bound,
    from_csv,
    indicator,
    lp_norm,
    random_bounded,
    sup_norm,
    tent,
)
from .kernel import hormander_integral, hormander_integral_riemann
from .norms import (
    BlockGridFunction,
    bmo_norm,
    bmo_vector_norm,
    h1_norm_ergodic,
    make_atom,
)
from .oscillation import (
    OscillationConfig,
    oscillation_ergodic_profile,
    oscillation_line_profile,
)
from .sequences import LacunaryPair, LacunarySequence, build_blocks, geometric_sequence

__all__ = [
    "DEFAULTS",
    "EXPERIMENTS",
    "ExperimentReport",
    "build_line_function",
    "circle_family",
    "exp_bmo",
    "exp_fstar_ratio",
    "exp_h1",
    "exp_hormander",
    "exp_oscillation",
    "exp_strong_p",
    "exp_transference",
    "exp_weak_11",
    "line_block_profile",
    "line_family",
    "line_operator_profile",
    "load_config",
    "render_report_csv",
    "run_experiment",
    "write_report",
]


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentReport:
    """One experiment's table plus its summary and named boolean verdicts."""

    experiment: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    summary: dict
    verdicts: dict[str, bool]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row width {len(row)} != {len(self.columns)} columns"
                )

    @property
    def passed(self) -> bool:
        return all(bool(v) for v in self.verdicts.values())


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def render_report_csv(report: ExperimentReport) -> str:
    """The report table as CSV text (shortest round-trip float format)."""
    lines = [",".join(report.columns)]
    for row in report.rows:
        cells = [_format_cell(v) for v in row]
        if any("," in c or '"' in c or "\n" in c for c in cells):
            raise ValueError("cell values must not need CSV quoting")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _jsonable(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        out = float(value)
        return out if math.isfinite(out) else repr(out)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    return value


def write_report(report: ExperimentReport, base, figures: bool = True) -> list[str]:
    """Write ``base.csv`` (rows) and ``base.json`` (summary + verdicts).

    With ``figures`` set, PNG plots are rendered next to the CSV as well.
    Returns the list of paths written.
    """
    base = Path(base)
    if base.suffix in (".csv", ".json", ".png"):
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    csv_path = base.with_suffix(".csv")
    csv_path.write_text(render_report_csv(report))
    payload = {
        "experiment": report.experiment,
        "row_count": len(report.rows),
        "summary": _jsonable(report.summary),
        "verdicts": _jsonable(report.verdicts),
        "passed": report.passed,
    }
    json_path = base.with_suffix(".json")
    json_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    written = [str(csv_path), str(json_path)]
    if figures:
        from . import figures as _figures

        written.extend(_figures.render_figures(report, base))
    return written


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

_PAIR_SMALL = {"base": 2, "first": 1, "count": 9}   # windows 1 .. 256
_PAIR_WIDE = {"base": 2, "first": 1, "count": 25}   # windows 1 .. 2**24

_DEFAULT_KINDS = ["indicator", "tent", "haar", "random"]

DEFAULTS: dict[str, dict] = {
    "verify-hormander": {
        "n": dict(_PAIR_WIDE),
        "m": "same",
        "k_max": None,
        "s": 2.0,
        "mode": "direct",
        "cutoff": 4.0,
        "y_values": [0.01, -0.01, 0.5, -0.5, 1.0, -1.0,
                     3.0, -3.0, 37.5, -37.5, 500.0, -500.0],
        "riemann": {"k_max": 9, "step": 1e-3,
                    "y_values": [1.0, -0.5, 37.5], "rel_tol": 1e-4},
        "seed": 0,
    },
    "oscillation": {
        "n": dict(_PAIR_SMALL),
        "m": "same",
        "k_max": None,
        "s": 2.0,
        "mode": "direct",
        "step": 1.0 / 64,
        "function": {"kind": "indicator", "a": 0.0, "b": 1.0},
        "points": {"start": -1.0, "stop": 6.0, "count": 141},
        "seed": 0,
    },
    "strong-p": {
        "n": dict(_PAIR_SMALL),
        "m": "same",
        "k_max": None,
        "s": 2.0,
        "mode": "direct",
        "step": 1.0 / 64,
        "side": "line",
        "p_values": [1.5, 2.0, 3.0, 4.0],
        "family_kinds": list(_DEFAULT_KINDS),
        "family_count": 16,
        "theta": THETA_DEFAULT,
        "circle_cells": 64,
        "circle_samples": 2048,
        "seed": 7,
    },
    "weak11": {
        "n": dict(_PAIR_SMALL),
        "m": "same",
        "k_max": None,
        "s": 2.0,
        "mode": "direct",
        "step": 1.0 / 64,
        "family_kinds": list(_DEFAULT_KINDS),
        "family_count": 16,
        "lambda_points": 40,
        "lambda_span": [1e-3, 1e2],
        "seed": 11,
    },
    "h1": {
        "n": dict(_PAIR_SMALL),
        "m": "same",
        "k_max": None,
        "s": 2.0,
        "mode": "direct",
        "step": 1.0 / 64,
        "side": "both",
        "width_exponents": list(range(-3, 7)),
        "translations": 20,
        "band_ceiling": 3.0,
        "theta": THETA_DEFAULT,
        "frequencies": [1, 2, 3, 4],
        "phases": 2,
        "k_terms": 10000,
        "hilbert_samples": 1024,
        "circle_samples": 2048,
        "diagnostic_ceiling": 0.01,
        "seed": 13,
    },
    "bmo": {
        "n": dict(_PAIR_SMALL),
        "m": "same",
        "k_max": None,
        "s": 2.0,
        "mode": "direct",
        "step": 1.0 / 64,
        "side": "both",
        "family_kinds": list(_DEFAULT_KINDS),
        "family_count": 4,
        "max_depth": 8,
        "theta": THETA_DEFAULT,
        "circle_count": 4,
        "circle_cells": 512,
        "ebmo_n_max": 64,
        "ebmo_samples": 512,
        "sharp_variant": "centered",
        "seed": 17,
    },
    "fstar": {
        "n": dict(_PAIR_SMALL),
        "m": "same",
        "k_max": None,
        "s": 2.0,
        "mode": "direct",
        "theta": THETA_DEFAULT,
        "family_kinds": ["random", "indicator"],
        "family_count": 8,
        "circle_cells": 64,
        "samples": 2048,
        "seed": 19,
    },
    "transfer": {
        "n": dict(_PAIR_SMALL),
        "m": "same",
        "k_max": None,
        "s": 2.0,
        "mode": "direct",
        "theta": THETA_DEFAULT,
        "t_start": 8.0,
        "doublings": 3,
        "time_step": 1.0 / 16,
        "points": [0.0625, 0.3125, 0.5625, 0.8125],
        "functions": ["cosine", "indicator"],
        "cosine_frequency": 1,
        "indicator_arc": [0.15, 0.55],
        "indicator_cells": 64,
        "seed": 23,
    },
}


def load_config(path) -> dict:
    """Read a JSON configuration file into a plain dictionary."""
    with open(path, "r", encoding="utf-8") as handle:
        cfg = json.load(handle)
    if not isinstance(cfg, dict):
        raise ValueError(f"config root must be a JSON object, got {type(cfg)}")
    return cfg


def _fill(defaults: dict, given: dict | None, where: str) -> dict:
    merged = {k: (dict(v) if isinstance(v, dict) else list(v) if isinstance(v, list) else v)
              for k, v in defaults.items()}
    for key, value in (given or {}).items():
        if key not in defaults:
            raise ValueError(
                f"unknown {where} key {key!r}; allowed: {sorted(defaults)}"
            )
        merged[key] = value
    return merged


def _parse_sequence(given) -> LacunarySequence:
    if isinstance(given, dict):
        geo = _fill({"base": 2, "first": 1, "count": 9}, given, "sequence")
        return geometric_sequence(int(geo["base"]), int(geo["first"]), int(geo["count"]))
    values = tuple(int(v) for v in given)
    if len(values) < 2:
        raise ValueError("an explicit sequence needs at least two terms")
    bound = min(b / a for a, b in zip(values, values[1:]))
    return LacunarySequence(values, bound)


def _parse_pair(cfg: dict) -> LacunaryPair:
    n = _parse_sequence(cfg["n"])
    m_given = cfg.get("m", "same")
    m_set = n if m_given in ("same", None) else _parse_sequence(m_given)
    k_max = cfg.get("k_max")
    if k_max is None:
        k_max = len(n) - 1
    return build_blocks(n, m_set, int(k_max))


def _osc_config(cfg: dict) -> OscillationConfig:
    return OscillationConfig(_parse_pair(cfg), float(cfg["s"]), str(cfg["mode"]))


def _pair_info(pair: LacunaryPair) -> dict:
    return {
        "n": list(pair.n.values),
        "m": list(pair.m_set.values),
        "k_max": pair.k_max,
    }


def _member_rng(seed: int, kind_index: int, member_index: int) -> np.random.Generator:
    key = np.random.SeedSequence(int(seed), spawn_key=(kind_index, member_index))
    return np.random.default_rng(key)


def _ordered_map(fn, items, threads: int = 1) -> list:
    items = list(items)
    if threads and int(threads) > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


# ---------------------------------------------------------------------------
# Input families
# ---------------------------------------------------------------------------

_LINE_KINDS = ("indicator", "tent", "haar", "random", "alternating")


def _make_line_shape(kind: str, a: float, b: float, step: float,
                     rng: np.random.Generator | None) -> GridFunction:
    if kind == "indicator":
        return indicator(a, b, step)
    if kind == "tent":
        return tent(a, b, step)
    if kind == "haar":
        cells = max(2, int(round((b - a) / step)))
        return make_atom(a, b, "haar", cells=cells).profile
    if kind == "random":
        if rng is None:
            raise ValueError("kind 'random' needs a generator")
        return random_bounded(a, b, step, rng)
    if kind == "alternating":
        count = max(1, int(round((b - a) / step)))
        return GridFunction(a, step, np.where(np.arange(count) % 2 == 0, 1.0, -1.0))
    raise ValueError(f"unknown line function kind {kind!r}; allowed: {_LINE_KINDS}")


def build_line_function(given: dict, step: float, seed: int = 0) -> tuple[str, GridFunction]:
    """One grid function from a config entry; returns (label, function)."""
    full = _fill(
        {"kind": "indicator", "a": 0.0, "b": 1.0, "path": None,
         "origin": 0.0, "seed": None},
        given, "function",
    )
    kind = str(full["kind"])
    if kind == "csv":
        if not full["path"]:
            raise ValueError("kind 'csv' needs a 'path'")
        return "csv", from_csv(full["path"], float(full["origin"]), step)
    rng_seed = full["seed"] if full["seed"] is not None else seed
    rng = _member_rng(int(rng_seed), 0, 0)
    return kind, _make_line_shape(kind, float(full["a"]), float(full["b"]), step, rng)


def line_family(kinds, count: int, step: float, seed: int) -> list[tuple[str, GridFunction]]:
    """Deterministic family of test functions: ``count`` members per kind.

    Member (kind, i) draws its width (a power of two between 1/4 and 8) and
    offset from its own spawn-keyed generator, so extending ``count`` never
    changes existing members.
    """
    members = []
    for kind_index, kind in enumerate(kinds):
        if kind not in _LINE_KINDS:
            raise ValueError(f"unknown family kind {kind!r}; allowed: {_LINE_KINDS}")
        for i in range(int(count)):
            rng = _member_rng(seed, kind_index, i)
            width = float(2.0 ** int(rng.integers(-2, 4)))
            offset = float(rng.uniform(0.0, 4.0))
            members.append(
                (f"{kind}-{i:02d}",
                 _make_line_shape(kind, offset, offset + width, step, rng))
            )
    return members


_CIRCLE_KINDS = ("random", "indicator", "harmonic")


def circle_family(kinds, count: int, cells: int, seed: int) -> list[tuple[str, CircleFunction]]:
    """Deterministic family of circle functions, one generator per member."""
    members: list[tuple[str, CircleFunction]] = []
    for kind_index, kind in enumerate(kinds):
        if kind not in _CIRCLE_KINDS:
            raise ValueError(f"unknown circle kind {kind!r}; allowed: {_CIRCLE_KINDS}")
        for i in range(int(count)):
            rng = _member_rng(seed, 64 + kind_index, i)
            if kind == "random":
                f: CircleFunction = random_circle(int(cells), rng)
            elif kind == "indicator":
                start = float(rng.uniform(0.0, 1.0))
                width = float(rng.uniform(0.1, 0.45))
                f = circle_indicator(start, start + width, int(cells))
            else:
                f = CircleHarmonic(1.0, 1 + i % 4, float(rng.uniform(0.0, 1.0)))
            members.append((f"{kind}-{i:02d}", f))
    return members


# ---------------------------------------------------------------------------
# Operator profiles on the line
# ---------------------------------------------------------------------------

def line_operator_profile(osc: OscillationConfig, f: GridFunction,
                          sample_step: float | None = None) -> tuple[GridFunction, float]:
    """Sample x -> Of(x) at cell midpoints over the support of Of.

    Of vanishes left of the support of f and beyond the largest window past
    it, so the grid [origin, end + largest window] captures everything.
    Returns the sampled profile and the truncation tail bound.
    """
    step = float(sample_step) if sample_step is not None else f.step
    lo = f.origin
    hi = f.end + osc.largest_window
    count = max(1, int(math.ceil((hi - lo) / step - 1e-9)))
    mids = lo + (np.arange(count) + 0.5) * step
    values, tail = oscillation_line_profile(osc, f, mids)
    return GridFunction(lo, step, values), float(tail)


def line_block_profile(osc: OscillationConfig, f: GridFunction,
                       sample_step: float | None = None) -> BlockGridFunction:
    """Sample the block-space-valued convolution x -> (K*f)(x) cellwise.

    Cell i holds the vector of window-average differences at the cell
    midpoint; its blockwise norm is exactly the sampled Of.
    """
    layout = osc.layout
    step = float(sample_step) if sample_step is not None else f.step
    lo = f.origin
    hi = f.end + osc.largest_window
    count = max(1, int(math.ceil((hi - lo) / step - 1e-9)))
    mids = lo + (np.arange(count) + 0.5) * step
    lead = f.integral_to(mids)
    rows = np.empty((len(layout.windows), count))
    for i, w in enumerate(layout.windows):
        rows[i] = (lead - f.integral_to(mids - w)) / w
    pieces = [rows[member_rows] - rows[ref][None, :]
              for ref, member_rows in zip(layout.refs, layout.members)]
    data = np.concatenate(pieces, axis=0).T if pieces else np.zeros((count, 0))
    return BlockGridFunction(lo, step, osc.effective_pair, osc.s, data)


def _circle_lp(f: CirclePiecewise, p: float) -> float:
    """Exact L^p norm of a piecewise-constant circle function."""
    return float(np.mean(np.abs(f.values) ** p) ** (1.0 / p))


def _circle_sample_grid(samples: int) -> np.ndarray:
    return (np.arange(int(samples)) + 0.5) / int(samples)


def _circle_sup(f: CircleFunction) -> float:
    if isinstance(f, CirclePiecewise):
        return float(np.max(np.abs(f.values)))
    if isinstance(f, CircleHarmonic):
        return abs(f.amplitude)
    raise ValueError(f"no exact sup available for {type(f).__name__}")


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def exp_hormander(config: dict | None = None, threads: int = 1) -> ExperimentReport:
    """Sweep y and check the integral of ||K(x-y)-K(x)|| against its ceiling.

    Optionally re-checks a reduced pair against the midpoint-rule oracle
    (``riemann`` sub-config) and records the relative errors in the summary.
    """
    cfg = _fill(DEFAULTS["verify-hormander"], config, "verify-hormander")
    osc = _osc_config(cfg)
    pair = osc.effective_pair
    cutoff = float(cfg["cutoff"])
    y_values = [float(y) for y in cfg["y_values"]]
    if not y_values:
        raise ValueError("y_values must be nonempty")

    results = _ordered_map(
        lambda y: hormander_integral(pair, osc.s, y, cutoff), y_values, threads
    )
    rows = tuple(
        (r.y, r.cutoff, r.integral, r.negative_region_integral, r.ceiling,
         r.within_ceiling)
        for r in results
    )
    columns = ("y", "cutoff", "integral", "negative_region_integral",
               "ceiling", "pass")
    verdicts = {
        "within_ceiling": all(r.within_ceiling for r in results),
        "negative_region_zero": all(
            r.negative_region_integral == 0.0 for r in results
        ),
    }
    summary = {
        "pair": _pair_info(pair),
        "s": osc.s,
        "cutoff": cutoff,
        "ceiling": results[0].ceiling,
        "max_integral": max(r.integral for r in results),
        "riemann": None,
    }

    if cfg["riemann"]:
        rc = _fill(DEFAULTS["verify-hormander"]["riemann"], cfg["riemann"], "riemann")
        reduced = pair.truncated(min(int(rc["k_max"]), pair.k_max))
        checks = []
        for y in rc["y_values"]:
            exact = hormander_integral(reduced, osc.s, float(y), cutoff).integral
            approx = hormander_integral_riemann(
                reduced, osc.s, float(y), cutoff, step=float(rc["step"])
            )
            denom = max(abs(exact), np.finfo(float).tiny)
            checks.append({
                "y": float(y),
                "exact": exact,
                "riemann": approx,
                "relative_error": abs(approx - exact) / denom,
            })
        summary["riemann"] = {"k_max": int(rc["k_max"]), "step": float(rc["step"]),
                              "checks": checks}
        verdicts["riemann_agrees"] = all(
            c["relative_error"] <= float(rc["rel_tol"]) for c in checks
        )

    return ExperimentReport("verify-hormander", columns, rows, summary, verdicts)


def exp_oscillation(config: dict | None = None, threads: int = 1) -> ExperimentReport:
    """Point sweep of the line oscillation of one configured function."""
    cfg = _fill(DEFAULTS["oscillation"], config, "oscillation")
    osc = _osc_config(cfg)
    step = float(cfg["step"])
    label, f = build_line_function(cfg["function"], step, int(cfg["seed"]))

    points = cfg["points"]
    if isinstance(points, dict):
        span = _fill({"start": 0.0, "stop": 1.0, "count": 2}, points, "points")
        xs = np.linspace(float(span["start"]), float(span["stop"]), int(span["count"]))
    else:
        xs = np.asarray([float(x) for x in points], dtype=float)
    if xs.size == 0:
        raise ValueError("points must be nonempty")

    values, tail = oscillation_line_profile(osc, f, xs)
    rows = tuple((float(x), float(v), float(tail)) for x, v in zip(xs, values))
    summary = {
        "pair": _pair_info(osc.effective_pair),
        "s": osc.s,
        "mode": osc.mode,
        "function": label,
        "max_value": float(values.max()),
        "tail_bound": float(tail),
    }
    verdicts = {"values_finite": bool(np.isfinite(values).all())}
    return ExperimentReport("oscillation", ("x", "value", "tail_bound"),
                            rows, summary, verdicts)


def exp_strong_p(config: dict | None = None, threads: int = 1) -> ExperimentReport:
    """Ratios ||Of||_p / ||f||_p over the default family, per exponent p."""
    cfg = _fill(DEFAULTS["strong-p"], config, "strong-p")
    osc = _osc_config(cfg)
    step = float(cfg["step"])
    p_values = [float(p) for p in cfg["p_values"]]
    side = str(cfg["side"])
    if side not in ("line", "ergodic", "both"):
        raise ValueError(f"side must be line/ergodic/both, got {side!r}")

    rows: list[tuple] = []

    if side in ("line", "both"):
        members = line_family(cfg["family_kinds"], int(cfg["family_count"]),
                              step, int(cfg["seed"]))

        def line_task(member):
            label, f = member
            profile, _ = line_operator_profile(osc, f)
            out = []
            for p in p_values:
                fn = lp_norm(f, p)
                on = lp_norm(profile, p)
                out.append((label, "line", p, fn, on, on / fn))
            return out

        for chunk in _ordered_map(line_task, members, threads):
            rows.extend(chunk)

    if side in ("ergodic", "both"):
        system = RotationSystem(float(cfg["theta"]), "map")
        grid_points = _circle_sample_grid(int(cfg["circle_samples"]))
        circle_members = circle_family(["random", "indicator"],
                                       int(cfg["family_count"]),
                                       int(cfg["circle_cells"]), int(cfg["seed"]))

        def circle_task(member):
            label, f = member
            values, _ = oscillation_ergodic_profile(osc, system, f, grid_points)
            out = []
            for p in p_values:
                fn = _circle_lp(f, p)
                on = float(np.mean(values ** p) ** (1.0 / p))
                out.append((label, "ergodic", p, fn, on, on / fn if fn > 0 else 0.0))
            return out

        for chunk in _ordered_map(circle_task, circle_members, threads):
            rows.extend(chunk)

    columns = ("case", "side", "p", "input_norm", "output_norm", "ratio")
    ratio_by = {}
    for row in rows:
        key = (row[1], row[2])
        ratio_by.setdefault(key, []).append(row[5])
    sup_ratio = {
        f"{side_key}_p{p_key:g}": max(vals)
        for (side_key, p_key), vals in sorted(ratio_by.items())
    }
    summary = {
        "pair": _pair_info(osc.effective_pair),
        "s": osc.s,
        "mode": osc.mode,
        "family_count": int(cfg["family_count"]),
        "sup_ratio": sup_ratio,
    }
    verdicts = {
        "ratios_finite": all(math.isfinite(row[5]) for row in rows),
        "inputs_nonzero": all(row[3] > 0.0 or row[5] == 0.0 for row in rows),
    }
    return ExperimentReport("strong-p", columns, tuple(rows), summary, verdicts)


def exp_weak_11(config: dict | None = None, threads: int = 1) -> ExperimentReport:
    """Weak (1,1) ratios lambda * |{Of > lambda}| / ||f||_1 on a log grid.

    The lambda grid for each input spans ``lambda_span`` times the input's
    mean height ||f||_1 / (support length), so it brackets the nontrivial
    part of the distribution function at every scale.
    """
    cfg = _fill(DEFAULTS["weak11"], config, "weak11")
    osc = _osc_config(cfg)
    step = float(cfg["step"])
    span = [float(v) for v in cfg["lambda_span"]]
    if len(span) != 2 or not 0 < span[0] < span[1]:
        raise ValueError(f"lambda_span must be (lo, hi) with 0 < lo < hi, got {span}")
    points = int(cfg["lambda_points"])
    if points < 2:
        raise ValueError("lambda_points must be >= 2")
    members = line_family(cfg["family_kinds"], int(cfg["family_count"]),
                          step, int(cfg["seed"]))

    def task(member):
        label, f = member
        profile, _ = line_operator_profile(osc, f)
        l1 = lp_norm(f, 1.0)
        scale = l1 / (f.end - f.origin)
        lams = np.geomspace(span[0] * scale, span[1] * scale, points)
        out = []
        for lam in lams:
            weighted = distribution_bound(profile, float(lam))
            out.append((label, float(lam), weighted / lam, weighted / l1))
        return out

    rows: list[tuple] = []
    for chunk in _ordered_map(task, members, threads):
        rows.extend(chunk)

    ratios = [row[3] for row in rows]
    best = max(range(len(rows)), key=lambda i: ratios[i])
    summary = {
        "pair": _pair_info(osc.effective_pair),
        "s": osc.s,
        "lambda_points": points,
        "sup_ratio": ratios[best],
        "argmax": {"case": rows[best][0], "lambda": rows[best][1]},
    }
    verdicts = {"ratios_finite": all(math.isfinite(r) for r in ratios)}
    return ExperimentReport("weak11", ("case", "lambda", "measure", "ratio"),
                            tuple(rows), summary, verdicts)


def exp_h1(config: dict | None = None, threads: int = 1) -> ExperimentReport:
    """Hardy-space behavior: atom L1 band on the line, H1 ratios on the circle.

    Line side: ||Oa||_1 for mean-zero atoms across widths 2^j and random
    translations; the summary reports the max/min band.  Ergodic side:
    ||Of||_1 / (||f||_1 + ||Hf||_1) for harmonics, with the Hilbert-sum
    convergence diagnostic (last-halving increment over the full sum).
    """
    cfg = _fill(DEFAULTS["h1"], config, "h1")
    osc = _osc_config(cfg)
    side = str(cfg["side"])
    if side not in ("line", "ergodic", "both"):
        raise ValueError(f"side must be line/ergodic/both, got {side!r}")
    step = float(cfg["step"])
    rows: list[tuple] = []

    if side in ("line", "both"):
        jobs = []
        for j in [int(v) for v in cfg["width_exponents"]]:
            width = 2.0 ** j
            for t in range(int(cfg["translations"])):
                rng = _member_rng(int(cfg["seed"]), 8 + j, t)
                shift = float(rng.uniform(0.0, 4.0))
                jobs.append((j, width, t, shift))

        def atom_task(job):
            j, width, t, shift = job
            cells = max(2, int(round(width / step)))
            atom = make_atom(shift, shift + width, "haar", cells=cells)
            profile, tail = line_operator_profile(
                osc, atom.profile, min(atom.profile.step, step)
            )
            o_l1 = lp_norm(profile, 1.0)
            return (f"haar-j{j}-t{t:02d}", "line", width, o_l1, 1.0, o_l1, tail)

        rows.extend(_ordered_map(atom_task, jobs, threads))

    if side in ("ergodic", "both"):
        system = RotationSystem(float(cfg["theta"]), "map")
        grid_points = _circle_sample_grid(int(cfg["circle_samples"]))
        members = []
        for fi, freq in enumerate([int(v) for v in cfg["frequencies"]]):
            for ph in range(int(cfg["phases"])):
                rng = _member_rng(int(cfg["seed"]), 128 + fi, ph)
                members.append(
                    (f"cos-f{freq}-p{ph}",
                     CircleHarmonic(1.0, freq, float(rng.uniform(0.0, 1.0))))
                )

        def circle_task(member):
            label, f = member
            values, _ = oscillation_ergodic_profile(osc, system, f, grid_points)
            o_l1 = float(values.mean())
            h1 = h1_norm_ergodic(system, f, int(cfg["k_terms"]),
                                 samples=int(cfg["hilbert_samples"]))
            diag = (h1.tail_increment_l1 / h1.hilbert_l1
                    if h1.hilbert_l1 > 0 else 0.0)
            ratio = o_l1 / h1.value if h1.value > 0 else 0.0
            return (label, "ergodic", float(f.frequency), o_l1, h1.value,
                    ratio, diag)

        rows.extend(_ordered_map(circle_task, members, threads))

    columns = ("case", "side", "scale", "o_l1", "h1_norm", "ratio", "diagnostic")
    line_rows = [r for r in rows if r[1] == "line"]
    ergodic_rows = [r for r in rows if r[1] == "ergodic"]
    summary = {
        "pair": _pair_info(osc.effective_pair),
        "s": osc.s,
        "mode": osc.mode,
    }
    verdicts: dict[str, bool] = {
        "values_finite": all(math.isfinite(r[3]) for r in rows),
    }
    if line_rows:
        top = max(r[3] for r in line_rows)
        bottom = min(r[3] for r in line_rows)
        band = top / bottom if bottom > 0 else math.inf
        summary["line_band"] = {"max": top, "min": bottom, "ratio": band}
        verdicts["uniform_band"] = band <= float(cfg["band_ceiling"])
    if ergodic_rows:
        summary["ergodic_sup_ratio"] = max(r[5] for r in ergodic_rows)
        summary["hilbert_diagnostic_max"] = max(r[6] for r in ergodic_rows)
        verdicts["hilbert_tail_small"] = all(
            r[6] < float(cfg["diagnostic_ceiling"]) for r in ergodic_rows
        )
    return ExperimentReport("h1", columns, tuple(rows), summary, verdicts)


def exp_bmo(config: dict | None = None, threads: int = 1) -> ExperimentReport:
    """Mean-oscillation ratios of Of against sup|f| on both sides.

    Line rows come in scalar form (BMO of the sampled Of) and vector form
    (BMO of the block-valued K*f profile); the ergodic rows use the orbit
    sharp function on a sampled circle profile of Of.
    """
    cfg = _fill(DEFAULTS["bmo"], config, "bmo")
    osc = _osc_config(cfg)
    side = str(cfg["side"])
    if side not in ("line", "ergodic", "both"):
        raise ValueError(f"side must be line/ergodic/both, got {side!r}")
    step = float(cfg["step"])
    depth = int(cfg["max_depth"])
    rows: list[tuple] = []

    if side in ("line", "both"):
        members = line_family(cfg["family_kinds"], int(cfg["family_count"]),
                              step, int(cfg["seed"]))

        def line_task(member):
            label, f = member
            sup_f = sup_norm(f)
            profile, _ = line_operator_profile(osc, f)
            scalar = bmo_norm(profile, max_depth=depth)
            block = line_block_profile(osc, f)
            vector = bmo_vector_norm(block, max_depth=depth)
            return [
                (label, "scalar", scalar, sup_f, scalar / sup_f),
                (label, "vector", vector, sup_f, vector / sup_f),
            ]

        for chunk in _ordered_map(line_task, members, threads):
            rows.extend(chunk)

    if side in ("ergodic", "both"):
        system = RotationSystem(float(cfg["theta"]), "map")
        cells = int(cfg["circle_cells"])
        grid_points = _circle_sample_grid(cells)
        circle_members = circle_family(["random", "indicator"],
                                       int(cfg["circle_count"]),
                                       cells, int(cfg["seed"]))

        def circle_task(member):
            label, f = member
            sup_f = _circle_sup(f)
            values, _ = oscillation_ergodic_profile(osc, system, f, grid_points)
            o_profile = CirclePiecewise(values)
            value = ebmo_norm(system, o_profile, int(cfg["ebmo_n_max"]),
                              variant=str(cfg["sharp_variant"]),
                              samples=int(cfg["ebmo_samples"]))
            return (label, "ebmo", value, sup_f, value / sup_f if sup_f else 0.0)

        rows.extend(_ordered_map(circle_task, circle_members, threads))

    columns = ("case", "form", "oscillation_norm", "sup_norm", "ratio")
    summary = {
        "pair": _pair_info(osc.effective_pair),
        "s": osc.s,
        "max_depth": depth,
        "sup_ratio": {
            form: max(r[4] for r in rows if r[1] == form)
            for form in sorted({r[1] for r in rows})
        },
    }
    verdicts = {"ratios_finite": all(math.isfinite(r[4]) for r in rows)}
    return ExperimentReport("bmo", columns, tuple(rows), summary, verdicts)


def exp_fstar_ratio(config: dict | None = None, threads: int = 1) -> ExperimentReport:
    """Ratios ||Of||_1 / ||f*||_1 under the rotation map, per family member."""
    cfg = _fill(DEFAULTS["fstar"], config, "fstar")
    osc = _osc_config(cfg)
    system = RotationSystem(float(cfg["theta"]), "map")
    n_max = int(osc.largest_window)
    grid_points = _circle_sample_grid(int(cfg["samples"]))
    members = circle_family(cfg["family_kinds"], int(cfg["family_count"]),
                            int(cfg["circle_cells"]), int(cfg["seed"]))

    def task(member):
        label, f = member
        values, _ = oscillation_ergodic_profile(osc, system, f, grid_points)
        o_l1 = float(values.mean())
        star_l1 = float(maximal_profile(system, f, grid_points, n_max).mean())
        return (label, o_l1, star_l1, o_l1 / star_l1 if star_l1 > 0 else 0.0)

    rows = tuple(_ordered_map(task, members, threads))
    summary = {
        "pair": _pair_info(osc.effective_pair),
        "s": osc.s,
        "n_max": n_max,
        "sup_ratio": max(r[3] for r in rows),
    }
    verdicts = {"ratios_finite": all(math.isfinite(r[3]) for r in rows)}
    return ExperimentReport("fstar", ("case", "o_l1", "fstar_l1", "ratio"),
                            rows, summary, verdicts)


def _transfer_functions(cfg: dict) -> list[tuple[str, CircleFunction]]:
    out: list[tuple[str, CircleFunction]] = []
    for name in cfg["functions"]:
        if name == "cosine":
            out.append(("cosine", CircleHarmonic(1.0, int(cfg["cosine_frequency"]), 0.0)))
        elif name == "indicator":
            arc = [float(v) for v in cfg["indicator_arc"]]
            out.append(("indicator",
                        circle_indicator(arc[0], arc[1], int(cfg["indicator_cells"]))))
        else:
            raise ValueError(f"unknown transfer function {name!r}; "
                             "allowed: cosine, indicator")
    return out


def _orbit_grid_function(system: RotationSystem, f: CircleFunction, x: float,
                         horizon: float, step: float) -> GridFunction:
    """The reversed orbit trace u -> f(U_{-u} x) on [-horizon, 0], cellwise exact.

    Averaging this trace over [-n, 0] reproduces the forward flow average
    over [0, n] exactly, which is what the line-side windows anchored at 0
    consume.
    """
    count = int(round(horizon / step))
    if abs(count * step - horizon) > 1e-9 * max(1.0, horizon):
        raise ValueError("time_step must divide the horizon exactly")
    edges = x + system.theta * (horizon - np.arange(count + 1) * step)
    anti = np.asarray(f.antiderivative(edges), dtype=float)
    averages = (anti[:-1] - anti[1:]) / (step * system.theta)
    return GridFunction(-horizon, step, averages)


def exp_transference(config: dict | None = None, threads: int = 1) -> ExperimentReport:
    """Flow-vs-line comparison along orbits of the Kronecker flow.

    For each sample point the orbit trace over [0, T] is reflected onto
    [-T, 0] and fed to the line operator truncated to the windows that fit;
    the discrepancy against the full ergodic value is certified by the l^s
    tail of the dropped blocks, and T doubles ``doublings`` times.
    """
    cfg = _fill(DEFAULTS["transfer"], config, "transfer")
    if str(cfg["mode"]) != "direct":
        raise ValueError("transfer only supports direct mode windows")
    osc = _osc_config(cfg)
    pair = osc.effective_pair
    system = RotationSystem(float(cfg["theta"]), "flow")
    t_start = float(cfg["t_start"])
    doublings = int(cfg["doublings"])
    time_step = float(cfg["time_step"])
    points = [float(x) for x in cfg["points"]]
    n_values = pair.n.values

    if t_start < n_values[1]:
        raise ValueError(
            f"t_start {t_start} is below the smallest usable horizon {n_values[1]}"
        )
    horizons = [t_start * (2.0 ** d) for d in range(doublings + 1)]
    if max(horizons) >= pair.largest_window:
        raise ValueError(
            "largest horizon reaches the full window ladder; nothing is truncated"
        )

    members = _transfer_functions(cfg)
    jobs = [(label, f, x) for label, f in members for x in points]

    def task(job):
        label, f, x = job
        spread = f.centered_antiderivative_range()
        full_values, _ = oscillation_ergodic_profile(osc, system, f, np.array([x]))
        full_value = float(full_values[0])
        out = []
        for horizon in horizons:
            k_line = max(k for k in range(1, pair.k_max + 1)
                         if n_values[k] <= horizon)
            trace = _orbit_grid_function(system, f, x, horizon, time_step)
            line_cfg = OscillationConfig(pair.truncated(k_line), osc.s, "direct")
            line_values, _ = oscillation_line_profile(line_cfg, trace, np.array([0.0]))
            line_value = float(line_values[0])
            dropped = np.array(
                [2.0 * spread / (system.theta * n_values[k])
                 for k in range(k_line, pair.k_max)]
            )
            bound = float(np.sum(dropped ** osc.s) ** (1.0 / osc.s))
            discrepancy = abs(line_value - full_value)
            out.append((label, x, horizon, k_line, full_value, line_value,
                        discrepancy, bound, discrepancy <= bound + 1e-9))
        return out

    rows: list[tuple] = []
    for chunk in _ordered_map(task, jobs, threads):
        rows.extend(chunk)

    by_case: dict[tuple, list] = {}
    for row in rows:
        by_case.setdefault((row[0], row[1]), []).append(row)
    bounds_decrease = all(
        all(later[7] < earlier[7] for earlier, later in zip(seq, seq[1:]))
        for seq in by_case.values()
    )
    columns = ("function", "x", "horizon", "k_line", "ergodic_value",
               "line_value", "discrepancy", "tail_bound", "within_bound")
    summary = {
        "pair": _pair_info(pair),
        "s": osc.s,
        "theta": system.theta,
        "horizons": horizons,
        "max_discrepancy": max(r[6] for r in rows),
        "max_tail_bound": max(r[7] for r in rows),
    }
    verdicts = {
        "within_bound": all(r[8] for r in rows),
        "bound_decreases": bounds_decrease,
    }
    return ExperimentReport("transfer", columns, tuple(rows), summary, verdicts)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

EXPERIMENTS = {
    "verify-hormander": exp_hormander,
    "oscillation": exp_oscillation,
    "strong-p": exp_strong_p,
    "weak11": exp_weak_11,
    "h1": exp_h1,
    "bmo": exp_bmo,
    "fstar": exp_fstar_ratio,
    "transfer": exp_transference,
}


def run_experiment(name: str, config: dict | None = None,
                   threads: int = 1) -> ExperimentReport:
    """Dispatch one experiment by its command name."""
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}; allowed: {sorted(EXPERIMENTS)}")
    return EXPERIMENTS[name](config, threads=threads)
