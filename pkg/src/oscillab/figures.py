"""Plot rendering for experiment reports (PNG files next to the CSV).

Figures are a convenience view; the CSV/JSON outputs remain the interface
of record.  All rendering uses the Agg backend so it works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .lab import ExperimentReport  # noqa: E402

__all__ = ["render_figures"]


def _column(report: ExperimentReport, name: str) -> np.ndarray:
    idx = report.columns.index(name)
    return np.array([row[idx] for row in report.rows])


def _save(fig, path: Path) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)


def _plot_hormander(report, base: Path) -> list[str]:
    y = _column(report, "y").astype(float)
    integral = _column(report, "integral").astype(float)
    ceiling = float(report.summary["ceiling"])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter(np.abs(y), integral, c=np.where(y > 0, "tab:blue", "tab:red"),
               label="integral (blue y>0, red y<0)")
    ax.axhline(ceiling, color="k", linestyle="--", label="ceiling")
    ax.set_xscale("log")
    ax.set_xlabel("|y|")
    ax.set_ylabel("integral over |x| > cutoff|y|")
    ax.set_title("kernel difference integrals vs ceiling")
    ax.legend()
    return [_save(fig, base.with_name(base.name + "_integrals.png"))]


def _plot_oscillation(report, base: Path) -> list[str]:
    x = _column(report, "x").astype(float)
    value = _column(report, "value").astype(float)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, value, lw=1.2)
    ax.set_xlabel("x")
    ax.set_ylabel("oscillation value")
    ax.set_title(f"oscillation sweep ({report.summary.get('function', '')})")
    return [_save(fig, base.with_name(base.name + "_sweep.png"))]


def _plot_strong_p(report, base: Path) -> list[str]:
    p = _column(report, "p").astype(float)
    ratio = _column(report, "ratio").astype(float)
    side = _column(report, "side")
    fig, ax = plt.subplots(figsize=(6, 4))
    for side_name in sorted(set(side)):
        mask = side == side_name
        ax.scatter(p[mask], ratio[mask], alpha=0.6, label=side_name)
    ax.set_xlabel("p")
    ax.set_ylabel("output/input norm ratio")
    ax.set_title("strong (p,p) ratios over the family")
    ax.legend()
    return [_save(fig, base.with_name(base.name + "_ratios.png"))]


def _plot_weak11(report, base: Path) -> list[str]:
    lam = _column(report, "lambda").astype(float)
    ratio = _column(report, "ratio").astype(float)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter(lam, ratio, s=8, alpha=0.5)
    ax.set_xscale("log")
    ax.set_xlabel("lambda")
    ax.set_ylabel("lambda measure / L1 norm")
    ax.set_title("weak (1,1) ratios over the lambda grid")
    return [_save(fig, base.with_name(base.name + "_ratios.png"))]


def _plot_h1(report, base: Path) -> list[str]:
    side = _column(report, "side")
    scale = _column(report, "scale").astype(float)
    o_l1 = _column(report, "o_l1").astype(float)
    out = []
    line_mask = side == "line"
    if line_mask.any():
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.scatter(scale[line_mask], o_l1[line_mask], alpha=0.6)
        ax.set_xscale("log", base=2)
        ax.set_xlabel("atom width")
        ax.set_ylabel("L1 norm of the atom image")
        ax.set_title("atom sweep")
        out.append(_save(fig, base.with_name(base.name + "_atoms.png")))
    ergodic_mask = side == "ergodic"
    if ergodic_mask.any():
        ratio = _column(report, "ratio").astype(float)[ergodic_mask]
        labels = _column(report, "case")[ergodic_mask]
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.bar(np.arange(len(ratio)), ratio)
        ax.set_xticks(np.arange(len(ratio)))
        ax.set_xticklabels(labels, rotation=60, fontsize=7)
        ax.set_ylabel("||Of||_1 / H1 norm")
        ax.set_title("ergodic H1 ratios")
        out.append(_save(fig, base.with_name(base.name + "_ergodic.png")))
    return out


def _plot_bmo(report, base: Path) -> list[str]:
    form = _column(report, "form")
    ratio = _column(report, "ratio").astype(float)
    fig, ax = plt.subplots(figsize=(6, 4))
    forms = sorted(set(form))
    for i, form_name in enumerate(forms):
        vals = ratio[form == form_name]
        ax.scatter(np.full(len(vals), i) + np.linspace(-0.15, 0.15, len(vals)),
                   vals, alpha=0.7)
    ax.set_xticks(range(len(forms)))
    ax.set_xticklabels(forms)
    ax.set_ylabel("oscillation norm / sup norm")
    ax.set_title("mean-oscillation ratios")
    return [_save(fig, base.with_name(base.name + "_ratios.png"))]


def _plot_fstar(report, base: Path) -> list[str]:
    ratio = _column(report, "ratio").astype(float)
    labels = _column(report, "case")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(np.arange(len(ratio)), ratio)
    ax.set_xticks(np.arange(len(ratio)))
    ax.set_xticklabels(labels, rotation=60, fontsize=7)
    ax.set_ylabel("||Of||_1 / ||f*||_1")
    ax.set_title("oscillation vs maximal function")
    return [_save(fig, base.with_name(base.name + "_ratios.png"))]


def _plot_transfer(report, base: Path) -> list[str]:
    fn = _column(report, "function")
    x = _column(report, "x").astype(float)
    horizon = _column(report, "horizon").astype(float)
    disc = _column(report, "discrepancy").astype(float)
    bound = _column(report, "tail_bound").astype(float)
    fig, ax = plt.subplots(figsize=(6, 4))
    for label in sorted({(f, xx) for f, xx in zip(fn, x)}):
        mask = (fn == label[0]) & (x == label[1])
        ax.plot(horizon[mask], bound[mask], "o--", alpha=0.7,
                label=f"bound {label[0]} x={label[1]:g}")
        ax.plot(horizon[mask], np.maximum(disc[mask], 1e-17), "x:", alpha=0.7)
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("horizon T")
    ax.set_ylabel("discrepancy (x) and tail bound (o)")
    ax.set_title("line vs ergodic transfer")
    ax.legend(fontsize=6)
    return [_save(fig, base.with_name(base.name + "_bounds.png"))]


_RENDERERS = {
    "verify-hormander": _plot_hormander,
    "oscillation": _plot_oscillation,
    "strong-p": _plot_strong_p,
    "weak11": _plot_weak11,
    "h1": _plot_h1,
    "bmo": _plot_bmo,
    "fstar": _plot_fstar,
    "transfer": _plot_transfer,
}


def render_figures(report: ExperimentReport, base) -> list[str]:
    """Render the report's figures as PNGs named after ``base``."""
    renderer = _RENDERERS.get(report.experiment)
    if renderer is None or not report.rows:
        return []
    return renderer(report, Path(base))
