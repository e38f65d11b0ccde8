"""Render sweep and convergence reports to image files.

Figures are drawn straight onto an Agg canvas, so no interactive backend or
display is ever required; the delimited output remains the primary report
format and these plots are an optional companion.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .chsh import CLASSICAL_BOUND, ConvergenceRow, TSIRELSON_BOUND
from .optimize import SweepRow

_FIG_SIZE = (6.4, 4.0)
_DPI = 150


def _new_axes(title: str):
    fig = Figure(figsize=_FIG_SIZE, dpi=_DPI)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return fig, ax


def sweep_figure(
    rows: Iterable[SweepRow],
    path: str,
    parameter_label: str = "parameter",
    title: str = "CHSH vs parameter",
) -> str:
    """Plot |CHSH| against the swept parameter with both bounds marked."""
    rows = list(rows)
    if not rows:
        raise ValueError("cannot plot an empty sweep")
    xs = np.array([row.parameter for row in rows])
    ys = np.array([row.best_abs_chsh for row in rows])
    fig, ax = _new_axes(title)
    ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.2, color="#1f77b4")
    ax.axhline(CLASSICAL_BOUND, color="0.25", linewidth=0.9, linestyle="--",
               label="classical bound 2")
    ax.axhline(TSIRELSON_BOUND, color="0.25", linewidth=0.9, linestyle=":",
               label=r"quantum bound $2\sqrt{2}$")
    ax.fill_between(xs, CLASSICAL_BOUND, ys, where=ys > CLASSICAL_BOUND,
                    color="#1f77b4", alpha=0.15)
    ax.set_xlabel(parameter_label)
    ax.set_ylabel("|CHSH|")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    return path


def convergence_figure(
    rows: Iterable[ConvergenceRow],
    path: str,
    title: str = "truncation convergence",
) -> str:
    """Semilog plot of the route disagreement against the analytic tail bound."""
    rows = list(rows)
    if not rows:
        raise ValueError("cannot plot an empty convergence table")
    dims = np.array([row.dim for row in rows])
    diff = np.array([row.abs_difference for row in rows])
    bound = np.array([8.0 * row.tail_probability for row in rows])
    floor = 1e-17
    fig, ax = _new_axes(title)
    ax.semilogy(dims, np.maximum(diff, floor), marker="o", markersize=4,
                linewidth=1.2, color="#d62728", label="|matrix - closed form|")
    ax.semilogy(dims, np.maximum(bound, floor), marker="s", markersize=4,
                linewidth=1.0, linestyle="--", color="0.35", label="8 x tail bound")
    ax.set_xlabel("modes kept per side")
    ax.set_ylabel("absolute difference")
    ax.set_xticks(dims)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    return path
