"""Panel drawing.

Layout: one column per manifest panel; each column is a boundary axes on
top of a shorter per-sweep error axes. Within a column every member keeps
one color across both axes: solid for the solved boundary, dashed for its
pulling level, and the error trace below. The strike is a dotted horizontal
line, a closed-form reference curve (when the manifest names one) is
dash-dotted black.

Rendering is batch-only and deterministic: the Agg backend is forced before
pyplot is imported, style comes from an explicit rc context rather than the
user's matplotlibrc, and the PNG metadata is pinned so identical CSVs give
identical bytes under a fixed matplotlib.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .io import FigureSpec

# dark-to-light ramp; sweeps are ordered, so ordered colors read naturally
COLORS = ("#08589e", "#2b8cbe", "#4eb3d3", "#7bccc4", "#a8ddb5")

PANEL_WIDTH = 3.4
PANEL_HEIGHT = 3.6

STYLE = {
    "font.size": 9,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.3,
    "figure.dpi": 150,
    "savefig.dpi": 150,
}


def build_figure(spec: FigureSpec):
    """Draw a FigureSpec into a matplotlib Figure and return it.

    Split out from render_figure so tests can inspect the axes without
    touching the filesystem.
    """
    with plt.rc_context(STYLE):
        n = len(spec.panels)
        width = PANEL_WIDTH * n
        # margins in figure fractions, sized from absolute inches so the
        # ylabels survive any panel count
        fig = plt.figure(figsize=(width, PANEL_HEIGHT))
        grid = fig.add_gridspec(
            2, n, height_ratios=(3.0, 1.0), hspace=0.3, wspace=0.3,
            left=0.62 / width, right=1.0 - 0.12 / width,
            top=1.0 - 0.28 / PANEL_HEIGHT, bottom=0.45 / PANEL_HEIGHT,
        )
        for j, panel in enumerate(spec.panels):
            ax = fig.add_subplot(grid[0, j])
            ex = fig.add_subplot(grid[1, j])
            for member, color in zip(
                panel.members, (COLORS[i % len(COLORS)] for i in range(len(panel.members)))
            ):
                ax.plot(member.t, member.boundary, color=color, label=member.label)
                ax.plot(member.alpha_t, member.alpha, color=color,
                        linestyle="--", linewidth=0.9, alpha=0.75)
                ex.plot(member.sweeps, member.log10_errors, color=color, linewidth=1.0)
            ax.axhline(spec.strike, color="0.35", linestyle=":", linewidth=1.0,
                       label="strike")
            if panel.reference_boundary is not None:
                ax.plot(panel.reference_t, panel.reference_boundary, color="black",
                        linestyle="-.", linewidth=1.0, label=panel.reference_label)
            ax.set_title(panel.label)
            ax.legend(loc="best", frameon=False)
            ex.set_xlabel("sweep k")
            if j == 0:
                ax.set_ylabel("boundary")
                ex.set_ylabel(r"$\log_{10} d_k$")
        return fig


def render_figure(spec: FigureSpec) -> str:
    """Render the figure to spec.out_path and return that path."""
    fig = build_figure(spec)
    try:
        os.makedirs(os.path.dirname(spec.out_path) or ".", exist_ok=True)
        fig.savefig(spec.out_path, metadata={"Software": "figplot"})
    finally:
        plt.close(fig)
    return spec.out_path
