"""Standalone figure rendering for the repeater simulation CSV outputs."""

from .render import CDF_COLUMNS, SWEEP_COLUMNS, FigureSpec, plot_cdf, plot_sweep, render_figure

__all__ = ["CDF_COLUMNS", "SWEEP_COLUMNS", "FigureSpec", "plot_cdf", "plot_sweep", "render_figure"]
