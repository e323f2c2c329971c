"""Turn convergence-sweep CSV files into figures and a markdown summary."""

from .render import PlotJob, RenderError, SweepRecord, parse_sweep_csv, render

__version__ = "0.1.0"
