"""Figure rendering for solver scenario output.

The solver CLI's ``scenario`` subcommand writes per-member CSVs and a
``manifest.json`` grouping them into panels. This package turns one such
manifest into one publication-style image: solved boundaries per panel with
the pulling level (dashed) and strike (dotted) overlaid, and a log10
per-sweep error subpanel underneath. It reads only the manifest and the
CSVs it names, and computes nothing: every plotted number is a CSV column.
"""

from .io import FigureSpec, InputError, Member, Panel, load_figure
from .render import build_figure, render_figure

__version__ = "0.1.0"
