"""Static figure rendering for resolve-limit experiment CSV files."""

from .figspec import FigureSpec, SchemaError, Table, load_figure_spec, read_csv
from .render import (render, render_limit_curve, render_music_panel,
                     render_phase_scatter, render_scaling_loglog)

__version__ = "0.1.0"
