"""Static figure rendering for egosar CSV reports."""

from .figures import (
    FIGURE_KINDS,
    FigureSpec,
    SchemaMismatch,
    auto_specs,
    build_figure,
    infer_kind,
    render,
)

__version__ = "0.1.0"
