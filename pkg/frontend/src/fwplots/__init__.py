"""Paired sparsity/convergence plots for solver trajectory CSVs."""

from .render import PlotSpec, SchemaError, load_csv, parse_spec_file, render

__all__ = ["PlotSpec", "SchemaError", "load_csv", "parse_spec_file", "render"]
