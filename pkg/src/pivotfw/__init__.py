"""Frank-Wolfe variants with pivot-based active set size control."""

from .fw_core import ActiveSet, CCUOutcome, fw_gap, run_plain
from .geometry import KSparsePolytope, L1Ball, Simplex, Vertex, parse_region
from .objectives import LeastSquares, Logistic, Quadratic, StepRule
from .pivot import asc, init_pivot, project_simplex, run_pm

__all__ = [
    "ActiveSet",
    "CCUOutcome",
    "KSparsePolytope",
    "L1Ball",
    "LeastSquares",
    "Logistic",
    "Quadratic",
    "Simplex",
    "StepRule",
    "Vertex",
    "asc",
    "fw_gap",
    "init_pivot",
    "parse_region",
    "project_simplex",
    "run_plain",
    "run_pm",
]
