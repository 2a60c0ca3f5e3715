"""Curvature analysis of 4-dimensional Lorentzian metrics centred on the
trace-adjusted (W) curvature tensor: exact symbolic metric derivatives,
per-point curvature and W-tensor bundles, perfect-fluid and symmetry
diagnostics, and grid-level spacetime classification."""

from .expr import parse, differentiate, simplify, evaluate
from .metric import CoordinateChart, MetricSpec, MetricValue, evaluate_metric
from .curvature import CurvatureBundle, compute_curvature
from .wtensor import WBundle, compute_w
from .classify import Inputs, classify, verify_claims
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "parse", "differentiate", "simplify", "evaluate",
    "CoordinateChart", "MetricSpec", "MetricValue", "evaluate_metric",
    "CurvatureBundle", "compute_curvature", "WBundle", "compute_w",
    "Inputs", "classify", "verify_claims", "BACKEND", "__version__",
]
