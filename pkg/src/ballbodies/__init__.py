"""Ball-bodies: intersections of unit balls, their c-duals and c-hulls."""

from ._kernels import backend_name
from .body import (
    BallIntersectionBody,
    CHullBody,
    SupportSampledBody,
    body_from_json,
    body_to_json,
    c_dual,
    hausdorff,
    minkowski_combine,
    sample_support,
    support_values,
)
from .core import ConvergenceError, EmptyBodyError, GeometryError, SeededRng, fibonacci_grid
from .lens import KLens, WholeSpaceError, klens_volume
from .meb import min_enclosing_ball
from .planar import ArcPolygon, c_dual_planar, intersect_disks, spindle_hull
from .verify import VerificationReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "ArcPolygon", "BallIntersectionBody", "CHullBody", "ConvergenceError", "EmptyBodyError",
    "GeometryError", "KLens", "SeededRng", "SupportSampledBody", "VerificationReport",
    "WholeSpaceError", "backend_name", "body_from_json", "body_to_json", "c_dual",
    "c_dual_planar", "fibonacci_grid", "hausdorff", "intersect_disks", "klens_volume",
    "min_enclosing_ball", "minkowski_combine", "run_suite", "sample_support", "spindle_hull",
    "support_values",
]
