"""Certified real base points, coorientations and cap-linking numbers of
pencils of plane curves, in exact rational arithmetic."""

from .errors import DomainError, InputError, InvariantBreach, RealSliceError
from .linking import (
    HalfPlaneCount,
    LinkingReport,
    OrientedLine,
    h_circle_v,
    halfplane_root_count,
    lk_boundary,
    lk_chart,
    verify_theorem5,
)
from .poly import BinaryForm, GaussianRational, HomPoly, parse_poly
from .slices import CoorientedBase, PencilSpec, certify_slice, conjugate_flip
from .solve import CertifiedBasePoint, ChartId, real_base_points, refine_point

__version__ = "0.1.0"

__all__ = [
    "BinaryForm",
    "CertifiedBasePoint",
    "ChartId",
    "CoorientedBase",
    "DomainError",
    "GaussianRational",
    "HalfPlaneCount",
    "HomPoly",
    "InputError",
    "InvariantBreach",
    "LinkingReport",
    "OrientedLine",
    "PencilSpec",
    "RealSliceError",
    "certify_slice",
    "conjugate_flip",
    "h_circle_v",
    "halfplane_root_count",
    "lk_boundary",
    "lk_chart",
    "parse_poly",
    "real_base_points",
    "refine_point",
    "verify_theorem5",
]
