"""Chamber complexes with projections, restrictions, shelling orders,
hyperplane arrangements, left regular bands, face-semigroup random walks,
and flag complexes of finite vector spaces, all in exact arithmetic."""

from . import (
    arrangements,
    buildings,
    catalog,
    flags,
    formats,
    lrb,
    orders,
    shellings,
    structures,
    walks,
)
from .buildings import build_building
from .complexes import Complex, EMPTY_FACE
from .errors import ChamberError, InternalCheckError
from .orders import PartialOrder
from .reporting import Report
from .structures import MetricStructure, metric_structure

__all__ = [
    "Complex",
    "EMPTY_FACE",
    "ChamberError",
    "InternalCheckError",
    "PartialOrder",
    "Report",
    "MetricStructure",
    "metric_structure",
    "build_building",
    "arrangements",
    "buildings",
    "catalog",
    "flags",
    "formats",
    "lrb",
    "orders",
    "shellings",
    "structures",
    "walks",
]
