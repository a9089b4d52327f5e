"""geomatch: exact-arithmetic compatible geometric matchings toolkit."""

from .geom_core import (
    BoundingBox,
    ConvexPolygon,
    Matching,
    Point,
    PointSet,
    Scalar,
    Segment,
    compatible,
    convex_hull,
    disjoint,
    orientation_test,
    segments_cross,
    shear_points,
    validate_general_position,
)

__all__ = [
    "BoundingBox",
    "ConvexPolygon",
    "Matching",
    "Point",
    "PointSet",
    "Scalar",
    "Segment",
    "compatible",
    "convex_hull",
    "disjoint",
    "orientation_test",
    "segments_cross",
    "shear_points",
    "validate_general_position",
]
