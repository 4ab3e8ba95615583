from momentcone.polytope.core import (
    Inequality,
    Polytope,
    contains_polytope,
    equal,
    hull_from_points,
    intersect,
    is_bounded,
    is_empty,
    maximize,
    membership,
    remove_redundant,
    scale_about,
    substitute,
    vertex_centroid,
    vertices,
)

__all__ = [
    "Inequality",
    "Polytope",
    "contains_polytope",
    "equal",
    "hull_from_points",
    "intersect",
    "is_bounded",
    "is_empty",
    "maximize",
    "membership",
    "remove_redundant",
    "scale_about",
    "substitute",
    "vertex_centroid",
    "vertices",
]
