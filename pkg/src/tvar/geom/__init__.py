"""Exact-rational polyhedral geometry: polyhedra, complexes, fans, concave PWA functions."""
from .complex import ComplexError, PolyComplex, common_refinement, recession_fan
from .linalg import primitive, primitive_multiple
from .polyhedron import Polyhedron, cone_hrep, lattice_points, minkowski_sum
from .pwa import PWAConcave, concave_conjugate, conjugate_from_points

__all__ = [
    "ComplexError",
    "PWAConcave",
    "PolyComplex",
    "Polyhedron",
    "common_refinement",
    "concave_conjugate",
    "conjugate_from_points",
    "cone_hrep",
    "lattice_points",
    "minkowski_sum",
    "primitive",
    "primitive_multiple",
    "recession_fan",
]
