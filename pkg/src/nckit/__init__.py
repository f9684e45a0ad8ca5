"""Noncommutative simplicial complexes: combinatorics, universal presentations,
homology and finite-dimensional matrix models."""

from __future__ import annotations

__version__ = "0.1.0"

from .complex import (
    SimplicialComplex,
    SimplicialMap,
    barycentric_subdivision,
    flag_saturation,
    from_maximal,
    is_full,
    simplex_complex,
    skeleton,
    sphere_complex,
)
from .groups import ZnGroup, FreeGroup, FiniteGroup, cyclic, symmetric, sigma_f_presentation
from .homology import homology, rational_k_ranks, smith_normal_form
from .polynomial import NCPolynomial
from .presentations import AlgebraPresentation, GeneratorAssignment, Status, Variant, presentation_of, verify_assignment

__all__ = [
    "AlgebraPresentation",
    "FiniteGroup",
    "FreeGroup",
    "GeneratorAssignment",
    "NCPolynomial",
    "SimplicialComplex",
    "SimplicialMap",
    "Status",
    "Variant",
    "ZnGroup",
    "barycentric_subdivision",
    "cyclic",
    "flag_saturation",
    "from_maximal",
    "homology",
    "is_full",
    "presentation_of",
    "rational_k_ranks",
    "sigma_f_presentation",
    "simplex_complex",
    "skeleton",
    "smith_normal_form",
    "sphere_complex",
    "symmetric",
    "verify_assignment",
]
