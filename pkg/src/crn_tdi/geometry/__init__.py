"""Exact cone geometry: rational linear algebra, LP, arrangements, polars, distances."""
from .arrangement import Face, SignVector, enumerate_faces, merge_signs, sign_vector
from .cones import GeneratedCone, chamber_polar, cone_member, cone_residual
from .distance import DykstraNonConvergence, distance_to_region, project_to_region
from .linalg import Subspace, canonical_normal, primitive, span_of
from .lp import Infeasible, linprog_exact, lp_relative_interior

__all__ = [
    "DykstraNonConvergence",
    "Face",
    "GeneratedCone",
    "Infeasible",
    "SignVector",
    "Subspace",
    "canonical_normal",
    "chamber_polar",
    "cone_member",
    "cone_residual",
    "distance_to_region",
    "enumerate_faces",
    "linprog_exact",
    "lp_relative_interior",
    "merge_signs",
    "primitive",
    "project_to_region",
    "sign_vector",
    "span_of",
]
