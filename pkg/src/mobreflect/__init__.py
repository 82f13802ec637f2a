"""Exact reflection groups from ball configurations over cubical 2-complexes in R^4."""

__version__ = "0.1.0"

from .cubical import (
    CubicalCell,
    CubicalComplex2,
    SimplicialComplex,
    barycentric_subdivision,
    build_complex,
    check_vertex_condition,
    unit_cube_skeleton,
)
from .inversive import (
    INFINITY,
    MoebiusMatrix,
    PairClass,
    Sphere,
    apply_to_point,
    balls_common_point,
    classify_pair,
    lorentz_product,
    reflection_matrix,
    sphere_to_inversive,
)
from .construction import (
    BallConfiguration,
    audit,
    canonical_map_check,
    coverage_check,
    generate_configuration,
    nerve,
)
from .coxeter import (
    GroupPresentation,
    abstract_growth,
    congruence_quotient,
    enumerate_group,
    orbit_tiling,
    presentation_from_audit,
    torsion_survival_check,
    verify_relations,
)
from .plfold import CubeInversion, involution_check, pl_invert

__all__ = [
    "CubicalComplex2",
    "CubicalCell",
    "SimplicialComplex",
    "barycentric_subdivision",
    "build_complex",
    "check_vertex_condition",
    "unit_cube_skeleton",
    "INFINITY",
    "MoebiusMatrix",
    "PairClass",
    "Sphere",
    "apply_to_point",
    "balls_common_point",
    "classify_pair",
    "lorentz_product",
    "reflection_matrix",
    "sphere_to_inversive",
    "BallConfiguration",
    "audit",
    "canonical_map_check",
    "coverage_check",
    "generate_configuration",
    "nerve",
    "GroupPresentation",
    "abstract_growth",
    "congruence_quotient",
    "enumerate_group",
    "orbit_tiling",
    "presentation_from_audit",
    "torsion_survival_check",
    "verify_relations",
    "CubeInversion",
    "involution_check",
    "pl_invert",
]
