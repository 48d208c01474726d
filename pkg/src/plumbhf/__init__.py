"""Heegaard Floer HF+ of plumbed three-manifolds, combinatorially.

The package computes, with exact arithmetic throughout, the homology of
the orientation reverse of a plumbed three-manifold whose plumbing forest
is negative definite or negative semidefinite of corank one with at most
one bad vertex: basic vectors per sector, heights and minimal relations,
the graded module decomposition, and the correction terms of torsion
sectors.
"""

__version__ = "1.0.0"

from .assembly import (
    AlexanderData,
    FullReport,
    ModuleDecomposition,
    SectorResult,
    Summand,
    SummandKind,
    alexander_t,
    assemble_nontorsion,
    assemble_torsion,
    d_half,
    d_minus_half_via_dual,
    even_bottom_from_alexander,
    full_report,
    torus_knot_alexander,
)
from .charvec import (
    CharVector,
    SpinCClass,
    UState,
    apply_move,
    apply_reverse_move,
    conjugate,
    is_characteristic,
    is_torsion,
    level,
    move_coefficient,
    some_torsion_char,
    spinc_of,
    square,
    torsion_sector_count,
)
from .classgraph import (
    ClassGraph,
    MinimalRelation,
    build_class_graph,
    height,
    minimal_relation,
    sector_graph,
    self_relation_exists,
)
from .graphs import (
    FormClass,
    FormKind,
    IntersectionForm,
    PlumbingGraph,
    classify_form,
    intersection_form,
    parse_plumbing,
    serialize_plumbing,
)
from .linalg import hermite_basis, hermite_reduce, inertia, kernel_basis, solve_linear
from .oracle import CrossCheck, brute_classes, cross_check, truncated_rank_profile
from .walk import (
    WalkKind,
    WalkOutcome,
    enumerate_basic,
    enumerate_basic_nontorsion,
    enumerate_basic_torsion,
    ensure_supported,
    is_good_torsion,
    run_walk,
)

__all__ = [
    "AlexanderData",
    "CharVector",
    "ClassGraph",
    "CrossCheck",
    "FormClass",
    "FormKind",
    "FullReport",
    "IntersectionForm",
    "MinimalRelation",
    "ModuleDecomposition",
    "PlumbingGraph",
    "SectorResult",
    "SpinCClass",
    "Summand",
    "SummandKind",
    "UState",
    "WalkKind",
    "WalkOutcome",
    "alexander_t",
    "apply_move",
    "apply_reverse_move",
    "assemble_nontorsion",
    "assemble_torsion",
    "brute_classes",
    "build_class_graph",
    "classify_form",
    "conjugate",
    "cross_check",
    "d_half",
    "d_minus_half_via_dual",
    "enumerate_basic",
    "enumerate_basic_nontorsion",
    "enumerate_basic_torsion",
    "ensure_supported",
    "even_bottom_from_alexander",
    "full_report",
    "height",
    "hermite_basis",
    "hermite_reduce",
    "inertia",
    "intersection_form",
    "is_characteristic",
    "is_good_torsion",
    "is_torsion",
    "kernel_basis",
    "level",
    "minimal_relation",
    "move_coefficient",
    "parse_plumbing",
    "run_walk",
    "sector_graph",
    "self_relation_exists",
    "serialize_plumbing",
    "solve_linear",
    "some_torsion_char",
    "spinc_of",
    "square",
    "torsion_sector_count",
    "torus_knot_alexander",
    "truncated_rank_profile",
]
