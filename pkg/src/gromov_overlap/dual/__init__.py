"""Dual triangulations, intersection maps and folding attempts."""

from .behaviour import (
    MAX_DEGREE,
    MAX_ROUNDS,
    MESH_START,
    DualityReport,
    Incidence,
    IntersectionMap,
    RefinementExhausted,
    WellBehavedCertificate,
    check_duality,
    degree_obstructed,
    fundamental_class_check,
    incidence,
    intersection_map,
    property7_offenders,
    refine_until_valid,
    validate_well_behaved,
)
from .folding import (
    DualityViolation,
    FoldingAttempt,
    ParityViolation,
    WeightReport,
    bfs_parents,
    construct_folding_attempt,
    telescoped_chains,
)
from .mesh import (
    DualTriangulation,
    MeshError,
    MeshPlan,
    TilingReport,
    WebParams,
    assemble,
    build_triangulation,
    check_tiling,
    plan_mesh,
    read_triangulation,
    scale_into_half_ball,
    segment_meets_half_ball,
    write_triangulation,
)
