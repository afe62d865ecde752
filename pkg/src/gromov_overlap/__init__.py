"""Exact planar overlap: chain calculus, expansion lemmas, dual triangulations,
folding attempts and the minimax game, all over rationals."""

from .f2_complex import Chain, Skeleton, VertexDistribution, skeleton
from .geometry import (
    AffineInstance,
    BoundViolation,
    DegenerateInstance,
    DepthCertificate,
    Point,
    depth_at,
    find_overlap_point,
    gromov_bound,
    weighted_bound,
)
from .game import GameMatrix, GameSolution, build_game, solve_game, verify_duality_gap

__version__ = "0.1.0"
