"""The point-versus-vertex zero-sum game and its exact solution.

The point player picks a coverage pattern ``r`` (a set of primal triangles
whose images share a point), the vertex player picks ``v``; the payoff is the
share of triangles at ``v`` that ``r`` covers.  A mixed strategy ``p`` of the
vertex player is a vertex distribution, and the payoff of ``r`` against it is
the weighted depth of ``r``'s point, so the game value is
``min_p max_r p(r)``.

The LP ``max sum(y) s.t. A y <= 1, y >= 0`` is solved by a dictionary simplex
over ``Fraction`` with Bland's rule.  ``y / sum(y)`` is the vertex strategy,
the optimal duals normalised the same way give ``mu``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .f2_complex import Chain, VertexDistribution
from .geometry import (
    AffineInstance,
    Point,
    candidate_homogeneous,
    coverage_matrix,
    find_overlap_point,
    weighted_bound,
)


class GapDetected(AssertionError):
    pass


@dataclass(frozen=True)
class GameMatrix:
    n: int
    rows: tuple           # Chain2 coverage patterns
    points: tuple         # a representative point per row
    payoff: tuple         # payoff[r][v] as Fractions

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.n


@dataclass(frozen=True)
class GameSolution:
    value: Fraction
    mu: tuple             # over rows
    p_star: tuple         # over vertices
    pivots: int

    def support(self, g: GameMatrix) -> list[tuple[Point, Fraction]]:
        return [(g.points[r], m) for r, m in enumerate(self.mu) if m]


def _maximal(patterns: list[int]) -> list[int]:
    """Patterns not strictly contained in another pattern."""
    keep = []
    for bits in sorted(patterns, key=lambda b: -bin(b).count("1")):
        if not any(bits & k == bits for k in keep):
            keep.append(bits)
    return keep


def payoff_row(bits: int, n: int, triangles) -> tuple[Fraction, ...]:
    counts = [0] * n
    k = 0
    while bits:
        if bits & 1:
            for v in triangles[k]:
                counts[v] += 1
        bits >>= 1
        k += 1
    den = comb(n - 1, 2)
    return tuple(Fraction(c, den) for c in counts)


def build_game(inst: AffineInstance, prune: bool = True) -> GameMatrix:
    """Rows are distinct coverage patterns of candidate points.

    With ``prune`` (the default) patterns strictly inside another pattern are
    dropped; they are dominated and never change the value.  Rows are ordered
    by their representative, the lexicographically smallest candidate point
    with that pattern.
    """
    H = candidate_homogeneous(inst)
    cover = coverage_matrix(inst, H)
    packed = np.packbits(cover, axis=1, bitorder="little")
    fr = inst.frame
    rep: dict[int, Point] = {}
    for h, row in zip(H, packed):
        bits = int.from_bytes(row.tobytes(), "little")
        q = fr.to_point(*h)
        if bits not in rep or q < rep[bits]:
            rep[bits] = q
    patterns = list(rep)
    if prune:
        patterns = _maximal(patterns)
    patterns.sort(key=rep.__getitem__)
    tris = inst.skeleton.triangles
    return GameMatrix(
        inst.n,
        tuple(Chain(inst.n, 2, b) for b in patterns),
        tuple(rep[b] for b in patterns),
        tuple(payoff_row(b, inst.n, tris) for b in patterns),
    )


def _simplex(A: list[list[Fraction]]) -> tuple[list, list, Fraction, int]:
    """``max 1.y`` subject to ``A y <= 1``, ``y >= 0``, with Bland's rule.

    Dictionary form: variables ``0..n-1`` are ``y``, ``n..n+m-1`` are slacks.
    Returns ``(y, duals, optimum, pivots)``.
    """
    m, n = len(A), len(A[0])
    basic = [n + i for i in range(m)]
    nonbasic = list(range(n))
    # row i: x_basic[i] = rhs[i] - sum_j D[i][j] * x_nonbasic[j]
    D = [[Fraction(x) for x in row] for row in A]
    rhs = [Fraction(1)] * m
    cost = [Fraction(1)] * n
    z = Fraction(0)
    pivots = 0
    while True:
        enter = None
        for j in sorted(range(n), key=nonbasic.__getitem__):
            if cost[j] > 0:
                enter = j
                break
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            if D[i][enter] > 0:
                ratio = rhs[i] / D[i][enter]
                if best is None or ratio < best or (ratio == best and basic[i] < basic[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise ArithmeticError("unbounded game LP")
        piv = D[leave][enter]
        prow = [x / piv for x in D[leave]]
        prow[enter] = 1 / piv
        prhs = rhs[leave] / piv
        for i in range(m):
            if i == leave:
                continue
            f = D[i][enter]
            if f:
                row = D[i]
                for j in range(n):
                    if j != enter:
                        row[j] -= f * prow[j]
                row[enter] = -f * prow[enter]
                rhs[i] -= f * prhs
        f = cost[enter]
        for j in range(n):
            if j != enter:
                cost[j] -= f * prow[j]
        cost[enter] = -f * prow[enter]
        z += f * prhs
        D[leave], rhs[leave] = prow, prhs
        basic[leave], nonbasic[enter] = nonbasic[enter], basic[leave]
        pivots += 1
    y = [Fraction(0)] * n
    for i, var in enumerate(basic):
        if var < n:
            y[var] = rhs[i]
    duals = [Fraction(0)] * m
    for j, var in enumerate(nonbasic):
        if var >= n:
            duals[var - n] = -cost[j]
    return y, duals, z, pivots


def solve_game(g: GameMatrix) -> GameSolution:
    """Exact optimal strategies for both players."""
    if not g.rows:
        raise ValueError("empty game")
    y, duals, z, pivots = _simplex([list(r) for r in g.payoff])
    if sum(duals) != z:
        raise GapDetected(f"primal optimum {z} != dual optimum {sum(duals)}")
    value = 1 / z
    return GameSolution(value, tuple(x * value for x in duals),
                        tuple(x * value for x in y), pivots)


@dataclass(frozen=True)
class GapReport:
    value: Fraction
    row_guarantee: Fraction      # min_v of mu's payoff
    column_guarantee: Fraction   # max_r of p_star's payoff
    bound: Fraction
    overlap_weighted: Fraction   # best weighted depth under p_star
    ok: bool


def verify_duality_gap(g: GameMatrix, s: GameSolution,
                       inst: AffineInstance | None = None) -> GapReport:
    """Recompute both guarantees from scratch and compare them exactly.

    With ``inst`` the value is also matched against the overlap search run
    with ``p = p_star``.  Raises :class:`GapDetected` on any mismatch.
    """
    if sum(s.mu) != 1 or sum(s.p_star) != 1 or min(s.mu) < 0 or min(s.p_star) < 0:
        raise GapDetected("strategies are not probability vectors")
    rows = min(sum(m * g.payoff[r][v] for r, m in enumerate(s.mu))
               for v in range(g.n))
    cols = max(sum(p * x for p, x in zip(s.p_star, row)) for row in g.payoff)
    if not rows == cols == s.value:
        raise GapDetected(f"value {s.value}, mu guarantees {rows}, "
                          f"p_star concedes {cols}")
    bound = weighted_bound(g.n)
    if s.value < bound:
        raise GapDetected(f"value {s.value} below {bound}")
    depth = s.value
    if inst is not None:
        cert = find_overlap_point(inst.with_distribution(VertexDistribution(s.p_star)),
                                  check_bounds=False)
        depth = cert.weighted
        if depth != s.value:
            raise GapDetected(f"overlap search under p_star gives {depth}")
    return GapReport(s.value, rows, cols, bound, depth, True)
