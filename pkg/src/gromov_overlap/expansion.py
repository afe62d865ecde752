"""Small representatives of coboundary classes.

Given a vertex chain ``U`` (or edge chain ``F``), find another chain with the
same coboundary whose weight is controlled by the weight of the coboundary.
The weighted reductions are constructive:

* vertices: ``U0`` is whichever of ``U`` and its complement is lighter;
* edges: ``F0 = F + coboundary0(N_v)`` for the vertex ``v`` minimizing the
  weight, where ``N_v`` is the ``F``-neighbourhood of ``v``.

The unweighted edge bound ``|F0| <= 3 |coboundary1(F)|`` has no constructive
counterpart here; :func:`verify_lemma_one_third` checks it by exhaustive
search over the coset ``F + image(coboundary0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .f2_complex import (
    Chain,
    VertexDistribution,
    coboundary0_bits,
    coboundary1_bits,
    iter_bits,
    skeleton,
    weight_table,
)

EXHAUSTIVE_LIMIT = 6


class TooLarge(ValueError):
    pass


class LemmaViolation(AssertionError):
    pass


@dataclass(frozen=True)
class VertexReduction:
    U0: Chain
    weight: Fraction
    boundary_weight: Fraction


@dataclass(frozen=True)
class EdgeReduction:
    F0: Chain
    chosen_vertex: int
    weight: Fraction
    boundary_weight: Fraction


@dataclass(frozen=True)
class UniformVertexReduction:
    U0: Chain
    size: int
    boundary_size: int


@dataclass(frozen=True)
class OneThirdCheck:
    F0: Chain
    size: int
    boundary_size: int
    ratio: Fraction


def edge_bound_factor(n: int) -> Fraction:
    """The factor ``3(n - 2) / (2n)`` from the averaging argument."""
    return Fraction(3 * (n - 2), 2 * n)


def reduce_vertex_bits(u: int, n: int, table) -> int:
    full = (1 << n) - 1
    if u in (0, full):
        return 0
    comp = full ^ u
    if table.numerator(0, u) <= table.numerator(0, comp):
        return u
    return comp


def reduce_vertex_cochain(U: Chain, p: VertexDistribution) -> VertexReduction:
    """Pick the lighter of ``U`` and ``V - U`` (ties keep ``U``).

    ``U`` in ``{0, V}`` reduces to the empty chain.
    """
    if U.dim != 0 or U.n != p.n:
        raise ValueError("expected a vertex chain matching the distribution")
    table = weight_table(p)
    u0 = reduce_vertex_bits(U.bits, U.n, table)
    du = coboundary0_bits(U.skeleton, U.bits)
    return VertexReduction(Chain(U.n, 0, u0), table.weight(0, u0),
                           table.weight(1, du))


def neighbourhood_bits(sk, f: int, v: int) -> int:
    out = 0
    for u in range(sk.n):
        if u != v and f >> sk.edge_index[(u, v) if u < v else (v, u)] & 1:
            out |= 1 << u
    return out


def reduce_edge_bits(f: int, n: int, table) -> tuple[int, int]:
    """Return ``(F0, v)`` minimizing ``p(F + coboundary0(N_v))``."""
    sk = skeleton(n)
    best = None
    for v in range(n):
        cand = f ^ coboundary0_bits(sk, neighbourhood_bits(sk, f, v))
        w = table.numerator(1, cand)
        if best is None or w < best[0]:
            best = (w, cand, v)
    return best[1], best[2]


def reduce_edge_cochain(F: Chain, p: VertexDistribution) -> EdgeReduction:
    """Scan every vertex ``v`` and keep the lightest ``F + coboundary0(N_v)``.

    Ties go to the smallest ``v``.  The result satisfies
    ``p(F0) <= 3(n-2)/(2n) * p(coboundary1(F))``.
    """
    if F.dim != 1 or F.n != p.n:
        raise ValueError("expected an edge chain matching the distribution")
    table = weight_table(p)
    f0, v = reduce_edge_bits(F.bits, F.n, table)
    df = coboundary1_bits(F.skeleton, F.bits)
    return EdgeReduction(Chain(F.n, 1, f0), v, table.weight(1, f0),
                         table.weight(2, df))


def reduce_vertex_uniform(U: Chain) -> UniformVertexReduction:
    """Counting version: ``|U0| <= n/2`` and ``|dU| == |U0| (n - |U0|)``."""
    if U.dim != 0:
        raise ValueError("expected a vertex chain")
    n = U.n
    k = len(U)
    u0 = U if 2 * k <= n else U.complement()
    size = len(u0)
    boundary = bin(coboundary0_bits(U.skeleton, U.bits)).count("1")
    if boundary != size * (n - size):
        raise LemmaViolation(f"|dU| = {boundary} != {size}*{n - size}")
    return UniformVertexReduction(u0, size, boundary)


def verify_lemma_one_third(F: Chain, limit: int = EXHAUSTIVE_LIMIT,
                           ) -> OneThirdCheck:
    """Minimize ``|F + coboundary0(U)|`` over all ``U`` and check the 3-bound.

    Ties keep the first ``U`` visited (Gray-code order).  Raises :class:`TooLarge`
    above ``limit`` vertices and :class:`LemmaViolation` if the bound fails.
    """
    if F.dim != 1:
        raise ValueError("expected an edge chain")
    n = F.n
    if n > limit:
        raise TooLarge(f"exhaustive coset search limited to n <= {limit}")
    sk = F.skeleton
    # Gray-code walk: consecutive U differ in one vertex
    cur = F.bits
    best = cur
    best_size = bin(cur).count("1")
    for i in range(1, 1 << n):
        flip = (i & -i).bit_length() - 1
        cur ^= sk.star[flip]
        size = bin(cur).count("1")
        if size < best_size:
            best, best_size = cur, size
    boundary = bin(coboundary1_bits(sk, F.bits)).count("1")
    if best_size > 3 * boundary:
        raise LemmaViolation(f"|F0| = {best_size} > 3 * {boundary}")
    return OneThirdCheck(Chain(n, 1, best), best_size, boundary,
                         Fraction(best_size, max(1, boundary)))


def averaging_identity(F: Chain, p: VertexDistribution) -> tuple[Fraction, Fraction]:
    """Both sides of ``3 p(dF) = sum_v sum_{t in dF, v in t} p(t)``."""
    sk = F.skeleton
    table = weight_table(p)
    df = coboundary1_bits(sk, F.bits)
    lhs = 3 * table.weight(2, df)
    rhs = Fraction(0)
    for v in range(F.n):
        for k in iter_bits(df):
            if v in sk.triangles[k]:
                rhs += p.triangle_weight(sk.triangles[k])
    return lhs, rhs
