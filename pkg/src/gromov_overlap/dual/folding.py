"""Attempted folding maps and their defects.

The construction follows the two stages of the folding argument:

1. every dual vertex ``v*`` in the half ball gets ``H0(v*)``, a light edge
   chain with ``coboundary(H0(v*)) = i(v*)``, obtained by telescoping
   ``i1`` along a shortest path to ``u*`` and reducing;
2. every dual edge meeting the half ball gets ``H1(e*)``, a light vertex
   chain with ``coboundary(H1(e*)) = a``, where
   ``a = i(e*) + H0(v1*) + H0(v2*)``.

For each dual triangle the vertex chain ``b = i(t*) + H1(e1*) + H1(e2*) +
H1(e3*)`` is a cocycle, hence ``0`` or ``V``.  Triangles with ``b = V`` are
the defects.  Their number is odd because the ``i(t*)`` sum to ``V`` while
every ``H1(e*)`` is counted twice or lies outside the half ball.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from ..expansion import edge_bound_factor, reduce_edge_bits, reduce_vertex_bits
from ..f2_complex import (
    Chain,
    NotACocycle,
    VertexDistribution,
    coboundary0_bits,
    coboundary1_bits,
    cut_side_bits,
    skeleton,
    weight_table,
)
from ..geometry import AffineInstance
from .behaviour import IntersectionMap
from .mesh import DualTriangulation


class DualityViolation(AssertionError):
    pass


class ParityViolation(AssertionError):
    pass


@dataclass
class WeightReport:
    """Exact weights per simplex and the bounds they were checked against.

    ``c`` is the largest of ``p(i(v*))`` over dual vertices and ``p(v)`` over
    primal vertices, so the per-edge bound ``4c + 1/(n-1)`` always applies.
    """

    n: int
    p_i0: list
    p_H0: list
    p_a: list
    p_H1: list
    c: Fraction
    h0_bound_ok: bool
    h1_bound_ok: bool
    i1_bound_ok: bool
    a_bound_ok: bool

    @property
    def ok(self) -> bool:
        return (self.h0_bound_ok and self.h1_bound_ok and self.i1_bound_ok
                and self.a_bound_ok)

    @property
    def edge_bound(self) -> Fraction:
        return 4 * self.c + Fraction(1, self.n - 1)

    def extremes(self) -> dict:
        ratios = [h / w for h, w in zip(self.p_H0, self.p_i0) if w]
        return {
            "max_p_i0": max(self.p_i0, default=Fraction(0)),
            "max_p_H0": max(self.p_H0, default=Fraction(0)),
            "max_H0_ratio": max(ratios, default=Fraction(0)),
            "H0_factor": edge_bound_factor(self.n),
            "max_p_a": max(self.p_a, default=Fraction(0)),
            "max_p_H1": max(self.p_H1, default=Fraction(0)),
            "edge_bound": self.edge_bound,
        }


@dataclass
class FoldingAttempt:
    n: int
    H0: list          # edge-chain bits per dual vertex
    H1: list          # vertex-chain bits per dual edge
    b: list           # vertex-chain bits per dual triangle, each 0 or V
    defects: list     # dual triangles with b = V
    path_parent: list
    weights: WeightReport

    def H0_chain(self, k: int) -> Chain:
        return Chain(self.n, 1, self.H0[k])

    def H1_chain(self, k: int) -> Chain:
        return Chain(self.n, 0, self.H1[k])


def bfs_parents(X: DualTriangulation, tie_break: str = "min") -> tuple[list, list]:
    """Distances to ``u*`` and the next step towards it for every vertex.

    Among neighbours one step closer, ``tie_break`` picks the smallest
    (``"min"``) or largest (``"max"``) index.
    """
    adj = X.neighbours()
    dist = [-1] * len(X.vertices)
    dist[X.u_star] = 0
    queue = deque([X.u_star])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    if min(dist) < 0:
        raise DualityViolation("dual 1-skeleton is disconnected")
    pick = min if tie_break == "min" else max
    parent = [-1] * len(X.vertices)
    for v, d in enumerate(dist):
        if d > 0:
            parent[v] = pick(w for w in adj[v] if dist[w] == d - 1)
    return dist, parent


def telescoped_chains(X: DualTriangulation, imap: IntersectionMap,
                      tie_break: str = "min") -> tuple[list, list]:
    """``F(v*)``: the sum of ``i1`` along the path from ``v*`` to ``u*``."""
    dist, parent = bfs_parents(X, tie_break)
    F = [0] * len(X.vertices)
    for v in sorted(range(len(X.vertices)), key=dist.__getitem__):
        if parent[v] >= 0:
            w = parent[v]
            F[v] = F[w] ^ imap.i1[X.edge_index[min(v, w), max(v, w)]]
    return F, parent


def construct_folding_attempt(inst: AffineInstance, X: DualTriangulation,
                              imap: IntersectionMap,
                              p: VertexDistribution | None = None,
                              tie_break: str = "min") -> FoldingAttempt:
    """Build ``H0``, ``H1`` and the defect set; see the module docstring.

    Raises :class:`DualityViolation` if a chain that must be a cocycle is not,
    and :class:`ParityViolation` if the number of defects is even.
    """
    n = inst.n
    p = p if p is not None else inst.p
    sk = skeleton(n)
    table = weight_table(p)
    full = (1 << n) - 1

    F, parent = telescoped_chains(X, imap, tie_break)
    H0 = [0] * len(X.vertices)
    for v in range(len(X.vertices)):
        if coboundary1_bits(sk, F[v]) != imap.i0[v]:
            raise DualityViolation(f"telescoped chain at v*={v} misses i(v*)")
        if X.vertex_in_half[v]:
            H0[v] = reduce_edge_bits(F[v], n, table)[0]

    H1 = [0] * len(X.edges)
    a_bits = [0] * len(X.edges)
    for k, (u, v) in enumerate(X.edges):
        if not X.edge_meets_half[k]:
            continue
        a = imap.i1[k] ^ H0[u] ^ H0[v]
        try:
            side = cut_side_bits(sk, a)
        except NotACocycle as exc:
            raise DualityViolation(f"a is not a cocycle at e*={k}") from exc
        if coboundary0_bits(sk, side) != a:
            raise DualityViolation(f"a is not a cut at e*={k}")
        a_bits[k] = a
        H1[k] = reduce_vertex_bits(side, n, table)

    b = []
    for k, (x, y, z) in enumerate(X.triangles):
        bits = imap.i2[k] ^ H1[x] ^ H1[y] ^ H1[z]
        if bits not in (0, full):
            raise DualityViolation(f"b is neither 0 nor V at t*={k}")
        b.append(bits)
    defects = [k for k, bits in enumerate(b) if bits == full]
    if len(defects) % 2 == 0:
        raise ParityViolation(f"{len(defects)} defects; the count must be odd")

    weights = _weights(inst, X, imap, p, table, H0, H1, a_bits)
    return FoldingAttempt(n, H0, H1, b, defects, parent, weights)


def _weights(inst, X, imap, p, table, H0, H1, a_bits) -> WeightReport:
    n = inst.n
    sk = skeleton(n)
    p_i0 = [table.weight(2, bits) for bits in imap.i0]
    p_H0 = [table.weight(1, bits) for bits in H0]
    p_a = [table.weight(1, bits) for bits in a_bits]
    p_H1 = [table.weight(0, bits) for bits in H1]
    inv = Fraction(1, n - 1)
    c = max(max(p_i0), max(p.weights))
    factor = edge_bound_factor(n)
    h0_ok = all(h <= factor * w for h, w in zip(p_H0, p_i0))
    h1_ok = all(h <= a for h, a in zip(p_H1, p_a))
    a_ok = all(x <= 4 * c + inv for x in p_a)

    # i(e*) on a side of some t*_v only holds edges at v; elsewhere a matching
    t_star_edges = {}
    for k, tv in enumerate(imap.i2):
        if tv:
            v = tv.bit_length() - 1
            for e in X.triangles[k]:
                t_star_edges[e] = v
    i1_ok = True
    for k, bits in enumerate(imap.i1):
        w = table.weight(1, bits)
        if k in t_star_edges:
            v = t_star_edges[k]
            at_v = all(v in sk.edges[j] for j in range(len(sk.edges)) if bits >> j & 1)
            i1_ok &= at_v and w <= p.weights[v] + inv
        else:
            i1_ok &= w <= inv
    return WeightReport(n, p_i0, p_H0, p_a, p_H1, c, h0_ok, h1_ok, i1_ok, a_ok)
