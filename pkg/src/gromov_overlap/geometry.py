"""Exact planar geometry for straight-line maps of the 2-skeleton.

An :class:`AffineInstance` places the ``n`` vertices at rational points;
edges map to segments and triangles to closed filled triangles.  Depth at a
point is the set of triangles whose closed image contains it.

All predicates are exact.  The overlap search runs on integer homogeneous
coordinates with numpy (``int64`` when the magnitudes provably fit, Python
integers otherwise), and the winning point is re-certified with the plain
``Fraction`` predicates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import NamedTuple, Sequence

import numpy as np

from ._parallel import pmap
from .f2_complex import Chain, VertexDistribution, skeleton, weight_of


class DegenerateInstance(ValueError):
    pass


class BoundViolation(AssertionError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(Fraction(x), Fraction(y))

    def __str__(self):
        return f"({self.x}, {self.y})"


class Orientation(enum.IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


def cross(a, b, c):
    """Twice the signed area of ``abc``."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orientation(a, b, c) -> Orientation:
    d = cross(a, b, c)
    return Orientation((d > 0) - (d < 0))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def in_closed_triangle(q, a, b, c) -> bool:
    s1 = _sign(cross(a, b, q))
    s2 = _sign(cross(b, c, q))
    s3 = _sign(cross(c, a, q))
    return not ((s1 < 0 or s2 < 0 or s3 < 0) and (s1 > 0 or s2 > 0 or s3 > 0))


def on_closed_segment(q, a, b) -> bool:
    if cross(a, b, q) != 0:
        return False
    return (min(a[0], b[0]) <= q[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= q[1] <= max(a[1], b[1]))


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments ``ab`` and ``cd`` share a point."""
    d1 = _sign(cross(a, b, c))
    d2 = _sign(cross(a, b, d))
    d3 = _sign(cross(c, d, a))
    d4 = _sign(cross(c, d, b))
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return ((d1 == 0 and on_closed_segment(c, a, b))
            or (d2 == 0 and on_closed_segment(d, a, b))
            or (d3 == 0 and on_closed_segment(a, c, d))
            or (d4 == 0 and on_closed_segment(b, c, d)))


def proper_crossing(a, b, c, d) -> Point | None:
    """Intersection point of segments crossing at a single interior point."""
    if not (_sign(cross(a, b, c)) * _sign(cross(a, b, d)) < 0
            and _sign(cross(c, d, a)) * _sign(cross(c, d, b)) < 0):
        return None
    rx, ry = b[0] - a[0], b[1] - a[1]
    sx, sy = d[0] - c[0], d[1] - c[1]
    den = rx * sy - ry * sx
    t = Fraction((c[0] - a[0]) * sy - (c[1] - a[1]) * sx) / den
    return Point(a[0] + t * rx, a[1] + t * ry)


@dataclass(frozen=True)
class AffineInstance:
    """``n`` rational points in general position plus a vertex distribution."""

    points: tuple[Point, ...]
    p: VertexDistribution | None = None
    _frame: "IntegerFrame" = field(default=None, init=False, repr=False,
                                   compare=False)

    def __post_init__(self):
        pts = tuple(Point.of(*q) for q in self.points)
        object.__setattr__(self, "points", pts)
        n = len(pts)
        if n < 3:
            raise DegenerateInstance(f"need at least 3 points, got {n}")
        if self.p is None:
            object.__setattr__(self, "p", VertexDistribution.uniform(n))
        elif self.p.n != n:
            raise ValueError("distribution size does not match the points")
        validate_generic(pts)
        object.__setattr__(self, "_frame", IntegerFrame(pts))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def skeleton(self):
        return skeleton(self.n)

    @property
    def frame(self) -> "IntegerFrame":
        return self._frame

    def with_distribution(self, p: VertexDistribution) -> "AffineInstance":
        return AffineInstance(self.points, p)

    def is_uniform(self) -> bool:
        return self.p == VertexDistribution.uniform(self.n)


def validate_generic(points: Sequence[Point]):
    seen = {}
    for i, q in enumerate(points):
        if q in seen:
            raise DegenerateInstance(f"points {seen[q]} and {i} coincide")
        seen[q] = i
    for i, j, k in combinations(range(len(points)), 3):
        if cross(points[i], points[j], points[k]) == 0:
            raise DegenerateInstance(f"points {i}, {j}, {k} are collinear")


def point_in_closed_triangle(q, inst: AffineInstance, t) -> bool:
    """``t`` is a triangle index or a vertex triple."""
    if isinstance(t, int):
        t = inst.skeleton.triangles[t]
    a, b, c = (inst.points[v] for v in t)
    return in_closed_triangle(Point.of(*q), a, b, c)


@dataclass(frozen=True)
class DepthCertificate:
    point: Point
    covering: Chain
    count: int
    weighted: Fraction

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.count, comb(self.covering.n, 3))


def depth_at(q, inst: AffineInstance) -> DepthCertificate:
    """Exact covering set and weighted depth at ``q``."""
    q = Point.of(*q)
    bits = 0
    for k, (a, b, c) in enumerate(inst.skeleton.triangles):
        if in_closed_triangle(q, inst.points[a], inst.points[b], inst.points[c]):
            bits |= 1 << k
    cov = Chain(inst.n, 2, bits)
    return DepthCertificate(q, cov, len(cov), weight_of(cov, inst.p))


def gromov_bound(n: int) -> Fraction:
    """Uniform overlap constant ``2/9 - 3/n``."""
    return Fraction(2, 9) - Fraction(3, n)


def weighted_bound(n: int) -> Fraction:
    """Weighted overlap constant ``1/13 - 3/(13(n - 1))``."""
    return Fraction(1, 13) - Fraction(3, 13 * (n - 1))


# -- vectorized search ----------------------------------------------------

INT64_SAFE_COORD = 8000  # keeps 128 * M**4 below 2**63


class IntegerFrame:
    """Instance coordinates scaled to integers, plus homogeneous helpers.

    A candidate point is stored as ``(X, Y, W)`` with ``W > 0`` and real
    coordinates ``(X / (W * scale), Y / (W * scale))``.
    """

    def __init__(self, points: Sequence[Point]):
        scale = 1
        for q in points:
            for c in q:
                scale = scale * c.denominator // gcd(scale, c.denominator)
        self.scale = scale
        self.xs = [int(q.x * scale) for q in points]
        self.ys = [int(q.y * scale) for q in points]
        bound = max(max(abs(v) for v in self.xs), max(abs(v) for v in self.ys))
        self.dtype = np.int64 if bound <= INT64_SAFE_COORD else object
        self.x = np.array(self.xs, dtype=self.dtype)
        self.y = np.array(self.ys, dtype=self.dtype)

    def to_point(self, X, Y, W) -> Point:
        d = int(W) * self.scale
        return Point(Fraction(int(X), d), Fraction(int(Y), d))


def _normalize(H: np.ndarray) -> np.ndarray:
    if H.dtype == object:
        g = np.frompyfunc(gcd, 2, 1)(np.frompyfunc(gcd, 2, 1)(H[:, 0], H[:, 1]),
                                     H[:, 2])
    else:
        g = np.gcd(np.gcd(H[:, 0], H[:, 1]), H[:, 2])
    return H // g[:, None]


def candidate_homogeneous(inst: AffineInstance) -> np.ndarray:
    """Vertices and pairwise proper crossings, deduplicated, as ``(m, 3)``."""
    fr = inst.frame
    sk = inst.skeleton
    n = inst.n
    E = np.array(sk.edges)
    ax, ay = fr.x[E[:, 0]], fr.y[E[:, 0]]
    bx, by = fr.x[E[:, 1]], fr.y[E[:, 1]]
    I, J = np.triu_indices(len(E), 1)
    shared = ((E[I, 0] == E[J, 0]) | (E[I, 0] == E[J, 1])
              | (E[I, 1] == E[J, 0]) | (E[I, 1] == E[J, 1]))
    I, J = I[~shared], J[~shared]

    def orient(px, py, qx, qy, rx, ry):
        return (qx - px) * (ry - py) - (qy - py) * (rx - px)

    d1 = orient(ax[I], ay[I], bx[I], by[I], ax[J], ay[J])
    d2 = orient(ax[I], ay[I], bx[I], by[I], bx[J], by[J])
    d3 = orient(ax[J], ay[J], bx[J], by[J], ax[I], ay[I])
    d4 = orient(ax[J], ay[J], bx[J], by[J], bx[I], by[I])
    cross_mask = (((d1 > 0) & (d2 < 0)) | ((d1 < 0) & (d2 > 0))) & (
        ((d3 > 0) & (d4 < 0)) | ((d3 < 0) & (d4 > 0)))
    I, J = I[cross_mask], J[cross_mask]
    rx, ry = bx[I] - ax[I], by[I] - ay[I]
    sx, sy = bx[J] - ax[J], by[J] - ay[J]
    den = rx * sy - ry * sx
    tnum = (ax[J] - ax[I]) * sy - (ay[J] - ay[I]) * sx
    X = ax[I] * den + tnum * rx
    Y = ay[I] * den + tnum * ry
    neg = den < 0
    X = np.where(neg, -X, X)
    Y = np.where(neg, -Y, Y)
    W = np.where(neg, -den, den)
    crossings = np.stack([X, Y, W], axis=1).astype(fr.dtype)
    verts = np.stack([fr.x, fr.y, np.ones(n, dtype=fr.dtype)], axis=1)
    H = np.concatenate([verts, crossings]) if len(crossings) else verts
    H = _normalize(H)
    if H.dtype == object:
        uniq = sorted(set(map(tuple, H.tolist())))
        return np.array(uniq, dtype=object).reshape(-1, 3)
    return np.unique(H, axis=0)


def candidate_points(inst: AffineInstance) -> list[Point]:
    """Vertices and proper segment crossings, exact, sorted, deduplicated."""
    fr = inst.frame
    return sorted(fr.to_point(*h) for h in candidate_homogeneous(inst))


def _triangle_index_arrays(n: int):
    sk = skeleton(n)
    T = np.array(sk.triangles)
    ei = sk.edge_index
    ij = np.array([ei[a, b] for a, b, _ in sk.triangles])
    jk = np.array([ei[b, c] for _, b, c in sk.triangles])
    ik = np.array([ei[a, c] for a, _, c in sk.triangles])
    return T, ij, jk, ik


def coverage_matrix(inst: AffineInstance, H: np.ndarray,
                    chunk: int = 1024) -> np.ndarray:
    """Boolean ``(m, |T|)`` matrix: closed triangle contains candidate."""
    fr = inst.frame
    sk = inst.skeleton
    E = np.array(sk.edges)
    xi, yi = fr.x[E[:, 0]], fr.y[E[:, 0]]
    dx, dy = fr.x[E[:, 1]] - xi, fr.y[E[:, 1]] - yi
    _, ij, jk, ik = _triangle_index_arrays(inst.n)

    def block(lo):
        X, Y, W = (H[lo:lo + chunk, k][:, None] for k in range(3))
        o = dx[None, :] * (Y - W * yi[None, :]) - dy[None, :] * (X - W * xi[None, :])
        s = (o > 0).astype(np.int8) - (o < 0).astype(np.int8)
        a, b, c = s[:, ij], s[:, jk], -s[:, ik]
        pos = (a >= 0) & (b >= 0) & (c >= 0)
        neg = (a <= 0) & (b <= 0) & (c <= 0)
        return pos | neg

    blocks = pmap(block, range(0, len(H), chunk))
    if not blocks:
        return np.zeros((0, len(sk.triangles)), dtype=bool)
    return np.concatenate(blocks)


def _covering_bits(row: np.ndarray) -> int:
    bits = 0
    for k in np.flatnonzero(row):
        bits |= 1 << int(k)
    return bits


def find_overlap_point(inst: AffineInstance, check_bounds: bool = True,
                       ) -> DepthCertificate:
    """Maximum weighted depth over the candidate points.

    Ties are broken by larger count, then by the lexicographically smallest
    point.  With ``check_bounds`` the certificate is checked against
    ``weighted_bound(n)`` and, for uniform ``p``, against
    ``gromov_bound(n) * C(n, 3)``; failure raises :class:`BoundViolation`.
    """
    H = candidate_homogeneous(inst)
    cover = coverage_matrix(inst, H)
    w, _ = inst.p.integer_weights()
    tw = [w[a] + w[b] + w[c] for a, b, c in inst.skeleton.triangles]
    if max(tw) * len(tw) < 2 ** 62:
        score = cover.astype(np.int64) @ np.array(tw, dtype=np.int64)
    else:
        score = cover.astype(object) @ np.array(tw, dtype=object)
    count = cover.sum(axis=1)
    best_score = score.max()
    top = np.flatnonzero(score == best_score)
    best_count = count[top].max()
    top = top[count[top] == best_count]
    fr = inst.frame
    k = min(top, key=lambda r: fr.to_point(*H[r]))
    cert = depth_at(fr.to_point(*H[k]), inst)
    if cert.covering.bits != _covering_bits(cover[k]):
        raise AssertionError("vectorized coverage disagrees with exact check")
    if check_bounds:
        check_overlap_bounds(inst, cert)
    return cert


def check_overlap_bounds(inst: AffineInstance, cert: DepthCertificate):
    n = inst.n
    if cert.weighted < weighted_bound(n):
        raise BoundViolation(
            f"weighted depth {cert.weighted} < {weighted_bound(n)}", cert)
    if inst.is_uniform() and cert.count < gromov_bound(n) * comb(n, 3):
        raise BoundViolation(
            f"count {cert.count} < ({gromov_bound(n)}) * C({n},3)", cert)
