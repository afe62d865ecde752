"""Dual triangulations of the unit disk.

The mesh has three layers:

* a *web* around every vertex image ``f(v)``: concentric rings of points on
  spokes that pass between the segments leaving ``f(v)``.  The innermost
  ring is cut by a triangle holding ``f(v)`` (this becomes ``t*_v``) plus
  fans, and consecutive rings are joined by quads split along a diagonal.
  Every web edge other than the sides of ``t*_v`` stays inside one angular
  sector, so it meets at most one segment at ``v``;
* unconstrained transition rings and a jittered square grid of spacing
  ``mesh / 2`` filling the rest of the disk;
* a polygonal boundary ring inscribed in the unit circle.

Web edges are handed to Triangle as constraints, so the web survives intact
in the final constrained Delaunay triangulation.  All coordinates are snapped
to multiples of ``2**-40`` so they are exact both as floats and as fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np
import triangle as tr

from ..geometry import AffineInstance, Point

SNAP = 2.0 ** 40
BOUNDARY_RADIUS = 0.98
GRID_RADIUS = 0.94
HALF = Fraction(1, 2)


class MeshError(RuntimeError):
    pass


@dataclass(frozen=True)
class WebParams:
    """Resolution knobs for the vertex webs."""

    max_sector: float = math.pi / 5
    core_fraction: float = 0.3   # ring-0 radius / clearance around f(v)
    outer_fraction: float = 0.3  # web radius / distance to nearest f(u)
    corner_margin: float = 1e-4  # arcs between t*_v corners stay below pi - margin

    def refined(self, rounds: int) -> "WebParams":
        return WebParams(self.max_sector * 0.75 ** rounds,
                         self.core_fraction * 0.7 ** rounds,
                         self.outer_fraction * 0.8 ** rounds, self.corner_margin)


@dataclass
class DualTriangulation:
    """A triangulation ``X* = (V*, E*, T*)`` of a polygonal unit disk.

    ``edges`` are sorted vertex pairs in lexicographic order; ``triangles``
    are triples of edge indices, ``triangle_vertices`` the matching
    counter-clockwise vertex triples.  ``u_star`` is the lexicographically
    smallest vertex outside the closed half ball.
    """

    vertices: list[Point]
    edges: list[tuple[int, int]]
    triangles: list[tuple[int, int, int]]
    triangle_vertices: list[tuple[int, int, int]]
    mesh: Fraction
    seed: int
    web_edges: frozenset = frozenset()
    planned_t_star: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.edge_index = {e: k for k, e in enumerate(self.edges)}
        cof = [[] for _ in self.edges]
        for k, tri in enumerate(self.triangles):
            for e in tri:
                cof[e].append(k)
        self.edge_cofaces = [tuple(c) for c in cof]
        self.vertex_in_half = [q.x * q.x + q.y * q.y <= HALF * HALF
                               for q in self.vertices]
        self.edge_meets_half = [segment_meets_half_ball(self.vertices[a],
                                                        self.vertices[b])
                                for a, b in self.edges]
        self.triangle_meets_half = [
            any(self.edge_meets_half[e] for e in tri)
            or _contains_origin([self.vertices[v] for v in tv])
            for tri, tv in zip(self.triangles, self.triangle_vertices)]
        outside = [k for k, flag in enumerate(self.vertex_in_half) if not flag]
        if not outside:
            raise MeshError("no dual vertex outside the half ball")
        self.u_star = min(outside, key=lambda k: self.vertices[k])

    @property
    def sizes(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.triangles)

    def neighbours(self) -> list[list[int]]:
        adj = [[] for _ in self.vertices]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for lst in adj:
            lst.sort()
        return adj

    def boundary_edges(self) -> list[int]:
        return [k for k, c in enumerate(self.edge_cofaces) if len(c) == 1]

    def edge_lengths(self) -> np.ndarray:
        xy = np.array([[float(q.x), float(q.y)] for q in self.vertices])
        e = np.array(self.edges)
        return np.hypot(*(xy[e[:, 1]] - xy[e[:, 0]]).T)


def segment_meets_half_ball(a: Point, b: Point) -> bool:
    """Closed segment ``ab`` meets the closed disk of radius 1/2."""
    r2 = HALF * HALF
    dx, dy = b.x - a.x, b.y - a.y
    L2 = dx * dx + dy * dy
    t = -(a.x * dx + a.y * dy) / L2
    t = min(max(t, Fraction(0)), Fraction(1))
    cx, cy = a.x + t * dx, a.y + t * dy
    return cx * cx + cy * cy <= r2


def _contains_origin(tri: Sequence[Point]) -> bool:
    from ..geometry import in_closed_triangle
    return in_closed_triangle(Point(Fraction(0), Fraction(0)), *tri)


# -- scaling --------------------------------------------------------------

def scale_into_half_ball(inst: AffineInstance) -> AffineInstance:
    """Similarity placing the instance inside the disk of radius 1/4.

    Instances already inside are returned unchanged.  Otherwise the bounding
    box centre goes to the origin and coordinates are scaled by the largest
    power of two keeping every point within radius 1/4.
    """
    quarter2 = Fraction(1, 16)
    if all(q.x * q.x + q.y * q.y <= quarter2 for q in inst.points):
        return inst
    xs = [q.x for q in inst.points]
    ys = [q.y for q in inst.points]
    cx, cy = (min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2
    r2 = max((q.x - cx) ** 2 + (q.y - cy) ** 2 for q in inst.points)
    s = Fraction(1)
    while s * s * r2 > quarter2:
        s /= 2
    while 4 * s * s * r2 <= quarter2:
        s *= 2
    pts = [Point(s * (q.x - cx), s * (q.y - cy)) for q in inst.points]
    return AffineInstance(pts, inst.p)


# -- construction ---------------------------------------------------------

def _snap(x: float) -> float:
    return round(x * SNAP) / SNAP


def _point_segment_distance(p, a, b) -> float:
    d = b - a
    t = np.clip(np.dot(p - a, d) / np.dot(d, d), 0.0, 1.0)
    return float(np.hypot(*(a + t * d - p)))


@dataclass
class _Web:
    vertex: int
    center: np.ndarray
    spokes: np.ndarray        # angles, increasing, within [a0, a0 + 2pi)
    radii: list[float]
    corners: tuple[int, int, int]
    points: list[tuple[float, float]] = field(default_factory=list)
    segments: list[tuple[int, int]] = field(default_factory=list)
    t_star: tuple[int, int, int] = None

    @property
    def outer_radius(self) -> float:
        return self.radii[-1]


def _spoke_angles(rays: np.ndarray, max_sector: float, rng) -> np.ndarray:
    """Spoke directions inside the gaps between rays, sectors <= max_sector."""
    k = len(rays)
    out = []
    for j in range(k):
        lo = rays[j]
        hi = rays[j + 1] if j + 1 < k else rays[0] + 2 * math.pi
        gap = hi - lo
        m = max(1, math.ceil(gap / max_sector))
        step = gap / m
        for i in range(m):
            out.append(lo + step * (i + 0.5 + rng.uniform(-0.2, 0.2)))
    return np.array(out)


def _rays_before(spokes: np.ndarray, rays: np.ndarray) -> np.ndarray:
    """Number of rays strictly between spokes[0] and spokes[i]."""
    base = spokes[0]
    rel = np.sort((rays - base) % (2 * math.pi))
    return np.searchsorted(rel, spokes - base)


def _rays_in_arc(lo: float, hi: float, rays: np.ndarray) -> int:
    """Rays strictly inside the counter-clockwise arc from ``lo`` to ``hi``."""
    tau = 2 * math.pi
    width = (hi - lo) % tau
    rel = (rays - lo) % tau
    return int(np.count_nonzero((rel > 0) & (rel < width)))


def _choose_corners(spokes: np.ndarray, rays: np.ndarray,
                    margin: float) -> tuple[float, float, float]:
    """Corner angles of t*_v: fewest rays per arc, then the roundest triangle.

    Candidates are triples of spokes plus, for each pair of spokes, the
    direction bisecting the remaining arc (added as a new spoke if chosen).
    """
    tau = 2 * math.pi
    m = len(spokes)
    triples = [tuple(spokes[list(t)]) for t in combinations(range(m), 3)]
    for i, j in combinations(range(m), 2):
        for a, b in ((spokes[i], spokes[j]), (spokes[j], spokes[i])):
            d = (b - a) % tau
            c = b + (tau - d) / 2
            if min(np.abs((rays - c + math.pi) % tau - math.pi)) > 1e-6:
                triples.append((a, b, c))
    best = None
    for tri in triples:
        a, b, c = sorted(x % tau for x in tri)
        arcs = (b - a, c - b, a + tau - c)
        if max(arcs) >= math.pi - margin:
            continue
        counts = (_rays_in_arc(a, b, rays), _rays_in_arc(b, c, rays),
                  _rays_in_arc(c, a, rays))
        key = (max(counts), max(arcs))
        if best is None or key < best[0]:
            best = (key, tri)
    if best is None:
        raise MeshError("cannot place a triangle around a vertex image")
    return best[1]


def _build_web(v: int, P: np.ndarray, params: WebParams, rng) -> _Web:
    n = len(P)
    c = P[v]
    others = [u for u in range(n) if u != v]
    rays = np.sort(np.array([math.atan2(*(P[u] - c)[::-1]) for u in others]))
    point_gap = min(float(np.hypot(*(P[u] - c))) for u in others)
    seg_gap = min((_point_segment_distance(c, P[a], P[b])
                   for a, b in combinations(others, 2)), default=point_gap)
    rho = params.core_fraction * min(point_gap, seg_gap)
    spokes = np.sort(_spoke_angles(rays, params.max_sector, rng))
    chosen = _choose_corners(spokes, rays, params.corner_margin)
    base = spokes[0]
    extra = [base + (c - base) % (2 * math.pi) for c in chosen
             if not np.any(np.isclose(spokes, c, rtol=0, atol=1e-12))]
    spokes = np.sort(np.concatenate([spokes, extra]))
    m = len(spokes)
    corners = tuple(sorted(int(np.argmin(np.abs((spokes - c + math.pi)
                                                % (2 * math.pi) - math.pi)))
                           for c in chosen))
    widest = max(float(np.max(np.diff(spokes))),
                 float(spokes[0] + 2 * math.pi - spokes[-1]))
    gamma = 1.0 + 0.9 * widest
    radii = [rho]
    reach = min(params.outer_fraction * point_gap, 0.9 * seg_gap)
    while radii[-1] * gamma <= reach:
        radii.append(radii[-1] * gamma)
    before = _rays_before(spokes, rays)
    web = _Web(v, c, spokes, radii, corners)

    ids = {}
    for ring, r in enumerate(radii):
        for j, ang in enumerate(spokes):
            ids[ring, j] = len(web.points)
            web.points.append((_snap(c[0] + r * math.cos(ang)),
                               _snap(c[1] + r * math.sin(ang))))
    segs = set()

    def seg(p, q):
        segs.add((min(p, q), max(p, q)))

    for ring in range(len(radii)):
        for j in range(m):
            seg(ids[ring, j], ids[ring, (j + 1) % m])
            if ring + 1 < len(radii):
                seg(ids[ring, j], ids[ring + 1, j])
                seg(ids[ring, j], ids[ring + 1, (j + 1) % m])

    # ring 0: t*_v on the three corners, fans in the cut-off polygons
    a, b, cc = corners
    for p, q in ((a, b), (b, cc), (cc, a)):
        seg(ids[0, p], ids[0, q])
        arc = [(p + i) % m for i in range((q - p) % m + 1)]
        if len(arc) <= 2:
            continue
        ray_sectors = [i for i in range(len(arc) - 1)
                       if _sector_has_ray(arc[i], before, m, len(rays))]
        apex = ray_sectors[0] + 1 if len(ray_sectors) == 2 else 0
        for i in range(len(arc)):
            if i != apex:
                seg(ids[0, arc[apex]], ids[0, arc[i]])
    web.segments = sorted(segs)
    web.t_star = (ids[0, a], ids[0, b], ids[0, cc])
    return web


def _sector_has_ray(j: int, before: np.ndarray, m: int, n_rays: int) -> bool:
    hi = before[j + 1] if j + 1 < m else n_rays
    return hi - before[j] > 0


@dataclass
class MeshPlan:
    """Input to the constrained triangulation: points and forced segments."""

    points: list
    segments: list
    web_edges: set
    planned: dict
    mesh: Fraction
    seed: int
    index: dict = field(default_factory=dict)

    def add(self, pt, constrained=False) -> int:
        if pt in self.index:
            if constrained:
                raise MeshError("constrained vertices collide after snapping")
            return self.index[pt]
        self.index[pt] = len(self.points)
        self.points.append(pt)
        return self.index[pt]

    def triangulate(self) -> "DualTriangulation":
        return _triangulate(self.points, self.segments, self.mesh, self.seed,
                            self.web_edges, self.planned)


def plan_mesh(inst: AffineInstance, mesh, seed: int,
              params: WebParams = WebParams()) -> MeshPlan:
    """Webs, transition rings, a jittered grid and a boundary ring."""
    mesh = Fraction(mesh)
    h = float(mesh) / 2
    rng = np.random.default_rng(seed)
    P = np.array([[float(q.x), float(q.y)] for q in inst.points])
    if np.max(np.hypot(P[:, 0], P[:, 1])) > 0.25 + 1e-12:
        raise MeshError("instance is not scaled into the quarter disk")
    plan = MeshPlan([], [], set(), {}, mesh, seed)
    add = plan.add

    nb = max(48, math.ceil(2 * math.pi * BOUNDARY_RADIUS / h))
    ring = []
    for i in range(nb):
        ang = 2 * math.pi * i / nb
        ring.append(add((_snap(BOUNDARY_RADIUS * math.cos(ang)),
                         _snap(BOUNDARY_RADIUS * math.sin(ang))), True))
    plan.segments += [(ring[i], ring[(i + 1) % nb]) for i in range(nb)]

    webs = [_build_web(v, P, params, rng) for v in range(inst.n)]
    for web in webs:
        local = [add(pt, True) for pt in web.points]
        for a, b in web.segments:
            plan.web_edges.add((min(local[a], local[b]), max(local[a], local[b])))
        plan.planned[web.vertex] = tuple(sorted(local[k] for k in web.t_star))
    plan.segments += sorted(plan.web_edges)

    def free(pt) -> bool:
        if math.hypot(*pt) > GRID_RADIUS:
            return False
        for web in webs:
            reach = web.outer_radius * (1.0 + 0.5 * (web.spokes[1] - web.spokes[0]))
            if math.hypot(pt[0] - web.center[0], pt[1] - web.center[1]) <= reach:
                return False
        return True

    for web in webs:
        r = web.outer_radius
        spacing = 2 * math.pi / len(web.spokes)
        gamma = 1.0 + 0.9 * spacing
        while r * spacing < h and r < 1.0:
            r *= gamma
            for ang in web.spokes:
                pt = (_snap(web.center[0] + r * math.cos(ang)),
                      _snap(web.center[1] + r * math.sin(ang)))
                if free(pt):
                    add(pt)

    k = math.ceil(GRID_RADIUS / h)
    for i in range(-k, k + 1):
        for j in range(-k, k + 1):
            jx, jy = rng.uniform(-h / 8, h / 8, size=2)
            pt = (_snap(i * h + jx), _snap(j * h + jy))
            if free(pt):
                add(pt)
    return plan


def build_triangulation(inst: AffineInstance, mesh, seed: int,
                        params: WebParams = WebParams(),
                        extra_points: Sequence[tuple[float, float]] = (),
                        ) -> DualTriangulation:
    """Triangulate the planned point set plus ``extra_points``.

    ``inst`` must already lie inside the disk of radius 1/4.  Jitter and
    spoke offsets are drawn from ``seed``; the same arguments always give the
    same triangulation.
    """
    plan = plan_mesh(inst, mesh, seed, params)
    for pt in extra_points:
        plan.add((_snap(pt[0]), _snap(pt[1])))
    return plan.triangulate()


def _triangulate(points, segments, mesh, seed, web_edges, planned):
    V = np.array(points, dtype=float)
    S = np.array(segments, dtype=np.int32)
    out = tr.triangulate({"vertices": V, "segments": S}, "pQ")
    if len(out["vertices"]) != len(V) or not np.array_equal(out["vertices"], V):
        raise MeshError("constrained triangulation changed the vertex set")
    tris = [tuple(int(x) for x in t) for t in out["triangles"]]
    verts = [Point(Fraction(x), Fraction(y)) for x, y in points]
    return assemble(verts, tris, mesh, seed, web_edges, planned)


def assemble(verts: list[Point], tris, mesh, seed, web_edges=frozenset(),
             planned=None) -> DualTriangulation:
    """Canonical edge/triangle numbering for a list of vertex triples."""
    from ..geometry import cross
    oriented = []
    for a, b, c in tris:
        if cross(verts[a], verts[b], verts[c]) < 0:
            b, c = c, b
        oriented.append((a, b, c))
    oriented.sort(key=lambda t: tuple(sorted(t)))
    edges = sorted({(min(p, q), max(p, q))
                    for t in oriented for p, q in ((t[0], t[1]), (t[1], t[2]),
                                                   (t[2], t[0]))})
    eidx = {e: k for k, e in enumerate(edges)}
    tri_edges = []
    for a, b, c in oriented:
        tri_edges.append(tuple(sorted(eidx[min(p, q), max(p, q)]
                                      for p, q in ((a, b), (b, c), (c, a)))))
    return DualTriangulation(verts, edges, tri_edges, oriented, Fraction(mesh),
                             seed, frozenset(web_edges), dict(planned or {}))


# -- structural checks ----------------------------------------------------

@dataclass(frozen=True)
class TilingReport:
    ok: bool
    positive_orientation: bool
    manifold_edges: bool
    area_matches: bool
    total_area: Fraction
    boundary_area: Fraction


def check_tiling(X: DualTriangulation) -> TilingReport:
    """Triangles are positively oriented, edges have 1 or 2 cofaces, and the
    triangle areas add up to the area enclosed by the boundary cycle."""
    from ..geometry import cross
    V = X.vertices
    areas = [cross(V[a], V[b], V[c]) for a, b, c in X.triangle_vertices]
    positive = all(x > 0 for x in areas)
    manifold = all(1 <= len(c) <= 2 for c in X.edge_cofaces)
    total = sum(areas, Fraction(0)) / 2
    boundary = Fraction(0)
    for a, b, c in X.triangle_vertices:
        for p, q in ((a, b), (b, c), (c, a)):
            k = X.edge_index[min(p, q), max(p, q)]
            if len(X.edge_cofaces[k]) == 1:
                boundary += V[p].x * V[q].y - V[q].x * V[p].y
    boundary /= 2
    return TilingReport(positive and manifold and total == boundary, positive,
                        manifold, total == boundary, total, boundary)


# -- text format ----------------------------------------------------------

def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def write_triangulation(X: DualTriangulation) -> str:
    lines = [f"{len(X.vertices)} {len(X.edges)} {len(X.triangles)}"]
    lines += [f"{k} {_q(q.x)} {_q(q.y)}" for k, q in enumerate(X.vertices)]
    lines += [f"{k} {a} {b}" for k, (a, b) in enumerate(X.edges)]
    lines += [f"{k} {a} {b} {c}" for k, (a, b, c) in enumerate(X.triangles)]
    return "\n".join(lines) + "\n"


def read_triangulation(text: str, mesh=Fraction(0), seed: int = 0,
                       ) -> DualTriangulation:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    nv, ne, nt = map(int, rows[0])
    if len(rows) != 1 + nv + ne + nt:
        raise ValueError("line count does not match the header")
    verts, edges, tris = [], [], []
    for k, row in enumerate(rows[1:1 + nv]):
        if int(row[0]) != k:
            raise ValueError(f"vertex line {k} out of order")
        verts.append(Point(Fraction(row[1]), Fraction(row[2])))
    for k, row in enumerate(rows[1 + nv:1 + nv + ne]):
        if int(row[0]) != k:
            raise ValueError(f"edge line {k} out of order")
        edges.append((int(row[1]), int(row[2])))
    for k, row in enumerate(rows[1 + nv + ne:]):
        if int(row[0]) != k:
            raise ValueError(f"triangle line {k} out of order")
        tris.append(tuple(int(x) for x in row[1:4]))
    tri_verts = []
    for tri in tris:
        vs = sorted({v for e in tri for v in edges[e]})
        if len(vs) != 3:
            raise ValueError(f"triangle {tri} does not close up")
        tri_verts.append(tuple(vs))
    X = assemble(verts, tri_verts, mesh, seed)
    if X.edges != edges or X.triangles != tris:
        raise ValueError("triangulation is not in canonical order")
    return X
