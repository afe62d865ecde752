"""Well-behavedness, intersection maps and the duality identities.

All incidences are computed once as boolean matrices over a shared
:class:`PointTable` (instance points first, then dual vertices) and every
property is read off those matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .._exact import PointTable
from .._parallel import pmap
from ..f2_complex import coboundary0_bits, coboundary1_bits, skeleton
from ..geometry import AffineInstance
from .mesh import DualTriangulation, WebParams, plan_mesh

PROPERTIES = (1, 2, 3, 4, 5, 6, 7, 8)
MAX_ROUNDS = 12
MAX_PASSES = 40
MESH_START = Fraction(1, 4)
# Property 7 forces the rays at v across the sides of t*_v, at most two per
# side; straight segments cannot satisfy it once v has more than six edges.
MAX_DEGREE = 6


class RefinementExhausted(RuntimeError):
    def __init__(self, message, triangulation=None, certificate=None, rounds=0):
        super().__init__(message)
        self.triangulation = triangulation
        self.certificate = certificate
        self.rounds = rounds


@dataclass(frozen=True)
class WellBehavedCertificate:
    """Per-property verdicts, ``t*_v`` for each located vertex, and witnesses.

    Witness tuples name the offending simplices, e.g. ``("e*", 12, "e", (0, 3))``.
    """

    passed: dict
    t_star: dict
    witnesses: dict

    @property
    def valid(self) -> bool:
        return all(self.passed.values())

    @property
    def failures(self) -> list[int]:
        return [k for k in PROPERTIES if not self.passed[k]]

    def summary(self) -> str:
        return " ".join(f"P{k}={'ok' if self.passed[k] else 'FAIL'}"
                        for k in PROPERTIES)


@dataclass
class Incidence:
    """Boolean incidence matrices between primal images and dual simplices."""

    vertex_triangle: np.ndarray   # v* in closed f(t):        |V*| x |T|
    edge_edge: np.ndarray         # e* meets f(e):            |E*| x |E|
    triangle_vertex: np.ndarray   # f(v) in closed t*:        |T*| x n
    vertex_on_edge: np.ndarray    # v* on f(e):               |V*| x |E|
    point_on_dual: np.ndarray     # f(v) on e*:               |E*| x n


def _chunks(m: int, size: int = 2048):
    return [(lo, min(m, lo + size)) for lo in range(0, m, size)]


def incidence(inst: AffineInstance, X: DualTriangulation) -> Incidence:
    if "incidence" in X._cache and X._cache["incidence"][0] is inst:
        return X._cache["incidence"][1]
    n = inst.n
    sk = skeleton(n)
    table = PointTable(list(inst.points) + list(X.vertices))
    E = np.array(sk.edges)
    T = np.array(sk.triangles)
    DE = np.array(X.edges) + n
    DT = np.array(X.triangle_vertices) + n
    dv = np.arange(len(X.vertices))[:, None] + n
    iv = np.arange(n)[None, :]

    def rows(lo, hi, fn):
        return np.concatenate(pmap(fn, _chunks(hi - lo)), axis=0)

    def vt(span):
        q = dv[span[0]:span[1]]
        return table.in_triangle(q, T[None, :, 0], T[None, :, 1], T[None, :, 2])

    def ee(span):
        d = DE[span[0]:span[1]]
        return table.segments_meet(d[:, :1], d[:, 1:], E[None, :, 0], E[None, :, 1])

    def tv(span):
        t = DT[span[0]:span[1]]
        return table.in_triangle(iv, t[:, :1], t[:, 1:2], t[:, 2:])

    def von(span):
        q = dv[span[0]:span[1]]
        return table.on_segment(q, E[None, :, 0], E[None, :, 1])

    def pod(span):
        d = DE[span[0]:span[1]]
        return table.on_segment(iv, d[:, :1], d[:, 1:])

    out = Incidence(
        rows(0, len(X.vertices), vt),
        rows(0, len(X.edges), ee),
        rows(0, len(X.triangles), tv),
        rows(0, len(X.vertices), von),
        rows(0, len(X.edges), pod),
    )
    X._cache["incidence"] = (inst, out)
    return out


def _first(mask: np.ndarray):
    idx = np.argwhere(mask)
    return tuple(int(x) for x in idx[0]) if len(idx) else None


def validate_well_behaved(inst: AffineInstance, X: DualTriangulation,
                          ) -> WellBehavedCertificate:
    """Check the eight well-behavedness properties with exact predicates."""
    n = inst.n
    sk = skeleton(n)
    inc = incidence(inst, X)
    E = np.array(sk.edges)
    T = np.array(sk.triangles)
    tri_edges = np.array(X.triangles)
    passed, wit, t_star = {}, {}, {}

    def fail(k, w):
        passed[k] = False
        wit.setdefault(k, w)

    for k in PROPERTIES:
        passed[k] = True

    # 1: no f(v) on a dual edge, no dual vertex on an edge image
    hit = _first(inc.point_on_dual)
    if hit:
        fail(1, ("v", hit[1], "e*", hit[0]))
    hit = _first(inc.vertex_on_edge)
    if hit:
        fail(1, ("v*", hit[0], "e", sk.edges[hit[1]]))

    # 2: a unique t*_v per v holding no other f(u)
    for v in range(n):
        owners = np.nonzero(inc.triangle_vertex[:, v])[0]
        if len(owners) != 1:
            fail(2, ("v", v, "t*", tuple(int(t) for t in owners)))
            continue
        t = int(owners[0])
        t_star[v] = t
        others = [u for u in np.nonzero(inc.triangle_vertex[t])[0] if u != v]
        if others:
            fail(2, ("u", int(others[0]), "v", v, "t*", t))

    # crossings of f(e) with the sides of each t*, and of e* with sides of f(t)
    side_hits = inc.edge_edge[tri_edges].sum(axis=1)                # |T*| x |E|
    ends_in = inc.triangle_vertex
    half_in = ends_in[:, E[:, 0]] ^ ends_in[:, E[:, 1]]            # |T*| x |E|
    t_sides = np.array([[sk.edge_index[(a, b)], sk.edge_index[(a, c)],
                         sk.edge_index[(b, c)]] for a, b, c in T])
    crossings = inc.edge_edge[:, t_sides].sum(axis=2)              # |E*| x |T|
    dE = np.array(X.edges)
    straddle = (inc.vertex_triangle[dE[:, 0]] ^ inc.vertex_triangle[dE[:, 1]])

    # 3: f(e) with one end in t* crosses exactly one side of t*
    hit = _first(half_in & (side_hits != 1))
    if hit:
        fail(3, ("e", sk.edges[hit[1]], "t*", hit[0], int(side_hits[hit])))
    # 4: e* with one end in f(t) crosses exactly one side of f(t)
    hit = _first(straddle & (crossings != 1))
    if hit:
        fail(4, ("e*", hit[0], "t", sk.triangles[hit[1]], int(crossings[hit])))
    # 5: f(e) meets t*_v only if v is in e
    for v, t in sorted(t_star.items()):
        touches = (side_hits[t] > 0) | ends_in[t, E[:, 0]] | ends_in[t, E[:, 1]]
        bad = touches & (E[:, 0] != v) & (E[:, 1] != v)
        if bad.any():
            fail(5, ("v", v, "t*", t, "e", sk.edges[int(np.argmax(bad))]))
            break
    # 6: otherwise e* crosses at most two sides of f(t)
    hit = _first(~straddle & (crossings > 2))
    if hit:
        fail(6, ("e*", hit[0], "t", sk.triangles[hit[1]], int(crossings[hit])))
    # 7: e* off t*_v meets the images of at most one edge at v
    per_vertex, bad = _property7(inst, X, inc, t_star)
    hit = _first(bad)
    if hit:
        fail(7, ("v", hit[1], "e*", hit[0], int(per_vertex[hit])))
    # 8: f(e) crosses at most two sides of any t*
    hit = _first(side_hits > 2)
    if hit:
        fail(8, ("e", sk.edges[hit[1]], "t*", hit[0], int(side_hits[hit])))

    return WellBehavedCertificate(passed, t_star, wit)


def _property7(inst, X, inc, t_star):
    sk = skeleton(inst.n)
    E = np.array(sk.edges)
    star = np.zeros((len(E), inst.n), dtype=np.int32)
    star[np.arange(len(E)), E[:, 0]] = 1
    star[np.arange(len(E)), E[:, 1]] = 1
    per_vertex = inc.edge_edge.astype(np.int32) @ star             # |E*| x n
    exempt = np.zeros_like(per_vertex, dtype=bool)
    for v, t in t_star.items():
        exempt[list(X.triangles[t]), v] = True
    return per_vertex, (per_vertex > 1) & ~exempt


def property7_offenders(inst, X, cert) -> list[int]:
    """Dual edges breaking property 7, in index order."""
    _, bad = _property7(inst, X, incidence(inst, X), cert.t_star)
    return [int(k) for k in np.nonzero(bad.any(axis=1))[0]]


def degree_obstructed(inst: AffineInstance, cert: WellBehavedCertificate) -> bool:
    """Only property 7 fails and some vertex has more than MAX_DEGREE edges."""
    return inst.n - 1 > MAX_DEGREE and cert.failures == [7]


def refine_until_valid(inst: AffineInstance, seed: int,
                       mesh_start=MESH_START, max_rounds: int = MAX_ROUNDS,
                       params: WebParams = WebParams(),
                       ) -> tuple[DualTriangulation, WellBehavedCertificate, int]:
    """Refine until the validator passes.

    Each round builds a fresh mesh (half the previous mesh size, new jitter)
    and then splits unconstrained dual edges that break property 7 at their
    midpoints, up to ``MAX_PASSES`` times.  Returns ``(X*, certificate,
    rounds_used)``.  Raises :class:`RefinementExhausted` after ``max_rounds``
    rounds, or at once for the degree obstruction of property 7, which no
    refinement can repair.
    """
    mesh = Fraction(mesh_start)
    X = cert = None
    for r in range(max_rounds):
        round_seed = int(np.random.SeedSequence([seed, r]).generate_state(1)[0])
        plan = plan_mesh(inst, mesh, round_seed, params.refined(r))
        for _ in range(MAX_PASSES):
            X = plan.triangulate()
            cert = validate_well_behaved(inst, X)
            if cert.valid:
                return X, cert, r + 1
            if degree_obstructed(inst, cert):
                raise RefinementExhausted(
                    f"property 7 cannot hold with {inst.n - 1} straight edges "
                    f"at a vertex (at most {MAX_DEGREE}); witness "
                    f"{cert.witnesses[7]}", X, cert, r + 1)
            if cert.failures != [7]:
                break
            split = [k for k in property7_offenders(inst, X, cert)
                     if X.edges[k] not in X.web_edges]
            if not split:
                break
            V = X.vertices
            for k in split:
                a, b = X.edges[k]
                plan.add((float((V[a].x + V[b].x) / 2), float((V[a].y + V[b].y) / 2)))
        mesh /= 2
    raise RefinementExhausted(
        f"no valid triangulation after {max_rounds} rounds: {cert.summary()}",
        X, cert, max_rounds)


# -- intersection map -----------------------------------------------------

def _pack(rows: np.ndarray) -> list[int]:
    """Row-wise little-endian bitsets."""
    if rows.shape[1] == 0:
        return [0] * rows.shape[0]
    packed = np.packbits(rows, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


@dataclass(frozen=True)
class IntersectionMap:
    """``i0[v*]`` triangle bits, ``i1[e*]`` edge bits, ``i2[t*]`` vertex bits."""

    n: int
    i0: list
    i1: list
    i2: list


def intersection_map(inst: AffineInstance, X: DualTriangulation) -> IntersectionMap:
    inc = incidence(inst, X)
    return IntersectionMap(inst.n, _pack(inc.vertex_triangle),
                           _pack(inc.edge_edge), _pack(inc.triangle_vertex))


@dataclass
class DualityReport:
    ok: bool
    edges_checked: int
    triangles_checked: int
    edge_failures: list = field(default_factory=list)
    triangle_failures: list = field(default_factory=list)


def check_duality(inst: AffineInstance, X: DualTriangulation,
                  imap: IntersectionMap) -> DualityReport:
    """Both identities on every dual edge and triangle.

    Edges: ``i(v1*) + i(v2*) == coboundary(i(e*))``.
    Triangles: ``i(e1*) + i(e2*) + i(e3*) == coboundary(i(t*))``.
    """
    sk = skeleton(inst.n)
    bad_e = [k for k, (a, b) in enumerate(X.edges)
             if imap.i0[a] ^ imap.i0[b] != coboundary1_bits(sk, imap.i1[k])]
    bad_t = []
    for k, (x, y, z) in enumerate(X.triangles):
        if imap.i1[x] ^ imap.i1[y] ^ imap.i1[z] != coboundary0_bits(sk, imap.i2[k]):
            bad_t.append(k)
    return DualityReport(not bad_e and not bad_t, len(X.edges),
                         len(X.triangles), bad_e, bad_t)


def fundamental_class_check(imap: IntersectionMap, X: DualTriangulation) -> bool:
    """The vertex sets ``i(t*)`` add up to all of ``V``."""
    total = 0
    for bits in imap.i2[:len(X.triangles)]:
        total ^= bits
    return total == (1 << imap.n) - 1
