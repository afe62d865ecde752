import random
from fractions import Fraction as Q

import pytest

from gromov_overlap.cli import generate_instance
from gromov_overlap.dual import (
    DualityViolation,
    IntersectionMap,
    RefinementExhausted,
    assemble,
    bfs_parents,
    check_duality,
    check_tiling,
    construct_folding_attempt,
    fundamental_class_check,
    intersection_map,
    read_triangulation,
    refine_until_valid,
    scale_into_half_ball,
    segment_meets_half_ball,
    telescoped_chains,
    validate_well_behaved,
    write_triangulation,
)
from gromov_overlap.f2_complex import (
    VertexDistribution,
    coboundary0_bits,
    coboundary1_bits,
    skeleton,
)
from gromov_overlap.geometry import AffineInstance, Point


class Pipeline:
    def __init__(self, inst, seed):
        self.inst = scale_into_half_ball(inst)
        self.X, self.cert, self.rounds = refine_until_valid(self.inst, seed)
        self.imap = intersection_map(self.inst, self.X)


@pytest.fixture(scope="module", params=[(4, 3), (5, 11), (6, 2)], ids=["n4", "n5", "n6"])
def pipe(request):
    n, seed = request.param
    return Pipeline(generate_instance(n, seed), seed)


@pytest.fixture(scope="module")
def triangle3():
    return Pipeline(AffineInstance([(0, 0), (1, 0), (0, 1)]), 0)


def test_scaling_lands_in_quarter_disk():
    inst = scale_into_half_ball(AffineInstance([(0, 0), (100, 3), (7, 90), (40, 41)]))
    assert all(q.x ** 2 + q.y ** 2 <= Q(1, 16) for q in inst.points)
    small = AffineInstance([(0, 0), (Q(1, 8), 0), (0, Q(1, 8))])
    assert scale_into_half_ball(small) is small


def test_segment_meets_half_ball():
    P = lambda x, y: Point(Q(x), Q(y))
    assert segment_meets_half_ball(P(-1, 0), P(1, 0))
    assert not segment_meets_half_ball(P(-1, Q(3, 5)), P(1, Q(3, 5)))
    assert segment_meets_half_ball(P(Q(1, 2), 0), P(1, 1))


def test_tiling_is_exact(pipe):
    rep = check_tiling(pipe.X)
    assert rep.ok and rep.positive_orientation and rep.manifold_edges


def test_export_round_trip(pipe):
    text = write_triangulation(pipe.X)
    back = read_triangulation(text)
    assert back.vertices == pipe.X.vertices
    assert back.edges == pipe.X.edges and back.triangles == pipe.X.triangles
    assert write_triangulation(back) == text


def test_validator_accepts(pipe):
    assert pipe.cert.valid and pipe.rounds <= 12
    assert sorted(pipe.cert.t_star) == list(range(pipe.inst.n))


def test_refinement_is_deterministic():
    inst = scale_into_half_ball(generate_instance(4, 3))
    a, _, _ = refine_until_valid(inst, 3)
    b, _, _ = refine_until_valid(inst, 3)
    assert write_triangulation(a) == write_triangulation(b)


def test_coarse_triangulation_breaks_property_two():
    inst = scale_into_half_ball(generate_instance(5, 1))
    corners = [Point(Q(x), Q(y)) for x, y in [(-1, -1), (1, -1), (1, 1), (-1, 1)]]
    X = assemble(corners, [(0, 1, 2), (0, 2, 3)], Q(2), 0)
    assert check_tiling(X).ok
    cert = validate_well_behaved(inst, X)
    assert not cert.valid and 2 in cert.failures
    assert cert.witnesses[2][0] in ("u", "v")


def test_duality_identities(pipe):
    rep = check_duality(pipe.inst, pipe.X, pipe.imap)
    assert rep.ok and rep.edges_checked == len(pipe.X.edges)


def test_fundamental_class(pipe):
    assert fundamental_class_check(pipe.imap, pipe.X)
    owners = [k for k, bits in enumerate(pipe.imap.i2) if bits]
    assert sorted(pipe.cert.t_star.values()) == owners


def test_truncated_fundamental_class_fails(pipe):
    k = pipe.cert.t_star[0]
    i2 = list(pipe.imap.i2)
    i2[k] = 0
    cut = IntersectionMap(pipe.imap.n, pipe.imap.i0, pipe.imap.i1, i2)
    assert not fundamental_class_check(cut, pipe.X)
    assert not check_duality(pipe.inst, pipe.X, cut).ok


def test_minimal_instance_fundamental_class(triangle3):
    assert fundamental_class_check(triangle3.imap, triangle3.X)
    assert check_duality(triangle3.inst, triangle3.X, triangle3.imap).ok


def test_telescoping_is_path_independent(pipe):
    sk = skeleton(pipe.inst.n)
    F_min, _ = telescoped_chains(pipe.X, pipe.imap, "min")
    F_max, _ = telescoped_chains(pipe.X, pipe.imap, "max")
    for v, (a, b) in enumerate(zip(F_min, F_max)):
        assert coboundary1_bits(sk, a) == coboundary1_bits(sk, b) == pipe.imap.i0[v]


def test_bfs_parents_step_towards_root(pipe):
    dist, parent = bfs_parents(pipe.X)
    assert dist[pipe.X.u_star] == 0
    for v, w in enumerate(parent):
        if w >= 0:
            assert dist[w] == dist[v] - 1


@pytest.mark.parametrize("tie_break", ["min", "max"])
def test_folding_attempt(pipe, tie_break):
    f = construct_folding_attempt(pipe.inst, pipe.X, pipe.imap, tie_break=tie_break)
    n = pipe.inst.n
    sk = skeleton(n)
    full = (1 << n) - 1
    assert len(f.defects) % 2 == 1
    for k, (x, y, z) in enumerate(pipe.X.triangles):
        h = f.H1[x] ^ f.H1[y] ^ f.H1[z]
        assert (h == pipe.imap.i2[k]) == (k not in f.defects)
        assert f.b[k] in (0, full)
    for k, meets in enumerate(pipe.X.edge_meets_half):
        if not meets:
            assert f.H1[k] == 0
        else:
            u, v = pipe.X.edges[k]
            a = pipe.imap.i1[k] ^ f.H0[u] ^ f.H0[v]
            assert coboundary0_bits(sk, f.H1[k]) == a
    assert f.weights.ok


def test_folding_under_random_weights(pipe):
    p = VertexDistribution.random(pipe.inst.n, random.Random(5))
    f = construct_folding_attempt(pipe.inst, pipe.X, pipe.imap, p=p)
    assert f.weights.ok and len(f.defects) % 2 == 1


def test_folding_detects_broken_intersection_map(pipe):
    i0 = list(pipe.imap.i0)
    i0[pipe.X.u_star] ^= 1
    bad = IntersectionMap(pipe.imap.n, i0, pipe.imap.i1, pipe.imap.i2)
    with pytest.raises(DualityViolation):
        construct_folding_attempt(pipe.inst, pipe.X, bad)


def test_degree_obstruction_is_reported_early():
    inst = scale_into_half_ball(generate_instance(8, 4))
    with pytest.raises(RefinementExhausted) as info:
        refine_until_valid(inst, 4)
    exc = info.value
    assert exc.rounds == 1 and exc.certificate.failures == [7]
    imap = intersection_map(inst, exc.triangulation)
    assert check_duality(inst, exc.triangulation, imap).ok
    assert fundamental_class_check(imap, exc.triangulation)
