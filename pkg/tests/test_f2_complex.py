from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gromov_overlap.f2_complex import (
    Chain,
    NotACocycle,
    VertexDistribution,
    coboundary,
    coboundary0,
    coboundary1,
    cut_decomposition,
    kernel_vertex_witness,
    skeleton,
    weight_of,
)

from conftest import naive_coboundary, naive_weight


def chains(dim):
    sizes = {0: lambda n: n, 1: lambda n: n * (n - 1) // 2,
             2: lambda n: n * (n - 1) * (n - 2) // 6}

    @st.composite
    def build(draw):
        n = draw(st.integers(3, 8))
        bits = draw(st.integers(0, (1 << sizes[dim](n)) - 1))
        return Chain(n, dim, bits)
    return build()


def test_enumeration_is_lexicographic():
    sk = skeleton(5)
    assert sk.edges == tuple(combinations(range(5), 2))
    assert sk.triangles[0] == (0, 1, 2)
    assert sk.triangles[-1] == (2, 3, 4)
    assert sk.sizes == (5, 10, 10)


def test_skeleton_rejects_small_n():
    with pytest.raises(ValueError):
        skeleton(2)


def test_vertex_star_example():
    # n=4, U={v0}: the star of v0
    d = coboundary0(Chain.from_simplices(4, 0, [(0,)]))
    assert d.simplices() == [(0, 1), (0, 2), (0, 3)]


def test_triangle_of_edges_example():
    # 012 holds three edges, every other triangle exactly one
    F = Chain.from_simplices(4, 1, [(0, 1), (1, 2), (0, 2)])
    assert coboundary1(F) == Chain.full(4, 2)


@given(chains(0))
def test_vertex_coboundary_matches_definition(U):
    assert set(coboundary0(U).simplices()) == naive_coboundary(U.n, 0, U.simplices())


@given(chains(1))
def test_edge_coboundary_matches_definition(F):
    assert set(coboundary1(F).simplices()) == naive_coboundary(F.n, 1, F.simplices())


@given(chains(0))
def test_coboundary_squared_is_zero(U):
    assert not coboundary(coboundary(U))


@given(chains(0), chains(0))
def test_coboundary_is_linear(U, W):
    if U.n != W.n:
        W = Chain(U.n, 0, W.bits & ((1 << U.n) - 1))
    assert coboundary0(U + W) == coboundary0(U) + coboundary0(W)


@given(chains(0))
def test_complement_has_same_coboundary(U):
    assert coboundary0(U.complement()) == coboundary0(U)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_vertex_kernel_is_empty_or_full(n):
    for bits in range(1 << n):
        U = Chain(n, 0, bits)
        w = kernel_vertex_witness(U)
        assert w.is_kernel == (not coboundary0(U))
        if not w.is_kernel:
            assert w.witness in coboundary0(U)


@pytest.mark.parametrize("n", [3, 4])
def test_edge_kernel_is_cut_space_exhaustive(n):
    sk = skeleton(n)
    cuts = {coboundary0(Chain(n, 0, u)).bits for u in range(1 << n)}
    for bits in range(1 << len(sk.edges)):
        F = Chain(n, 1, bits)
        assert (not coboundary1(F)) == (bits in cuts)


def test_cut_decomposition_picks_class_of_smallest_vertex():
    F = coboundary0(Chain.from_simplices(5, 0, [(0,), (1,)]))
    U = cut_decomposition(F)
    assert U.simplices() == [(0,), (1,)]
    F = coboundary0(Chain.from_simplices(5, 0, [(2,), (3,)]))
    assert cut_decomposition(F).simplices() == [(0,), (1,), (4,)]
    assert not cut_decomposition(Chain.zero(5, 1))


def test_cut_decomposition_rejects_non_cocycle():
    F = Chain.from_simplices(4, 1, [(0, 1)])
    with pytest.raises(NotACocycle) as info:
        cut_decomposition(F)
    assert info.value.witness in [(0, 1, 2), (0, 1, 3)]


@given(chains(0))
def test_cut_decomposition_round_trip(U):
    F = coboundary0(U)
    assert coboundary0(cut_decomposition(F)) == F


def test_weight_example():
    p = VertexDistribution((Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)))
    assert p.edge_weight((0, 1)) == Fraction(1, 4)
    assert p.triangle_weight((0, 1, 2)) == Fraction(7, 24)


@given(st.integers(3, 9), st.randoms(use_true_random=False), st.data())
def test_weights_match_naive_and_normalise(n, r, data):
    p = VertexDistribution.random(n, r)
    sk = skeleton(n)
    for dim, cells in enumerate((range(n), sk.edges, sk.triangles)):
        bits = data.draw(st.integers(0, (1 << len(cells)) - 1))
        c = Chain(n, dim, bits)
        simp = c.simplices()
        assert weight_of(c, p) == naive_weight(p.weights, simp)
        assert weight_of(Chain.full(n, dim), p) == 1


def test_distribution_validation():
    with pytest.raises(ValueError):
        VertexDistribution((Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(ValueError):
        VertexDistribution((Fraction(3, 2), Fraction(-1, 2), Fraction(0)))


def test_mixed_dimensions_do_not_add():
    with pytest.raises(ValueError):
        Chain(4, 0, 1) + Chain(4, 1, 1)
