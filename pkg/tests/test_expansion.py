import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gromov_overlap.expansion import (
    LemmaViolation,
    TooLarge,
    averaging_identity,
    edge_bound_factor,
    reduce_edge_cochain,
    reduce_vertex_cochain,
    reduce_vertex_uniform,
    verify_lemma_one_third,
)
from gromov_overlap.f2_complex import (
    Chain,
    VertexDistribution,
    coboundary0,
    coboundary1,
    skeleton,
    weight_of,
)

from conftest import naive_coboundary


@st.composite
def weighted_edge_chain(draw, max_n=7):
    n = draw(st.integers(3, max_n))
    raw = draw(st.lists(st.integers(1, 50), min_size=n, max_size=n))
    p = VertexDistribution(tuple(Fraction(r, sum(raw)) for r in raw))
    bits = draw(st.integers(0, (1 << (n * (n - 1) // 2)) - 1))
    return Chain(n, 1, bits), p


def test_edge_factor_values():
    assert edge_bound_factor(4) == Fraction(3, 4)
    assert edge_bound_factor(10) == Fraction(6, 5)
    assert all(edge_bound_factor(n) < Fraction(3, 2) for n in range(3, 100))


def test_vertex_reduction_prefers_lighter_side():
    p = VertexDistribution((Fraction(1, 2), Fraction(1, 6), Fraction(1, 6), Fraction(1, 6)))
    r = reduce_vertex_cochain(Chain.from_simplices(4, 0, [(0,)]), p)
    assert r.U0.simplices() == [(0,)]          # tie at 1/2 keeps U
    r = reduce_vertex_cochain(Chain.from_simplices(4, 0, [(0,), (1,)]), p)
    assert r.U0.simplices() == [(2,), (3,)]
    assert r.weight == Fraction(1, 3)
    assert not reduce_vertex_cochain(Chain.full(4, 0), p).U0


def test_edge_reduction_star_example():
    # delta of {v0} collapses via N_{v0} = {v1, v2, v3}
    F = coboundary0(Chain.from_simplices(4, 0, [(0,)]))
    r = reduce_edge_cochain(F, VertexDistribution.uniform(4))
    assert not r.F0 and r.chosen_vertex == 0 and r.weight == 0


@given(st.integers(3, 8), st.randoms(use_true_random=False), st.data())
def test_weighted_vertex_lemma(n, r, data):
    p = VertexDistribution.random(n, r)
    U = Chain(n, 0, data.draw(st.integers(0, (1 << n) - 1)))
    red = reduce_vertex_cochain(U, p)
    assert coboundary0(red.U0) == coboundary0(U)
    assert red.weight <= Fraction(1, 2)
    if U.bits not in (0, (1 << n) - 1):
        assert red.weight < red.boundary_weight


@given(weighted_edge_chain())
def test_weighted_edge_lemma(case):
    F, p = case
    red = reduce_edge_cochain(F, p)
    assert coboundary1(red.F0) == coboundary1(F)
    assert red.weight <= edge_bound_factor(F.n) * red.boundary_weight
    assert red.weight == weight_of(red.F0, p)


@given(weighted_edge_chain(max_n=6))
def test_edge_reduction_is_minimal_over_stars(case):
    # independent oracle: every G_v built from the definition of N_v
    F, p = case
    n = F.n
    edges = set(F.simplices())
    weights = []
    for v in range(n):
        N = [(u,) for u in range(n) if u != v and tuple(sorted((u, v))) in edges]
        G = edges ^ naive_coboundary(n, 0, N)
        weights.append(weight_of(Chain.from_simplices(n, 1, G), p))
    red = reduce_edge_cochain(F, p)
    assert red.weight == min(weights)
    assert red.chosen_vertex == weights.index(min(weights))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_uniform_vertex_lemma_exhaustive(n):
    for bits in range(1 << n):
        r = reduce_vertex_uniform(Chain(n, 0, bits))
        assert 2 * r.size <= n
        assert r.boundary_size == r.size * (n - r.size)


def _coset_minimum(F):
    n = F.n
    edges = set(F.simplices())
    best = len(edges)
    for k in range(n + 1):
        for U in combinations(range(n), k):
            best = min(best, len(edges ^ naive_coboundary(n, 0, [(u,) for u in U])))
    return best


@pytest.mark.parametrize("n", [4, 5])
def test_one_third_matches_brute_force(n):
    rng = random.Random(n)
    for _ in range(60):
        F = Chain(n, 1, rng.getrandbits(n * (n - 1) // 2))
        chk = verify_lemma_one_third(F)
        assert chk.size == _coset_minimum(F)
        assert chk.size <= 3 * chk.boundary_size
        assert coboundary1(chk.F0) == coboundary1(F)


def test_one_third_refuses_large_n():
    with pytest.raises(TooLarge):
        verify_lemma_one_third(Chain.zero(7, 1))


def test_one_third_flags_a_planted_violation(monkeypatch):
    import gromov_overlap.expansion as ex
    monkeypatch.setattr(ex, "coboundary1_bits", lambda sk, f: 0)
    F = Chain.from_simplices(4, 1, [(0, 1)])
    with pytest.raises(LemmaViolation):
        verify_lemma_one_third(F)


@given(weighted_edge_chain(max_n=6))
def test_averaging_identity(case):
    lhs, rhs = averaging_identity(*case)
    assert lhs == rhs


def test_reductions_check_arguments():
    p = VertexDistribution.uniform(4)
    with pytest.raises(ValueError):
        reduce_vertex_cochain(Chain.zero(4, 1), p)
    with pytest.raises(ValueError):
        reduce_edge_cochain(Chain.zero(5, 1), p)
    assert skeleton(4).sizes == (4, 6, 4)
