import random
from fractions import Fraction as Q

import numpy as np
import pytest
from scipy.optimize import linprog

from gromov_overlap.cli import generate_instance
from gromov_overlap.f2_complex import VertexDistribution
from gromov_overlap.game import (
    GapDetected,
    GameSolution,
    _simplex,
    build_game,
    solve_game,
    verify_duality_gap,
)
from gromov_overlap.geometry import AffineInstance, find_overlap_point, weighted_bound

PENTAGON = [(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)]


def float_value(g):
    """min t s.t. A p <= t, sum p = 1 via HiGHS, as an independent check."""
    A = np.array([[float(x) for x in row] for row in g.payoff])
    m, n = A.shape
    c = np.r_[np.zeros(n), 1.0]
    A_ub = np.c_[A, -np.ones(m)]
    A_eq = np.r_[np.ones(n), 0.0][None, :]
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * n + [(None, None)], method="highs")
    return res.fun


def test_simplex_small_lp():
    # max y1 + y2 s.t. y1 + 2 y2 <= 1, 2 y1 + y2 <= 1  ->  y = (1/3, 1/3)
    y, duals, z, _ = _simplex([[Q(1), Q(2)], [Q(2), Q(1)]])
    assert y == [Q(1, 3), Q(1, 3)] and z == Q(2, 3) and sum(duals) == z


def test_triangle_value_is_one():
    inst = AffineInstance([(0, 0), (1, 0), (0, 1)])
    s = solve_game(build_game(inst))
    assert s.value == 1


def test_convex_quadrilateral():
    g = build_game(AffineInstance([(0, 0), (1, 0), (1, 1), (0, 1)]))
    s = solve_game(g)
    assert s.value == 1
    verify_duality_gap(g, s)


def test_convex_pentagon_value():
    inst = AffineInstance(PENTAGON)
    g = build_game(inst)
    s = solve_game(g)
    assert s.value == Q(7, 10)
    assert find_overlap_point(inst).weighted == Q(7, 10)
    assert verify_duality_gap(g, s, inst).ok


@pytest.mark.parametrize("seed", range(8))
def test_random_games_have_zero_gap(seed):
    n = 4 + seed % 4
    inst = generate_instance(n, 100 + seed)
    g = build_game(inst)
    s = solve_game(g)
    rep = verify_duality_gap(g, s, inst)
    assert rep.row_guarantee == rep.column_guarantee == s.value >= weighted_bound(n)
    assert abs(float(s.value) - float_value(g)) < 1e-9


@pytest.mark.parametrize("seed", range(5))
def test_value_invariant_under_relabeling(seed):
    rng = random.Random(seed)
    inst = generate_instance(5 + seed % 2, seed)
    perm = list(range(inst.n))
    rng.shuffle(perm)
    shuffled = AffineInstance([inst.points[i] for i in perm])
    a = solve_game(build_game(inst))
    b = solve_game(build_game(shuffled))
    assert a.value == b.value


@pytest.mark.parametrize("seed", range(5))
def test_pruning_keeps_the_value(seed):
    inst = generate_instance(4 + seed % 3, 40 + seed)
    full = build_game(inst, prune=False)
    pruned = build_game(inst)
    assert pruned.shape[0] <= full.shape[0]
    assert solve_game(full).value == solve_game(pruned).value


def test_value_is_min_over_distributions():
    inst = generate_instance(6, 9)
    s = solve_game(build_game(inst))
    rng = random.Random(0)
    for _ in range(20):
        p = VertexDistribution.random(6, rng)
        assert find_overlap_point(inst.with_distribution(p)).weighted >= s.value


def test_gap_detection():
    inst = generate_instance(5, 2)
    g = build_game(inst)
    s = solve_game(g)
    skewed = GameSolution(s.value, s.mu, (Q(1),) + (Q(0),) * (g.n - 1), s.pivots)
    with pytest.raises(GapDetected):
        verify_duality_gap(g, skewed)
    liar = GameSolution(s.value + Q(1, 100), s.mu, s.p_star, s.pivots)
    with pytest.raises(GapDetected):
        verify_duality_gap(g, liar)


def test_rows_are_deduplicated_and_sorted():
    g = build_game(generate_instance(6, 3), prune=False)
    assert len({r.bits for r in g.rows}) == len(g.rows)
    assert list(g.points) == sorted(g.points)
    assert all(sum(row) == 3 * len(r) / Q((g.n - 1) * (g.n - 2), 2)
               for r, row in zip(g.rows, g.payoff))
