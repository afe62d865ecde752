import random
import sys
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import settings

from gromov_overlap.f2_complex import VertexDistribution

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def naive_coboundary(n, dim, simplices):
    """Coboundary straight from the definition, on sets of tuples."""
    cells = set(map(tuple, simplices))
    out = set()
    for s in combinations(range(n), dim + 2):
        faces = sum(1 for f in combinations(s, dim + 1) if f in cells)
        if faces % 2:
            out.add(s)
    return out


def naive_weight(p, simplices):
    n = len(p)
    total = Fraction(0)
    for s in simplices:
        k = len(s)
        den = {1: 1, 2: n - 1, 3: (n - 1) * (n - 2) // 2}[k]
        total += Fraction(sum(p[v] for v in s), den)
    return total


def random_distribution(n, rng):
    return VertexDistribution.random(n, rng)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(mod.VERDICTS):
            terminalreporter.write_line(mod.VERDICTS[k])
