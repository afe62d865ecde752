"""Exhaustive and sampled checks of the chain calculus and expansion lemmas.

Every check calls the library through module attributes, so a patched
coboundary (a mutation canary in the tests) is seen by all of them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import expansion as ex
from . import f2_complex as f2

EXHAUSTIVE_EDGES = 5   # every edge chain up to this n
SAMPLES = 400


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""


def _distributions(n: int, rng: random.Random):
    yield f2.VertexDistribution.uniform(n)
    for _ in range(2):
        yield f2.VertexDistribution.random(n, rng)


def _edge_chains(n: int, rng: random.Random):
    m = comb(n, 2)
    if n <= EXHAUSTIVE_EDGES:
        return range(1 << m)
    return [rng.getrandbits(m) for _ in range(SAMPLES)]


def check_double_coboundary(ns, rng) -> CheckResult:
    cases = 0
    for n in ns:
        sk = f2.skeleton(n)
        for u in range(1 << n):
            cases += 1
            if f2.coboundary1_bits(sk, f2.coboundary0_bits(sk, u)):
                return CheckResult("coboundary_squared_zero", False, cases, f"n={n} U={u:b}")
    return CheckResult("coboundary_squared_zero", True, cases)


def check_claim_vertices(ns, rng) -> CheckResult:
    """Only the empty set and V have zero coboundary."""
    cases = 0
    for n in ns:
        sk = f2.skeleton(n)
        full = (1 << n) - 1
        for u in range(1 << n):
            cases += 1
            zero = f2.coboundary0_bits(sk, u) == 0
            if zero != (u in (0, full)):
                return CheckResult("kernel_vertices", False, cases, f"n={n} U={u:b}")
    return CheckResult("kernel_vertices", True, cases)


def check_claim_edges(ns, rng) -> CheckResult:
    """Edge cocycles are exactly the cuts."""
    cases = 0
    for n in ns:
        sk = f2.skeleton(n)
        cuts = {f2.coboundary0_bits(sk, u) for u in range(1 << n)}
        for f in _edge_chains(n, rng):
            cases += 1
            cocycle = f2.coboundary1_bits(sk, f) == 0
            if cocycle != (f in cuts):
                return CheckResult("kernel_edges", False, cases, f"n={n} F={f:b}")
            if cocycle:
                side = f2.cut_decomposition(f2.Chain(n, 1, f))
                if f2.coboundary0_bits(sk, side.bits) != f:
                    return CheckResult("kernel_edges", False, cases,
                                       f"n={n} F={f:b} bad decomposition")
    return CheckResult("kernel_edges", True, cases)


def check_uniform_vertex(ns, rng) -> CheckResult:
    """``|dU| == |U0| (n - |U0|)`` with ``|U0| <= n/2``."""
    cases = 0
    for n in ns:
        sk = f2.skeleton(n)
        for u in range(1 << n):
            cases += 1
            k = bin(u).count("1")
            small = min(k, n - k)
            if bin(f2.coboundary0_bits(sk, u)).count("1") != small * (n - small):
                return CheckResult("vertex_cut_size", False, cases, f"n={n} U={u:b}")
    return CheckResult("vertex_cut_size", True, cases)


def check_weighted_vertex(ns, rng) -> CheckResult:
    """``p(U0) <= p(dU)``, strictly unless ``U`` is empty or ``V``."""
    cases = 0
    for n in ns:
        sk = f2.skeleton(n)
        full = (1 << n) - 1
        for p in _distributions(n, rng):
            table = f2.weight_table(p)
            for u in range(1 << n):
                cases += 1
                u0 = ex.reduce_vertex_bits(u, n, table)
                du = f2.coboundary0_bits(sk, u)
                if f2.coboundary0_bits(sk, u0) != du:
                    return CheckResult("weighted_vertex_reduction", False, cases,
                                       f"n={n} U={u:b} changes the coboundary")
                lhs, rhs = table.numerator(0, u0), table.numerator(1, du)
                if lhs > rhs or (u not in (0, full) and lhs >= rhs):
                    return CheckResult("weighted_vertex_reduction", False, cases,
                                       f"n={n} U={u:b} p={p.weights}")
    return CheckResult("weighted_vertex_reduction", True, cases)


def check_weighted_edge(ns, rng) -> CheckResult:
    """``p(F0) <= 3(n-2)/(2n) p(dF)`` with ``dF0 == dF``."""
    cases = 0
    for n in ns:
        sk = f2.skeleton(n)
        factor = ex.edge_bound_factor(n)
        for p in _distributions(n, rng):
            table = f2.weight_table(p)
            for f in _edge_chains(n, rng):
                cases += 1
                f0, _ = ex.reduce_edge_bits(f, n, table)
                df = f2.coboundary1_bits(sk, f)
                if f2.coboundary1_bits(sk, f0) != df:
                    return CheckResult("weighted_edge_reduction", False, cases,
                                       f"n={n} F={f:b} changes the coboundary")
                if table.weight(1, f0) > factor * table.weight(2, df):
                    return CheckResult("weighted_edge_reduction", False, cases,
                                       f"n={n} F={f:b} p={p.weights}")
    return CheckResult("weighted_edge_reduction", True, cases)


def check_one_third(ns, rng) -> CheckResult:
    """``min |F + dU| <= 3 |dF|`` by exhaustive coset search."""
    cases = 0
    for n in ns:
        if n > ex.EXHAUSTIVE_LIMIT:
            continue
        chains = _edge_chains(n, rng)
        if n > EXHAUSTIVE_EDGES:
            chains = list(chains)[:SAMPLES // 4]
        for f in chains:
            cases += 1
            try:
                ex.verify_lemma_one_third(f2.Chain(n, 1, f))
            except ex.LemmaViolation as exc:
                return CheckResult("one_third_bound", False, cases, f"n={n}: {exc}")
    return CheckResult("one_third_bound", True, cases)


def check_normalisation(ns, rng) -> CheckResult:
    """Edge and triangle weights each sum to 1."""
    cases = 0
    for n in ns:
        sk = f2.skeleton(n)
        for p in _distributions(n, rng):
            cases += 1
            if (sum(p.edge_weight(e) for e in sk.edges) != 1
                    or sum(p.triangle_weight(t) for t in sk.triangles) != 1):
                return CheckResult("weight_normalisation", False, cases, f"n={n}")
    return CheckResult("weight_normalisation", True, cases)


def check_averaging(ns, rng) -> CheckResult:
    """``3 p(dF)`` equals the vertex-by-vertex sum over ``dF``."""
    cases = 0
    for n in ns:
        for p in _distributions(n, rng):
            for _ in range(20):
                cases += 1
                F = f2.Chain(n, 1, rng.getrandbits(comb(n, 2)))
                lhs, rhs = ex.averaging_identity(F, p)
                if lhs != rhs:
                    return CheckResult("averaging_identity", False, cases, f"n={n}")
    return CheckResult("averaging_identity", True, cases)


CHECKS = (
    check_double_coboundary,
    check_claim_vertices,
    check_claim_edges,
    check_uniform_vertex,
    check_weighted_vertex,
    check_weighted_edge,
    check_one_third,
    check_normalisation,
    check_averaging,
)


def run_selfcheck(max_n: int, seed: int = 0) -> list[CheckResult]:
    """Run every check for ``3 <= n <= max_n``; stops at the first failure."""
    if max_n < 3:
        raise ValueError("max_n must be at least 3")
    ns = range(3, max_n + 1)
    results = []
    for check in CHECKS:
        res = check(ns, random.Random(f"{seed}:{check.__name__}"))
        results.append(res)
        if not res.passed:
            break
    return results
