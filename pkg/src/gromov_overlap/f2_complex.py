"""The complete 2-skeleton over F2.

Chains are stored as Python ints used as bitsets.  Bit ``k`` of a
``Chain`` of dimension ``d`` is the ``k``-th ``d``-simplex in the canonical
enumeration (lexicographic order on sorted vertex tuples).  Addition is XOR.

Weights are exact: a :class:`VertexDistribution` holds ``Fraction`` values
and is extended to edges and triangles by

    p({a, b})    = (p(a) + p(b)) / (n - 1)
    p({a, b, c}) = (p(a) + p(b) + p(c)) / C(n - 1, 2)
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence


class NotACocycle(ValueError):
    """Raised when an edge chain with nonzero coboundary is decomposed."""

    def __init__(self, witness: tuple[int, int, int]):
        super().__init__(f"coboundary is nonzero, e.g. on triangle {witness}")
        self.witness = witness


class Skeleton:
    """Index tables for the 2-skeleton of the simplex on ``n`` vertices.

    Use :func:`skeleton` to get a cached instance.
    """

    def __init__(self, n: int):
        if n < 3:
            raise ValueError(f"need n >= 3, got {n}")
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(combinations(range(n), 2))
        self.triangles: tuple[tuple[int, int, int], ...] = tuple(
            combinations(range(n), 3))
        self.edge_index = {e: k for k, e in enumerate(self.edges)}
        self.triangle_index = {t: k for k, t in enumerate(self.triangles)}

        # star[v]: edges containing v; cofaces[e]: triangles containing e
        star = [0] * n
        for k, (a, b) in enumerate(self.edges):
            star[a] |= 1 << k
            star[b] |= 1 << k
        self.star = tuple(star)
        cof = [0] * len(self.edges)
        tri_edges = []
        for k, (a, b, c) in enumerate(self.triangles):
            ids = (self.edge_index[a, b], self.edge_index[a, c],
                   self.edge_index[b, c])
            tri_edges.append(ids)
            for e in ids:
                cof[e] |= 1 << k
        self.cofaces = tuple(cof)
        self.triangle_edges = tuple(tri_edges)
        self.full = ((1 << n) - 1, (1 << len(self.edges)) - 1,
                     (1 << len(self.triangles)) - 1)

    @property
    def sizes(self) -> tuple[int, int, int]:
        return self.n, len(self.edges), len(self.triangles)

    def simplices(self, dim: int) -> Sequence[tuple[int, ...]]:
        if dim == 0:
            return [(v,) for v in range(self.n)]
        return (self.edges, self.triangles)[dim - 1]

    def index(self, simplex: Iterable[int]) -> int:
        s = tuple(sorted(simplex))
        if len(s) == 1:
            if not 0 <= s[0] < self.n:
                raise KeyError(s)
            return s[0]
        if len(s) == 2:
            return self.edge_index[s]
        return self.triangle_index[s]

    def __repr__(self):
        return f"Skeleton(n={self.n})"


@lru_cache(maxsize=None)
def skeleton(n: int) -> Skeleton:
    return Skeleton(n)


def iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class Chain:
    """An F2-chain of dimension 0, 1 or 2 on the complete 2-skeleton."""

    n: int
    dim: int
    bits: int = 0

    def __post_init__(self):
        if self.dim not in (0, 1, 2):
            raise ValueError(f"dimension must be 0, 1 or 2, got {self.dim}")
        if self.bits < 0 or self.bits >> self.skeleton.sizes[self.dim]:
            raise ValueError("bits outside the chain space")

    @property
    def skeleton(self) -> Skeleton:
        return skeleton(self.n)

    @classmethod
    def from_simplices(cls, n: int, dim: int, simplices: Iterable) -> "Chain":
        sk = skeleton(n)
        bits = 0
        for s in simplices:
            s = (s,) if isinstance(s, int) else s
            if len(s) != dim + 1:
                raise ValueError(f"{s} is not a {dim}-simplex")
            bits ^= 1 << sk.index(s)
        return cls(n, dim, bits)

    @classmethod
    def zero(cls, n: int, dim: int) -> "Chain":
        return cls(n, dim, 0)

    @classmethod
    def full(cls, n: int, dim: int) -> "Chain":
        return cls(n, dim, skeleton(n).full[dim])

    def _check(self, other: "Chain"):
        if (self.n, self.dim) != (other.n, other.dim):
            raise ValueError("chains live in different spaces")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        return Chain(self.n, self.dim, self.bits ^ other.bits)

    __xor__ = __add__

    def complement(self) -> "Chain":
        return Chain(self.n, self.dim, self.bits ^ self.skeleton.full[self.dim])

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __bool__(self) -> bool:
        return self.bits != 0

    def indices(self) -> list[int]:
        return list(iter_bits(self.bits))

    def simplices(self) -> list[tuple[int, ...]]:
        table = self.skeleton.simplices(self.dim)
        return [table[k] for k in iter_bits(self.bits)]

    def __iter__(self):
        return iter(self.simplices())

    def __contains__(self, simplex) -> bool:
        s = (simplex,) if isinstance(simplex, int) else simplex
        return bool(self.bits >> self.skeleton.index(s) & 1)

    def __repr__(self):
        if self.dim == 0:
            body = ",".join(str(v) for v in iter_bits(self.bits))
        else:
            body = ",".join("".join(map(str, s)) if self.n <= 10 else str(s)
                            for s in self.simplices())
        return f"Chain{self.dim}(n={self.n}, {{{body}}})"


# -- coboundary -----------------------------------------------------------

def coboundary0_bits(sk: Skeleton, u: int) -> int:
    out = 0
    for v in iter_bits(u):
        out ^= sk.star[v]
    return out


def coboundary1_bits(sk: Skeleton, f: int) -> int:
    out = 0
    for e in iter_bits(f):
        out ^= sk.cofaces[e]
    return out


def coboundary0(U: Chain) -> Chain:
    """Edges meeting ``U`` in exactly one endpoint."""
    if U.dim != 0:
        raise ValueError("coboundary0 expects a vertex chain")
    return Chain(U.n, 1, coboundary0_bits(U.skeleton, U.bits))


def coboundary1(F: Chain) -> Chain:
    """Triangles containing an odd number of edges of ``F``."""
    if F.dim != 1:
        raise ValueError("coboundary1 expects an edge chain")
    return Chain(F.n, 2, coboundary1_bits(F.skeleton, F.bits))


def coboundary(c: Chain) -> Chain:
    if c.dim == 0:
        return coboundary0(c)
    if c.dim == 1:
        return coboundary1(c)
    raise ValueError("no coboundary out of dimension 2 in a 2-skeleton")


# -- kernel structure -----------------------------------------------------

@dataclass(frozen=True)
class KernelWitness:
    is_kernel: bool
    classification: str  # "Empty" | "Full" | "NotKernel"
    witness: tuple[int, int] | None = None


def kernel_vertex_witness(U: Chain) -> KernelWitness:
    """Classify a vertex chain against the kernel of ``coboundary0``.

    The only vertex chains with zero coboundary are the empty set and ``V``.
    Anything else gets a cut edge as witness.
    """
    full = U.skeleton.full[0]
    if U.bits == 0:
        return KernelWitness(True, "Empty")
    if U.bits == full:
        return KernelWitness(True, "Full")
    inside = (U.bits & -U.bits).bit_length() - 1
    outside_bits = full & ~U.bits
    outside = (outside_bits & -outside_bits).bit_length() - 1
    edge = (min(inside, outside), max(inside, outside))
    return KernelWitness(False, "NotKernel", edge)


def cut_decomposition(F: Chain) -> Chain:
    """Return ``U`` with ``coboundary0(U) == F`` for a cocycle ``F``.

    Two-colours the graph spanned by ``F``.  The colour class holding the
    smallest non-isolated vertex is returned; the empty chain maps to the
    empty chain.  Raises :class:`NotACocycle` if ``coboundary1(F) != 0``.
    """
    if F.dim != 1:
        raise ValueError("cut_decomposition expects an edge chain")
    sk = F.skeleton
    bad = coboundary1_bits(sk, F.bits)
    if bad:
        raise NotACocycle(sk.triangles[(bad & -bad).bit_length() - 1])
    return Chain(F.n, 0, cut_side_bits(sk, F.bits))


def cut_side_bits(sk: Skeleton, f: int) -> int:
    """Colour class of the smallest non-isolated vertex of the graph ``f``.

    Breadth-first 2-colouring; assumes ``f`` is a cocycle, so the graph is
    bipartite and (when nonempty) spans every vertex.
    """
    if f == 0:
        return 0
    n = sk.n
    adj = [[] for _ in range(n)]
    for k in iter_bits(f):
        a, b = sk.edges[k]
        adj[a].append(b)
        adj[b].append(a)
    root = next(v for v in range(n) if adj[v])
    colour = {root: 0}
    queue = [root]
    for v in queue:
        for u in adj[v]:
            if u not in colour:
                colour[u] = colour[v] ^ 1
                queue.append(u)
    side = 0
    for v, c in colour.items():
        if c == 0:
            side |= 1 << v
    return side


# -- weights --------------------------------------------------------------

@dataclass(frozen=True)
class VertexDistribution:
    """Exact probability weights on the vertex set."""

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        w = tuple(Fraction(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) < 3:
            raise ValueError("need at least three vertices")
        if any(x < 0 for x in w):
            raise ValueError("weights must be nonnegative")
        if sum(w) != 1:
            raise ValueError(f"weights sum to {sum(w)}, not 1")

    @property
    def n(self) -> int:
        return len(self.weights)

    @classmethod
    def uniform(cls, n: int) -> "VertexDistribution":
        return cls((Fraction(1, n),) * n)

    @classmethod
    def random(cls, n: int, rng: random.Random, max_weight: int = 100,
               ) -> "VertexDistribution":
        raw = [rng.randint(1, max_weight) for _ in range(n)]
        total = sum(raw)
        return cls(tuple(Fraction(r, total) for r in raw))

    def __getitem__(self, v: int) -> Fraction:
        return self.weights[v]

    def edge_weight(self, e: Sequence[int]) -> Fraction:
        a, b = e
        return (self.weights[a] + self.weights[b]) / (self.n - 1)

    def triangle_weight(self, t: Sequence[int]) -> Fraction:
        a, b, c = t
        return (self.weights[a] + self.weights[b] + self.weights[c]) / comb(
            self.n - 1, 2)

    def integer_weights(self) -> tuple[tuple[int, ...], int]:
        """Common-denominator form ``(w, W)`` with ``p(v) == w[v] / W``."""
        den = 1
        for x in self.weights:
            den = den * x.denominator // _gcd(den, x.denominator)
        return tuple(int(x * den) for x in self.weights), den


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


class WeightTable:
    """Per-simplex integer numerators so that chain weights stay exact.

    ``p(c) == num(c) / den[dim]``.
    """

    def __init__(self, p: VertexDistribution):
        sk = skeleton(p.n)
        w, W = p.integer_weights()
        self.n = p.n
        self.vertex = w
        self.edge = tuple(w[a] + w[b] for a, b in sk.edges)
        self.triangle = tuple(w[a] + w[b] + w[c] for a, b, c in sk.triangles)
        self.den = (W, W * (p.n - 1), W * comb(p.n - 1, 2))

    def numerator(self, dim: int, bits: int) -> int:
        table = (self.vertex, self.edge, self.triangle)[dim]
        return sum(table[k] for k in iter_bits(bits))

    def weight(self, dim: int, bits: int) -> Fraction:
        return Fraction(self.numerator(dim, bits), self.den[dim])


@lru_cache(maxsize=64)
def weight_table(p: VertexDistribution) -> WeightTable:
    return WeightTable(p)


def weight_of(c: Chain, p: VertexDistribution) -> Fraction:
    """Exact extended weight ``p(c)`` of a chain."""
    if c.n != p.n:
        raise ValueError("chain and distribution have different n")
    return weight_table(p).weight(c.dim, c.bits)
