"""Underlying graph of a triple system and exact 3-vertex subgraph counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable

from .triple_system import DegenerateSystem, LinearTripleSystem


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @cached_property
    def e(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @cached_property
    def bitsets(self) -> tuple[int, ...]:
        out = []
        for a in self.adjacency:
            x = 0
            for v in a:
                x |= 1 << v
            out.append(x)
        return tuple(out)

    def has_edge(self, u: int, v: int) -> bool:
        return (self.bitsets[u] >> v) & 1 == 1

    def is_regular(self) -> bool:
        return len(set(self.degrees)) <= 1


@dataclass(frozen=True)
class TriadCensus:
    """Induced 3-vertex subgraph counts by number of edges, plus triangle and cherry totals."""

    p0: int
    p1: int
    p2: int
    p3: int
    kappa_cherry: int

    @property
    def kappa_triangle(self) -> int:
        return self.p3

    @property
    def total(self) -> int:
        return self.p0 + self.p1 + self.p2 + self.p3


def underlying_graph(H: LinearTripleSystem) -> SimpleGraph:
    edges = []
    for a, b, c in H.edges:
        edges.extend(((a, b), (a, c), (b, c)))
    return SimpleGraph.from_edges(H.n, edges)


def count_triangles(G: SimpleGraph) -> int:
    """Each triangle u < v < w is counted once, at its lowest edge, by a bitset AND."""
    bits = G.bitsets
    total = 0
    for u in range(G.n):
        higher_u = bits[u] >> (u + 1) << (u + 1)
        for v in G.adjacency[u]:
            if v <= u:
                continue
            total += (higher_u & bits[v] >> (v + 1) << (v + 1)).bit_count()
    return total


def count_cherries(G: SimpleGraph) -> int:
    # one cherry per centre and unordered pair of its neighbours
    return sum(comb(d, 2) for d in G.degrees)


def _census_brute_force(G: SimpleGraph) -> TriadCensus:
    p = [0, 0, 0, 0]
    for u, v, w in combinations(range(G.n), 3):
        p[G.has_edge(u, v) + G.has_edge(u, w) + G.has_edge(v, w)] += 1
    return TriadCensus(p[0], p[1], p[2], p[3], count_cherries(G))


def triad_census(G: SimpleGraph, brute_force: bool = False) -> TriadCensus:
    """Counts of induced 3-vertex subgraphs with 0, 1, 2 and 3 edges.

    The default path counts edges, triangles and cherries directly and
    derives the rest from ``cherries = 3*p3 + p2`` and
    ``e*(n-2) = 3*p3 + 2*p2 + p1``.  ``brute_force=True`` enumerates all
    C(n,3) vertex triples instead (use for cross-checks on small n).
    """
    if brute_force:
        return _census_brute_force(G)
    n = G.n
    p3 = count_triangles(G)
    cherries = count_cherries(G)
    p2 = cherries - 3 * p3
    p1 = G.e * (n - 2) - 3 * p3 - 2 * p2 if n >= 2 else 0
    p0 = comb(n, 3) - p1 - p2 - p3
    if min(p0, p1, p2) < 0:
        raise AssertionError(f"negative census entry ({p0}, {p1}, {p2}, {p3}); counting bug")
    return TriadCensus(p0, p1, p2, p3, cherries)


def goodman_slack(G: SimpleGraph) -> int:
    """``3*triangles - 2*cherries + e*(n-2)``; equals p1 of the census, hence >= 0."""
    if G.n < 2:
        return 0
    return 3 * count_triangles(G) - 2 * count_cherries(G) + G.e * (G.n - 2)


def jensen_cherry_lower_bound(H: LinearTripleSystem) -> Fraction:
    """``n * x * (x - 1) / 2`` with ``x = 6 e(H) / n``, the mean degree of the underlying graph.

    A lower bound on the cherry count of the underlying graph, tight iff it is regular.
    """
    if H.n < 2:
        raise DegenerateSystem(f"need n >= 2, got {H.n}")
    x = Fraction(6 * H.m, H.n)
    return H.n * x * (x - 1) / 2
