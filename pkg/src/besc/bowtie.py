"""Bow-tie graph of a linear triple system, its identities and component statistics.

Vertices of the bow-tie graph are the unordered pairs of hyperedges meeting
in exactly one vertex.  Two such pairs ``{e, f}`` and ``{f, g}`` are adjacent
when e, f, g pairwise meet in single vertices and have no common vertex, i.e.
when they form a triangle of the underlying graph that is not itself a
hyperedge.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, comb

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .graph_census import SimpleGraph, count_cherries, count_triangles
from .triple_system import LinearTripleSystem, linear_density

MAX_DEGREE = 8
DENSE_AVG_DEGREE = 6


class InternalConsistencyError(AssertionError):
    """A proven identity or bound failed: a bug, not bad input."""


class DegenerateDensity(ValueError):
    pass


@dataclass(frozen=True)
class BowtiePair:
    lo: int
    hi: int
    shared: int


@dataclass(frozen=True, eq=False)
class BowtieGraph:
    """Bow-tie graph in array form.

    Vertex ``i`` is the hyperedge pair ``(lo[i], hi[i])`` meeting at
    ``shared[i]``; vertices are sorted by ``(lo, hi)``.  ``edges`` holds each
    edge once as ``(u, v)`` with ``u < v``, sorted; ``indptr``/``indices`` are
    the CSR neighbour lists (each list ascending).
    """

    num_hyperedges: int
    lo: np.ndarray
    hi: np.ndarray
    shared: np.ndarray
    edges: np.ndarray
    indptr: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.lo)

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def verts(self) -> list[BowtiePair]:
        return [BowtiePair(int(a), int(b), int(s)) for a, b, s in zip(self.lo, self.hi, self.shared)]

    @cached_property
    def _keys(self) -> np.ndarray:
        return self.lo * max(self.num_hyperedges, 1) + self.hi

    def index(self, lo: int, hi: int) -> int | None:
        """Position of the pair ``{lo, hi}``, or None if the two hyperedges do not meet."""
        if lo > hi:
            lo, hi = hi, lo
        key = lo * max(self.num_hyperedges, 1) + hi
        pos = int(np.searchsorted(self._keys, key))
        if pos < self.size and self._keys[pos] == key:
            return pos
        return None

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def labels_of_edge(self, j: int) -> tuple[int, int, int]:
        """Hyperedges (e, f, g) of edge j: the pairs {e, f} and {f, g}, f being the shared label."""
        u, v = (int(x) for x in self.edges[j])
        a = {int(self.lo[u]), int(self.hi[u])}
        b = {int(self.lo[v]), int(self.hi[v])}
        (f,) = a & b
        (e,) = a - {f}
        (g,) = b - {f}
        return e, f, g

    @cached_property
    def component_labels(self) -> np.ndarray:
        """Component id per vertex, ids ordered by decreasing size then smallest member."""
        if self.size == 0:
            return np.zeros(0, dtype=np.int64)
        adj = csr_matrix(
            (np.ones(len(self.indices), dtype=np.int8), self.indices, self.indptr),
            shape=(self.size, self.size),
        )
        ncomp, raw = connected_components(adj, directed=False)
        sizes = np.bincount(raw, minlength=ncomp)
        first = np.full(ncomp, self.size, dtype=np.int64)
        np.minimum.at(first, raw, np.arange(self.size))
        order = np.lexsort((first, -sizes))
        rank = np.empty(ncomp, dtype=np.int64)
        rank[order] = np.arange(ncomp)
        return rank[raw]

    @cached_property
    def _edges_by_component(self) -> tuple[np.ndarray, np.ndarray]:
        if self.e == 0:
            return np.zeros(0, dtype=np.int64), np.zeros(1, dtype=np.int64)
        lab = self.component_labels[self.edges[:, 0]]
        order = np.argsort(lab, kind="stable")
        ncomp = int(self.component_labels.max()) + 1
        ptr = np.concatenate(([0], np.cumsum(np.bincount(lab, minlength=ncomp))))
        return order, ptr

    def component_edge_ids(self, comp: int) -> np.ndarray:
        """Edge positions inside component ``comp``, ascending."""
        order, ptr = self._edges_by_component
        if comp + 1 >= len(ptr):
            return np.zeros(0, dtype=np.int64)
        return order[ptr[comp] : ptr[comp + 1]]


def build_bowtie(H: LinearTripleSystem) -> BowtieGraph:
    m = H.m
    los, his, shs = [], [], []
    for v, inc in enumerate(H.incidence):
        d = len(inc)
        if d < 2:
            continue
        a, b = np.triu_indices(d, 1)
        arr = np.asarray(inc, dtype=np.int64)
        los.append(arr[a])
        his.append(arr[b])
        shs.append(np.full(len(a), v, dtype=np.int64))
    if not los:
        z = np.zeros(0, dtype=np.int64)
        return BowtieGraph(m, z, z, z, np.zeros((0, 2), dtype=np.int32), np.zeros(1, dtype=np.int64), z.astype(np.int32))

    lo = np.concatenate(los)
    hi = np.concatenate(his)
    shared = np.concatenate(shs)
    keys = lo * m + hi
    order = np.argsort(keys, kind="stable")
    lo, hi, shared, keys = lo[order], hi[order], shared[order], keys[order]
    nb = len(lo)

    E = H.edge_array
    # the two vertices of each hyperedge other than the shared one
    def others(idx: np.ndarray) -> np.ndarray:
        rows = E[idx]
        return rows[rows != shared[:, None]].reshape(-1, 2)

    lo_rest, hi_rest = others(lo), others(hi)
    P = H.pair_matrix
    src_parts, dst_parts = [], []
    ids = np.arange(nb, dtype=np.int32)
    for a in range(2):
        for b in range(2):
            # g covers one non-shared vertex of each of lo and hi: a triangle lo, hi, g
            g = P[lo_rest[:, a], hi_rest[:, b]]
            ok = g >= 0
            gi, src = g[ok], ids[ok]
            for f in (lo[ok], hi[ok]):
                k = np.minimum(f, gi) * m + np.maximum(f, gi)
                src_parts.append(src)
                dst_parts.append(np.searchsorted(keys, k).astype(np.int32))
            del g, ok, gi, src
    del lo_rest, hi_rest
    # every adjacency is found exactly once from each endpoint: this is already the CSR content
    src = np.concatenate(src_parts)
    del src_parts
    dst = np.concatenate(dst_parts)
    del dst_parts
    o = np.lexsort((dst, src))
    src, indices = src[o], dst[o]
    del o, dst
    indptr = np.concatenate(([0], np.cumsum(np.bincount(src, minlength=nb)))).astype(np.int64)
    keep = src < indices
    edges = np.stack((src[keep], indices[keep]), axis=1)
    return BowtieGraph(m, lo, hi, shared, edges, indptr, indices)


def check_degree_bound(B: BowtieGraph) -> int:
    """Maximum degree of B; raises :class:`InternalConsistencyError` above 8."""
    top = int(B.degrees.max()) if B.size else 0
    if top > MAX_DEGREE:
        raise InternalConsistencyError(f"bow-tie graph has a vertex of degree {top} > {MAX_DEGREE}")
    return top


def edge_identity(H: LinearTripleSystem, B: BowtieGraph, U: SimpleGraph) -> tuple[int, int]:
    """``(e(B), 3*triangles(U) - 3*e(H))``; always equal."""
    return B.e, 3 * count_triangles(U) - 3 * H.m


def cherry_pair_identity(H: LinearTripleSystem, B: BowtieGraph, U: SimpleGraph) -> tuple[int, int]:
    """``(4|B| + 3e(H), cherries(U))``.

    Each meeting pair of hyperedges spans 4 cherries not inside a hyperedge
    and each hyperedge holds 3, so the two sides agree exactly.
    """
    return 4 * B.size + 3 * H.m, count_cherries(U)


def pair_count(H: LinearTripleSystem) -> int:
    """Number of meeting hyperedge pairs, ``sum_v C(deg_H(v), 2)``."""
    return sum(comb(d, 2) for d in H.degrees)


def average_degree(B: BowtieGraph) -> Fraction:
    return Fraction(2 * B.e, B.size) if B.size else Fraction(0)


@dataclass(frozen=True)
class ComponentStats:
    id: int
    size: int
    edges: int
    avg_degree: Fraction
    dense: bool


def components(B: BowtieGraph) -> list[ComponentStats]:
    """Connected components, largest first, ties broken by smallest member."""
    if B.size == 0:
        return []
    lab = B.component_labels
    ncomp = int(lab.max()) + 1
    sizes = np.bincount(lab, minlength=ncomp)
    ecount = np.bincount(lab[B.edges[:, 0]], minlength=ncomp) if B.e else np.zeros(ncomp, dtype=np.int64)
    out = []
    for c in range(ncomp):
        s, k = int(sizes[c]), int(ecount[c])
        avg = Fraction(2 * k, s)
        out.append(ComponentStats(c, s, k, avg, avg >= DENSE_AVG_DEGREE))
    return out


@dataclass(frozen=True)
class DenseCensus:
    dense_count: int
    dense_small_count: int
    dense_total: int
    size_histogram: dict[int, int]
    bound: int


def dense_census(B: BowtieGraph, bound: int, comps: list[ComponentStats] | None = None) -> DenseCensus:
    """Count dense components (average degree >= 6), those smaller than ``bound``, and their total size.

    ``size_histogram`` maps component size to the number of components of
    that size, over all components.
    """
    comps = components(B) if comps is None else comps
    dense = [c for c in comps if c.dense]
    hist = Counter(c.size for c in comps)
    return DenseCensus(
        dense_count=len(dense),
        dense_small_count=sum(1 for c in dense if c.size < bound),
        dense_total=sum(c.size for c in dense),
        size_histogram=dict(sorted(hist.items())),
        bound=bound,
    )


def up_avg_check(B: BowtieGraph, census: DenseCensus) -> tuple[Fraction, Fraction]:
    """``(avg_degree(B), 6 + 2*dense_total/|B|)``; the first never exceeds the second when B is non-empty."""
    if B.size == 0:
        return Fraction(0), Fraction(DENSE_AVG_DEGREE)
    return average_degree(B), DENSE_AVG_DEGREE + Fraction(2 * census.dense_total, B.size)


def avg_degree_bound(H: LinearTripleSystem, B: BowtieGraph) -> tuple[Fraction, Fraction]:
    """``(avg_degree(B), 16 - 8n/(d(n-1) - 1))`` with d the linear density of H."""
    d = linear_density(H)
    denom = d * (H.n - 1) - 1
    if denom <= 0:
        raise DegenerateDensity(f"d(n-1) = {d * (H.n - 1)} <= 1; bound undefined")
    return average_degree(B), 16 - Fraction(8 * H.n) / denom


def six_plus_eps_bound(H: LinearTripleSystem, B: BowtieGraph, eps: Fraction) -> tuple[Fraction, Fraction]:
    return average_degree(B), DENSE_AVG_DEGREE + eps


def size_lower_bound(H: LinearTripleSystem, B: BowtieGraph) -> tuple[int, Fraction, bool]:
    """``(|B|, d^2 n^3 / 16, n >= 12/d)``: when the last is true the first two are ordered."""
    d = linear_density(H)
    bound = d * d * H.n**3 / 16
    applicable = d > 0 and H.n >= ceil(Fraction(12) / d)
    return B.size, bound, applicable


def dump_edge_list(B: BowtieGraph) -> str:
    """Debug text dump: ``|B| e(B)`` then one ``lo,hi lo',hi'`` line per edge."""
    lines = [f"{B.size} {B.e}"]
    for u, v in B.edges:
        lines.append(f"{B.lo[u]},{B.hi[u]} {B.lo[v]},{B.hi[v]}")
    return "\n".join(lines) + "\n"
