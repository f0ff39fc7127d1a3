"""(s, k)-configurations: a verifier, a greedy extender seeded from bow-tie edges, and an exhaustive oracle.

A set of k hyperedges whose union has at most s vertices is an
(s, k)-configuration.  Every search result is re-checked with
:func:`is_config` before it is returned.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable

from .bowtie import BowtieGraph, ComponentStats, InternalConsistencyError
from .triple_system import LinearTripleSystem


class BadIndex(IndexError):
    pass


@dataclass(frozen=True)
class Configuration:
    edge_indices: frozenset[int]
    span: frozenset[int]

    @classmethod
    def of(cls, H: LinearTripleSystem, edges: Iterable[int]) -> "Configuration":
        idx = frozenset(int(i) for i in edges)
        for i in idx:
            if not 0 <= i < H.m:
                raise BadIndex(f"edge index {i} not in [0, {H.m})")
        span = frozenset(v for i in idx for v in H.edges[i])
        return cls(idx, span)

    @property
    def k(self) -> int:
        return len(self.edge_indices)

    def to_json(self, s: int | None = None) -> dict:
        return {
            "k": self.k,
            "s": len(self.span) if s is None else s,
            "edge_indices": sorted(self.edge_indices),
            "span_vertices": sorted(self.span),
        }


@dataclass(frozen=True)
class SearchBudget:
    """Node and wall-clock limits; None means unlimited."""

    max_nodes: int | None = None
    max_millis: int | None = None

    def __post_init__(self):
        for name in ("max_nodes", "max_millis"):
            val = getattr(self, name)
            if val is not None and val <= 0:
                raise ValueError(f"{name} must be positive, got {val}")


UNLIMITED = SearchBudget()


class Status(str, Enum):
    FOUND = "found"
    NOT_FOUND = "not_found"
    INDETERMINATE = "indeterminate"
    FAILED = "failed"


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a search.

    ``config`` is the verified witness when ``status`` is FOUND, and the
    largest partial configuration reached otherwise (None if there was none).
    """

    status: Status
    config: Configuration | None
    nodes: int = 0
    seeds_tried: int = 0

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


def is_config(H: LinearTripleSystem, edges: Iterable[int], s: int, k: int) -> bool:
    """True iff exactly k distinct edges are given and their union has at most s vertices."""
    c = edges if isinstance(edges, Configuration) else Configuration.of(H, edges)
    return c.k == k and len(c.span) <= s


def _verified(H: LinearTripleSystem, c: Configuration, s: int, k: int) -> Configuration:
    if not is_config(H, c.edge_indices, s, k):
        raise InternalConsistencyError(
            f"search returned {sorted(c.edge_indices)} spanning {len(c.span)} vertices, "
            f"not an ({s},{k})-configuration"
        )
    return c


def seed_from_bowtie_edge(H: LinearTripleSystem, B: BowtieGraph, b_edge: int) -> Configuration:
    """The three hyperedges of a bow-tie edge; they span exactly 6 vertices."""
    e, f, g = B.labels_of_edge(b_edge)
    c = Configuration.of(H, (e, f, g))
    if len(c.span) != 6:
        raise InternalConsistencyError(f"bow-tie edge {b_edge} spans {len(c.span)} vertices")
    return c


def greedy_extend(
    H: LinearTripleSystem,
    seed: Configuration,
    k: int,
    rng_seed: int | None = None,
) -> SearchResult:
    """Grow ``seed`` by hyperedges meeting the current span in at least two vertices.

    Each step adds one edge and at most one vertex, so the excess
    ``|span| - |edges|`` never grows.  Edges meeting the span in 3 vertices
    are taken before those meeting it in 2; ties go to the lowest index, or
    to a uniformly random candidate when ``rng_seed`` is given.  Stops with
    FOUND at k edges, or FAILED when nothing qualifies.
    """
    if len(seed.span) > seed.k + 3:
        raise ValueError(f"seed spans {len(seed.span)} > {seed.k} + 3 vertices")
    if k < seed.k:
        raise ValueError(f"seed already has {seed.k} > k = {k} edges")
    rng = random.Random(rng_seed) if rng_seed is not None else None
    chosen = set(seed.edge_indices)
    span = set(seed.span)
    excess = len(span) - len(chosen)
    steps = 0
    while len(chosen) < k:
        best_meet = 0
        cands: list[int] = []
        seen: set[int] = set()
        for u, v in combinations(sorted(span), 2):
            g = H.pair_index.get((u, v))
            if g is None or g in chosen or g in seen:
                continue
            seen.add(g)
            meet = sum(1 for x in H.edges[g] if x in span)
            if meet > best_meet:
                best_meet, cands = meet, [g]
            elif meet == best_meet:
                cands.append(g)
        if not cands:
            return SearchResult(Status.FAILED, Configuration.of(H, chosen), nodes=steps)
        g = rng.choice(sorted(cands)) if rng else min(cands)
        chosen.add(g)
        span.update(H.edges[g])
        steps += 1
        new_excess = len(span) - len(chosen)
        assert new_excess <= excess, "greedy step increased span excess"
        excess = new_excess
    c = Configuration.of(H, chosen)
    return SearchResult(Status.FOUND, _verified(H, c, k + 3, k), nodes=steps)


def exhaustive_search(
    H: LinearTripleSystem, k: int, s: int, budget: SearchBudget = UNLIMITED
) -> SearchResult:
    """Depth-first branch and bound over k-subsets of edge indices in increasing order.

    Pruning rule: a partial subset is abandoned as soon as its span exceeds
    s.  This is sound because adding edges can only enlarge the span, so no
    superset of such a subset is an (s, k)-configuration.  A branch is also
    cut when too few higher-indexed edges remain to reach k.  All subsets
    are searched (no connectivity restriction).

    Returns the lexicographically first witness (FOUND), NOT_FOUND once the
    space is exhausted, or INDETERMINATE if the budget ran out first.
    """
    masks = [(1 << a) | (1 << b) | (1 << c) for a, b, c in H.edges]
    m = len(masks)
    deadline = None if budget.max_millis is None else time.monotonic() + budget.max_millis / 1000
    max_nodes = budget.max_nodes
    nodes = 0
    chosen: list[int] = []

    class _OutOfBudget(Exception):
        pass

    def dfs(start: int, span: int) -> bool:
        nonlocal nodes
        if len(chosen) == k:
            return True
        need = k - len(chosen)
        for i in range(start, m - need + 1):
            nodes += 1
            if max_nodes is not None and nodes > max_nodes:
                raise _OutOfBudget
            if deadline is not None and nodes & 1023 == 0 and time.monotonic() > deadline:
                raise _OutOfBudget
            new_span = span | masks[i]
            if new_span.bit_count() > s:
                continue
            chosen.append(i)
            if dfs(i + 1, new_span):
                return True
            chosen.pop()
        return False

    if k <= 0:
        return SearchResult(Status.NOT_FOUND, None)
    try:
        hit = dfs(0, 0)
    except _OutOfBudget:
        return SearchResult(Status.INDETERMINATE, None, nodes=nodes)
    if not hit:
        return SearchResult(Status.NOT_FOUND, None, nodes=nodes)
    c = _verified(H, Configuration.of(H, chosen), s, k)
    return SearchResult(Status.FOUND, c, nodes=nodes)


def component_guided_search(
    H: LinearTripleSystem,
    B: BowtieGraph,
    component: ComponentStats,
    k: int,
    budget: SearchBudget = UNLIMITED,
) -> SearchResult:
    """Try :func:`greedy_extend` from each bow-tie edge of ``component`` in edge order.

    ``budget.max_nodes`` caps the number of seeds tried.  The first success
    is verified as a (k+3, k)-configuration and returned; otherwise FAILED
    with the largest partial configuration seen, or INDETERMINATE if the
    budget stopped the scan early.
    """
    edge_ids = B.component_edge_ids(component.id)
    deadline = None if budget.max_millis is None else time.monotonic() + budget.max_millis / 1000
    best: Configuration | None = None
    tried = 0
    for j in edge_ids:
        if budget.max_nodes is not None and tried >= budget.max_nodes:
            return SearchResult(Status.INDETERMINATE, best, seeds_tried=tried)
        if deadline is not None and time.monotonic() > deadline:
            return SearchResult(Status.INDETERMINATE, best, seeds_tried=tried)
        tried += 1
        seed = seed_from_bowtie_edge(H, B, int(j))
        if k < 3:
            # a 3-edge seed cannot shrink; any 3-edge config contains smaller ones
            sub = sorted(seed.edge_indices)[:k]
            c = Configuration.of(H, sub)
            if len(c.span) <= k + 3:
                return SearchResult(Status.FOUND, _verified(H, c, k + 3, k), seeds_tried=tried)
            continue
        res = greedy_extend(H, seed, k)
        if res.found:
            return SearchResult(Status.FOUND, _verified(H, res.config, k + 3, k), res.nodes, tried)
        if res.config is not None and (best is None or res.config.k > best.k):
            best = res.config
    return SearchResult(Status.FAILED, best, seeds_tried=tried)
