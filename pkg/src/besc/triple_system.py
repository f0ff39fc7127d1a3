"""Linear 3-uniform hypergraphs: validation, generators and the ``.l3g`` format.

A linear triple system is a set of 3-element vertex sets ("triples") in which
any two triples share at most one vertex, so every vertex pair is covered at
most once.  Its linear density is ``3m / C(n, 2)``, which equals 1 exactly for
Steiner triple systems.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Sequence, Union

import numpy as np

Triple = tuple[int, int, int]
Pair = tuple[int, int]
RationalLike = Union[Fraction, int, float, str]


class TripleSystemError(ValueError):
    """Base class for invalid triple-system input."""


class RepeatedVertexInTriple(TripleSystemError):
    pass


class VertexOutOfRange(TripleSystemError):
    pass


class PairCoveredTwice(TripleSystemError):
    pass


class DuplicateTriple(PairCoveredTwice):
    pass


class DegenerateSystem(TripleSystemError):
    pass


class InadmissibleOrder(TripleSystemError):
    pass


class TargetAboveCurrent(TripleSystemError):
    pass


class L3GSyntaxError(TripleSystemError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def as_fraction(x: RationalLike) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float.

    Floats go through their shortest repr, so ``0.85`` becomes ``17/20``
    rather than the binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class LinearTripleSystem:
    """An immutable linear triple system on vertices ``0..n-1``.

    Construct through :func:`validate` (or the generators); the constructor
    assumes its arguments already satisfy the invariants.
    """

    n: int
    edges: tuple[Triple, ...]
    pair_index: dict[Pair, int] = field(repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def density(self) -> Fraction:
        return linear_density(self)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Per-vertex ascending list of incident edge indices."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, t in enumerate(self.edges):
            for v in t:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.incidence)

    @cached_property
    def edge_array(self) -> np.ndarray:
        arr = np.array(self.edges, dtype=np.int64)
        return arr.reshape(-1, 3)

    @cached_property
    def pair_matrix(self) -> np.ndarray:
        """n x n matrix holding the covering edge index of each pair, -1 if uncovered."""
        mat = np.full((self.n, self.n), -1, dtype=np.int64)
        if self.edges:
            e = self.edge_array
            idx = np.arange(len(e))
            for a, b in ((0, 1), (0, 2), (1, 2)):
                mat[e[:, a], e[:, b]] = idx
                mat[e[:, b], e[:, a]] = idx
        return mat

    def edge_of_pair(self, u: int, v: int) -> int | None:
        return self.pair_index.get(_pair(u, v))

    def is_steiner(self) -> bool:
        return self.n >= 2 and 3 * self.m == comb(self.n, 2)

    def subsystem(self, keep: Iterable[int]) -> "LinearTripleSystem":
        """The system on the same vertex set restricted to the given edge indices (order kept)."""
        kept = sorted(set(keep))
        return validate(self.n, [self.edges[i] for i in kept])


def validate(n: int, triples: Iterable[Sequence[int]]) -> LinearTripleSystem:
    """Check raw triples and build a canonical :class:`LinearTripleSystem`.

    Edge order follows the input; each triple is sorted.  Raises the most
    specific error for the first offending triple.
    """
    if n < 0:
        raise VertexOutOfRange(f"vertex count must be non-negative, got {n}")
    edges: list[Triple] = []
    pair_index: dict[Pair, int] = {}
    seen: dict[Triple, int] = {}
    for i, raw in enumerate(triples):
        raw = tuple(int(v) for v in raw)
        if len(raw) != 3:
            raise RepeatedVertexInTriple(f"triple {i} has {len(raw)} entries: {raw}")
        for v in raw:
            if not 0 <= v < n:
                raise VertexOutOfRange(f"triple {i}: vertex {v} not in [0, {n})")
        t = tuple(sorted(raw))
        if t[0] == t[1] or t[1] == t[2]:
            raise RepeatedVertexInTriple(f"triple {i} repeats a vertex: {raw}")
        if t in seen:
            raise DuplicateTriple(f"triple {i} duplicates triple {seen[t]}: {t}")
        a, b, c = t
        for p in ((a, b), (a, c), (b, c)):
            j = pair_index.get(p)
            if j is not None:
                raise PairCoveredTwice(
                    f"pair {p} covered by triple {j} {edges[j]} and triple {i} {t}"
                )
        for p in ((a, b), (a, c), (b, c)):
            pair_index[p] = i
        seen[t] = i
        edges.append(t)  # type: ignore[arg-type]
    return LinearTripleSystem(n, tuple(edges), pair_index)


def linear_density(H: LinearTripleSystem) -> Fraction:
    if H.n < 2:
        raise DegenerateSystem(f"linear density undefined for n={H.n}")
    return Fraction(3 * H.m, comb(H.n, 2))


# -- Steiner triple systems -------------------------------------------------


def _bose(n: int) -> list[Triple]:
    # n = 6t + 3; idempotent commutative quasigroup x.y = (x + y)/2 on Z_v, v = 2t + 1.
    v = n // 3
    half = (v + 1) // 2

    def pt(x: int, i: int) -> int:
        return i * v + x

    out: list[Triple] = []
    for x in range(v):
        out.append((pt(x, 0), pt(x, 1), pt(x, 2)))
    for i in range(3):
        for x in range(v):
            for y in range(x + 1, v):
                z = (x + y) * half % v
                out.append((pt(x, i), pt(y, i), pt(z, (i + 1) % 3)))
    return out


def _skolem(n: int) -> list[Triple]:
    # n = 6t + 1; half-idempotent commutative quasigroup on Z_{2t}, plus a point at infinity.
    t = (n - 1) // 6
    v = 2 * t
    inf = n - 1

    def op(x: int, y: int) -> int:
        s = (x + y) % v
        return s // 2 if s % 2 == 0 else t + (s - 1) // 2

    def pt(x: int, i: int) -> int:
        return i * v + x

    out: list[Triple] = []
    for x in range(t):
        out.append((pt(x, 0), pt(x, 1), pt(x, 2)))
    for i in range(3):
        for x in range(t):
            out.append((inf, pt(x + t, i), pt(x, (i + 1) % 3)))
    for i in range(3):
        for x in range(v):
            for y in range(x + 1, v):
                out.append((pt(x, i), pt(y, i), pt(op(x, y), (i + 1) % 3)))
    return out


def generate_steiner(n: int) -> LinearTripleSystem:
    """Deterministic Steiner triple system of order n (Bose or Skolem construction)."""
    if n < 3 or n % 6 not in (1, 3):
        raise InadmissibleOrder(f"no Steiner triple system of order {n} (need n = 1, 3 mod 6, n >= 3)")
    triples = _bose(n) if n % 6 == 3 else _skolem(n)
    H = validate(n, triples)
    assert H.is_steiner()
    return H


# -- random generation ------------------------------------------------------


def generate_random_linear(
    n: int, target_density: RationalLike, seed: int
) -> LinearTripleSystem:
    """Greedy random linear system grown until ``d_lin >= target_density`` or saturation.

    Every step inserts a triple drawn uniformly from the triples whose three
    pairs are all still uncovered.  Uses ``random.Random(seed)`` (MT19937).
    Sampling starts by rejection over all C(n,3) triples; after 64
    consecutive rejections it switches to an explicit list of insertable
    triples, filtered after each insertion.  Both phases draw from the same
    uniform distribution.  The achieved density can fall short of the target
    at high densities; read it from the result.
    """
    if n < 3:
        raise DegenerateSystem(f"need n >= 3, got {n}")
    target = as_fraction(target_density)
    rng = random.Random(seed)
    total_pairs = comb(n, 2)
    covered: set[Pair] = set()
    edges: list[Triple] = []

    def reached() -> bool:
        return Fraction(3 * len(edges), total_pairs) >= target

    def insert(t: Triple) -> None:
        a, b, c = t
        covered.update(((a, b), (a, c), (b, c)))
        edges.append(t)

    misses = 0
    while not reached() and misses < 64:
        t = tuple(sorted(rng.sample(range(n), 3)))
        a, b, c = t
        if (a, b) in covered or (a, c) in covered or (b, c) in covered:
            misses += 1
            continue
        misses = 0
        insert(t)  # type: ignore[arg-type]

    if not reached():
        # uncovered-pair graph as bitsets; insertable triples are its triangles
        free = [0] * n
        for u in range(n):
            for v in range(u + 1, n):
                if (u, v) not in covered:
                    free[u] |= 1 << v
                    free[v] |= 1 << u
        cands: list[Triple] = []
        for u in range(n):
            hi_u = free[u] >> (u + 1) << (u + 1)
            x = hi_u
            while x:
                low = x & -x
                v = low.bit_length() - 1
                x ^= low
                common = hi_u & free[v] >> (v + 1) << (v + 1)
                while common:
                    lw = common & -common
                    w = lw.bit_length() - 1
                    common ^= lw
                    cands.append((u, v, w))
        while cands and not reached():
            t = cands[rng.randrange(len(cands))]
            insert(t)
            a, b, c = t
            cands = [
                s
                for s in cands
                if len({a, b, c}.intersection(s)) < 2
            ]
    return validate(n, edges)


def dilute(
    H: LinearTripleSystem, target_density: RationalLike, seed: int
) -> LinearTripleSystem:
    """Delete uniformly random edges while the density stays ``>= target_density``.

    The deletion order is ``random.Random(seed).shuffle`` of the edge indices;
    surviving edges keep their original relative order.
    """
    target = as_fraction(target_density)
    current = linear_density(H)
    if target > current:
        raise TargetAboveCurrent(f"target density {target} exceeds current {current}")
    total_pairs = comb(H.n, 2)
    order = list(range(H.m))
    random.Random(seed).shuffle(order)
    m = H.m
    removed = 0
    while removed < len(order) and Fraction(3 * (m - removed - 1), total_pairs) >= target:
        removed += 1
    drop = set(order[:removed])
    return validate(H.n, [t for i, t in enumerate(H.edges) if i not in drop])


# -- .l3g text format -------------------------------------------------------


def parse(text: str) -> LinearTripleSystem:
    """Read the ``.l3g`` format: header ``n m``, then m lines of three vertex ids.

    Lines starting with ``#`` and blank lines are ignored.
    """
    header: tuple[int, int] | None = None
    triples: list[tuple[int, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise L3GSyntaxError(lineno, f"non-integer token in {s!r}") from None
        if header is None:
            if len(nums) != 2 or nums[0] < 0 or nums[1] < 0:
                raise L3GSyntaxError(lineno, "header must be two non-negative integers 'n m'")
            header = (nums[0], nums[1])
            continue
        if len(nums) != 3:
            raise L3GSyntaxError(lineno, f"expected 3 vertex ids, got {len(nums)}")
        if len(triples) == header[1]:
            raise L3GSyntaxError(lineno, f"more than the declared {header[1]} triples")
        triples.append((nums[0], nums[1], nums[2]))
    if header is None:
        raise L3GSyntaxError(1, "missing header")
    if len(triples) != header[1]:
        raise L3GSyntaxError(
            len(text.splitlines()) + 1,
            f"declared {header[1]} triples, found {len(triples)}",
        )
    return validate(header[0], triples)


def serialize(H: LinearTripleSystem) -> str:
    lines = [f"{H.n} {H.m}"]
    lines.extend(f"{a} {b} {c}" for a, b, c in H.edges)
    return "\n".join(lines) + "\n"


def load(path) -> LinearTripleSystem:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save(H: LinearTripleSystem, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize(H))
