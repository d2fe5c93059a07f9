"""Chord graphs on labeled circle points.

Points are labeled ``1..n`` counterclockwise. An edge is a sorted pair
``(a, b)`` with ``a < b``; every predicate here is index arithmetic on those
labels, never geometry.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DomainError

Edge = tuple[int, int]


def make_edge(a: int, b: int) -> Edge:
    if a == b:
        raise DomainError(f"self-loop at point {a}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class CircleGraph:
    """``n`` points on a circle plus a set of chords (no loops, no multi-edges)."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 3:
            raise DomainError(f"point count must be an integer >= 3, got {self.n!r}")
        normalized = []
        for e in self.edges:
            a, b = e
            if not (1 <= a <= self.n and 1 <= b <= self.n):
                raise DomainError(f"edge {e} has an endpoint outside [1, {self.n}]")
            normalized.append(make_edge(a, b))
        normalized.sort()
        for e, f in zip(normalized, normalized[1:]):
            if e == f:
                raise DomainError(f"duplicate edge {e}")
        object.__setattr__(self, "edges", tuple(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "CircleGraph":
        return cls(n, tuple((int(a), int(b)) for a, b in edges))

    def __contains__(self, e: object) -> bool:
        return e in self._edge_set

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def _edge_set(self) -> frozenset[Edge]:
        # cached on first use; the dataclass is frozen so bypass __setattr__
        try:
            return self.__dict__["_es"]
        except KeyError:
            es = frozenset(self.edges)
            object.__setattr__(self, "_es", es)
            return es

    def without(self, removed: Iterable[Edge]) -> "CircleGraph":
        drop = set(removed)
        return CircleGraph(self.n, tuple(e for e in self.edges if e not in drop))

    def with_edges(self, added: Iterable[Edge]) -> "CircleGraph":
        return CircleGraph(self.n, self.edges + tuple(added))

    def points(self) -> set[int]:
        """Points that are an endpoint of some edge."""
        return {p for e in self.edges for p in e}

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {i: [] for i in range(1, self.n + 1)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def is_tree(self) -> bool:
        """Connected on all ``n`` points with exactly ``n - 1`` edges."""
        if len(self.edges) != self.n - 1:
            return False
        return _component_count(range(1, self.n + 1), self.edges) == 1

    def to_text(self) -> str:
        body = ",".join(f"{a}-{b}" for a, b in self.edges)
        return f"n={self.n};edges={body}"

    def __str__(self) -> str:
        return self.to_text()


def _component_count(vertices: Iterable[int], edges: Iterable[Edge]) -> int:
    parent = {v: v for v in vertices}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    count = len(parent)
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            count -= 1
    return count


def is_forest_on(vertices: Iterable[int], edges: Sequence[Edge]) -> bool:
    """True iff ``edges`` spans ``vertices`` as a single tree."""
    vs = list(vertices)
    return len(edges) == len(vs) - 1 and _component_count(vs, edges) == 1


def check_tree(G: CircleGraph) -> CircleGraph:
    if not G.is_tree():
        raise DomainError(f"{G} is not a tree on its {G.n} points")
    return G


# ---------------------------------------------------------------------------
# crossing and parallelism


def _check_edge(n: int, e: Edge) -> Edge:
    a, b = e
    if not (1 <= a <= n and 1 <= b <= n) or a == b:
        raise DomainError(f"invalid edge {e} for n={n}")
    return make_edge(a, b)


def _interleaved(e: Edge, f: Edge) -> bool:
    a, b = e
    c, d = f
    if c == a or c == b or d == a or d == b:
        return False
    return (a < c < b) != (a < d < b)


def crosses(n: int, e1: Edge, e2: Edge) -> bool:
    """True iff chords ``e1`` and ``e2`` meet at a point that is not an endpoint."""
    e1 = _check_edge(n, e1)
    e2 = _check_edge(n, e2)
    if e1 == e2:
        raise DomainError(f"an edge is not compared with itself: {e1}")
    return _interleaved(e1, e2)


def crossing_table(G: CircleGraph) -> dict[Edge, frozenset[Edge]]:
    """Cross set of every edge of ``G`` in one pass."""
    table: dict[Edge, set[Edge]] = {e: set() for e in G.edges}
    edges = G.edges
    for i, e in enumerate(edges):
        for f in edges[i + 1:]:
            if _interleaved(e, f):
                table[e].add(f)
                table[f].add(e)
    return {e: frozenset(s) for e, s in table.items()}


def cross_set(G: CircleGraph, e: Edge) -> frozenset[Edge]:
    e = _check_edge(G.n, e)
    if e not in G:
        raise DomainError(f"edge {e} is not in the graph")
    return frozenset(f for f in G.edges if f != e and _interleaved(e, f))


def ladder_order(bundle: Iterable[Edge], witness: Edge) -> list[Edge]:
    """Order pairwise-parallel edges along the crossing edge ``witness``.

    Each bundle edge has exactly one endpoint strictly inside ``witness``'s
    interval; sorting by that endpoint lists the bundle from one outermost
    edge to the other. Fans share an inner endpoint, so ties go to the outer
    endpoint, read clockwise from ``lo``.
    """
    lo, hi = witness

    def key(e: Edge) -> tuple[int, int, int]:
        a, b = e
        inner, outer = (a, b) if lo < a < hi else (b, a)
        return inner, outer > hi, -outer

    return sorted(bundle, key=key)


def parallel_classes(
    G: CircleGraph, table: dict[Edge, frozenset[Edge]] | None = None
) -> list[list[Edge]]:
    """Partition the crossed edges of ``G`` by equal cross sets.

    Each class is listed in increasingly parallel order; classes are sorted by
    their smallest edge.
    """
    if table is None:
        table = crossing_table(G)
    groups: dict[frozenset[Edge], list[Edge]] = {}
    for e in G.edges:
        cs = table[e]
        if cs:
            groups.setdefault(cs, []).append(e)
    classes = [ladder_order(members, min(cs)) for cs, members in groups.items()]
    classes.sort(key=min)
    return classes


# ---------------------------------------------------------------------------
# symmetries and canonical forms


def _rotate_edges(edges: Iterable[Edge], n: int, r: int) -> list[Edge]:
    out = []
    for a, b in edges:
        a2 = (a - 1 + r) % n + 1
        b2 = (b - 1 + r) % n + 1
        out.append((a2, b2) if a2 < b2 else (b2, a2))
    out.sort()
    return out


def rotate(G: CircleGraph, times: int = 1) -> CircleGraph:
    """Relabel every point ``i`` as ``i + 1`` (``n`` wraps to ``1``)."""
    return CircleGraph(G.n, tuple(_rotate_edges(G.edges, G.n, times % G.n)))


def _mirror(i: int, n: int) -> int:
    return 1 if i == 1 else n + 2 - i


def reflect(G: CircleGraph) -> CircleGraph:
    """Reverse orientation while keeping point 1 fixed."""
    n = G.n
    return CircleGraph(n, tuple(make_edge(_mirror(a, n), _mirror(b, n)) for a, b in G.edges))


def min_period(G: CircleGraph) -> int:
    if not G.edges:
        raise DomainError("rotational period of an empty graph is undefined")
    base = list(G.edges)
    for r in range(1, G.n + 1):
        if G.n % r == 0 and _rotate_edges(base, G.n, r) == base:
            return r
    raise AssertionError("unreachable: rotation by n is the identity")


@dataclass(frozen=True)
class CanonicalForm:
    """Rotation class of a graph with isolated points removed."""

    k: int
    edges: tuple[Edge, ...]
    period: int

    def key(self) -> tuple[int, tuple[Edge, ...]]:
        return (self.k, self.edges)

    def graph(self) -> CircleGraph:
        return CircleGraph(self.k, self.edges)

    def to_text(self) -> str:
        body = ",".join(f"{a}-{b}" for a, b in self.edges)
        return f"n={self.k};edges={body}"


def canonical_edges(k: int, edges: Sequence[Edge]) -> tuple[tuple[Edge, ...], int]:
    """Lexicographically least rotation of ``edges`` on ``k`` points, and the period."""
    best = sorted(edges)
    start = best
    period = k
    for r in range(1, k):
        rotated = _rotate_edges(start, k, r)
        if rotated == start and period == k:
            period = r
        if rotated < best:
            best = rotated
    return tuple(best), period


def canonicalize(G: CircleGraph) -> CanonicalForm:
    if not G.edges:
        return CanonicalForm(0, (), 0)
    used = sorted(G.points())
    relabel = {p: i + 1 for i, p in enumerate(used)}
    k = len(used)
    edges = [make_edge(relabel[a], relabel[b]) for a, b in G.edges]
    best, period = canonical_edges(k, edges)
    return CanonicalForm(k, best, period)


# ---------------------------------------------------------------------------
# Prüfer sequences


def tree_from_prufer(seq: Sequence[int], n: int | None = None) -> CircleGraph:
    """The labeled tree on ``len(seq) + 2`` points with Prüfer sequence ``seq``."""
    if n is None:
        n = len(seq) + 2
    if len(seq) != n - 2:
        raise DomainError(f"a Prüfer sequence for n={n} has length {n - 2}")
    for x in seq:
        if not 1 <= x <= n:
            raise DomainError(f"Prüfer entry {x} outside [1, {n}]")
    degree = [1] * (n + 1)
    for x in seq:
        degree[x] += 1
    leaves = [i for i in range(1, n + 1) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append(make_edge(leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append(make_edge(u, v))
    return CircleGraph(n, tuple(edges))


def prufer_from_tree(T: CircleGraph) -> tuple[int, ...]:
    check_tree(T)
    adj = {v: set(ns) for v, ns in T.adjacency().items()}
    leaves = [v for v, ns in adj.items() if len(ns) == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(T.n - 2):
        leaf = heapq.heappop(leaves)
        (parent,) = adj.pop(leaf)
        adj[parent].discard(leaf)
        seq.append(parent)
        if len(adj[parent]) == 1:
            heapq.heappush(leaves, parent)
    return tuple(seq)


def all_trees(n: int) -> Iterator[CircleGraph]:
    """Every labeled tree on ``n`` points, once each, in Prüfer order."""
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        yield tree_from_prufer(seq, n)


# ---------------------------------------------------------------------------
# text format  ``n=<int>;edges=<a>-<b>,...``


def parse_graph(text: str) -> CircleGraph:
    """Parse the edge-list format; errors name the offending character offset."""
    p = _Scanner(text)
    p.expect_word("n")
    p.expect("=")
    n = p.integer()
    p.expect(";")
    p.expect_word("edges")
    p.expect("=")
    edges = []
    if not p.at_end():
        while True:
            a = p.integer()
            p.expect("-")
            b = p.integer()
            edges.append((a, b))
            if p.at_end():
                break
            p.expect(",")
    try:
        return CircleGraph.from_edges(n, edges)
    except DomainError as exc:
        raise DomainError(f"edge list {text!r}: {exc}") from None


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self._skip()
        return self.pos >= len(self.text)

    def fail(self, what: str) -> DomainError:
        found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
        return DomainError(f"parse error at position {self.pos}: expected {what}, found {found!r}")

    def expect(self, ch: str) -> None:
        self._skip()
        if not self.text.startswith(ch, self.pos):
            raise self.fail(repr(ch))
        self.pos += len(ch)

    def expect_word(self, word: str) -> None:
        self._skip()
        for ch in word:
            if self.pos >= len(self.text) or self.text[self.pos] != ch:
                raise self.fail(repr(word))
            self.pos += 1
            self._skip()

    def integer(self) -> int:
        self._skip()
        start = self.pos
        digits = []
        while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos].isspace()):
            if self.text[self.pos].isdigit():
                digits.append(self.text[self.pos])
            self.pos += 1
        if not digits:
            self.pos = start
            raise self.fail("an integer")
        return int("".join(digits))
