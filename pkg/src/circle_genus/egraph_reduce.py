"""E-graphs and the three-step e-reduction of a genus-one circle tree.

An e-graph is a bundle of parallel edges linked through uncrossed or parallel
edges, together with the uncrossed edges lying on its two arcs. Collapsing
each e-graph to one edge (pre-reduced form ``T2``) and replacing each chain of
uncrossed edges between e-graphs by a single bridge (reduced form ``T3``)
preserves genus.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .circle_core import (
    CircleGraph,
    Edge,
    check_tree,
    crossing_table,
    ladder_order,
    make_edge,
)
from .errors import DomainError, InvariantError, PreconditionError
from .reduction import is_genus_one

Arc = tuple[int, int]
Chooser = Callable[[Sequence[Edge]], Edge]


def arc_points(arc: Arc, n: int) -> list[int]:
    """Points met going counterclockwise from ``arc[0]`` to ``arc[1]`` inclusive."""
    start, end = arc
    span = (end - start) % n
    return [(start - 1 + i) % n + 1 for i in range(span + 1)]


@dataclass(frozen=True)
class EGraph:
    n: int
    parallel: tuple[Edge, ...]
    uncrossed: tuple[Edge, ...]
    arcs: tuple[Arc, Arc]
    outermost: tuple[Edge, Edge]

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(self.parallel) | frozenset(self.uncrossed)

    def points(self) -> set[int]:
        return set(arc_points(self.arcs[0], self.n)) | set(arc_points(self.arcs[1], self.n))

    def vertices(self) -> set[int]:
        return {p for e in self.edges for p in e}

    def arc_index(self, p: int) -> int:
        for i, arc in enumerate(self.arcs):
            if p in arc_points(arc, self.n):
                return i
        raise DomainError(f"point {p} is not on an arc of this e-graph")

    def endpoint_on_arc(self, e: Edge, i: int) -> int:
        pts = arc_points(self.arcs[i], self.n)
        a, b = e
        return a if a in pts else b

    def to_json(self) -> dict:
        return {
            "parallel": [list(e) for e in self.parallel],
            "uncrossed": [list(e) for e in self.uncrossed],
            "arcs": [list(a) for a in self.arcs],
            "outermost": [list(e) for e in self.outermost],
        }


def _bundle_arcs(bundle: Sequence[Edge], witness: Edge) -> tuple[Arc, Arc]:
    """Minimal arcs holding the two endpoint sides of a ladder-ordered bundle."""
    lo, hi = witness

    def split(e: Edge) -> tuple[int, int]:
        a, b = e
        return (a, b) if lo < a < hi else (b, a)

    first_in, first_out = split(bundle[0])
    last_in, last_out = split(bundle[-1])
    # inner endpoints increase along the ladder, outer ones decrease
    return (first_in, last_in), (last_out, first_out)


def _egraph(
    G: CircleGraph,
    e: Edge,
    table: dict[Edge, frozenset[Edge]],
) -> EGraph:
    cs = table[e]
    bundle = [f for f in G.edges if table[f] == cs]
    usable = {f for f in G.edges if not table[f]} | set(bundle)
    adj: dict[int, list[int]] = {}
    for a, b in usable:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = {e[0], e[1]}
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    witness = min(cs)
    reached = ladder_order([f for f in bundle if f[0] in seen], witness)
    arcs = _bundle_arcs(reached, witness)
    on_arcs = set(arc_points(arcs[0], G.n)) | set(arc_points(arcs[1], G.n))
    members = [f for f in G.edges if f[0] in on_arcs and f[1] in on_arcs and f in usable]
    parallel = ladder_order([f for f in members if table[f]], witness)
    uncrossed = tuple(sorted(f for f in members if not table[f]))
    return EGraph(G.n, tuple(parallel), uncrossed, arcs, (parallel[0], parallel[-1]))


def egraph_of(T: CircleGraph, e: Edge) -> EGraph:
    e = make_edge(*e)
    if e not in T:
        raise DomainError(f"edge {e} is not in the graph")
    table = crossing_table(T)
    if not table[e]:
        raise DomainError(f"edge {e} is uncrossed; only crossed edges span e-graphs")
    return _egraph(T, e, table)


def _decomposition(T: CircleGraph, table: dict[Edge, frozenset[Edge]]) -> list[EGraph]:
    found: dict[frozenset[Edge], EGraph] = {}
    covered: set[Edge] = set()
    for e in T.edges:
        if table[e] and e not in covered:
            eg = _egraph(T, e, table)
            found.setdefault(eg.edges, eg)
            covered.update(eg.parallel)
    return sorted(found.values(), key=lambda g: min(g.parallel))


def egraph_decomposition(T: CircleGraph) -> list[EGraph]:
    """One e-graph per crossed edge, duplicates merged, ordered by smallest parallel edge."""
    return _decomposition(T, crossing_table(T))


@dataclass(frozen=True)
class ConnectingPath:
    edges: tuple[Edge, ...]
    points: tuple[int, ...]
    source: int
    target: int


def _connecting_paths(
    T: CircleGraph,
    egraphs: Sequence[EGraph],
    table: dict[Edge, frozenset[Edge]],
) -> list[ConnectingPath]:
    owner: dict[int, int] = {}
    for i, eg in enumerate(egraphs):
        for p in eg.vertices():
            if p in owner and owner[p] != i:
                raise InvariantError(f"e-graphs {owner[p]} and {i} share point {p}")
            owner[p] = i
    claimed = set().union(*(eg.edges for eg in egraphs)) if egraphs else set()
    free: dict[int, list[int]] = {}
    for a, b in T.edges:
        if not table[(a, b)] and (a, b) not in claimed:
            free.setdefault(a, []).append(b)
            free.setdefault(b, []).append(a)
    paths = {}
    for start in sorted(owner):
        # depth-first walk that stops at the first e-graph point reached
        stack = [(start, (start,))]
        while stack:
            v, trail = stack.pop()
            for w in free.get(v, ()):
                if len(trail) > 1 and w == trail[-2]:
                    continue
                if w in trail:
                    continue
                walk = trail + (w,)
                if w in owner:
                    if owner[w] != owner[start]:
                        key = min(walk, walk[::-1])
                        paths.setdefault(key, walk)
                else:
                    stack.append((w, walk))
    out = []
    for key in sorted(paths):
        pts = paths[key]
        pts = pts if owner[pts[0]] <= owner[pts[-1]] else pts[::-1]
        edges = tuple(make_edge(a, b) for a, b in zip(pts, pts[1:]))
        out.append(ConnectingPath(edges, pts, owner[pts[0]], owner[pts[-1]]))
    return out


def connecting_paths(T: CircleGraph, egraphs: Sequence[EGraph] | None = None) -> list[ConnectingPath]:
    """Maximal uncrossed paths whose only e-graph points are their two ends."""
    table = crossing_table(T)
    if egraphs is None:
        egraphs = _decomposition(T, table)
    return _connecting_paths(T, egraphs, table)


@dataclass(frozen=True)
class EReductionResult:
    prereduced: CircleGraph
    reduced: CircleGraph
    egraphs: tuple[EGraph, ...]
    representatives: tuple[Edge, ...]
    added_edges: tuple[Edge, ...]
    paths: tuple[ConnectingPath, ...]

    def representative_of(self, index: int) -> Edge:
        return self.representatives[index]


def outermost_representative(parallel: Sequence[Edge]) -> Edge:
    return min(parallel[0], parallel[-1])


def e_reduce(
    T: CircleGraph,
    choose: Chooser = outermost_representative,
    *,
    check: bool = True,
) -> EReductionResult:
    """Run the three steps of e-reduction on a genus-one tree.

    ``choose`` picks which parallel edge of each e-graph survives the first
    step. ``check=False`` skips the genus-one precondition (callers that have
    already established it).
    """
    check_tree(T)
    if check and not is_genus_one(T):
        raise PreconditionError(f"e-reduction is defined for genus-one trees only: {T}")
    table = crossing_table(T)
    egraphs = _decomposition(T, table)
    reps = []
    dropped = set()
    for eg in egraphs:
        rep = choose(eg.parallel)
        if rep not in eg.parallel:
            raise DomainError(f"representative {rep} is not a parallel edge of its e-graph")
        reps.append(rep)
        dropped.update(f for f in eg.parallel if f != rep)
    t1 = T.without(dropped)
    t1_table = crossing_table(t1)
    t2 = CircleGraph(T.n, tuple(e for e in t1.edges if t1_table[e]))

    paths = _connecting_paths(T, egraphs, table)
    added = []
    for path in paths:
        src, dst = egraphs[path.source], egraphs[path.target]
        a = src.endpoint_on_arc(reps[path.source], src.arc_index(path.points[0]))
        b = dst.endpoint_on_arc(reps[path.target], dst.arc_index(path.points[-1]))
        added.append(make_edge(a, b))
    t3 = t2.with_edges(added)
    return EReductionResult(t2, t3, tuple(egraphs), tuple(reps), tuple(sorted(added)), tuple(paths))


def _gap_points(eg: EGraph) -> set[int]:
    return set(range(1, eg.n + 1)) - eg.points()


def _open_arc(arc: Arc, n: int) -> set[int]:
    return set(arc_points(arc, n)[1:-1])


def structure_violations(T: CircleGraph) -> list[str]:
    """Every e-graph and e-reduction property that must hold on a genus-one tree.

    Returns human-readable descriptions of the failures; empty means clean.
    """
    from .circle_core import canonicalize
    from .genus_map import genus
    from .reduction import final_offspring

    bad: list[str] = []
    table = crossing_table(T)
    egraphs = _decomposition(T, table)
    for i, eg in enumerate(egraphs):
        tag = f"e-graph {i} {list(eg.parallel)}"
        for f in eg.parallel:
            if egraph_of(T, f).edges != eg.edges:
                bad.append(f"{tag}: edge {f} spans a different e-graph")
        lo, hi = (set(arc_points(a, T.n)) for a in eg.arcs)
        for a, b in eg.parallel:
            if not ((a in lo and b in hi) or (a in hi and b in lo)):
                bad.append(f"{tag}: parallel edge {(a, b)} is not split by the arcs")
        pts = eg.points()
        for f in T.edges:
            if f[0] in pts and f[1] in pts and f not in eg.edges:
                bad.append(f"{tag}: edge {f} lies on the arcs but is outside the e-graph")
        inner = _open_arc(eg.arcs[0], T.n) | _open_arc(eg.arcs[1], T.n)
        gaps = _gap_points(eg)
        for a, b in T.edges:
            if (a in inner and b in gaps) or (b in inner and a in gaps):
                bad.append(f"{tag}: edge {(a, b)} joins an open arc to a gap")
        verts = eg.vertices()
        if len(eg.edges) != len(verts) - 1 or not _connected(verts, eg.edges):
            bad.append(f"{tag}: not a tree")
        if any(table[f] & eg.edges for f in eg.edges):
            bad.append(f"{tag}: two of its edges cross")
    try:
        _connecting_paths(T, egraphs, table)
    except InvariantError as exc:
        bad.append(str(exc))
        return bad
    by_cross: dict[frozenset[Edge], int] = {}
    for eg in egraphs:
        key = table[eg.parallel[0]]
        by_cross[key] = by_cross.get(key, 0) + 1
    if any(c > 2 for c in by_cross.values()):
        bad.append("three or more pairwise-parallel e-graphs")

    result = e_reduce(T, check=False)
    t2, t3 = result.prereduced, result.reduced
    if not set(t2.edges) <= set(t3.edges):
        bad.append("T2 is not contained in T3")
    t3_table = crossing_table(t3)
    if tuple(e for e in t3.edges if t3_table[e]) != t2.edges:
        bad.append("T3 minus its uncrossed edges differs from T2")
    if any(t3_table[e] for e in result.added_edges):
        bad.append("an added edge is crossed in T3")
    n_p = len(t2.points())
    if len(result.added_edges) != n_p - len(t2.edges) - 1:
        bad.append(f"{len(result.added_edges)} added edges, expected {n_p - len(t2.edges) - 1}")
    if t3.points() != t2.points() or not _connected(t3.points(), t3.edges) or len(t3.edges) != n_p - 1:
        bad.append("T3 is not a tree on the points of T2")
    if genus(t3) != 1:
        bad.append(f"genus(T3) = {genus(t3)}")
    final_t, _ = final_offspring(T)
    final_t2, _ = final_offspring(t2)
    if canonicalize(final_t).key() != canonicalize(final_t2).key():
        bad.append("T2 and T reach different final offspring")
    return bad


def _connected(vertices: set[int], edges: Sequence[Edge] | frozenset[Edge]) -> bool:
    if not vertices:
        return True
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vertices
