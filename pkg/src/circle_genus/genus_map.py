"""Genus of a chord graph drawn together with its circle.

The straight-chord drawing fixes a rotation system on the map whose vertices
are the ``n`` circle points and whose edges are the chords plus the ``n``
circle arcs. Faces are the cycles of ``rho . iota`` and the genus follows from
Euler's formula.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circle_core import CircleGraph, Edge
from .errors import DomainError, InvariantError


@dataclass(frozen=True)
class RotationSystem:
    """Darts ``2*i`` and ``2*i + 1`` are the two ends of ``edges[i]``.

    ``edges`` lists the circle arcs ``(i, i+1)`` first (index ``i - 1``), then
    the chords in sorted order. ``tail[d]`` is the vertex dart ``d`` leaves.
    """

    n: int
    edges: tuple[Edge, ...]
    tail: tuple[int, ...]
    rho: tuple[int, ...]
    iota: tuple[int, ...]

    @property
    def dart_count(self) -> int:
        return len(self.rho)

    def rotation_at(self, v: int) -> list[tuple[str, int]]:
        """Counterclockwise dart order at ``v`` as ``(kind, far endpoint)`` pairs."""
        start = 2 * (v - 1)
        order = []
        d = start
        while True:
            e = d // 2
            a, b = self.edges[e]
            far = b if self.tail[d] == a else a
            order.append(("arc" if e < self.n else "chord", far))
            d = self.rho[d]
            if d == start:
                return order


def build_rotation_system(G: CircleGraph) -> RotationSystem:
    n = G.n
    if n < 3:
        raise DomainError("the circle map needs at least 3 points")
    edges: list[Edge] = [(i, i % n + 1) for i in range(1, n + 1)]
    edges.extend(G.edges)
    tail = []
    for a, b in edges:
        tail.extend((a, b))
    darts_at: dict[int, list[tuple[int, int]]] = {v: [] for v in range(1, n + 1)}
    for i, (a, b) in enumerate(edges):
        # arcs are 2i -> toward i+1 (rank 0) and 2i+1 -> toward i (rank n) at the far end
        if i < n:
            darts_at[a].append((0, 2 * i))
            darts_at[b].append((n, 2 * i + 1))
        else:
            darts_at[a].append(((b - a) % n, 2 * i))
            darts_at[b].append(((a - b) % n, 2 * i + 1))
    rho = [0] * (2 * len(edges))
    for v, darts in darts_at.items():
        darts.sort()
        ring = [d for _, d in darts]
        for x, y in zip(ring, ring[1:] + ring[:1]):
            rho[x] = y
    iota = [d ^ 1 for d in range(2 * len(edges))]
    return RotationSystem(n, tuple(edges), tuple(tail), tuple(rho), tuple(iota))


def face_count(rs: RotationSystem) -> int:
    rho, iota = rs.rho, rs.iota
    seen = bytearray(len(rho))
    faces = 0
    for d in range(len(rho)):
        if not seen[d]:
            faces += 1
            while not seen[d]:
                seen[d] = 1
                d = rho[iota[d]]
    return faces


def genus(G: CircleGraph) -> int:
    rs = build_rotation_system(G)
    v = G.n
    e = len(G.edges) + G.n
    f = face_count(rs)
    chi_gap = 2 - v + e - f
    if chi_gap < 0 or chi_gap % 2:
        raise InvariantError(f"Euler characteristic gap {chi_gap} for {G}")
    return chi_gap // 2
