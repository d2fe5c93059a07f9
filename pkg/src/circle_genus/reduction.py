"""Chord reduction: strip uncrossed edges and thin parallel bundles to a fixpoint.

Operation 1 deletes an edge crossed by nothing; operation 2 deletes all but
one edge of a set of pairwise parallel edges. The fixpoint (final offspring)
does not depend on the schedule, and a tree has genus one exactly when that
fixpoint is one of two small crossing patterns.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Literal

from .circle_core import CanonicalForm, CircleGraph, Edge, canonicalize, crossing_table, ladder_order

DELETE_UNCROSSED = "delete-uncrossed"
COLLAPSE_PARALLEL = "collapse-parallel"

FORM1 = CanonicalForm(4, ((1, 3), (2, 4)), 1)
FORM2 = CanonicalForm(6, ((1, 4), (2, 5), (3, 6)), 1)

FormKind = Literal["Empty", "Form1", "Form2", "Other"]


@dataclass(frozen=True)
class ReductionStep:
    op: str
    removed: tuple[Edge, ...]

    def to_json(self) -> dict:
        return {"op": self.op, "removed": [list(e) for e in self.removed]}


@dataclass(frozen=True)
class ReductionTrace:
    n: int
    start: tuple[Edge, ...]
    steps: tuple[ReductionStep, ...] = field(default=())

    def offspring(self) -> list[CircleGraph]:
        """Every intermediate graph, starting graph first."""
        current = CircleGraph(self.n, self.start)
        out = [current]
        for step in self.steps:
            current = current.without(step.removed)
            out.append(current)
        return out

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]


@dataclass(frozen=True)
class FinalFormVerdict:
    kind: FormKind
    canonical: CanonicalForm


def uncrossed_edges(G: CircleGraph) -> list[Edge]:
    table = crossing_table(G)
    return [e for e in G.edges if not table[e]]


def _representative(bundle: list[Edge]) -> Edge:
    # both ends of a ladder are outermost
    return min(bundle[0], bundle[-1])


def final_offspring(
    G: CircleGraph, rng: random.Random | None = None
) -> tuple[CircleGraph, ReductionTrace]:
    """Apply operations 1) and 2) until neither applies.

    With ``rng`` unset the schedule is: delete every uncrossed edge, then
    collapse every parallel class to its outermost edge, repeat. With ``rng``
    each step picks a random applicable operation, a random sub-bundle and a
    random survivor instead.
    """
    table = crossing_table(G)
    alive = set(G.edges)
    steps: list[ReductionStep] = []

    def live_cross(e: Edge) -> frozenset[Edge]:
        return table[e] & alive

    while True:
        ordered = sorted(alive)
        uncrossed = [e for e in ordered if not live_cross(e)]
        groups: dict[frozenset[Edge], list[Edge]] = {}
        for e in ordered:
            cs = live_cross(e)
            if cs:
                groups.setdefault(cs, []).append(e)
        bundles = [ladder_order(m, min(cs)) for cs, m in groups.items() if len(m) > 1]
        bundles.sort(key=min)
        if not uncrossed and not bundles:
            break
        if rng is None:
            for e in uncrossed:
                alive.discard(e)
                steps.append(ReductionStep(DELETE_UNCROSSED, (e,)))
            if uncrossed:
                continue
            for bundle in bundles:
                keep = _representative(bundle)
                removed = tuple(e for e in bundle if e != keep)
                alive.difference_update(removed)
                steps.append(ReductionStep(COLLAPSE_PARALLEL, removed))
        else:
            choices = [(DELETE_UNCROSSED, (e,)) for e in uncrossed]
            choices += [(COLLAPSE_PARALLEL, tuple(b)) for b in bundles]
            op, pool = rng.choice(choices)
            if op == DELETE_UNCROSSED:
                removed = pool
            else:
                size = rng.randint(2, len(pool))
                subset = rng.sample(list(pool), size)
                keep = rng.choice(subset)
                removed = tuple(sorted(e for e in subset if e != keep))
            alive.difference_update(removed)
            steps.append(ReductionStep(op, removed))
    result = CircleGraph(G.n, tuple(sorted(alive)))
    return result, ReductionTrace(G.n, G.edges, tuple(steps))


def classify_final(canonical: CanonicalForm) -> FormKind:
    if not canonical.edges:
        return "Empty"
    if canonical.key() == FORM1.key():
        return "Form1"
    if canonical.key() == FORM2.key():
        return "Form2"
    return "Other"


def match_final_form(G: CircleGraph) -> FinalFormVerdict:
    final, _ = final_offspring(G)
    canonical = canonicalize(final)
    return FinalFormVerdict(classify_final(canonical), canonical)


def is_genus_one(G: CircleGraph) -> bool:
    return match_final_form(G).kind in ("Form1", "Form2")
