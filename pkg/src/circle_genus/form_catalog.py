"""Derive the pre-reduced and reduced genus-one forms by exhaustive search.

Pre-reduced forms are perfect matchings in which every chord is crossed, no
three chords are pairwise parallel and the reduction fixpoint is Form 1 or
Form 2. Reduced forms are the trees obtained from a pre-reduced form by adding
uncrossed chords between its existing points such that e-reduction gives the
form back.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator, Sequence

from .circle_core import (
    CanonicalForm,
    CircleGraph,
    Edge,
    canonicalize,
    crossing_table,
    is_forest_on,
    parallel_classes,
    reflect,
    _interleaved,
)
from .egraph_reduce import e_reduce
from .errors import CatalogError, DomainError, PreconditionError
from .reduction import match_final_form

SCHEMA = 1
CATALOG_VERSION = "1"
PREREDUCED_COUNT = 7
REDUCED_COUNTS = (1, 3, 1, 2, 6, 6, 0)
# (points, admissible single chords) fixes the label of every pre-reduced form
PREREDUCED_LABELS = {
    (4, 4): "T2^1",
    (6, 4): "T2^2",
    (8, 4): "T2^3",
    (6, 6): "T2^4",
    (8, 6): "T2^5",
    (10, 6): "T2^6",
    (12, 6): "T2^7",
}
SNAPSHOT = "catalog.json"


@dataclass(frozen=True)
class FormEntry:
    id: str
    points: int
    edges: tuple[Edge, ...]
    period: int
    source: str | None = None
    mirror: str | None = None
    slots: int | None = None

    def graph(self) -> CircleGraph:
        return CircleGraph(self.points, self.edges)

    def key(self) -> tuple[int, tuple[Edge, ...]]:
        return (self.points, self.edges)

    def to_json(self) -> dict:
        d = asdict(self)
        d["edges"] = [list(e) for e in self.edges]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "FormEntry":
        return cls(
            id=d["id"],
            points=d["points"],
            edges=tuple((a, b) for a, b in d["edges"]),
            period=d["period"],
            source=d.get("source"),
            mirror=d.get("mirror"),
            slots=d.get("slots"),
        )


def perfect_matchings(points: Sequence[int]) -> Iterator[list[Edge]]:
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for i, partner in enumerate(rest):
        for tail in perfect_matchings(rest[:i] + rest[i + 1:]):
            yield [(first, partner)] + tail


def _is_prereduced_candidate(G: CircleGraph) -> bool:
    table = crossing_table(G)
    if any(not cs for cs in table.values()):
        return False
    if any(len(c) > 2 for c in parallel_classes(G, table)):
        return False
    return match_final_form(G).kind in ("Form1", "Form2")


def admissible_chords(form: CircleGraph) -> list[Edge]:
    """Chords that can be added on their own as an uncrossed edge between e-graphs.

    Excludes chords crossing the form and chords joining two members of one
    parallel class (which would fuse them into a single e-graph).
    """
    table = crossing_table(form)
    owner = {}
    for i, cls in enumerate(parallel_classes(form, table)):
        for a, b in cls:
            owner.setdefault(a, set()).add(i)
            owner.setdefault(b, set()).add(i)
    existing = set(form.edges)
    out = []
    for c in itertools.combinations(range(1, form.n + 1), 2):
        if c in existing or any(_interleaved(c, e) for e in form.edges):
            continue
        a, b = c
        if owner.get(a, set()) & owner.get(b, set()):
            continue
        out.append(c)
    return out


def _uncrossed_candidates(form: CircleGraph) -> list[Edge]:
    existing = set(form.edges)
    return [
        c
        for c in itertools.combinations(range(1, form.n + 1), 2)
        if c not in existing and not any(_interleaved(c, e) for e in form.edges)
    ]


def generate_prereduced_forms() -> list[FormEntry]:
    classes: dict[tuple, CanonicalForm] = {}
    for m in range(2, 7):
        pts = list(range(1, 2 * m + 1))
        for matching in perfect_matchings(pts):
            G = CircleGraph(2 * m, tuple(matching))
            if _is_prereduced_candidate(G):
                cf = canonicalize(G)
                classes.setdefault(cf.key(), cf)
    if len(classes) != PREREDUCED_COUNT:
        raise CatalogError(f"expected {PREREDUCED_COUNT} pre-reduced classes, found {len(classes)}")
    entries = []
    for cf in classes.values():
        slots = len(admissible_chords(cf.graph()))
        label = PREREDUCED_LABELS.get((cf.k, slots))
        if label is None:
            raise CatalogError(f"pre-reduced class {cf.to_text()} has unexpected profile ({cf.k}, {slots})")
        entries.append(FormEntry(label, cf.k, cf.edges, cf.period, slots=slots))
    if len({e.id for e in entries}) != PREREDUCED_COUNT:
        raise CatalogError("two pre-reduced classes share a (points, slots) profile")
    entries.sort(key=lambda e: int(e.id.split("^")[1]))
    return _with_mirrors(entries)


def reduced_completions(form: CircleGraph) -> list[CanonicalForm]:
    """Canonical trees obtained from ``form`` by the completion search."""
    need = form.n - len(form.edges) - 1
    target = canonicalize(form).key()
    found: dict[tuple, CanonicalForm] = {}
    candidates = _uncrossed_candidates(form)
    for extra in itertools.combinations(candidates, need):
        if any(_interleaved(x, y) for x, y in itertools.combinations(extra, 2)):
            continue
        edges = form.edges + extra
        if not is_forest_on(range(1, form.n + 1), edges):
            continue
        tree = CircleGraph(form.n, edges)
        try:
            result = e_reduce(tree)
        except PreconditionError:
            continue
        if canonicalize(result.prereduced).key() != target:
            continue
        if canonicalize(result.reduced).key() != canonicalize(tree).key():
            raise CatalogError(f"{tree} is not its own reduced form")
        cf = canonicalize(tree)
        found.setdefault(cf.key(), cf)
    return sorted(found.values(), key=lambda c: c.edges)


def _mirror_key(points: int, edges: Sequence[Edge]) -> tuple:
    return canonicalize(reflect(CircleGraph(points, tuple(edges)))).key()


def _with_mirrors(entries: list[FormEntry]) -> list[FormEntry]:
    by_key = {e.key(): e.id for e in entries}
    out = []
    for e in entries:
        mk = _mirror_key(e.points, e.edges)
        if mk not in by_key:
            raise CatalogError(f"mirror image of {e.id} is outside the catalog")
        out.append(FormEntry(e.id, e.points, e.edges, e.period, e.source, by_key[mk], e.slots))
    return out


def _label_source(source: str, forms: list[CanonicalForm]) -> list[tuple[str, CanonicalForm]]:
    """Bracket indices follow canonical order, with the half-period forms pinned.

    Within T3^2 and T3^6 the half-period forms take the last indices: mirror
    pairs in the order (smaller, larger) around the self-mirror form, which
    in T3^6 is index 5.
    """
    sup = source.split("^")[1]
    half = [f for f in forms if f.period * 2 == f.k]
    full = [f for f in forms if f.period * 2 != f.k]
    ordered = list(full)
    if half:
        keys = {f.key() for f in half}
        selfmirror = [f for f in half if _mirror_key(f.k, f.edges) == f.key()]
        paired = [f for f in half if _mirror_key(f.k, f.edges) != f.key()]
        pairs = []
        for f in paired:
            mk = _mirror_key(f.k, f.edges)
            if mk not in keys:
                raise CatalogError(f"mirror of half-period form {f.to_text()} is missing from {source}")
            if f.key() < mk:
                partner = next(g for g in paired if g.key() == mk)
                pairs.append((f, partner))
        pairs.sort(key=lambda p: p[0].key())
        if len(selfmirror) > 1 or len(pairs) > 1:
            raise CatalogError(f"unexpected half-period structure under {source}")
        for small, large in pairs:
            ordered.append(small)
            ordered.extend(selfmirror)
            ordered.append(large)
        if not pairs:
            ordered.extend(selfmirror)
    return [(f"T3^{sup}[{i}]", f) for i, f in enumerate(ordered, start=1)]


def generate_reduced_catalog(prereduced: Sequence[FormEntry] | None = None) -> list[FormEntry]:
    if prereduced is None:
        prereduced = generate_prereduced_forms()
    entries = []
    counts = []
    for src in prereduced:
        forms = reduced_completions(src.graph())
        counts.append(len(forms))
        for label, cf in _label_source(src.id, forms):
            entries.append(FormEntry(label, cf.k, cf.edges, cf.period, source=src.id))
    if tuple(counts) != REDUCED_COUNTS:
        raise CatalogError(f"reduced forms per source {tuple(counts)} != {REDUCED_COUNTS}")
    return _with_mirrors(entries)


# ---------------------------------------------------------------------------
# snapshot + lookup


@dataclass(frozen=True)
class Catalog:
    prereduced: tuple[FormEntry, ...]
    reduced: tuple[FormEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {e.id: e for e in self.prereduced + self.reduced})
        object.__setattr__(self, "_by_key", {e.key(): e for e in self.reduced})

    def entry(self, form_id: str) -> FormEntry:
        try:
            return self._by_id[form_id]
        except KeyError:
            raise DomainError(f"unknown form id {form_id!r}") from None

    def lookup_reduced(self, cf: CanonicalForm) -> FormEntry | None:
        return self._by_key.get(cf.key())

    def half_period_forms(self) -> list[FormEntry]:
        return [e for e in self.reduced if 2 * e.period == e.points]

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "catalog_version": CATALOG_VERSION,
            "prereduced": [e.to_json() for e in self.prereduced],
            "reduced": [e.to_json() for e in self.reduced],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Catalog":
        if doc.get("schema") != SCHEMA or doc.get("catalog_version") != CATALOG_VERSION:
            raise CatalogError(
                f"snapshot schema/version {doc.get('schema')}/{doc.get('catalog_version')} "
                f"does not match {SCHEMA}/{CATALOG_VERSION}"
            )
        return cls(
            tuple(FormEntry.from_json(d) for d in doc["prereduced"]),
            tuple(FormEntry.from_json(d) for d in doc["reduced"]),
        )


def generate_catalog() -> Catalog:
    pre = generate_prereduced_forms()
    return Catalog(tuple(pre), tuple(generate_reduced_catalog(pre)))


def dump_catalog(catalog: Catalog) -> str:
    """Stable text form: header keys, then one compact entry per line."""
    doc = catalog.to_json()
    lines = ["{"]
    lines.append(f' "schema": {json.dumps(doc["schema"])},')
    lines.append(f' "catalog_version": {json.dumps(doc["catalog_version"])},')
    for section, last in (("prereduced", False), ("reduced", True)):
        lines.append(f' "{section}": [')
        rows = [json.dumps(e, separators=(", ", ": ")) for e in doc[section]]
        lines.extend("  " + r + ("," if i < len(rows) - 1 else "") for i, r in enumerate(rows))
        lines.append(" ]" + ("" if last else ","))
    lines.append("}")
    return "\n".join(lines) + "\n"


def snapshot_path() -> Path:
    return Path(str(resources.files("circle_genus") / "data" / SNAPSHOT))


def load_snapshot(path: Path | None = None) -> Catalog:
    path = snapshot_path() if path is None else path
    return Catalog.from_json(json.loads(path.read_text()))


@lru_cache(maxsize=1)
def get_catalog() -> Catalog:
    """Snapshot if present and current, otherwise a fresh derivation."""
    try:
        return load_snapshot()
    except (FileNotFoundError, CatalogError):
        return generate_catalog()


def form_metadata(form_id: str) -> FormEntry:
    return get_catalog().entry(form_id)


def classify_tree(T: CircleGraph) -> str:
    """Catalog id of the reduced form of a genus-one tree."""
    result = e_reduce(T)
    cf = canonicalize(result.reduced)
    entry = get_catalog().lookup_reduced(cf)
    if entry is None:
        raise CatalogError(f"reduced form {cf.to_text()} of {T} is not in the catalog")
    return entry.id
