"""Exhaustive counts of genus-one labeled trees on ``n`` points.

The labeled count ``f(n)`` comes from enumerating every Prüfer sequence in a
compiled kernel. Prüfer space is cut into shards by a fixed-length prefix;
shards run on a thread pool and their counters are summed, so totals do not
depend on the worker count. Rotation classes are counted once each, at their
least labeling, which gives the orbit histogram and the half-period classes
without a second pass.
"""

from __future__ import annotations

import csv
import itertools
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import census_kernel as kernel
from .form_catalog import classify_tree, get_catalog
from .circle_core import CircleGraph, all_trees, canonicalize, check_tree, min_period, reflect
from .egraph_reduce import structure_violations
from .errors import DomainError, PreconditionError
from .genus_map import genus
from .lr_series import classify_n
from .reduction import is_genus_one

CEILING = kernel.MAX_POINTS
SLOW_FROM = 9
BY_FORM_MAX = 9
PYTHON_ENGINE_MAX = 8
CACHE_ENV = "CIRCLE_GENUS_CACHE"
CACHE_FILE = "census.csv"
CACHE_HEADER = ["n", "f_n", "f_mod_n", "p_n", "kernel_version"]


@dataclass
class CensusReport:
    n: int
    f_n: int
    f_mod_n: int
    orbit_periods: dict[int, int] | None
    by_form: dict[str, int] | None = None
    p_n: int | None = None
    trees: int | None = None
    genus_mismatches: int | None = None
    half_period_forms: dict[str, int] | None = None
    from_cache: bool = False
    classes: list[tuple[CircleGraph, int]] | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        doc = {
            "n": self.n,
            "f_n": self.f_n,
            "f_mod_n": self.f_mod_n,
            "p_n": self.p_n,
            "orbit_periods": None
            if self.orbit_periods is None
            else {str(k): v for k, v in sorted(self.orbit_periods.items())},
        }
        if self.by_form is not None:
            doc["by_form"] = dict(self.by_form)
        if self.genus_mismatches is not None:
            doc["genus_mismatches"] = self.genus_mismatches
        if self.from_cache:
            doc["from_cache"] = True
        return doc


def _self_mirror_half_form() -> str:
    forms = [e for e in get_catalog().half_period_forms() if e.mirror == e.id]
    if len(forms) != 1:
        raise DomainError(f"expected one self-mirror half-period form, found {len(forms)}")
    return forms[0].id


def check_bounds(n: int, *, slow: bool = False, by_form: bool = False) -> None:
    if n < 3:
        raise DomainError(f"census needs n >= 3, got {n}")
    if n > CEILING:
        raise DomainError(
            f"n = {n} is above the census ceiling {CEILING}: the int64 pair masks "
            f"hold at most {CEILING} points and n^(n-2) trees would take days"
        )
    if n >= SLOW_FROM and not slow:
        raise DomainError(f"n = {n} enumerates {n ** (n - 2):,} trees; pass slow=True (--slow)")
    if by_form and n > BY_FORM_MAX:
        raise DomainError(f"per-form counts classify every class in Python; limited to n <= {BY_FORM_MAX}")


def shard_prefixes(n: int) -> list[tuple[int, ...]]:
    """Fixed shard plan: prefix length 1 below ``SLOW_FROM`` points, 2 from there on."""
    length = min(n - 2, 1 if n < SLOW_FROM else 2)
    return list(itertools.product(range(n), repeat=length))


@dataclass
class ShardTotals:
    stats: np.ndarray
    periods: np.ndarray
    reps: list[tuple[int, int]] = field(default_factory=list)


def scan(n: int, *, jobs: int = 1, check_genus: bool = False, collect: int = kernel.COLLECT_NONE) -> ShardTotals:
    """Run the kernel over every shard and add up the results."""
    tables = kernel.PairTables(n)

    def run(prefix: tuple[int, ...]):
        return kernel.scan_shard(
            n,
            np.array(prefix, dtype=np.int64),
            tables.cross,
            tables.index,
            tables.rot,
            tables.pa,
            tables.pb,
            check_genus,
            collect,
        )

    totals = ShardTotals(np.zeros(4, dtype=np.int64), np.zeros(n + 1, dtype=np.int64))
    prefixes = shard_prefixes(n)
    if jobs < 1:
        raise DomainError("jobs must be at least 1")
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        # map keeps shard order, so collected representatives come out in a fixed order
        for stats, periods, masks, rep_periods in pool.map(run, prefixes):
            totals.stats += stats
            totals.periods += periods
            totals.reps.extend(zip(masks.tolist(), rep_periods.tolist()))
    return totals


def _graph_of(tables: kernel.PairTables, mask: int) -> CircleGraph:
    return CircleGraph(tables.n, tuple(tables.mask_to_edges(mask)))


# ---------------------------------------------------------------------------
# cache


def cache_dir_for(cache_dir: str | os.PathLike | None) -> Path | None:
    if cache_dir is not None:
        return Path(cache_dir)
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def read_cache(directory: Path) -> dict[int, dict[str, str]]:
    path = directory / CACHE_FILE
    if not path.exists():
        return {}
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CACHE_HEADER:
            return {}
        return {
            int(row["n"]): row
            for row in reader
            if row["kernel_version"] == kernel.KERNEL_VERSION
        }


def write_cache(directory: Path, report: CensusReport) -> None:
    rows = read_cache(directory)
    rows[report.n] = {
        "n": str(report.n),
        "f_n": str(report.f_n),
        "f_mod_n": str(report.f_mod_n),
        "p_n": "" if report.p_n is None else str(report.p_n),
        "kernel_version": kernel.KERNEL_VERSION,
    }
    directory.mkdir(parents=True, exist_ok=True)
    tmp = directory / (CACHE_FILE + ".tmp")
    with tmp.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CACHE_HEADER, lineterminator="\n")
        writer.writeheader()
        for k in sorted(rows):
            writer.writerow(rows[k])
    tmp.replace(directory / CACHE_FILE)


def _from_cache(row: dict[str, str]) -> CensusReport:
    n = int(row["n"])
    return CensusReport(
        n=n,
        f_n=int(row["f_n"]),
        f_mod_n=int(row["f_mod_n"]),
        orbit_periods=None,
        p_n=int(row["p_n"]) if row["p_n"] else None,
        from_cache=True,
    )


# ---------------------------------------------------------------------------
# public operations


def count_f(
    n: int,
    *,
    slow: bool = False,
    by_form: bool = False,
    jobs: int = 1,
    cache_dir: str | os.PathLike | None = None,
    check_genus: bool = False,
    use_cache: bool = True,
) -> CensusReport:
    """Census of genus-one trees on ``n`` points.

    A cache directory (argument or ``CIRCLE_GENUS_CACHE``) is consulted for
    plain counts; a cached report carries ``f_n`` and ``p_n`` but no orbit
    histogram. ``check_genus`` also traces faces of every tree and counts
    disagreements with the reduction test.
    """
    check_bounds(n, slow=slow, by_form=by_form)
    directory = cache_dir_for(cache_dir) if use_cache else None
    if directory is not None and not by_form and not check_genus:
        row = read_cache(directory).get(n)
        if row is not None:
            return _from_cache(row)

    collect = kernel.COLLECT_ALL if by_form else kernel.COLLECT_PARTIAL
    totals = scan(n, jobs=jobs, check_genus=check_genus, collect=collect)
    tables = kernel.PairTables(n)
    f_n = int(totals.stats[kernel.GENUS_ONE])
    periods = {p: int(c) for p, c in enumerate(totals.periods) if c}

    half_forms: Counter[str] = Counter()
    forms: Counter[str] | None = Counter() if by_form else None
    for mask, period in totals.reps:
        if forms is None and period == n:
            continue
        form = classify_tree(_graph_of(tables, mask))
        if forms is not None:
            forms[form] += period
        if period < n:
            half_forms[form] += 1

    p_n = None
    if n % 4 == 2:
        target = _self_mirror_half_form()
        p_n = sum(1 for mask, period in totals.reps if 2 * period == n
                  and classify_tree(_graph_of(tables, mask)) == target)

    report = CensusReport(
        n=n,
        f_n=f_n,
        f_mod_n=f_n % n,
        orbit_periods=periods,
        by_form=None if forms is None else dict(sorted(forms.items())),
        p_n=p_n,
        trees=int(totals.stats[kernel.TREES]),
        genus_mismatches=int(totals.stats[kernel.MISMATCH]) if check_genus else None,
        half_period_forms=dict(sorted(half_forms.items())),
        classes=[(_graph_of(tables, m), p) for m, p in totals.reps] if by_form else None,
    )
    if directory is not None:
        write_cache(directory, report)
    return report


def count_f_python(n: int) -> int:
    """Reference count by the pure-Python reduction, for cross-checking the kernel."""
    if not 3 <= n <= PYTHON_ENGINE_MAX:
        raise DomainError(f"the Python engine is limited to 3 <= n <= {PYTHON_ENGINE_MAX}")
    return sum(1 for T in all_trees(n) if is_genus_one(T))


def l_count(C: CircleGraph) -> int:
    """Number of distinct labelings of the rotation class of genus-one ``C``."""
    check_tree(C)
    if not is_genus_one(C):
        raise PreconditionError(f"{C} is not genus one")
    return min_period(C)


def count_P_n(
    n: int,
    *,
    slow: bool = False,
    jobs: int = 1,
    cache_dir: str | os.PathLike | None = None,
) -> int:
    """Half-period classes on ``n`` points that reduce to the self-mirror half-period form."""
    if n % 4 != 2:
        raise DomainError(f"P_n is defined for n = 2 (mod 4), got {n}")
    report = count_f(n, slow=slow, jobs=jobs, cache_dir=cache_dir)
    assert report.p_n is not None
    return report.p_n


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Check:
    n: int
    claim: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"n": self.n, "claim": self.claim, "passed": self.passed, "detail": self.detail}


@dataclass
class VerifyReport:
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}


STRUCTURE_MAX = 8


def _structure_checks(n: int, classes: list[tuple[CircleGraph, int]]) -> list[Check]:
    catalog = get_catalog()
    half_ids = {e.id for e in catalog.half_period_forms()}
    bad_structure, bad_genus, bad_half, bad_mirror = [], [], [], []
    form_of: dict[tuple, str] = {}
    for T, period in classes:
        problems = structure_violations(T)
        if problems:
            bad_structure.append(f"{T}: {problems[0]}")
            continue
        if genus(T) != 1:
            bad_genus.append(f"{T}")
        form = classify_tree(T)
        form_of[canonicalize(T).key()] = form
        if period < n and form not in half_ids:
            bad_half.append(f"{T} has period {period} but reduces to {form}")
    for T, period in classes:
        form = form_of.get(canonicalize(T).key())
        M = reflect(T)
        mirror_form = form_of.get(canonicalize(M).key())
        if form is None or mirror_form is None:
            continue
        expected = catalog.entry(form).mirror
        if mirror_form != expected or min_period(M) != period:
            bad_mirror.append(f"{T}: reflection reduces to {mirror_form}, expected {expected}")
    return [
        Check(n, "e-graph structure and e-reduction properties", not bad_structure, "; ".join(bad_structure[:3])),
        Check(n, "class representatives have genus one", not bad_genus, "; ".join(bad_genus[:3])),
        Check(n, "half periods only on half-period forms", not bad_half, "; ".join(bad_half[:3])),
        Check(n, "reflection follows catalog mirror pairs", not bad_mirror, "; ".join(bad_mirror[:3])),
    ]


def verify_suite(
    n_max: int,
    *,
    slow: bool = False,
    jobs: int = 1,
    cache_dir: str | os.PathLike | None = None,
) -> VerifyReport:
    """Run every exhaustive check for ``4 <= n <= n_max``.

    Up to ``STRUCTURE_MAX`` points every rotation class is also e-reduced,
    classified and checked structurally. A cached census contributes only
    its counts.
    """
    check_bounds(n_max, slow=slow)
    checks: list[Check] = []
    for n in range(4, n_max + 1):
        structural = n <= STRUCTURE_MAX
        directory = cache_dir_for(cache_dir)
        cached = read_cache(directory).get(n) if directory is not None and not structural else None
        if cached is not None:
            report = _from_cache(cached)
        else:
            report = count_f(n, slow=slow, jobs=jobs, check_genus=True, use_cache=False,
                             by_form=structural)
            if directory is not None:
                write_cache(directory, report)
        if report.genus_mismatches is not None:
            checks.append(Check(n, "reduction test agrees with face-traced genus",
                                report.genus_mismatches == 0,
                                f"{report.genus_mismatches} disagreements over {report.trees} trees"))
        if report.orbit_periods is not None:
            allowed = {n, n // 2} if n % 2 == 0 else {n}
            odd = sorted(set(report.orbit_periods) - allowed)
            checks.append(Check(n, "every class has period n or n/2", not odd, f"periods {odd}" if odd else ""))
            total = sum(p * c for p, c in report.orbit_periods.items())
            checks.append(Check(n, "sum of class periods equals f(n)", total == report.f_n,
                                f"{total} vs {report.f_n}"))
        verdict = classify_n(n).verdict
        expected = 0 if verdict == "DivisibleByN" else n // 2
        checks.append(Check(n, f"f(n) mod n matches {verdict}", report.f_mod_n == expected,
                            f"f({n}) = {report.f_n}, residue {report.f_mod_n}"))
        if report.p_n is not None:
            checks.append(Check(n, "f(n) = |P_n| * n/2 (mod n)",
                                report.f_mod_n == (report.p_n * (n // 2)) % n,
                                f"|P_n| = {report.p_n}"))
        if n <= 6:
            py = count_f_python(n)
            checks.append(Check(n, "kernel count equals Python reduction count", py == report.f_n,
                                f"{py} vs {report.f_n}"))
        if structural:
            checks.extend(_structure_checks(n, report.classes or []))
            if report.by_form is not None:
                checks.append(Check(n, "per-form counts add up to f(n)", sum(report.by_form.values()) == report.f_n))
    return VerifyReport(checks)
