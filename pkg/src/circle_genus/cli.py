"""Command-line entry point: ``circle-genus <subcommand> ...``.

Results go to stdout as compact JSON (or CSV where asked), diagnostics to
stderr. Exit status is 0 on success, 1 for bad input, 2 when an internal
check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .errors import DomainError, InvariantError

SCHEMA = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which means "invariant" here
        self.print_usage(sys.stderr)
        raise DomainError(f"{self.prog}: {message}")


def _emit(doc: dict[str, Any]) -> None:
    sys.stdout.write(json.dumps({"schema": SCHEMA, **doc}, separators=(",", ":")) + "\n")


def _emit_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


def _graph(args: argparse.Namespace):
    from .circle_core import parse_graph

    text = args.graph if args.graph is not None else args.edges
    if text is None:
        raise DomainError("give a graph as 'n=<n>;edges=a-b,...' or --n N --edges a-b,...")
    if "n=" not in text:
        if args.n is None:
            raise DomainError("--edges without 'n=' needs --n")
        text = f"n={args.n};edges={text}"
    return parse_graph(text)


def _edges(edges) -> list[list[int]]:
    return [list(e) for e in edges]


# ---------------------------------------------------------------------------
# subcommands


def cmd_genus(args: argparse.Namespace) -> None:
    from .genus_map import genus

    _emit({"genus": genus(_graph(args))})


def cmd_reduce(args: argparse.Namespace) -> None:
    from .circle_core import canonicalize
    from .reduction import classify_final, final_offspring

    G = _graph(args)
    final, trace = final_offspring(G)
    canonical = canonicalize(final)
    _emit({
        "steps": trace.to_json(),
        "final": final.to_text(),
        "canonical": canonical.to_text(),
        "form": classify_final(canonical),
    })


def cmd_ereduce(args: argparse.Namespace) -> None:
    from .form_catalog import get_catalog
    from .circle_core import canonicalize, check_tree
    from .egraph_reduce import e_reduce

    T = check_tree(_graph(args))
    result = e_reduce(T)
    canonical = canonicalize(result.reduced)
    entry = get_catalog().lookup_reduced(canonical)
    _emit({
        "egraphs": [eg.to_json() for eg in result.egraphs],
        "representatives": _edges(result.representatives),
        "prereduced": result.prereduced.to_text(),
        "reduced": result.reduced.to_text(),
        "added": _edges(result.added_edges),
        "canonical": canonical.to_text(),
        "form": None if entry is None else entry.id,
    })


def cmd_classify_tree(args: argparse.Namespace) -> None:
    from .form_catalog import classify_tree, form_metadata

    form = classify_tree(_graph(args))
    _emit({"form": form, "entry": form_metadata(form).to_json()})


def cmd_catalog(args: argparse.Namespace) -> None:
    from .form_catalog import dump_catalog, generate_catalog, get_catalog, load_snapshot
    from .errors import CatalogError

    if args.check:
        fresh = generate_catalog()
        if load_snapshot().to_json() != fresh.to_json():
            raise CatalogError("packaged snapshot differs from a fresh derivation")
        _emit({"snapshot": "current"})
        return
    catalog = generate_catalog() if args.regenerate else get_catalog()
    if args.write:
        Path(args.write).write_text(dump_catalog(catalog))
        print(f"wrote {args.write}", file=sys.stderr)
        return
    sys.stdout.write(json.dumps(catalog.to_json(), separators=(",", ":")) + "\n")


def cmd_census(args: argparse.Namespace) -> None:
    from .census import count_f

    report = count_f(args.n, slow=args.slow, by_form=args.by_form, jobs=args.jobs, cache_dir=args.cache_dir)
    if args.csv:
        _emit_csv(["n", "f_n", "f_mod_n", "p_n"],
                  [[report.n, report.f_n, report.f_mod_n, "" if report.p_n is None else report.p_n]])
    else:
        _emit(report.to_json())


def cmd_series(args: argparse.Namespace) -> None:
    from .lr_series import parity_l, series_tables

    if args.max < 0:
        raise DomainError("--max must be nonnegative")
    t = series_tables(args.max)
    header = ["k", "a", "b", "c", "l"]
    if args.parity:
        header += ["a_mod2", "b_mod2", "c_mod2", "l_mod2", "l_mod2_fast"]
    rows = []
    for k in range(args.max + 1):
        row: list[Any] = [k, t.a[k], t.b[k], t.c[k], t.l[k]]
        if args.parity:
            row += [t.a[k] & 1, t.b[k] & 1, t.c[k] & 1, t.l[k] & 1, parity_l(k)]
        rows.append(row)
    if args.json:
        _emit({"rows": [dict(zip(header, r)) for r in rows]})
    else:
        _emit_csv(header, rows)


def cmd_classify(args: argparse.Namespace) -> None:
    from .lr_series import classify_n

    if args.n is None:
        raise DomainError("classify needs --n")
    _emit(classify_n(args.n).to_json())


def cmd_verify(args: argparse.Namespace) -> None:
    from .census import verify_suite

    report = verify_suite(args.max, slow=args.slow, jobs=args.jobs, cache_dir=args.cache_dir)
    _emit(report.to_json())
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} n={check.n} {check.claim} {check.detail}".rstrip(), file=sys.stderr)
    if not report.passed:
        raise InvariantError("verification failed")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="circle-genus", description="Genus-one circle trees: genus, reductions, census, series.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_command(name: str, func, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("graph", nargs="?", help="graph as 'n=<n>;edges=a-b,...'")
        p.add_argument("--edges", help="edge list, either full 'n=...;edges=...' or 'a-b,...' with --n")
        p.add_argument("--n", type=int)
        p.set_defaults(func=func)
        return p

    graph_command("genus", cmd_genus, "genus of a graph drawn with its circle")
    graph_command("reduce", cmd_reduce, "chord reduction trace and final offspring")
    graph_command("ereduce", cmd_ereduce, "e-graphs and the pre-reduced / reduced forms of a genus-one tree")
    graph_command("classify-tree", cmd_classify_tree, "catalog id of a genus-one tree's reduced form")

    p = sub.add_parser("catalog", help="the pre-reduced and reduced form catalog")
    p.add_argument("--regenerate", action="store_true", help="derive from scratch instead of reading the snapshot")
    p.add_argument("--check", action="store_true", help="fail unless the snapshot equals a fresh derivation")
    p.add_argument("--write", metavar="PATH", help="write the catalog in snapshot format")
    p.set_defaults(func=cmd_catalog)

    def census_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--slow", action="store_true", help="allow n >= 9")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--cache-dir", help="census cache directory (default: $CIRCLE_GENUS_CACHE)")

    p = sub.add_parser("census", help="count genus-one labeled trees on n points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--by-form", action="store_true", help="also count trees per reduced form (n <= 9)")
    p.add_argument("--csv", action="store_true")
    census_flags(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("series", help="a, b, c, l series as CSV")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--parity", action="store_true", help="add mod-2 columns")
    p.add_argument("--json", action="store_true", help="JSON rows instead of CSV")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("classify", help="is f(n) divisible by n or only by n/2")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run every exhaustive check up to --max points")
    p.add_argument("--max", type=int, default=8)
    census_flags(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
