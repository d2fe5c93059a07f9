"""Genus-one circle trees: genus, reductions, form catalog, census and divisibility."""

from .circle_core import CanonicalForm, CircleGraph, canonicalize, parse_graph, reflect, rotate
from .errors import CatalogError, DomainError, InvariantError, PreconditionError
from .genus_map import genus
from .reduction import final_offspring, is_genus_one

__version__ = "0.1.0"

__all__ = [
    "CanonicalForm",
    "CatalogError",
    "CircleGraph",
    "DomainError",
    "InvariantError",
    "PreconditionError",
    "canonicalize",
    "final_offspring",
    "genus",
    "is_genus_one",
    "parse_graph",
    "reflect",
    "rotate",
]
