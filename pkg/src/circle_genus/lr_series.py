"""Left-right trees, the series a, b, c, l, and the divisibility classifier.

Exact values use Python integers. The parity engine decides ``l_s mod 2`` in
O(log s) steps through negligent numbers, which is what makes the classifier
cheap for large ``n``; the exact convolutions stay around as its oracle.
"""

from __future__ import annotations

import itertools
from operator import mul
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Literal

from .errors import DomainError, InvariantError

ENUMERATION_LIMIT = 8


@dataclass(frozen=True)
class LRTree:
    """Rooted plane tree whose root splits its children at ``delimiter``.

    Children ``1 .. delimiter-1`` hang off left edges, the rest off right
    edges; ``delimiter`` ranges over ``1 .. len(children) + 1``.
    """

    delimiter: int = 1
    children: tuple["LRTree", ...] = ()

    def __post_init__(self) -> None:
        if not 1 <= self.delimiter <= len(self.children) + 1:
            raise DomainError(f"delimiter {self.delimiter} outside [1, {len(self.children) + 1}]")

    @property
    def edge_count(self) -> int:
        return len(self.children) + sum(c.edge_count for c in self.children)

    @property
    def right_edges(self) -> int:
        return len(self.children) - self.delimiter + 1

    def __repr__(self) -> str:
        if not self.children:
            return "."
        left = self.children[: self.delimiter - 1]
        right = self.children[self.delimiter - 1:]
        return "(" + " ".join(map(repr, left)) + " | " + " ".join(map(repr, right)) + ")"


POINT = LRTree()


def flip(T: LRTree) -> LRTree:
    """Mirror ``T`` left-to-right: reverse children, flip each, swap the split."""
    c = len(T.children)
    return LRTree(c - T.delimiter + 2, tuple(flip(s) for s in reversed(T.children)))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cuts + (total + parts - 1,):
            out.append(c - prev - 1)
            prev = c
        yield tuple(out)


@lru_cache(maxsize=None)
def _lr_trees(k: int) -> tuple[LRTree, ...]:
    if k == 0:
        return (POINT,)
    out = []
    for c in range(1, k + 1):
        for sizes in _compositions(k - c, c):
            for kids in itertools.product(*(_lr_trees(s) for s in sizes)):
                for d in range(1, c + 2):
                    out.append(LRTree(d, kids))
    return tuple(out)


def enumerate_lr_trees(k: int) -> Iterator[LRTree]:
    if k < 0:
        raise DomainError("edge count must be nonnegative")
    if k > ENUMERATION_LIMIT:
        raise DomainError(f"explicit enumeration is limited to k <= {ENUMERATION_LIMIT}")
    return iter(_lr_trees(k))


@dataclass(frozen=True)
class SeriesTable:
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]
    l: tuple[int, ...] = field(default=())

    def parity(self, name: str, k: int) -> int:
        return getattr(self, name)[k] & 1


def series_a(k_max: int) -> list[int]:
    """``a_k`` from the root-degree decomposition.

    A root with ``m`` children admits ``m + 1`` delimiters and any choice of
    subtrees, so ``a_k = sum_m (m + 1) [x^(k-m)] A(x)^m``. ``powers[m][d]``
    holds ``[x^d] A^m``; step ``k`` extends each power by the one degree
    that ``a_k`` reads.
    """
    a = [1]
    powers: list[list[int]] = [[1] + [0] * k_max]
    for k in range(1, k_max + 1):
        powers.append([])
        for m in range(1, k + 1):
            d = k - m
            powers[m].append(sum(map(mul, a[: d + 1], powers[m - 1][d::-1])))
        a.append(sum((m + 1) * powers[m][k - m] for m in range(1, k + 1)))
    return a


def series_b(a: list[int]) -> list[int]:
    b = [0]
    for m in range(1, len(a)):
        b.append(sum(map(mul, a[:m], a[m - 1::-1])))
    return b


@lru_cache(maxsize=8)
def series_tables(k_max: int) -> SeriesTable:
    a = series_a(k_max)
    b = series_b(a)
    c = [x - y for x, y in zip(a, b)]
    if any(x < 0 for x in c):
        raise InvariantError("c_k = a_k - b_k went negative")
    l = [0] + [sum(map(mul, a[:s], b[s:0:-1])) for s in range(1, k_max + 1)]
    return SeriesTable(tuple(a), tuple(b), tuple(c), tuple(l))


def l_sequence(s_max: int) -> tuple[int, ...]:
    return series_tables(s_max).l


# ---------------------------------------------------------------------------
# negligent numbers and the parity engine


def negligent(v: int) -> bool:
    """Whether ``c_v`` is odd, via the halving / quartering reduction."""
    if v < 0:
        raise DomainError("negligent numbers are nonnegative")
    if v == 0:
        return True
    while True:
        if v == 1:
            return True
        if v % 4 == 3:
            return False
        v = (v - 1) // 4 if v % 4 == 1 else v // 2


@lru_cache(maxsize=None)
def _sum_form(v: int, min_exp: int) -> bool:
    # v = 2^l0 + 4*2^l1 + 16*2^l2 + ... with min_exp <= l0 <= l1 <= ...
    e = min_exp
    while (1 << e) <= v:
        rest = v - (1 << e)
        if rest == 0:
            return True
        if rest % 4 == 0 and _sum_form(rest // 4, e):
            return True
        e += 1
    return False


def negligent_by_digits(v: int) -> bool:
    """Same predicate, read off the ``sum 4^i 2^(l_i)`` shape with nondecreasing ``l_i``."""
    if v < 0:
        raise DomainError("negligent numbers are nonnegative")
    return v == 0 or _sum_form(v, 0)


def _s_parity(v: int) -> int:
    # sum_{i<=v} c_i c_{2(v-i)+1} mod 2; odd v halves the sum
    while v % 2 == 1:
        v = (v - 1) // 2
    half = v // 2
    if half % 2 == 1:
        return 0
    return int(negligent(half // 2))


def parity_l(s: int) -> int:
    """``l_s mod 2`` without computing ``l_s``."""
    if s < 0:
        raise DomainError("index must be nonnegative")
    if s == 0 or s % 2 == 0:
        return 0
    if s % 4 == 1:
        v = (s - 1) // 4
        return 0 if v % 2 else int(negligent(v // 2))
    return _s_parity((s - 3) // 4)


Verdict = Literal["DivisibleByN", "OnlyByHalf"]


@dataclass(frozen=True)
class Family:
    """One of the three shapes of ``n`` for which divisibility by ``n`` fails."""

    name: str
    v: int
    k: int | None
    negligent: bool

    def to_json(self) -> dict:
        d = {"family": self.name, "v": self.v, "negligent": self.negligent}
        if self.k is not None:
            d["k"] = self.k
        return d


@dataclass(frozen=True)
class DivisibilityVerdict:
    n: int
    verdict: Verdict
    witness: Family | None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def theorem_family(n: int) -> Family | None:
    """Match ``n`` against ``32v+10``, ``64v+18``, ``64*2^k*v + 16*2^k + 2`` (k >= 1).

    All three say ``n - 2 = 2^j (4v + 1)`` with ``j = 3``, ``4`` or ``k + 4``.
    """
    if n % 4 != 2 or n < 10:
        return None
    m = n - 2
    j = (m & -m).bit_length() - 1
    q = m >> j
    if j < 3 or q % 4 != 1:
        return None
    v = (q - 1) // 4
    if j == 3:
        return Family("32v+10", v, None, negligent(v))
    if j == 4:
        return Family("64v+18", v, None, negligent(v))
    return Family("64*2^k*v+16*2^k+2", v, j - 4, negligent(v))


def classify_n(n: int) -> DivisibilityVerdict:
    """Whether the genus-one labeled tree count on ``n`` points is divisible by ``n``."""
    if n <= 3:
        raise DomainError(f"classification needs n > 3, got {n}")
    if n % 2 == 1 or n % 4 == 0:
        return DivisibilityVerdict(n, "DivisibleByN", None)
    s = (n - 2) // 4 - 1
    odd = parity_l(s) == 1
    family = theorem_family(n)
    fired = family is not None and family.negligent
    if odd != fired:
        raise InvariantError(f"n={n}: parity engine says {odd}, family witness says {fired}")
    if odd:
        return DivisibilityVerdict(n, "OnlyByHalf", family)
    return DivisibilityVerdict(n, "DivisibleByN", None)
