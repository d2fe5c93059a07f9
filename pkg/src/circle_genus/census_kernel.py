"""Compiled inner loop of the census: decode, reduce, and bucket every tree of a Prüfer shard.

A tree on ``n <= 11`` points is an ``int64`` bitmask over the ``n(n-1)/2``
point pairs. Inside one tree the ``n - 1`` edges get local indices and the
Chord reduction runs on a bitmask of surviving local edges. Everything here
is 0-based; the Python side converts to the 1-based graphs used elsewhere.
"""

from __future__ import annotations

import numpy as np
from numba import njit

KERNEL_VERSION = "1"
MAX_POINTS = 11

# stats slots returned by scan_shard
TREES, GENUS_ONE, MISMATCH, GENUS_ONE_BY_FACES = range(4)

COLLECT_NONE, COLLECT_PARTIAL, COLLECT_ALL = 0, 1, 2


class PairTables:
    """Lookup tables shared by every shard of one ``n``."""

    def __init__(self, n: int):
        if not 3 <= n <= MAX_POINTS:
            raise ValueError(f"kernel supports 3 <= n <= {MAX_POINTS}")
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        self.n = n
        self.pa = np.array([a for a, _ in pairs], dtype=np.int64)
        self.pb = np.array([b for _, b in pairs], dtype=np.int64)
        self.index = np.full((n, n), -1, dtype=np.int64)
        for i, (a, b) in enumerate(pairs):
            self.index[a, b] = self.index[b, a] = i
        self.cross = np.zeros(len(pairs), dtype=np.int64)
        for i, (a, b) in enumerate(pairs):
            for j, (c, d) in enumerate(pairs):
                if (a < c < b < d) or (c < a < d < b):
                    self.cross[i] |= np.int64(1) << np.int64(j)
        self.rot = np.array(
            [self.index[(a + 1) % n, (b + 1) % n] for a, b in pairs], dtype=np.int64
        )

    def mask_to_edges(self, mask: int) -> list[tuple[int, int]]:
        """1-based sorted edge list of a pair bitmask."""
        return [
            (int(self.pa[i]) + 1, int(self.pb[i]) + 1)
            for i in range(len(self.pa))
            if (mask >> i) & 1
        ]


@njit(cache=True, nogil=True)
def _decode(seq, n, edges, index):
    degree = np.ones(n, dtype=np.int64)
    for x in seq:
        degree[x] += 1
    for k in range(n - 2):
        leaf = 0
        while degree[leaf] != 1:
            leaf += 1
        x = seq[k]
        edges[k] = index[leaf, x]
        degree[leaf] -= 1
        degree[x] -= 1
    u = -1
    for v in range(n):
        if degree[v] == 1:
            if u < 0:
                u = v
            else:
                edges[n - 2] = index[u, v]


@njit(cache=True, nogil=True)
def _reduces_to_genus_one(m, local):
    """Reduction fixpoint on local edge masks; true iff it is Form 1 or Form 2."""
    alive = (np.int64(1) << m) - 1
    while True:
        changed = False
        for i in range(m):
            if (alive >> i) & 1 and local[i] & alive == 0:
                alive &= ~(np.int64(1) << i)
                changed = True
        if changed:
            continue
        for i in range(m):
            if not (alive >> i) & 1:
                continue
            cs = local[i] & alive
            for j in range(i + 1, m):
                if (alive >> j) & 1 and local[j] & alive == cs:
                    alive &= ~(np.int64(1) << j)
                    changed = True
        if not changed:
            break
    count = 0
    for i in range(m):
        if (alive >> i) & 1:
            count += 1
            if local[i] & alive != alive & ~(np.int64(1) << i):
                return False
    return count == 2 or count == 3


@njit(cache=True, nogil=True)
def _faces(n, edges, pa, pb):
    """Face count of the circle-plus-chords map (chords in ``edges``)."""
    m = n - 1
    darts = 2 * (n + m)
    rho = np.empty(darts, dtype=np.int64)
    keys = np.empty(n + 1, dtype=np.int64)
    ring = np.empty(n + 1, dtype=np.int64)
    for v in range(n):
        size = 0
        keys[size] = 0
        ring[size] = 2 * v
        size += 1
        keys[size] = n
        ring[size] = 2 * ((v - 1) % n) + 1
        size += 1
        for c in range(m):
            a, b = pa[edges[c]], pb[edges[c]]
            if a == v:
                keys[size] = (b - a) % n
                ring[size] = 2 * (n + c)
                size += 1
            elif b == v:
                keys[size] = (a - b) % n
                ring[size] = 2 * (n + c) + 1
                size += 1
        for i in range(1, size):
            k, d = keys[i], ring[i]
            j = i - 1
            while j >= 0 and keys[j] > k:
                keys[j + 1] = keys[j]
                ring[j + 1] = ring[j]
                j -= 1
            keys[j + 1] = k
            ring[j + 1] = d
        for i in range(size):
            rho[ring[i]] = ring[(i + 1) % size]
    seen = np.zeros(darts, dtype=np.bool_)
    faces = 0
    for d in range(darts):
        if not seen[d]:
            faces += 1
            while not seen[d]:
                seen[d] = True
                d = rho[d ^ 1]
    return faces


@njit(cache=True, nogil=True)
def scan_shard(n, prefix, cross, index, rot, pa, pb, check_genus, collect):
    """Enumerate every Prüfer sequence that starts with ``prefix``.

    Returns ``(stats, periods, rep_masks, rep_periods)``. ``periods[p]``
    counts genus-one rotation classes of period ``p``; a class is seen once,
    at the labeling whose pair mask is smallest among its rotations.
    ``collect`` keeps representative masks: none, those of period below
    ``n``, or all of them.
    """
    m = n - 1
    length = n - 2
    seq = np.zeros(length, dtype=np.int64)
    for i in range(len(prefix)):
        seq[i] = prefix[i]
    free = length - len(prefix)
    total = 1
    for _ in range(free):
        total *= n
    edges = np.empty(m, dtype=np.int64)
    rotated = np.empty(m, dtype=np.int64)
    local = np.empty(m, dtype=np.int64)
    stats = np.zeros(4, dtype=np.int64)
    periods = np.zeros(n + 1, dtype=np.int64)
    reps = np.empty(64, dtype=np.int64)
    rep_periods = np.empty(64, dtype=np.int64)
    kept = 0
    for t in range(total):
        r = t
        for i in range(length - 1, len(prefix) - 1, -1):
            seq[i] = r % n
            r //= n
        _decode(seq, n, edges, index)
        mask = np.int64(0)
        for i in range(m):
            mask |= np.int64(1) << edges[i]
        for i in range(m):
            c = cross[edges[i]]
            bits = np.int64(0)
            for j in range(m):
                if (c >> edges[j]) & 1:
                    bits |= np.int64(1) << j
            local[i] = bits
        stats[TREES] += 1
        one = _reduces_to_genus_one(m, local)
        if check_genus:
            g2 = n + 1 - _faces(n, edges, pa, pb)
            if g2 == 2:
                stats[GENUS_ONE_BY_FACES] += 1
            if (g2 == 2) != one:
                stats[MISMATCH] += 1
        if not one:
            continue
        stats[GENUS_ONE] += 1
        # rotation class: keep only the labeling with the least mask
        for i in range(m):
            rotated[i] = edges[i]
        period = n
        least = True
        for step in range(1, n):
            rmask = np.int64(0)
            for i in range(m):
                rotated[i] = rot[rotated[i]]
                rmask |= np.int64(1) << rotated[i]
            if rmask < mask:
                least = False
                break
            if rmask == mask and period == n:
                period = step
        if not least:
            continue
        periods[period] += 1
        if collect == 2 or (collect == 1 and period < n):
            if kept == len(reps):
                reps = np.concatenate((reps, np.empty(kept, dtype=np.int64)))
                rep_periods = np.concatenate((rep_periods, np.empty(kept, dtype=np.int64)))
            reps[kept] = mask
            rep_periods[kept] = period
            kept += 1
    return stats, periods, reps[:kept], rep_periods[:kept]
