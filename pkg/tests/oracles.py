"""Brute-force enumerations and closed forms used only as test oracles."""

from __future__ import annotations

import itertools
import math


def perfect_matchings(points):
    """All pairings of ``points`` (a tuple of even length)."""
    if not points:
        yield ()
        return
    first, rest = points[0], points[1:]
    for i, partner in enumerate(rest):
        for m in perfect_matchings(rest[:i] + rest[i + 1:]):
            yield ((first, partner),) + m


def _cross(c, d):
    (a, b), (p, q) = sorted(c), sorted(d)
    return a < p < b < q or p < a < q < b


def _components(chords):
    n = len(chords)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(n), 2):
        if _cross(chords[i], chords[j]):
            parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(chords[i])
    return list(groups.values())


def count_connected(n: int) -> int:
    """Chord diagrams on 2n points whose crossing graph is connected."""
    pts = tuple(range(1, 2 * n + 1))
    return sum(len(_components(m)) == 1 for m in perfect_matchings(pts))


def _contains(c, d):
    (a, b), (p, q) = sorted(c), sorted(d)
    return a < p < q < b


def is_monolithic(chords) -> bool:
    """Points on a line ``1..2n``: the component through point 1 is arbitrary,
    every other component is a single chord, and no two of those nest."""
    comps = _components(chords)
    rest = [c for c in comps if not any(1 in ch for ch in c)]
    if any(len(c) > 1 for c in rest):
        return False
    singles = [c[0] for c in rest]
    return not any(_contains(s, t) for s, t in itertools.permutations(singles, 2))


def count_monolithic(n: int) -> int:
    pts = tuple(range(1, 2 * n + 1))
    return sum(is_monolithic(m) for m in perfect_matchings(pts))


def is_simple(perm) -> bool:
    n = len(perm)
    for length in range(2, n):
        for i in range(n - length + 1):
            block = perm[i:i + length]
            if max(block) - min(block) == length - 1:
                return False
    return True


def count_simple(n: int) -> int:
    return sum(is_simple(p) for p in itertools.permutations(range(n)))


def double_factorial(n: int) -> int:
    return math.prod(range(1, 2 * n, 2))
