"""Ordered compositions of an integer into positive parts."""

from __future__ import annotations

import math
from typing import Iterator


def compositions(total: int) -> Iterator[tuple[int, ...]]:
    """All ordered tuples of positive integers summing to ``total``.

    Yielded in lexicographic order of the tuples; there are 2^(total-1)
    of them, C(total-1, j-1) with exactly j parts.
    """
    if total < 0:
        raise ValueError("total must be non-negative")
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            yield (first,) + rest


def composition_counts(total: int) -> dict[int, int]:
    """Number of compositions of ``total`` per part count j, by enumeration."""
    counts: dict[int, int] = {}
    for alpha in compositions(total):
        counts[len(alpha)] = counts.get(len(alpha), 0) + 1
    return counts


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)
