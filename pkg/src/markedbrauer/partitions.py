"""Partition combinatorics and the simple-module count of the algebra B_r.

Simples are indexed by p-regular partitions whose weights walk down from r
in steps of two; weight zero is dropped exactly when the loop value is zero
and r is even.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Tuple

Partition = Tuple[int, ...]


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of n as weakly decreasing tuples, lexicographic order."""
    if n < 0:
        raise ValueError("partitions of a negative integer")

    def gen(remaining: int, max_part: int):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, max_part), 0, -1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest

    return tuple(sorted(gen(n, n)))


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _check_characteristic(p: int) -> None:
    if p == 0:
        return
    if not _is_odd_prime(p):
        raise ValueError(f"characteristic must be 0 or an odd prime, got {p}")


def is_p_regular(partition: Partition, p: int) -> bool:
    """No part value repeats p or more times; vacuous when p == 0."""
    _check_characteristic(p)
    if p == 0:
        return True
    run = 0
    prev = None
    for part in partition:
        run = run + 1 if part == prev else 1
        if run >= p:
            return False
        prev = part
    return True


def count_simples(
    r: int, p: int, delta_is_zero: bool
) -> tuple[int, list[tuple[int, list[Partition]]]]:
    """Count the simple modules of B_r over characteristic p.

    The parameterizing set is the p-regular partitions of r, r-2, ... down
    to r mod 2, except that weight 0 is excluded when delta is zero and r is
    even.  Returns the total and the per-weight partition lists.
    """
    _check_characteristic(p)
    if r < 0:
        raise ValueError("r must be nonnegative")
    floor = 2 if (delta_is_zero and r % 2 == 0) else r % 2
    ladder = []
    weight = r
    while weight >= floor:
        regs = [lam for lam in partitions_of(weight) if is_p_regular(lam, p)]
        ladder.append((weight, regs))
        weight -= 2
    total = sum(len(regs) for _, regs in ladder)
    return total, ladder
