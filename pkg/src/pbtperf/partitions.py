"""Integer-partition combinatorics, including the marked variant.

A marked partition of n distinguishes one part (the part that holds a
special object). Partitions differing only in which equal-sized part is
marked are identified, so the marked count W(n) equals the number of
(partition, distinct part size) pairs. It also equals the prefix sum
P(0) + ... + P(n-1) of the ordinary partition function, which is the
second, independent route implemented here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyError

_PCACHE = [1]


def partition_count(n: int) -> int:
    """Number of partitions of n, by the pentagonal-number recurrence."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    while len(_PCACHE) <= n:
        m = len(_PCACHE)
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > m and g2 > m:
                break
            sign = -1 if k % 2 == 0 else 1
            if g1 <= m:
                total += sign * _PCACHE[m - g1]
            if g2 <= m:
                total += sign * _PCACHE[m - g2]
            k += 1
        _PCACHE.append(total)
    return _PCACHE[n]


def enumerate_partitions(n: int) -> list[tuple[int, ...]]:
    """All partitions of n as decreasing tuples, in descending-lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def gen(remaining: int, max_part: int):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, max_part), 0, -1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest

    return list(gen(n, n))


def marked_partition_count(n: int) -> int:
    """W(n): partitions of n with one distinguished part size.

    Computed two independent ways that must agree: direct enumeration
    (counting distinct part sizes per partition) and the prefix-sum
    identity W(n) = sum_{i<n} P(i).
    """
    if n < 1:
        raise ValueError("n must be >= 1 (no object to mark)")
    by_enumeration = sum(len(set(p)) for p in enumerate_partitions(n))
    by_prefix_sum = sum(partition_count(i) for i in range(n))
    if by_enumeration != by_prefix_sum:
        raise ConsistencyError(
            f"marked partition count mismatch at n={n}: "
            f"enumeration {by_enumeration} vs prefix sum {by_prefix_sum}"
        )
    return by_enumeration


def generating_coefficients(max_n: int, marked: bool = False) -> list[int]:
    """Series coefficients of prod_k 1/(1-x^k), truncated to degree max_n.

    With ``marked`` the product is multiplied by x/(1-x) = x + x^2 + ...,
    the generating function of the marked variant. Exact integer
    arithmetic throughout; independent of the recurrence in
    partition_count.
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    coeffs = [1] + [0] * max_n
    for k in range(1, max_n + 1):
        for i in range(k, max_n + 1):
            coeffs[i] += coeffs[i - k]
    if not marked:
        return coeffs
    out = [0] * (max_n + 1)
    for i in range(1, max_n + 1):
        out[i] = out[i - 1] + coeffs[i - 1]
    return out


def w_upper_bound(n: int) -> int:
    """The bound 1 + n*P(n-1)/2 on W(n), rounded up when fractional."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.ceil(Fraction(1) + Fraction(n * partition_count(n - 1), 2))


def bounds_check(n: int) -> tuple[bool, bool, bool]:
    """Check P(n) <= W(n) <= 1 + n*P(n-1)/2 in exact rational arithmetic.

    Returns (lower holds, upper holds, both hold). The upper comparison
    uses the exact possibly-fractional bound, not the integer ceiling.
    """
    w = marked_partition_count(n)
    lower = partition_count(n) <= w
    upper = Fraction(w) <= Fraction(1) + Fraction(n * partition_count(n - 1), 2)
    return lower, upper, lower and upper


@dataclass(frozen=True)
class PartitionTable:
    """Precomputed P(0..max_n) and W(1..max_n) with the prefix-sum link verified."""

    max_n: int
    p_values: tuple[int, ...]
    w_values: tuple[int, ...]


def build_partition_table(max_n: int) -> PartitionTable:
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    p_values = tuple(partition_count(i) for i in range(max_n + 1))
    w_values = tuple(marked_partition_count(i) for i in range(1, max_n + 1))
    for n in range(1, max_n + 1):
        if w_values[n - 1] != sum(p_values[:n]):
            raise ConsistencyError(f"prefix-sum identity broken at n={n}")
    return PartitionTable(max_n, p_values, w_values)
