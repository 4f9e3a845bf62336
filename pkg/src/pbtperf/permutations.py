"""Symmetric-group machinery on port labels {1..n}.

Permutations act on ports 1..n and are stored as image tuples. Composition
is right-to-left throughout the package: ``compose(p, q)`` applies ``q``
first, then ``p``. Conjugacy classes here carry a mark -- the cycle holding
a distinguished port -- so two classes with the same cycle type can still
differ by where the marked port sits.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .partitions import enumerate_partitions


@dataclass(frozen=True)
class Permutation:
    """Bijection on {1..n}; ``images[i-1]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if n == 0:
            raise ValueError("permutation on zero ports is rejected")
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection on 1..{n}: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __repr__(self) -> str:
        return f"Permutation({to_cycles(self)!r})"


def identity(n: int) -> Permutation:
    """Identity permutation on {1..n}; n must be at least 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Permutation(tuple(range(1, n + 1)))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Product p*q, applying q first and then p (right-to-left)."""
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    return Permutation(tuple(p.images[q.images[i] - 1] for i in range(p.n)))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for i, img in enumerate(p.images, start=1):
        inv[img - 1] = i
    return Permutation(tuple(inv))


def transposition(n: int, i: int, j: int) -> Permutation:
    """The swap (i j) in S_n (identity when i == j)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"labels out of range 1..{n}: {i}, {j}")
    images = list(range(1, n + 1))
    images[i - 1], images[j - 1] = j, i
    return Permutation(tuple(images))


def conjugate(q: Permutation, p: Permutation) -> Permutation:
    """Relabeling action q p q^{-1}."""
    return compose(compose(q, p), inverse(q))


def cycles(p: Permutation) -> list[tuple[int, ...]]:
    """Disjoint cycles, each starting at its smallest element, sorted by that element."""
    seen = [False] * p.n
    out = []
    for start in range(1, p.n + 1):
        if seen[start - 1]:
            continue
        cur = start
        cyc = []
        while not seen[cur - 1]:
            seen[cur - 1] = True
            cyc.append(cur)
            cur = p(cur)
        out.append(tuple(cyc))
    return out


def cycle_type(p: Permutation) -> tuple[int, ...]:
    """Cycle lengths in decreasing order."""
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def to_cycles(p: Permutation) -> str:
    """Canonical cycle-notation text, fixed points included.

    Cycles are sorted by smallest element and start at it. Labels are
    concatenated for n <= 9 and space-separated beyond that, so the text
    round-trips through from_cycles either way.
    """
    sep = "" if p.n <= 9 else " "
    return "".join("(" + sep.join(str(x) for x in c) + ")" for c in cycles(p))


def from_cycles(text: str, n: int | None = None) -> Permutation:
    """Parse cycle notation like ``(123)(4)`` or ``(1 10 2)``.

    Labels inside a cycle may be separated by spaces or commas; without
    separators each character is a single digit label. Fixed points may be
    omitted only when ``n`` is given.
    """
    body = text.strip()
    if not re.fullmatch(r"(\s*\([^()]*\)\s*)*", body):
        raise ValueError(f"malformed cycle notation: {text!r}")
    groups = re.findall(r"\(([^()]*)\)", body)
    parsed: list[list[int]] = []
    for g in groups:
        g = g.strip()
        if not g:
            continue
        if re.search(r"[\s,]", g):
            labels = [int(tok) for tok in re.split(r"[\s,]+", g)]
        else:
            if not g.isdigit():
                raise ValueError(f"malformed cycle: ({g})")
            labels = [int(ch) for ch in g]
        parsed.append(labels)

    flat = [x for c in parsed for x in c]
    if n is None:
        if not flat:
            raise ValueError("cannot infer size from empty cycle notation")
        n = max(flat)
    if len(set(flat)) != len(flat):
        raise ValueError(f"repeated element in cycles: {text!r}")
    for x in flat:
        if not (1 <= x <= n):
            raise ValueError(f"label {x} out of range 1..{n}")

    images = list(range(1, n + 1))
    for cyc in parsed:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a - 1] = b
    return Permutation(tuple(images))


def all_permutations(n: int) -> Iterator[Permutation]:
    """All of S_n in lexicographic image order (use only for small n)."""
    for images in itertools.permutations(range(1, n + 1)):
        yield Permutation(images)


@dataclass(frozen=True)
class MarkedClass:
    """Conjugacy class of (permutation, marked port) pairs under relabeling.

    Determined by the cycle type plus the length of the cycle containing
    the mark. ``cycle_type`` is stored in decreasing order.
    """

    cycle_type: tuple[int, ...]
    marked_len: int

    def __post_init__(self):
        if not self.cycle_type or any(k < 1 for k in self.cycle_type):
            raise ValueError(f"invalid cycle type {self.cycle_type}")
        if tuple(sorted(self.cycle_type, reverse=True)) != self.cycle_type:
            raise ValueError(f"cycle type must be sorted decreasing: {self.cycle_type}")
        if self.marked_len not in self.cycle_type:
            raise ValueError(
                f"marked length {self.marked_len} is not a part of {self.cycle_type}"
            )

    @property
    def n(self) -> int:
        return sum(self.cycle_type)


def marked_class_of(p: Permutation, j: int) -> MarkedClass:
    """Class of the pair (p, j): cycle type of p plus the length of j's cycle."""
    if not (1 <= j <= p.n):
        raise ValueError(f"port {j} out of range 1..{p.n}")
    marked_len = None
    for c in cycles(p):
        if j in c:
            marked_len = len(c)
            break
    assert marked_len is not None
    return MarkedClass(cycle_type(p), marked_len)


def enumerate_marked_classes(n: int) -> list[MarkedClass]:
    """All marked classes for S_n, complete and duplicate-free.

    Deterministic order: partitions in descending-lexicographic order,
    marks within a partition by decreasing part size.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    for part in enumerate_partitions(n):
        for k in sorted(set(part), reverse=True):
            out.append(MarkedClass(tuple(part), k))
    return out


def marked_class_size(c: MarkedClass) -> int:
    """Number of permutations P in S_n with (P, 1) in class c.

    Closed formula: the plain conjugacy class size n!/prod(k^{m_k} m_k!)
    times the fraction k*m_k/n of its members whose cycle through port 1
    has the marked length k.
    """
    n = c.n
    mult = Counter(c.cycle_type)
    class_size = math.factorial(n)
    for k, m in mult.items():
        class_size //= k**m * math.factorial(m)
    k = c.marked_len
    size = Fraction(class_size) * Fraction(k * mult[k], n)
    if size.denominator != 1:
        raise ValueError(f"inconsistent class {c}")
    return int(size)
