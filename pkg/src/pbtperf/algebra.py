"""Diagrammatic operator algebra for port-based teleportation.

Operators on one reference subsystem (label 0) and n ports (labels 1..n),
each of dimension d, are represented by normal-form terms ``[P] sigma_j``:
a port permutation P applied after the cup-cap pairing operator sigma_j
that links subsystem 0 with port j (unnormalized pairing, sum_k |kk>).
Bare permutation terms ``[P]`` are allowed too.

The representation is independent of d: scalars are Laurent polynomials in
d (class DScalar), accumulated through the two reduction rules

    sigma_i sigma_i = d sigma_i
    sigma_i sigma_j = S_ij sigma_j          (i != j, S_ij the port swap)

together with the commutation sigma_j [P] = [P] sigma_{P^{-1}(j)} which
keeps products in normal form. Traces are computed by closing the wiring
diagram and counting loops; every closed loop contributes a factor d.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .permutations import (
    MarkedClass,
    Permutation,
    all_permutations,
    compose,
    identity,
    inverse,
    marked_class_of,
    marked_class_size,
    to_cycles,
    transposition,
)

TermKey = tuple[Permutation, "int | None"]


class DScalar:
    """Exact scalar carrying symbolic powers of the dimension d.

    Sparse map {exponent: coefficient}. Coefficients are Fractions in the
    exact pipeline; after spectral interpolation they may be floats or
    mpmath numbers. Zero coefficients are never stored.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        self._coeffs = {e: c for e, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def of(cls, coeff, power: int = 0) -> "DScalar":
        return cls({power: coeff})

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def items(self):
        return self._coeffs.items()

    def shift(self, k: int) -> "DScalar":
        """Multiply by d^k."""
        if k == 0:
            return self
        return DScalar({e + k: c for e, c in self._coeffs.items()})

    def evaluate(self, d):
        """Substitute a concrete dimension value for d."""
        total = 0
        for e, c in self._coeffs.items():
            total += c * d**e
        return total

    def __add__(self, other: "DScalar") -> "DScalar":
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return DScalar(out)

    def __neg__(self) -> "DScalar":
        return DScalar({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other: "DScalar") -> "DScalar":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, DScalar):
            out: dict[int, object] = {}
            for e1, c1 in self._coeffs.items():
                for e2, c2 in other._coeffs.items():
                    e = e1 + e2
                    out[e] = out.get(e, 0) + c1 * c2
            return DScalar(out)
        return DScalar({e: c * other for e, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, DScalar):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(f"{c}*d^{e}" for e, c in sorted(self._coeffs.items()))


@dataclass(frozen=True)
class DiagramTerm:
    """One normal-form term coeff * d^d_power * [perm] * sigma_attach.

    ``attach`` is the port paired with subsystem 0, or None for a bare
    permutation term.
    """

    coeff: Fraction
    d_power: int
    perm: Permutation
    attach: int | None

    def __post_init__(self):
        if self.coeff == 0:
            raise ValueError("zero terms are dropped, not stored")
        if self.attach is not None and not (1 <= self.attach <= self.perm.n):
            raise ValueError(f"attach {self.attach} out of range 1..{self.perm.n}")

    @property
    def n(self) -> int:
        return self.perm.n


def _mul_structure(
    pa: Permutation, ja: int | None, pb: Permutation, jb: int | None
) -> tuple[Permutation, int | None, int]:
    """Reduce ([pa] sigma_ja)([pb] sigma_jb) to normal form.

    Returns (perm, attach, extra) with extra the d-power picked up by a
    collapsing sigma pair. Steps: commute sigma_ja through [pb], collapse
    or swap the adjacent sigmas, fold swaps into the permutation.
    """
    if ja is None:
        return compose(pa, pb), jb, 0
    m = inverse(pb)(ja)
    p = compose(pa, pb)
    if jb is None:
        return p, m, 0
    if m == jb:
        return p, jb, 1
    return compose(p, transposition(p.n, m, jb)), jb, 0


def mul_terms(a: DiagramTerm, b: DiagramTerm) -> DiagramTerm:
    """Product of two normal-form terms (always a single term again)."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    perm, attach, extra = _mul_structure(a.perm, a.attach, b.perm, b.attach)
    return DiagramTerm(a.coeff * b.coeff, a.d_power + b.d_power + extra, perm, attach)


def _loop_count(n: int, perm: Permutation, attach: int | None) -> int:
    """Closed loops in the traced wiring diagram of [perm] sigma_attach.

    Nodes are the bottom and top endpoints of subsystem 0 and the n ports.
    sigma_attach contributes a cap joining bottoms (0, j) and a cup joining
    tops (0, P(j)); idle ports run from bottom i to top P(i); taking the
    trace joins each top to its own bottom. Every node then has degree 2,
    so loops are exactly the connected components.
    """
    # bottoms: 0..n, tops: n+1 .. 2n+1
    k = n + 1
    parent = list(range(2 * k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    if attach is None:
        union(k + 0, 0)
        ports = range(1, n + 1)
    else:
        union(0, attach)  # cap at the bottom
        union(k + 0, k + perm(attach))  # cup at the top
        ports = (i for i in range(1, n + 1) if i != attach)
    for i in ports:
        union(k + perm(i), i)
    for i in range(k):  # trace closes top i onto bottom i
        union(k + i, i)
    return len({find(x) for x in range(2 * k)})


def trace_loops(t: DiagramTerm) -> int:
    """Loop count L of a traced term; its trace equals coeff * d^(d_power + L)."""
    return _loop_count(t.n, t.perm, t.attach)


def _canonical_key(key: TermKey):
    perm, attach = key
    return (perm.images, -1 if attach is None else attach)


class AlgebraElement:
    """Finite linear combination of normal-form terms, symbolic in d.

    Immutable by convention: every operation returns a new element. Terms
    are keyed by (permutation, attach) and zero coefficients are pruned,
    so equal operators have equal term maps.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[TermKey, DScalar]):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self._terms: dict[TermKey, DScalar] = {
            k: c for k, c in terms.items() if not c.is_zero
        }

    @property
    def terms(self) -> dict[TermKey, DScalar]:
        return dict(self._terms)

    @property
    def num_terms(self) -> int:
        return len(self._terms)

    def coefficient(self, perm: Permutation, attach: int | None) -> DScalar:
        return self._terms.get((perm, attach), DScalar())

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraElement):
            return self.n == other.n and self._terms == other._terms
        return NotImplemented

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return AlgebraElement(self.n, out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1)

    def scale(self, scalar) -> "AlgebraElement":
        """Multiply every coefficient by a plain scalar or a DScalar."""
        if not isinstance(scalar, DScalar):
            scalar = DScalar.of(scalar)
        return AlgebraElement(self.n, {k: c * scalar for k, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            if self.n != other.n:
                raise ValueError(f"size mismatch: {self.n} vs {other.n}")
            out: dict[TermKey, DScalar] = {}
            for (pa, ja), ca in self._terms.items():
                for (pb, jb), cb in other._terms.items():
                    perm, attach, extra = _mul_structure(pa, ja, pb, jb)
                    contrib = (ca * cb).shift(extra)
                    key = (perm, attach)
                    out[key] = out[key] + contrib if key in out else contrib
            return AlgebraElement(self.n, out)
        return self.scale(other)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def adjoint(self) -> "AlgebraElement":
        """Termwise dagger: ([P] sigma_j)^† = [P^{-1}] sigma_{P(j)}.

        Coefficients are unchanged (everything here is real).
        """
        out: dict[TermKey, DScalar] = {}
        for (p, j), c in self._terms.items():
            key = (inverse(p), None if j is None else p(j))
            out[key] = out[key] + c if key in out else c
        return AlgebraElement(self.n, out)

    def trace_poly(self) -> DScalar:
        """Trace as a Laurent polynomial in d, via loop counting."""
        total = DScalar()
        for (p, j), c in self._terms.items():
            total = total + c.shift(_loop_count(self.n, p, j))
        return total

    def trace(self, d):
        """Trace at a concrete dimension value."""
        return self.trace_poly().evaluate(d)

    def dump(self) -> str:
        """Debug text, one term per line: ``coeff * d^k * [cycles] * sigma_j``."""
        lines = []
        for (p, j), c in self._terms.items():
            tail = "1" if j is None else f"sigma_{j}"
            for e, coeff in sorted(c.items()):
                lines.append(f"{coeff} * d^{e} * [{to_cycles(p)}] * {tail}")
        return "\n".join(sorted(lines))

    def __repr__(self) -> str:
        return f"AlgebraElement(n={self.n}, terms={self.num_terms})"


def sigma(i: int, n: int) -> AlgebraElement:
    """The pairing operator sigma_i: unnormalized |Phi><Phi| on (0, i), identity elsewhere."""
    if not (1 <= i <= n):
        raise ValueError(f"port {i} out of range 1..{n}")
    return AlgebraElement(n, {(identity(n), i): DScalar.of(Fraction(1))})


def identity_element(n: int) -> AlgebraElement:
    """The identity operator as a bare-permutation term."""
    return AlgebraElement(n, {(identity(n), None): DScalar.of(Fraction(1))})


def from_terms(n: int, terms: Iterable[DiagramTerm]) -> AlgebraElement:
    out: dict[TermKey, DScalar] = {}
    for t in terms:
        if t.n != n:
            raise ValueError(f"term size {t.n} does not match element size {n}")
        key = (t.perm, t.attach)
        c = DScalar.of(t.coeff, t.d_power)
        out[key] = out[key] + c if key in out else c
    return AlgebraElement(n, out)


def symmetrize_to_classes(x: AlgebraElement) -> dict[MarkedClass, DScalar]:
    """Compress a relabeling-symmetric element to one coefficient per marked class.

    Only sigma-attached terms are supported (any polynomial in rho
    qualifies); bare permutation terms are rejected. Raises ValueError if
    the element is not symmetric, i.e. if members of one class carry
    different coefficients or are missing.
    """
    out: dict[MarkedClass, DScalar] = {}
    counts: dict[MarkedClass, int] = {}
    for (p, j), c in x._terms.items():
        if j is None:
            raise ValueError("bare permutation terms have no marked class")
        cls = marked_class_of(p, j)
        if cls in out:
            if out[cls] != c:
                raise ValueError(f"element not relabeling-symmetric at class {cls}")
            counts[cls] += 1
        else:
            out[cls] = c
            counts[cls] = 1
    for cls, seen in counts.items():
        expected = x.n * marked_class_size(cls)
        if seen != expected:
            raise ValueError(
                f"element not relabeling-symmetric: class {cls} has "
                f"{seen} of {expected} members"
            )
    return out


def expand_marked_classes(
    class_coeffs: Mapping[MarkedClass, DScalar], n: int
) -> AlgebraElement:
    """Inverse of symmetrize_to_classes: emit every member of each class.

    Brute-force over S_n x ports, so intended for small n.
    """
    out: dict[TermKey, DScalar] = {}
    for p in all_permutations(n):
        for j in range(1, n + 1):
            cls = marked_class_of(p, j)
            if cls in class_coeffs:
                out[(p, j)] = class_coeffs[cls]
    return AlgebraElement(n, out)
