"""Spectral analysis of rho = sum_i sigma_i inside its own commutative algebra.

Powers of rho live in a finite-dimensional span of normal-form terms, so
there is a first linear dependence among rho, rho^2, ...: the monic
closure polynomial p with p(rho) = 0. Its constant term is always zero
(the identity never appears in a product of sigmas), so p = x*q and the
nonzero eigenvalues of rho are among the roots of q. Multiplicities come
from exact traces of spectral projectors, which also weed out roots that
the formal algebra produces but the operator does not realize (these have
projector trace zero). The pseudo inverse square root of rho is then a
polynomial in rho by interpolation over the retained eigenvalues.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .algebra import AlgebraElement, DScalar, sigma
from .errors import ConsistencyError
from .partitions import marked_partition_count

DEFAULT_PRECISION = 30  # decimal digits; comfortably above IEEE double


def build_rho(n: int) -> AlgebraElement:
    """rho = sigma_1 + ... + sigma_n in graph (unnormalized) units."""
    if n < 1:
        raise ValueError("n must be >= 1")
    total = sigma(1, n)
    for i in range(2, n + 1):
        total = total + sigma(i, n)
    return total


@functools.lru_cache(maxsize=None)
def _rho_powers(n: int, upto: int) -> tuple[AlgebraElement, ...]:
    """(rho, rho^2, ..., rho^upto) with symbolic-d coefficients."""
    rho = build_rho(n)
    powers = [rho]
    for _ in range(upto - 1):
        powers.append(powers[-1] * rho)
    return tuple(powers)


def rho_power(n: int, k: int) -> AlgebraElement:
    if k < 1:
        raise ValueError("k must be >= 1")
    return _rho_powers(n, k)[k - 1]


@dataclass(frozen=True)
class ClosurePolynomial:
    """Monic minimal polynomial p with p(rho) = 0, at a fixed dimension d.

    ``coeffs`` are ascending; coeffs[0] == 0 always, so p = x*q with q
    carrying the spectral content on the support of rho.
    """

    n: int
    d: Fraction
    coeffs: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def q_coeffs(self) -> tuple[Fraction, ...]:
        return self.coeffs[1:]


def closure_polynomial(n: int, d) -> ClosurePolynomial:
    """First monic dependence among rho, rho^2, ... at dimension d.

    Found by exact Gaussian elimination on the term-basis coordinates of
    successive powers. The degree is bounded by W(n)+1 (distinct
    eigenvalues plus the mandatory factor of x); exceeding W(n)+2 would
    mean the algebra failed to close, which is impossible, so it raises.
    """
    d = Fraction(d)
    if n < 1:
        raise ValueError("n must be >= 1")
    if d <= 0:
        raise ValueError("d must be positive")
    max_degree = marked_partition_count(n) + 2
    powers = _rho_powers(n, max_degree)

    key_index: dict = {}
    rows: list[tuple[int, list[Fraction], list[Fraction]]] = []  # (pivot, vec, combo)
    for k in range(1, max_degree + 1):
        elem = powers[k - 1]
        for key in elem.terms:
            if key not in key_index:
                key_index[key] = len(key_index)
        vec = [Fraction(0)] * len(key_index)
        for key, c in elem.terms.items():
            vec[key_index[key]] = Fraction(c.evaluate(d))
        combo = [Fraction(0)] * (max_degree + 1)
        combo[k] = Fraction(1)
        for pivot, basis_vec, basis_combo in rows:
            if pivot >= len(vec) or vec[pivot] == 0:
                continue
            f = vec[pivot] / basis_vec[pivot]
            for i in range(len(basis_vec)):
                vec[i] -= f * basis_vec[i]
            for i in range(max_degree + 1):
                combo[i] -= f * basis_combo[i]
        pivot = next((i for i, v in enumerate(vec) if v != 0), None)
        if pivot is None:
            return ClosurePolynomial(n, d, tuple(combo[: k + 1]))
        rows.append((pivot, vec, combo))
    raise ConsistencyError(
        f"no linear dependence among rho powers up to degree {max_degree} "
        f"(n={n}, d={d}); the algebra must close by then"
    )


def _poly_eval(coeffs, x):
    total = 0
    for c in reversed(coeffs):
        total = total * x + c
    return total


def _synthetic_divide(coeffs: list[Fraction], root: Fraction) -> list[Fraction]:
    """Divide by (x - root); assumes root is exact."""
    out = [Fraction(0)] * (len(coeffs) - 1)
    carry = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[i] + carry * root
        out[i - 1] = carry
    assert coeffs[0] + carry * root == 0
    return out


def _bounded_divisors(m: int, limit: int = 10**6) -> list[int] | None:
    """Divisors of |m| by trial division, or None if m is too hard to factor."""
    m = abs(m)
    if m == 0:
        return [0]
    divs = {1}
    p = 2
    while p * p <= m:
        if p > limit:
            return None
        if m % p == 0:
            powers = [1]
            while m % p == 0:
                m //= p
                powers.append(powers[-1] * p)
            divs = {a * b for a in divs for b in powers}
        p += 1 if p == 2 else 2
    if m > 1:
        divs = {a * b for a in divs for b in (1, m)}
    return sorted(divs)


def _rational_roots(q: list[Fraction], seeds: list[Fraction]) -> list[Fraction]:
    """All rational roots of q, as a duplicate-free sorted list.

    Seeds are tried first (and with multiplicity, deflating the
    polynomial); any residual factor is then attacked with the rational
    root theorem over divisor sets. A residual that resists exact
    factoring means an irrational or unreachable root, which is a
    structural violation here, so it raises.
    """
    poly = list(q)
    roots: list[Fraction] = []
    for cand in seeds:
        while len(poly) > 1 and _poly_eval(poly, cand) == 0:
            roots.append(cand)
            poly = _synthetic_divide(poly, cand)
    if len(poly) > 1:
        from math import lcm

        denom = lcm(*(c.denominator for c in poly)) if len(poly) > 1 else 1
        ipoly = [int(c * denom) for c in poly]
        while ipoly and ipoly[-1] == 0:
            ipoly.pop()
        const = next((c for c in ipoly if c != 0), 0)
        num_divs = _bounded_divisors(const)
        den_divs = _bounded_divisors(ipoly[-1])
        if num_divs is not None and den_divs is not None:
            for a in num_divs:
                for b in den_divs:
                    if b == 0:
                        continue
                    for cand in (Fraction(a, b), Fraction(-a, b)):
                        while len(poly) > 1 and _poly_eval(poly, cand) == 0:
                            roots.append(cand)
                            poly = _synthetic_divide(poly, cand)
        if len(poly) > 1:
            raise ConsistencyError(
                "eigenvalue polynomial has roots outside the rational search "
                f"(irrational roots would break the exact pipeline); residual "
                f"factor coefficients (ascending): {poly}"
            )
    return sorted(set(roots))


@dataclass(frozen=True)
class Spectrum:
    """Candidate eigenvalues of rho with exact projector-trace multiplicities.

    ``entries`` holds every distinct root of the closure polynomial's q
    factor with its projector trace; ``retained`` keeps those with
    lambda > 0 and positive trace — the actual support spectrum.
    """

    n: int
    d: Fraction
    closure: ClosurePolynomial
    entries: tuple[tuple[Fraction, Fraction], ...]
    retained: tuple[tuple[Fraction, Fraction], ...]

    @property
    def eigenvalues(self) -> tuple[Fraction, ...]:
        return tuple(lam for lam, _ in self.retained)

    @property
    def multiplicities(self) -> tuple[Fraction, ...]:
        return tuple(m for _, m in self.retained)


def _indicator_coeffs(root: Fraction, others: list[Fraction]) -> list[Fraction]:
    """Ascending coefficients of g(x) = x * prod(x - mu) / (root * prod(root - mu)).

    g vanishes at 0 and at every mu in ``others`` and equals 1 at
    ``root``: applied to rho it is the spectral projector onto the
    root's eigenspace, with the leading x factor killing the kernel.
    """
    coeffs = [Fraction(0), Fraction(1)]  # the factor x
    for mu in others:
        coeffs = [Fraction(0)] + coeffs
        for i in range(len(coeffs) - 1):
            coeffs[i] -= mu * coeffs[i + 1]
    denom = _poly_eval(coeffs, root)
    return [c / denom for c in coeffs]


def spectral_projector(spectrum: Spectrum, lam: Fraction) -> AlgebraElement:
    """Projector onto the lam eigenspace, as a polynomial in rho."""
    others = [mu for mu, _ in spectrum.entries if mu != lam]
    g = _indicator_coeffs(lam, others)
    powers = _rho_powers(spectrum.n, len(g) - 1)
    total = powers[0].scale(g[1])
    for k in range(2, len(g)):
        total = total + powers[k - 1].scale(g[k])
    return total


def compute_spectrum(n: int, d) -> Spectrum:
    return _compute_spectrum(n, Fraction(d))


@functools.lru_cache(maxsize=None)
def _compute_spectrum(n: int, d: Fraction) -> Spectrum:
    closure = closure_polynomial(n, d)
    q = list(closure.q_coeffs)
    seeds = [d + i for i in range(-(n - 1), n)] + [Fraction(0)]
    roots = _rational_roots(q, seeds)

    powers = _rho_powers(n, max(len(roots), 1))
    entries = []
    for lam in roots:
        g = _indicator_coeffs(lam, [mu for mu in roots if mu != lam]) if lam != 0 else None
        if g is None:
            entries.append((lam, Fraction(0)))  # kernel direction, never retained
            continue
        projector = powers[0].scale(g[1])
        for k in range(2, len(g)):
            projector = projector + powers[k - 1].scale(g[k])
        proj_trace = Fraction(projector.trace(d))
        entries.append((lam, proj_trace))

    retained = tuple((lam, m) for lam, m in entries if lam > 0 and m > 0)
    for lam, m in entries:
        if lam < 0 and m != 0:
            raise ConsistencyError(
                f"negative eigenvalue {lam} with nonzero multiplicity {m} "
                f"at (n={n}, d={d}): rho must be positive semidefinite"
            )
        if m < 0:
            raise ConsistencyError(
                f"negative projector trace {m} for eigenvalue {lam} at (n={n}, d={d})"
            )

    spectrum = Spectrum(n, d, closure, tuple(entries), retained)
    _verify_spectrum(spectrum)
    return spectrum


def _verify_spectrum(spectrum: Spectrum):
    """Exact moment and integrality checks on the retained spectrum."""
    n, d = spectrum.n, spectrum.d
    first = sum(lam * m for lam, m in spectrum.retained)
    if first != n * d**n:
        raise ConsistencyError(
            f"first moment mismatch at (n={n}, d={d}): {first} != {n * d**n}"
        )
    second = sum(lam**2 * m for lam, m in spectrum.retained)
    rho_sq_trace = Fraction(rho_power(n, 2).trace(d))
    if second != rho_sq_trace:
        raise ConsistencyError(
            f"second moment mismatch at (n={n}, d={d}): {second} != {rho_sq_trace}"
        )
    if sum(spectrum.multiplicities) > d ** (n + 1):
        raise ConsistencyError(
            f"multiplicities exceed the space dimension at (n={n}, d={d})"
        )
    if d.denominator == 1:
        for lam, m in spectrum.retained:
            if m.denominator != 1:
                raise ConsistencyError(
                    f"non-integer multiplicity {m} for eigenvalue {lam} "
                    f"at integer dimension (n={n}, d={d})"
                )


def rho_inverse_sqrt(
    spectrum: Spectrum, n: int, d, precision: int = DEFAULT_PRECISION
) -> AlgebraElement:
    """Pseudo inverse square root of rho as a polynomial in rho.

    Interpolates lambda^(-1/2) over the retained eigenvalues, implicitly
    zero on the kernel. Coefficients are mpmath reals at ``precision``
    significant digits; the element's d powers are already substituted.
    """
    if not spectrum.retained:
        raise ValueError("retained spectrum is empty")
    d = Fraction(d)
    nodes = [lam for lam, _ in spectrum.retained]
    if any(lam <= 0 for lam in nodes):
        raise ValueError(f"retained eigenvalues must be positive, got {nodes}")
    with mp.workdps(precision):
        coeffs = [mp.mpf(0)] * (len(nodes) + 1)
        for lam in nodes:
            g = _indicator_coeffs(lam, [mu for mu in nodes if mu != lam])
            weight = 1 / mp.sqrt(mp.mpf(lam.numerator) / lam.denominator)
            for k, gk in enumerate(g):
                coeffs[k] += weight * gk
        powers = _rho_powers(n, len(nodes))
        out: dict = {}
        for k in range(1, len(coeffs)):
            for key, c in powers[k - 1].terms.items():
                contrib = coeffs[k] * c.evaluate(d)
                out[key] = out.get(key, 0) + contrib
        return AlgebraElement(
            n, {key: DScalar.of(val) for key, val in out.items() if val != 0}
        )


def clear_caches():
    """Drop all memoized spectral data (used for honest timing runs)."""
    _rho_powers.cache_clear()
    _compute_spectrum.cache_clear()
