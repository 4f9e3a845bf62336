"""Success probability, fidelities, and bounds for PGM port-based teleportation.

The measurement is the pretty-good POVM Pi_i = rho^{-1/2} sigma_i
rho^{-1/2} built from the port pairing operators. All algebra runs in
graph (unnormalized) units; a single factor 1/d^N converts the trace
tr(rho^{-1/2} sigma_i rho^{-1/2} sigma_i) to the physical success
probability S. The fidelities follow as F_e = N*S/d^2 and
F = (d*F_e + 1)/(d + 1), and the closed-form bounds are
F_e_low = N/(d^2+N-1) and F_e_up = N/d^2.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from mpmath import mp

from .algebra import AlgebraElement, sigma
from .errors import ConsistencyError
from .spectral import DEFAULT_PRECISION, compute_spectrum, rho_inverse_sqrt

_SYMMETRY_RTOL = 1e-12
_RANGE_TOL = 1e-9


@dataclass(frozen=True)
class MetricsRow:
    """One swept point: success probability, fidelities, and both bounds."""

    n: int
    d: int
    s: float
    f_e: float
    f: float
    f_e_low: float
    f_e_up: float


def _pgm_overlap(x: AlgebraElement, i: int, d: Fraction):
    """tr((X sigma_i)^2) / d^n with X the pseudo inverse square root of rho."""
    y = x * sigma(i, x.n)
    return (y * y).trace(d) / d**x.n


def success_probability(n: int, d, precision: int = DEFAULT_PRECISION) -> float:
    """Probability that the pretty-good measurement names the correct port."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = Fraction(d)
    if d < 1:
        raise ValueError("d must be >= 1")
    return _success_probability_cached(n, d, precision)


@functools.lru_cache(maxsize=None)
def _success_probability_cached(n: int, d: Fraction, precision: int) -> float:
    spectrum = compute_spectrum(n, d)
    with mp.workdps(precision):
        x = rho_inverse_sqrt(spectrum, n, d, precision)
        s = _pgm_overlap(x, 1, d)
        if n > 1:
            s_last = _pgm_overlap(x, n, d)
            if abs(s - s_last) > _SYMMETRY_RTOL * abs(s):
                raise ConsistencyError(
                    f"port symmetry broken at (n={n}, d={d}): "
                    f"overlap {s} for port 1 vs {s_last} for port {n}"
                )
        if s < -_RANGE_TOL or s > 1 + _RANGE_TOL:
            raise ConsistencyError(
                f"success probability {s} outside [0,1] at (n={n}, d={d})"
            )
        return float(s)


def closed_form_success(n: int, d) -> float:
    """Known closed-form success probability for n = 2, 3, 4 ports.

    Each radical is the geometric mean of a pair of eigenvalues of rho
    (which sit at integer offsets from d), with a polynomial coefficient:

        S(2) = [d + sqrt((d-1)(d+1))] / (2 d)
        S(3) = [5 d^2 - 2 + 2(d-1) sqrt((d-2)(d+1))
                + 2(d+1) sqrt((d+2)(d-1))] / (9 d^2)
        S(4) = [7 d^3 - 3 d + (d-1)(d-2) sqrt((d-3)(d+1))
                + (d+1)(d+2) sqrt((d+3)(d-1))
                + 2(d^2-1) (sqrt(d(d-2)) + sqrt(d(d+2)))
                + 3(d^2-1) sqrt((d-2)(d+2))] / (16 d^3)

    Any negative radicand (n=3 needs d >= 2, n=4 needs d >= 3) raises
    ValueError; the spectral pipeline covers those points instead.
    """
    d = float(d)
    if d < 1:
        raise ValueError("d must be >= 1")

    def root(value: float) -> float:
        if value < 0:
            raise ValueError(f"negative radicand {value} for n={n}, d={d}")
        return math.sqrt(value)

    if n == 2:
        return (d + root((d - 1) * (d + 1))) / (2 * d)
    if n == 3:
        a = root((d - 2) * (d + 1))
        b = root((d + 2) * (d - 1))
        return (5 * d * d - 2 + 2 * (d - 1) * a + 2 * (d + 1) * b) / (9 * d * d)
    if n == 4:
        a = root((d - 3) * (d + 1))
        b = root((d + 3) * (d - 1))
        c = root(d * (d - 2))
        e = root(d * (d + 2))
        f = root((d - 2) * (d + 2))
        num = (
            7 * d**3
            - 3 * d
            + (d - 1) * (d - 2) * a
            + (d + 1) * (d + 2) * b
            + 2 * (d * d - 1) * (c + e)
            + 3 * (d * d - 1) * f
        )
        return num / (16 * d**3)
    raise ValueError(f"no closed form for n={n} (supported: 2, 3, 4)")


def fidelities(n: int, d, s: float) -> tuple[float, float]:
    """Entanglement fidelity and average fidelity from the success probability."""
    if not (0 <= s <= 1):
        raise ValueError(f"success probability {s} outside [0,1]")
    d = float(d)
    f_e = n * s / (d * d)
    f = (d * f_e + 1) / (d + 1)
    return f_e, f


def fidelity_bounds(n: int, d) -> tuple[float, float]:
    """(lower, upper) bounds on the entanglement fidelity: N/(d^2+N-1) and N/d^2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = float(d)
    if d < 1:
        raise ValueError("d must be >= 1")
    return n / (d * d + n - 1), n / (d * d)


def metrics_row(
    n: int,
    d: int,
    precision: int = DEFAULT_PRECISION,
    prefer_closed_form: bool = False,
) -> MetricsRow:
    """One fully checked row; closed form is used only when asked and in domain."""
    s = None
    if prefer_closed_form:
        try:
            s = closed_form_success(n, d)
        except ValueError:
            s = None
    if s is None:
        s = success_probability(n, d, precision)
    f_e, f = fidelities(n, d, s)
    f_e_low, f_e_up = fidelity_bounds(n, d)
    row = MetricsRow(n, int(d), s, f_e, f, f_e_low, f_e_up)
    _check_row(row)
    return row


def _check_row(row: MetricsRow):
    if not (row.f_e_low <= row.f_e <= row.f_e_up):
        raise ConsistencyError(
            f"fidelity bound sandwich broken at (n={row.n}, d={row.d}): "
            f"{row.f_e_low} <= {row.f_e} <= {row.f_e_up} fails"
        )
    if row.f < row.f_e:
        raise ConsistencyError(
            f"average fidelity below entanglement fidelity at (n={row.n}, d={row.d})"
        )


def sweep(
    n: int,
    dims: Iterable[int],
    precision: int = DEFAULT_PRECISION,
    prefer_closed_form: bool = False,
) -> list[MetricsRow]:
    """Metrics rows for each dimension, in the order given."""
    return [metrics_row(n, d, precision, prefer_closed_form) for d in dims]


def clear_caches():
    _success_probability_cached.cache_clear()
