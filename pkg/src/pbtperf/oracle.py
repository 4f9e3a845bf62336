"""Dense-matrix brute force for validating the diagram pipeline.

Everything here is built explicitly on the d^(n+1)-dimensional space of
subsystem 0 plus n ports (subsystem 0 is the slowest-varying index), with
no reuse of the diagram code path: agreement between the two routes is
evidence, not tautology. Sizes are capped so the oracle stays fast.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, DiagramTerm
from .errors import ConsistencyError
from .permutations import Permutation

SIZE_CAP = 4096
_KERNEL_CUT = 1e-9  # relative to the largest eigenvalue
_PSD_TOL = 1e-10
_COMPLETENESS_TOL = 1e-10


def _check_size(n: int, d: int) -> int:
    dim = d ** (n + 1)
    if dim > SIZE_CAP:
        raise ValueError(f"dense size d^(n+1) = {dim} exceeds cap {SIZE_CAP}")
    return dim


def _digits(x: int, n: int, d: int) -> list[int]:
    """Base-d digits of x as (subsystem 0, port 1, ..., port n), 0 slowest."""
    out = [0] * (n + 1)
    for pos in range(n, -1, -1):
        out[pos] = x % d
        x //= d
    return out


def _code(digits: list[int], d: int) -> int:
    x = 0
    for v in digits:
        x = x * d + v
    return x


def sigma_matrix(i: int, n: int, d: int) -> np.ndarray:
    """Unnormalized |Phi><Phi| on subsystems (0, i), identity on the rest.

    Trace is d^n in these graph units.
    """
    if not (1 <= i <= n):
        raise ValueError(f"port {i} out of range 1..{n}")
    dim = _check_size(n, d)
    mat = np.zeros((dim, dim))
    for x in range(dim):
        xd = _digits(x, n, d)
        if xd[0] != xd[i]:
            continue
        for k in range(d):
            yd = list(xd)
            yd[0] = k
            yd[i] = k
            mat[_code(yd, d), x] = 1.0
    return mat


def perm_matrix(p: Permutation, d: int) -> np.ndarray:
    """Unitary moving the content of port i to port p(i); subsystem 0 fixed."""
    n = p.n
    dim = _check_size(n, d)
    mat = np.zeros((dim, dim))
    for x in range(dim):
        xd = _digits(x, n, d)
        yd = [xd[0]] + [0] * n
        for i in range(1, n + 1):
            yd[p(i)] = xd[i]
        mat[_code(yd, d), x] = 1.0
    return mat


def term_to_matrix(t: DiagramTerm, d: int) -> np.ndarray:
    mat = perm_matrix(t.perm, d)
    if t.attach is not None:
        mat = mat @ sigma_matrix(t.attach, t.n, d)
    return float(t.coeff) * float(d) ** t.d_power * mat


def element_to_matrix(x: AlgebraElement, d: int) -> np.ndarray:
    dim = _check_size(x.n, d)
    total = np.zeros((dim, dim))
    for (p, j), c in x.terms.items():
        mat = perm_matrix(p, d)
        if j is not None:
            mat = mat @ sigma_matrix(j, x.n, d)
        total += float(c.evaluate(d)) * mat
    return total


def rho_matrix(n: int, d: int) -> np.ndarray:
    dim = _check_size(n, d)
    total = np.zeros((dim, dim))
    for i in range(1, n + 1):
        total += sigma_matrix(i, n, d)
    return total


def eigenvalue_multiplicities(
    mat: np.ndarray, tol: float = 1e-6
) -> list[tuple[float, int]]:
    """Cluster the eigenvalues of a symmetric matrix into (value, count) pairs."""
    values = np.linalg.eigvalsh(mat)
    out: list[tuple[float, int]] = []
    for v in values:
        if out and abs(v - out[-1][0]) <= tol:
            prev, count = out[-1]
            out[-1] = ((prev * count + v) / (count + 1), count + 1)
        else:
            out.append((float(v), 1))
    return out


def _pseudo_inverse_sqrt(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(rho^{-1/2} on the support, support projector) by dense eigendecomposition."""
    w, v = np.linalg.eigh(mat)
    top = w.max()
    if w.min() < -_PSD_TOL * max(top, 1.0):
        raise ConsistencyError(f"rho has a negative eigenvalue: {w.min()}")
    cut = _KERNEL_CUT * top
    inv_sqrt = np.where(w > cut, 1.0 / np.sqrt(np.where(w > cut, w, 1.0)), 0.0)
    support = np.where(w > cut, 1.0, 0.0)
    return (v * inv_sqrt) @ v.T, (v * support) @ v.T


def oracle_success_probability(n: int, d: int) -> float:
    """Dense-route success probability, with the POVM completeness check.

    Builds rho and the pretty-good POVM explicitly, evaluates
    tr(rho^{-1/2} sigma_1 rho^{-1/2} sigma_1)/d^n, and verifies that the
    POVM elements sum to the support projector of rho.
    """
    _check_size(n, d)
    rho = rho_matrix(n, d)
    x, support = _pseudo_inverse_sqrt(rho)
    sigmas = [sigma_matrix(i, n, d) for i in range(1, n + 1)]
    s = float(np.trace(x @ sigmas[0] @ x @ sigmas[0])) / d**n

    completeness = sum(x @ sig @ x for sig in sigmas) - support
    defect = float(np.abs(np.linalg.eigvalsh(completeness)).max())
    if defect > _COMPLETENESS_TOL:
        raise ConsistencyError(
            f"POVM completeness defect {defect} at (n={n}, d={d})"
        )
    return s
