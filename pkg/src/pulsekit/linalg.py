"""Dense linear-algebra kernels for small real matrices.

Everything here is self-contained: the matrix exponential uses scaling and
squaring with a fixed-order Pade approximant, the symmetric eigensolver is
cyclic Jacobi, the general eigensolver is Householder Hessenberg reduction
followed by Francis double-shift QR, and Cholesky is the textbook
factorization. Heavy loops live in the selected kernel backend
(``pulsekit._speedups`` when compiled, else ``pulsekit._native``).

All tolerances are relative to matrix norms with an absolute floor of
1e-14, since the systems this package targets mix entry magnitudes from
1e-8 to 5e3.
"""

from __future__ import annotations

import numpy as np

from pulsekit._backend import BACKEND, kernels
from pulsekit.errors import (
    InvalidInputError,
    NotPositiveDefiniteError,
    NumericalFailureError,
    PreconditionError,
)

__all__ = [
    "BACKEND",
    "mat_exp",
    "sym_eig",
    "general_eigenvalues",
    "spectral_radius_general",
    "cholesky",
]

_ABS_FLOOR = 1e-14


def as_square_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and convert to a C-contiguous float64 square matrix."""
    m = np.ascontiguousarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InvalidInputError(f"{name} must be square, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise InvalidInputError(f"{name} has non-finite entries")
    return m


def max_norm(a) -> float:
    """Largest absolute entry."""
    return float(np.max(np.abs(a)))


def mat_exp(a, t: float) -> np.ndarray:
    """Matrix exponential exp(t*a).

    ``t`` may be negative. exp(0*a) is the identity exactly.
    """
    m = as_square_matrix(a, "a")
    t = float(t)
    if not np.isfinite(t):
        raise InvalidInputError("t must be finite")
    if t == 0.0:
        return np.eye(m.shape[0])
    if not np.isfinite(m * t).all():
        raise InvalidInputError("t*a overflows double precision")
    return kernels.mat_exp(m, t)


def sym_eig(s) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix.

    Returns ``(w, q)`` with eigenvalues ascending, orthogonal ``q``, and
    ``s == q @ diag(w) @ q.T`` up to roundoff. The input must be symmetric
    within 1e-12 of its largest entry; the residual is removed by
    averaging before the Jacobi sweeps.
    """
    m = as_square_matrix(s, "s")
    nrm = max_norm(m)
    asym = max_norm(m - m.T)
    if asym > max(1e-12 * nrm, _ABS_FLOOR):
        raise PreconditionError(
            f"matrix is not symmetric: max |S - S^T| = {asym:.3e} "
            f"exceeds 1e-12 * {nrm:.3e}")
    m = 0.5 * (m + m.T)
    w, q, converged = kernels.jacobi_eigh(m)
    if not converged:
        raise NumericalFailureError("Jacobi sweeps did not converge")
    return w, q


def general_eigenvalues(m) -> np.ndarray:
    """All eigenvalues of a general real matrix, as a complex array.

    The multiset is closed under conjugation; ordering is the deflation
    order of the QR iteration, not sorted.
    """
    a = as_square_matrix(m, "m")
    n = a.shape[0]
    wr, wi, found, h_partial = kernels.hessenberg_qr_eigvals(a, 100 * n)
    if found < n:
        raise NumericalFailureError(
            f"QR iteration stalled with {found} of {n} eigenvalues deflated",
            partial={
                "hessenberg": h_partial,
                "eigenvalues": (wr[n - found:] + 1j * wi[n - found:]),
            })
    return wr + 1j * wi


def spectral_radius_general(m) -> float:
    """Largest eigenvalue modulus of a general real matrix."""
    w = general_eigenvalues(m)
    return float(np.max(np.abs(w)))


def cholesky(m) -> np.ndarray:
    """Lower Cholesky factor of a symmetric positive-definite matrix."""
    a = as_square_matrix(m, "m")
    nrm = max_norm(a)
    asym = max_norm(a - a.T)
    if asym > max(1e-12 * nrm, _ABS_FLOOR):
        raise PreconditionError(
            f"matrix is not symmetric: max |M - M^T| = {asym:.3e}")
    low, fail = kernels.cholesky_lower(0.5 * (a + a.T))
    if fail >= 0:
        raise NotPositiveDefiniteError(
            f"non-positive pivot at index {fail}", pivot_index=int(fail))
    return low
