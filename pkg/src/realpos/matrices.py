"""Dense complex matrix kernels shared by every other module.

Everything operates on plain square complex ``numpy`` arrays.  The JSON wire
format for a matrix is ``{"n": n, "entries": [[re, im], ...]}`` with the
entries row-major (length ``n**2``).

All functions here are pure; arrays are never mutated in place.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "SingularMatrixError",
    "as_matrix",
    "dagger",
    "re_part",
    "im_part",
    "frob_norm",
    "herm_eig",
    "op_norm",
    "solve",
    "min_real_eig",
    "max_real_eig",
    "matrix_to_json",
    "matrix_from_json",
]


@dataclass(frozen=True)
class Tolerances:
    """Numeric thresholds used by every approximate predicate.

    eq_tol     equality of matrices in operator norm
    psd_slack  allowed magnitude of a negative eigenvalue in PSD checks
    iter_tol   stopping threshold for fixed-point iterations
    max_iter   hard cap on iteration counts
    """

    eq_tol: float = 1e-9
    psd_slack: float = 1e-7
    iter_tol: float = 1e-10
    max_iter: int = 10_000

    def __post_init__(self):
        if min(self.eq_tol, self.psd_slack, self.iter_tol) <= 0.0:
            raise ValueError("tolerances must be strictly positive")
        if self.max_iter <= 0:
            raise ValueError("max_iter must be a positive integer")
        if self.psd_slack < self.eq_tol:
            raise ValueError("psd_slack must be at least eq_tol")

    def close(self, a, b) -> tuple[bool, float]:
        """Operator-norm equality test; returns (verdict, raw distance)."""
        d = op_norm(np.asarray(a) - np.asarray(b))
        return d <= self.eq_tol * max(1.0, op_norm(a)), d

    def psd(self, margin: float) -> bool:
        """Is a matrix with smallest eigenvalue ``margin`` PSD up to slack?"""
        return margin >= -self.psd_slack


DEFAULT_TOL = Tolerances()


class SingularMatrixError(ValueError):
    """Raised by :func:`solve` when elimination hits a negligible pivot."""

    def __init__(self, pivot_index: int, pivot: float, scale: float):
        self.pivot_index = pivot_index
        self.pivot = pivot
        super().__init__(
            f"matrix numerically singular: pivot {pivot_index} has magnitude "
            f"{pivot:.3e} against scale {scale:.3e}"
        )


def as_matrix(obj, name: str = "matrix") -> np.ndarray:
    """Validate and return a square, finite, complex 2-d array."""
    m = np.asarray(obj, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):  # complex isfinite checks both parts
        raise ValueError(f"{name} has non-finite entries")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def re_part(m: np.ndarray) -> np.ndarray:
    """Hermitian part (m + m*)/2."""
    return (m + dagger(m)) / 2.0


def im_part(m: np.ndarray) -> np.ndarray:
    """Hermitian matrix (m - m*)/2i, so that m = re_part + i*im_part."""
    return (m - dagger(m)) / 2.0j


def frob_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def herm_eig(h, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized internally, so callers may pass matrices that
    are Hermitian only up to rounding.  Returns ``(w, v)`` with ``w``
    ascending and ``v`` unitary, ``h @ v == v @ diag(w)``.
    """
    h = as_matrix(h, "herm_eig input")
    w, v = np.linalg.eigh(re_part(h))
    return w, v


def op_norm(m) -> float:
    """Operator (spectral) norm, sqrt of the largest eigenvalue of m*m."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def solve(m, b, tol: Tolerances = DEFAULT_TOL, return_residual: bool = False):
    """Solve ``m @ x = b`` by LU with partial pivoting.

    Raises :class:`SingularMatrixError` carrying the index of the first
    pivot whose magnitude falls below ``1e-13 * op_norm(m)``.  With
    ``return_residual`` the pair ``(x, ||m x - b||)`` is returned.
    """
    m = as_matrix(m, "solve lhs")
    b = np.asarray(b, dtype=complex)
    scale = op_norm(m)
    with warnings.catch_warnings():
        # singularity is detected below via the pivot magnitudes
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(m, check_finite=True)
    diag = np.abs(np.diag(lu))
    bad = np.nonzero(diag <= 1e-13 * scale)[0]
    if bad.size:
        k = int(bad[0])
        raise SingularMatrixError(k, float(diag[k]), scale)
    x = scipy.linalg.lu_solve((lu, piv), b)
    if return_residual:
        return x, float(np.linalg.norm(m @ x - b, 2))
    return x


def min_real_eig(m) -> float:
    """Smallest eigenvalue of the Hermitian part (m + m*)/2.

    ``m`` is accretive iff this is >= -psd_slack.
    """
    m = as_matrix(m, "min_real_eig input")
    return float(np.linalg.eigvalsh(re_part(m))[0])


def max_real_eig(m) -> float:
    m = as_matrix(m, "max_real_eig input")
    return float(np.linalg.eigvalsh(re_part(m))[-1])


def matrix_to_json(m) -> dict:
    m = as_matrix(m)
    flat = m.reshape(-1)
    return {
        "n": int(m.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json(data: dict) -> np.ndarray:
    try:
        n = int(data["n"])
        entries = data["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError("matrix JSON needs fields 'n' and 'entries'") from exc
    if n <= 0:
        raise ValueError("matrix dimension must be positive")
    if len(entries) != n * n:
        raise ValueError(f"expected {n * n} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries])
    return as_matrix(flat.reshape(n, n))
