"""Support and peak projections, the peak criterion, and lattice operations.

The support projection s(x) of an accretive x is the limit of the roots
x^{1/2^k}; the kernel-based oracle (projection onto ker(x)^perp) is exact in
finite dimensions because accretivity forces ker x = ker x* to reduce x
orthogonally.  The peak projection u(x) of a contraction is the limit of the
powers x^{2^k} when it exists; for x in half-F with norm 1 it is the
projection onto ker(x - 1).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .matrices import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    dagger,
    min_real_eig,
    op_norm,
    re_part,
)
from .powers import NotAccretiveError, power

__all__ = [
    "ProjectionResult",
    "support_projection",
    "peak_projection",
    "is_peak_for",
    "join",
    "meet",
    "join_all",
    "hsa_and_ideal",
]


@dataclass
class ProjectionResult:
    proj: np.ndarray
    method: str  # 'iterative' | 'oracle'
    iterations: int
    oracle_residual: Optional[float]  # ||iterative - oracle|| when both ran
    status: str  # 'converged' | 'diverged' | 'zero'
    trace: list = field(default_factory=list)  # per-iteration defect norms


def _round_to_projection(m: np.ndarray) -> np.ndarray:
    """Snap a nearly idempotent, nearly Hermitian matrix to a projection."""
    w, v = np.linalg.eigh(re_part(m))
    keep = w >= 0.5
    if not keep.any():
        return np.zeros_like(m)
    vecs = v[:, keep]
    return vecs @ dagger(vecs)


def _kernel_complement_projection(m: np.ndarray, rel_cut: float = 1e-10) -> np.ndarray:
    """Projection onto ker(m)^perp via singular values."""
    _, s, vh = np.linalg.svd(m)
    if s.size == 0 or s[0] <= 1e-14:
        return np.zeros_like(m)
    vt = vh[s > rel_cut * s[0]]
    return dagger(vt) @ vt


def support_projection(
    x, method: str = "iterative", tol: Tolerances = DEFAULT_TOL
) -> ProjectionResult:
    """Support projection s(x) of an accretive matrix.

    method 'iterative' runs repeated square roots until x^{1/2^k} is nearly
    idempotent and rounds spectrally; 'oracle' projects onto ker(x)^perp;
    'both' runs the iteration and records the distance to the oracle.
    """
    x = as_matrix(x)
    if min_real_eig(x) < -tol.psd_slack:
        raise NotAccretiveError("support projections need accretive input")
    if method not in ("iterative", "oracle", "both"):
        raise ValueError(f"unknown method {method!r}")

    oracle = _kernel_complement_projection(x) if method in ("oracle", "both") else None
    if method == "oracle":
        status = "zero" if op_norm(oracle) <= tol.eq_tol else "converged"
        result = ProjectionResult(oracle, "oracle", 0, None, status)
        _verify_support(result.proj, x, tol)
        return result

    y = x.copy()
    trace: list[float] = []
    status = "diverged"
    iterations = 0
    for k in range(60):
        defect = op_norm(y @ y - y)
        trace.append(float(defect))
        if defect <= tol.iter_tol:
            status = "converged"
            iterations = k
            break
        y = power(y, 0.5, tol=tol).value
    else:
        iterations = 60
    proj = _round_to_projection(y)
    if op_norm(proj) <= tol.eq_tol and status == "converged":
        status = "zero"
    residual = op_norm(proj - oracle) if oracle is not None else None
    result = ProjectionResult(proj, "iterative", iterations, residual, status, trace)
    if status != "diverged":
        _verify_support(result.proj, x, tol)
    return result


def _verify_support(p: np.ndarray, x: np.ndarray, tol: Tolerances) -> None:
    defect = max(op_norm(p @ x - x), op_norm(x @ p - x))
    if defect > 1e-7 * max(1.0, op_norm(x)):
        warnings.warn(
            f"support projection fails p x = x p = x (defect {defect:.2e})",
            RuntimeWarning,
        )


def peak_projection(
    x, method: str = "iterative", tol: Tolerances = DEFAULT_TOL
) -> ProjectionResult:
    """Peak projection u(x) = lim x^{2^k} of a contraction.

    Divergence is a first-class status: for general contractions the limit
    may fail to exist or may be zero.  The oracle (projection onto
    ker(x - 1)) applies to x in half-F, where the eigenvalue 1 sits on the
    boundary circle and reduces orthogonally.
    """
    x = as_matrix(x)
    if op_norm(x) > 1.0 + tol.eq_tol:
        raise ValueError("peak projections need a contraction")
    if method not in ("iterative", "oracle", "both"):
        raise ValueError(f"unknown method {method!r}")

    oracle = None
    if method in ("oracle", "both"):
        eye = np.eye(x.shape[0], dtype=complex)
        if op_norm(eye - 2.0 * x) > 1.0 + tol.psd_slack:
            if method == "oracle":
                raise ValueError("the eigenspace oracle needs x in half-F")
        else:
            oracle = _kernel_complement_projection_of_eigenspace(x)
    if method == "oracle":
        status = "zero" if op_norm(oracle) <= tol.eq_tol else "converged"
        return ProjectionResult(oracle, "oracle", 0, None, status)

    z = x.copy()
    trace: list[float] = []
    status = "diverged"
    iterations = 0
    squarings = min(tol.max_iter, 200)
    for k in range(squarings):
        norm = op_norm(z)
        trace.append(float(norm))
        if norm < 1e-8:
            status = "zero"
            z = np.zeros_like(z)
            iterations = k
            break
        if norm > 10.0:
            break
        defect = op_norm(z @ z - z)
        if defect <= tol.iter_tol:
            status = "converged"
            iterations = k
            break
        z = z @ z
    else:
        iterations = squarings

    proj = _round_to_projection(z) if status == "converged" else np.zeros_like(z)
    if status == "zero":
        proj = np.zeros_like(z)
    if status == "converged":
        # Squaring only sees the powers x^{2^k}; the candidate is a genuine
        # limit of the full power sequence iff it absorbs x on both sides.
        defect = max(op_norm(proj @ x - proj), op_norm(x @ proj - proj))
        if defect > 1e-7 * max(1.0, op_norm(x)):
            status = "diverged"
            proj = np.zeros_like(z)
    residual = op_norm(proj - oracle) if (oracle is not None and status != "diverged") else None
    return ProjectionResult(proj, "iterative", iterations, residual, status, trace)


def _kernel_complement_projection_of_eigenspace(x: np.ndarray) -> np.ndarray:
    eye = np.eye(x.shape[0], dtype=complex)
    _, s, vh = np.linalg.svd(x - eye)
    cut = 1e-10 * max(s[0], 1.0)
    vt = vh[s <= cut]
    if vt.shape[0] == 0:
        return np.zeros_like(x)
    return dagger(vt) @ vt


def is_peak_for(x, q, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Finite-dimensional peak criterion.

    States vanishing on q are exactly the states supported on q^perp, so x
    peaks at q iff the compression of x*x to q^perp has norm strictly below
    one.
    """
    x = as_matrix(x)
    q = as_matrix(q)
    if op_norm(x) > 1.0 + tol.eq_tol:
        raise ValueError("x must be a contraction")
    _require_projection(q)
    if op_norm(q @ x - q) > tol.eq_tol * max(1.0, op_norm(x)):
        raise ValueError("q x = q must hold before testing the peak criterion")
    comp = np.eye(x.shape[0], dtype=complex) - q
    top = float(np.linalg.eigvalsh(comp @ dagger(x) @ x @ comp)[-1])
    return top < 1.0 - tol.psd_slack


def _require_projection(p: np.ndarray, what: str = "input") -> None:
    if op_norm(p @ p - p) > 1e-8 or op_norm(p - dagger(p)) > 1e-8:
        raise ValueError(f"{what} is not an orthogonal projection")


def join(p, q, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Lattice join: support of the accretive sum p + q."""
    p = as_matrix(p)
    q = as_matrix(q)
    _require_projection(p)
    _require_projection(q)
    out = support_projection(p + q, method="oracle", tol=tol).proj
    if min(min_real_eig(out - p), min_real_eig(out - q)) < -tol.psd_slack:
        raise ArithmeticError("join does not dominate its arguments")
    return out


def meet(p, q, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Lattice meet via de Morgan: 1 - ((1-p) v (1-q))."""
    p = as_matrix(p)
    q = as_matrix(q)
    _require_projection(p)
    _require_projection(q)
    eye = np.eye(p.shape[0], dtype=complex)
    return eye - join(eye - p, eye - q, tol)


def join_all(projections, n: Optional[int] = None, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    projections = list(projections)
    if not projections:
        if n is None:
            raise ValueError("empty join needs the ambient dimension")
        return np.zeros((n, n), dtype=complex)
    for p in projections:
        _require_projection(p)
    return support_projection(sum(projections), method="oracle", tol=tol).proj


def hsa_and_ideal(algebra, x, tol: Tolerances = DEFAULT_TOL):
    """The hereditary subalgebra x A x and right ideal x A + C x.

    Verifies D A D inside D and that s(x) is a two-sided identity on D.
    Returns (D, J) as algebras.
    """
    from .algebra import MatrixAlgebra, contains, orthonormalize  # no cycle

    x = as_matrix(x)
    ok, residual = contains(algebra, x, tol)
    if not ok:
        raise ValueError(f"x is not in the algebra (residual {residual:.2e})")
    if min_real_eig(x) < -tol.psd_slack:
        raise NotAccretiveError("hereditary subalgebras here require accretive x")

    n = algebra.ambient_dim
    d_basis = orthonormalize([x @ b @ x for b in algebra.basis])
    j_basis = orthonormalize([x @ b for b in algebra.basis] + [x])
    hsa = MatrixAlgebra(n, d_basis, False, label="xAx")
    ideal = MatrixAlgebra(n, j_basis, False, label="xA+Cx")
    hsa.contains_identity = contains(hsa, np.eye(n), tol)[0]
    ideal.contains_identity = contains(ideal, np.eye(n), tol)[0]

    worst = 0.0
    for di in hsa.basis:
        for b in algebra.basis:
            for dk in hsa.basis:
                prod = di @ b @ dk
                worst = max(worst, op_norm(prod - hsa.project(prod)))
    if worst > 1e-7:
        raise ArithmeticError(f"D A D escapes D (residual {worst:.2e})")

    s = support_projection(x, method="oracle", tol=tol).proj
    for b in hsa.basis:
        if max(op_norm(s @ b - b), op_norm(b @ s - b)) > 1e-7:
            raise ArithmeticError("s(x) is not an identity on the hereditary subalgebra")
    return hsa, ideal
