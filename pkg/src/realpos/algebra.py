"""Finite-dimensional operator algebras A inside M_n.

An algebra is stored as an orthonormal basis under the trace inner product
``<X, Y> = tr(Y* X)``.  Construction is by span closure of words in a set of
generators; membership, unitization, matrix amplification and the largest
unital corner ``q A q`` are all computed against that basis.

Algebra JSON is either ``{"ambient": n, "basis": [matrix, ...]}`` or
``{"generators": [matrix, ...], "mode": "algebra"|"cstar",
"with_identity": bool}`` with matrices in the matrix JSON format.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .matrices import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    dagger,
    frob_norm,
    matrix_from_json,
    matrix_to_json,
    op_norm,
)

__all__ = [
    "MatrixAlgebra",
    "orthonormalize",
    "generate_algebra",
    "contains",
    "identity_of",
    "unitize",
    "a_h",
    "amplify",
    "hermitian_elements",
    "full_algebra",
    "diagonal_algebra",
    "upper_triangular_algebra",
    "block_upper_algebra",
    "span_algebra",
    "algebra_from_name",
    "algebra_to_json",
    "algebra_from_json",
]

RANK_TOL = 1e-10
CLOSURE_TOL = 1e-8


def orthonormalize(mats, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of span(mats) by modified Gram-Schmidt.

    One re-orthogonalization pass; directions whose residual falls below
    ``rank_tol`` (relative to max(1, original norm)) are dropped.  Returns a
    ``(dim, n, n)`` array.
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    if not mats:
        return np.zeros((0, 0, 0), dtype=complex)
    n = mats[0].shape[0]
    rows: list[np.ndarray] = []  # flattened orthonormal vectors
    for m in mats:
        v = m.reshape(-1).copy()
        scale = float(np.linalg.norm(v))
        if scale <= rank_tol:
            continue
        for _ in range(2):
            if rows:
                b = np.array(rows)
                v = v - b.T @ (np.conj(b) @ v)
        r = float(np.linalg.norm(v))
        if r > rank_tol * max(1.0, scale):
            rows.append(v / r)
    if not rows:
        return np.zeros((0, n, n), dtype=complex)
    return np.array(rows).reshape(len(rows), n, n)


@dataclass
class MatrixAlgebra:
    """A span-closed subalgebra of M_n given by an orthonormal basis."""

    ambient_dim: int
    basis: np.ndarray  # (dim, n, n), orthonormal in the trace inner product
    contains_identity: bool
    label: str = ""

    def __post_init__(self):
        self.basis = np.asarray(self.basis, dtype=complex)
        if self.basis.ndim != 3 or self.basis.shape[1:] != (self.ambient_dim,) * 2:
            raise ValueError(
                f"basis shape {self.basis.shape} inconsistent with ambient "
                f"dimension {self.ambient_dim}"
            )

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coords(self, m: np.ndarray) -> np.ndarray:
        """Coefficients of the orthogonal projection of m onto span(basis)."""
        return np.tensordot(np.conj(self.basis), np.asarray(m, complex), axes=2)

    def reconstruct(self, c: np.ndarray) -> np.ndarray:
        if self.dim == 0:
            return np.zeros((self.ambient_dim,) * 2, dtype=complex)
        return np.tensordot(np.asarray(c, complex), self.basis, axes=1)

    def project(self, m: np.ndarray) -> np.ndarray:
        return self.reconstruct(self.coords(m))

    def gram_defect(self) -> float:
        """How far the basis is from orthonormal."""
        if self.dim == 0:
            return 0.0
        flat = self.basis.reshape(self.dim, -1)
        g = np.conj(flat) @ flat.T
        return float(np.abs(g - np.eye(self.dim)).max())

    def closure_defect(self) -> float:
        """Largest residual of a basis product outside the span."""
        worst = 0.0
        for bi in self.basis:
            for bj in self.basis:
                p = bi @ bj
                worst = max(worst, op_norm(p - self.project(p)))
        return worst


def contains(
    a: MatrixAlgebra, m, tol: Tolerances = DEFAULT_TOL
) -> tuple[bool, float]:
    """Membership of m in span(a.basis); returns (verdict, residual)."""
    m = as_matrix(m)
    if m.shape[0] != a.ambient_dim:
        raise ValueError("dimension mismatch between algebra and matrix")
    residual = op_norm(m - a.project(m))
    return residual <= tol.eq_tol * max(1.0, op_norm(m)), residual


def generate_algebra(
    generators,
    mode: str = "algebra",
    with_identity: bool = False,
    tol: Tolerances = DEFAULT_TOL,
    label: str = "",
) -> MatrixAlgebra:
    """Span closure of words in the generators.

    ``mode='cstar'`` also includes the adjoints of the generators, so the
    result is the C*-algebra they generate.  ``with_identity`` adjoins the
    ambient identity.  Stabilization is detected when one full product sweep
    adds no new span dimension.
    """
    if mode not in ("algebra", "cstar"):
        raise ValueError(f"unknown mode {mode!r}")
    gens = [as_matrix(g, "generator") for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].shape[0]
    if any(g.shape[0] != n for g in gens):
        raise ValueError("generators must share one ambient dimension")

    seed = list(gens)
    if mode == "cstar":
        seed += [dagger(g) for g in gens]
    if with_identity:
        seed.append(np.eye(n, dtype=complex))

    basis = orthonormalize(seed)
    while basis.shape[0] < n * n:
        products = np.einsum("aij,bjk->abik", basis, basis).reshape(-1, n, n)
        new = orthonormalize(list(basis) + list(products))
        if new.shape[0] == basis.shape[0]:
            basis = new
            break
        basis = new

    alg = MatrixAlgebra(n, basis, contains_identity=False, label=label)
    alg.contains_identity = contains(alg, np.eye(n), tol)[0]
    return alg


def identity_of(a: MatrixAlgebra, tol: Tolerances = DEFAULT_TOL):
    """The two-sided identity of A, or None.

    Solves the linear system ``e b = b e = b`` over the coordinates of A by
    least squares, then verifies the residuals against ``eq_tol``.
    """
    d = a.dim
    if d == 0:
        return None
    n = a.ambient_dim
    # Columns: action of each basis direction as a left and right multiplier.
    rows = []
    rhs = []
    for b in a.basis:
        left = np.array([bi @ b for bi in a.basis])  # (d, n, n)
        right = np.array([b @ bi for bi in a.basis])
        rows.append(left.reshape(d, -1).T)
        rows.append(right.reshape(d, -1).T)
        rhs.append(b.reshape(-1))
        rhs.append(b.reshape(-1))
    system = np.vstack(rows)
    target = np.concatenate(rhs)
    c, *_ = np.linalg.lstsq(system, target, rcond=None)
    e = a.reconstruct(c)
    worst = max(
        max(op_norm(e @ b - b), op_norm(b @ e - b)) for b in a.basis
    )
    return e if worst <= tol.eq_tol else None


def unitize(a: MatrixAlgebra, tol: Tolerances = DEFAULT_TOL) -> MatrixAlgebra:
    """Adjoin the ambient identity; idempotent when I is already in A."""
    n = a.ambient_dim
    basis = orthonormalize(list(a.basis) + [np.eye(n, dtype=complex)])
    label = a.label + "^1" if a.label and not a.contains_identity else a.label
    return MatrixAlgebra(n, basis, contains_identity=True, label=label)


def amplify(a: MatrixAlgebra, k: int, tol: Tolerances = DEFAULT_TOL) -> MatrixAlgebra:
    """The algebra of k x k block matrices with blocks in A."""
    if k <= 0:
        raise ValueError("k must be a positive integer")
    n = a.ambient_dim
    if k * n > 64:
        raise ValueError(f"amplified dimension {k * n} exceeds the size cap 64")
    units = np.zeros((k, k, k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            units[i, j, i, j] = 1.0
    basis = [np.kron(units[i, j], b) for i in range(k) for j in range(k) for b in a.basis]
    if not basis:
        return MatrixAlgebra(k * n, np.zeros((0, k * n, k * n), complex), False, a.label)
    return MatrixAlgebra(
        k * n,
        np.array(basis),
        contains_identity=a.contains_identity,
        label=f"M_{k}({a.label})" if a.label else "",
    )


def hermitian_elements(a: MatrixAlgebra) -> list[np.ndarray]:
    """A real basis of {x in A : x = x*}."""
    d = a.dim
    if d == 0:
        return []
    # Real-linear map u -> vec(x(u) - x(u)*) on the 2d real coordinates.
    cols = []
    for j in range(d):
        for direction in (a.basis[j], 1j * a.basis[j]):
            v = (direction - dagger(direction)).reshape(-1)
            cols.append(np.concatenate([v.real, v.imag]))
    sys = np.array(cols).T  # (2n^2, 2d)
    _, s, vt = np.linalg.svd(sys)
    null = [vt[i] for i in range(vt.shape[0]) if i >= len(s) or s[i] <= RANK_TOL * max(1.0, s[0] if len(s) else 1.0)]
    out = []
    for u in null:
        x = a.reconstruct(u[:d] + 1j * u[d:])
        x = (x + dagger(x)) / 2.0
        if frob_norm(x) > 1e-8:
            out.append(x / frob_norm(x))
    return out


def _spectral_projection_candidates(h: np.ndarray) -> list[np.ndarray]:
    """Projections onto the upper eigenspaces of a Hermitian matrix, one per
    spectral gap (both signs of h are worth passing in)."""
    w, v = np.linalg.eigh(h)
    cands = []
    for i in range(len(w) - 1):
        if w[i + 1] - w[i] > 1e-8 and w[i + 1] > 1e-8:
            vecs = v[:, i + 1:]
            cands.append(vecs @ dagger(vecs))
    return cands


def _accretive_samples(
    a: MatrixAlgebra,
    rng: np.random.Generator,
    directions: int,
    steps: int,
    keep_slack: float,
) -> list[np.ndarray]:
    """Projected subgradient ascent on lambda_min(x + x*) over the unit ball
    of A's coordinates; keeps end points that are accretive up to
    ``keep_slack`` and not numerically zero."""
    d = a.dim
    if d == 0 or directions == 0:
        return []
    c = rng.standard_normal((directions, d)) + 1j * rng.standard_normal((directions, d))
    c /= np.linalg.norm(c, axis=1)[:, None]
    adj = np.conj(a.basis).transpose(0, 2, 1)  # b_j* for each basis direction
    herm_dirs = a.basis + adj
    skew_dirs = 1j * (a.basis - adj)
    for k in range(steps):
        x = np.tensordot(c, a.basis, axes=1)  # (directions, n, n)
        h = x + np.conj(x).transpose(0, 2, 1)
        w, v = np.linalg.eigh(h)
        bottom = v[:, :, 0]  # (directions, n)
        # gradient of lambda_min wrt Re c_j and Im c_j
        g_re = np.einsum("si,jik,sk->sj", np.conj(bottom), herm_dirs, bottom).real
        g_im = np.einsum("si,jik,sk->sj", np.conj(bottom), skew_dirs, bottom).real
        g = g_re + 1j * g_im
        gn = np.maximum(np.linalg.norm(g, axis=1), 1e-14)
        step = 0.5 / (1.0 + 0.03 * k)
        c = c + step * g / gn[:, None]
        cn = np.linalg.norm(c, axis=1)
        c[cn > 1.0] /= cn[cn > 1.0, None]
    x = np.tensordot(c, a.basis, axes=1)
    h = x + np.conj(x).transpose(0, 2, 1)
    margins = np.linalg.eigvalsh(h)[:, 0]
    out = []
    for i in range(directions):
        if margins[i] >= -keep_slack and frob_norm(x[i]) >= 1e-4:
            out.append(x[i])
    return out


def _support_of(m: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto ker(m)^perp via SVD."""
    u, s, vh = np.linalg.svd(m)
    if s.size == 0 or s[0] <= 1e-14:
        return np.zeros_like(m)
    keep = s > 1e-10 * s[0]
    vt = vh[keep]
    return dagger(vt) @ vt


def _snap_to_algebra_projection(
    a: MatrixAlgebra, q_raw: np.ndarray, tol: Tolerances
):
    """Round a candidate projection into A: project onto the span, then snap
    eigenvalues across each spectral gap and keep the largest projection that
    verifies membership and idempotency."""
    direct_ok, _ = contains(a, q_raw, tol)
    g = a.project(q_raw)
    g = (g + dagger(g)) / 2.0
    w, v = np.linalg.eigh(g)
    thresholds = [0.5]
    for i in range(len(w) - 1):
        if w[i + 1] - w[i] > 1e-6:
            thresholds.append((w[i] + w[i + 1]) / 2.0)
    best = None
    for t in thresholds:
        keep = w > t
        if not keep.any():
            continue
        vecs = v[:, keep]
        p = vecs @ dagger(vecs)
        ok, res = contains(a, p, tol)
        if not ok and res > 1e-7 * max(1.0, op_norm(p)):
            continue
        if op_norm(p @ p - p) > 1e-8 or op_norm(p - dagger(p)) > 1e-8:
            continue
        if best is None or np.trace(p).real > np.trace(best).real + 0.5:
            best = p
    if best is None and direct_ok and op_norm(q_raw @ q_raw - q_raw) <= 1e-8:
        best = (q_raw + dagger(q_raw)) / 2.0
    return best


def a_h(
    a: MatrixAlgebra,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    directions: int = 64,
    steps: int = 500,
) -> tuple[MatrixAlgebra, np.ndarray]:
    """Largest unital corner of A: returns (A_H, q) with A_H = q A q.

    The projection q is assembled as the join of supports of sampled
    accretive elements of A together with spectral projections of Hermitian
    elements of A, then snapped back into A and verified.  q is certified as
    a projection in A acting as an identity on every accretive sample; its
    maximality is a lower-bound claim only.
    """
    n = a.ambient_dim
    zero = np.zeros((n, n), dtype=complex)
    if a.dim == 0:
        return MatrixAlgebra(n, np.zeros((0, n, n), complex), False, a.label + "_H"), zero

    rng = np.random.default_rng(seed)

    # Deterministic candidates: spectral projections of Hermitian elements
    # of A that happen to lie in A.  Any projection in A is the support of
    # an accretive element of A (itself), so these belong in the join.
    proj_candidates = []
    for h in hermitian_elements(a):
        for sgn in (h, -h):
            for p in _spectral_projection_candidates(sgn):
                ok, _ = contains(a, p, tol)
                if ok and op_norm(p @ p - p) <= 1e-8:
                    proj_candidates.append(p)

    # Sampled accretive elements, in rounds; stop when the rank of the
    # snapped join is stable across a full round.
    samples: list[np.ndarray] = []
    keep_slack = 1e-3
    per_round = max(1, directions // 4)
    q_best = None
    last_rank = -1
    for _ in range(4):
        samples += _accretive_samples(a, rng, per_round, steps, keep_slack)
        pool = proj_candidates + [_support_of(x) for x in samples]
        if not pool:
            break
        q_raw = _support_of(sum(pool))
        q_cand = _snap_to_algebra_projection(a, q_raw, tol)
        if q_cand is not None:
            q_best = q_cand
            rank = int(round(np.trace(q_cand).real))
            if rank == last_rank:
                break
            last_rank = rank

    if q_best is None:
        if not samples and not proj_candidates:
            warnings.warn(
                "accretive-element search found nothing and the algebra "
                "contains no detectable projection; returning q = 0",
                RuntimeWarning,
            )
        q_best = zero

    # q must act as an identity on the accretive samples (loose tolerance:
    # the samples themselves are only accretive up to keep_slack).
    act_tol = 10.0 * np.sqrt(keep_slack)
    for x in samples:
        defect = max(op_norm(q_best @ x - x), op_norm(x @ q_best - x))
        if defect > act_tol * max(1.0, op_norm(x)):
            warnings.warn(
                f"computed q fails to act as identity on an accretive sample "
                f"(defect {defect:.2e}); q may undershoot",
                RuntimeWarning,
            )
            break

    corner = orthonormalize([q_best @ b @ q_best for b in a.basis])
    ah = MatrixAlgebra(
        n,
        corner,
        contains_identity=bool(op_norm(q_best - np.eye(n)) <= tol.eq_tol),
        label=(a.label + "_H") if a.label else "",
    )
    return ah, q_best


# -- canned algebras ---------------------------------------------------------


def _units(n: int, pairs) -> np.ndarray:
    basis = []
    for i, j in pairs:
        e = np.zeros((n, n), dtype=complex)
        e[i, j] = 1.0
        basis.append(e)
    return np.array(basis)


def full_algebra(n: int) -> MatrixAlgebra:
    pairs = [(i, j) for i in range(n) for j in range(n)]
    return MatrixAlgebra(n, _units(n, pairs), True, f"full:{n}")


def diagonal_algebra(n: int) -> MatrixAlgebra:
    return MatrixAlgebra(n, _units(n, [(i, i) for i in range(n)]), True, f"diag:{n}")


def upper_triangular_algebra(n: int) -> MatrixAlgebra:
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    return MatrixAlgebra(n, _units(n, pairs), True, f"upper:{n}")


def block_upper_algebra(n1: int, n2: int) -> MatrixAlgebra:
    n = n1 + n2
    pairs = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if not (i >= n1 and j < n1)
    ]
    return MatrixAlgebra(n, _units(n, pairs), True, f"blockupper:{n1},{n2}")


def span_algebra(mats, tol: Tolerances = DEFAULT_TOL, label: str = "span") -> MatrixAlgebra:
    """Algebra from an explicit spanning set; the span must be product-closed."""
    basis = orthonormalize([as_matrix(m) for m in mats])
    if basis.shape[0] == 0:
        raise ValueError("span is empty")
    alg = MatrixAlgebra(basis.shape[1], basis, False, label)
    defect = alg.closure_defect()
    if defect > CLOSURE_TOL:
        raise ValueError(
            f"span is not closed under multiplication (residual {defect:.2e}); "
            "use generate_algebra instead"
        )
    alg.contains_identity = contains(alg, np.eye(alg.ambient_dim), tol)[0]
    return alg


def algebra_from_name(name: str) -> MatrixAlgebra:
    """Resolve canned names: full:n, upper:n, diag:n, blockupper:n1,n2."""
    kind, _, arg = name.partition(":")
    try:
        if kind == "full":
            return full_algebra(int(arg))
        if kind == "upper":
            return upper_triangular_algebra(int(arg))
        if kind == "diag":
            return diagonal_algebra(int(arg))
        if kind == "blockupper":
            n1, n2 = (int(s) for s in arg.split(","))
            return block_upper_algebra(n1, n2)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed algebra name {name!r}") from exc
    raise ValueError(f"unknown algebra name {name!r}")


def algebra_to_json(a: MatrixAlgebra) -> dict:
    return {
        "ambient": a.ambient_dim,
        "basis": [matrix_to_json(b) for b in a.basis],
        "contains_identity": a.contains_identity,
        "label": a.label,
    }


def algebra_from_json(data: dict, tol: Tolerances = DEFAULT_TOL) -> MatrixAlgebra:
    if "basis" in data:
        mats = [matrix_from_json(m) for m in data["basis"]]
        return span_algebra(mats, tol, label=data.get("label", "span"))
    if "generators" in data:
        gens = [matrix_from_json(m) for m in data["generators"]]
        return generate_algebra(
            gens,
            mode=data.get("mode", "algebra"),
            with_identity=bool(data.get("with_identity", False)),
            tol=tol,
        )
    raise ValueError("algebra JSON needs either 'basis' or 'generators'")
