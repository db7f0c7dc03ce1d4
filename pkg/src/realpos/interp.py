"""Convex spectral feasibility over an algebra, and the interpolation solvers.

The engine: the unknown ranges over the real coordinates of a
:class:`~realpos.algebra.MatrixAlgebra`; constraints are affine equalities
``sum_i P_i a Q_i = R`` plus spectral sets (Hermitian-valued affine maps
required PSD, and norm caps on affine maps).  Feasible points are searched by
Dykstra-corrected alternating projections: exact least-squares projection
onto the affine set, eigenvalue clipping for PSD floors, singular-value
clipping for norm caps, each followed by a least-squares pullback into the
coordinate parametrization.  Verdicts are one-sided: ``feasible`` (all
residuals within tolerance) or ``unconverged`` -- the method cannot certify
infeasibility.

On top of the engine sit the interpolation solvers (domination,
half-F decomposition, near-positive interpolation, Urysohn solvers in both
the in-algebra and ambient flavours, the strict Urysohn solver with
peak/support verification, peak interpolation, and the numerical-range
constrained Tietze lift).  Every solver re-verifies its output with
independent cone/projection/norm checks before returning it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import MatrixAlgebra, contains, generate_algebra, identity_of, unitize
from .cones import f_membership
from .matrices import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    dagger,
    im_part,
    min_real_eig,
    op_norm,
    re_part,
)
from .projections import peak_projection, support_projection

__all__ = [
    "SOLVER_TOL",
    "AffineTerm",
    "MatrixAffine",
    "AffineEquality",
    "HermFloor",
    "NormCap",
    "FeasibilityProblem",
    "FeasibilitySolution",
    "ConvexRegion",
    "UnconvergedError",
    "VerificationFailedError",
    "solve_feasibility",
    "dominate",
    "decompose",
    "interp_np",
    "urysohn_interpolate",
    "strict_urysohn",
    "peak_interpolate",
    "tietze_lift",
]

SOLVER_TOL = 1e-6


class UnconvergedError(RuntimeError):
    """The alternating-projection search did not reach a feasible point."""

    def __init__(self, message: str, solution: Optional["FeasibilitySolution"] = None):
        super().__init__(message)
        self.solution = solution


class VerificationFailedError(RuntimeError):
    """A solver output failed its independent post-verification."""


# -- constraint encoding -----------------------------------------------------


@dataclass(frozen=True)
class AffineTerm:
    """One sandwich term P a Q (or P a* Q when conj is set)."""

    left: np.ndarray
    right: np.ndarray
    conj: bool = False


@dataclass
class MatrixAffine:
    """Matrix-valued real-affine map a -> const + sum of sandwich terms."""

    terms: list
    const: np.ndarray

    def __call__(self, a: np.ndarray) -> np.ndarray:
        out = self.const.astype(complex).copy()
        for t in self.terms:
            arg = dagger(a) if t.conj else a
            out = out + t.left @ arg @ t.right
        return out

    def linear(self, a: np.ndarray) -> np.ndarray:
        return self(a) - self.const


@dataclass
class AffineEquality:
    map: MatrixAffine
    target: np.ndarray
    label: str


@dataclass
class HermFloor:
    """Constraint map(a) >= 0; the map must be Hermitian-valued."""

    map: MatrixAffine
    label: str


@dataclass
class NormCap:
    """Constraint ||map(a)|| <= cap in operator norm."""

    map: MatrixAffine
    cap: float
    label: str


@dataclass
class FeasibilityProblem:
    algebra: MatrixAlgebra
    equalities: list = field(default_factory=list)
    floors: list = field(default_factory=list)
    caps: list = field(default_factory=list)
    solver_tol: float = SOLVER_TOL

    def __post_init__(self):
        if not (self.equalities or self.floors or self.caps):
            raise ValueError("a feasibility problem needs at least one constraint")
        n = self.algebra.ambient_dim
        probe = np.zeros((n, n), dtype=complex)
        for con in [*self.equalities, *self.floors, *self.caps]:
            value = con.map(probe)
            if isinstance(con, AffineEquality) and value.shape != con.target.shape:
                raise ValueError(f"constraint {con.label!r} has inconsistent shapes")


@dataclass
class FeasibilitySolution:
    value: np.ndarray
    residuals: dict
    verdict: str  # 'feasible' | 'unconverged'
    iterations: int

    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0


# -- realification helpers ---------------------------------------------------


def _cvec(m: np.ndarray) -> np.ndarray:
    flat = np.asarray(m, complex).reshape(-1)
    return np.concatenate([flat.real, flat.imag])


def _cunvec(v: np.ndarray, shape) -> np.ndarray:
    half = v.size // 2
    return (v[:half] + 1j * v[half:]).reshape(shape)


def _jacobian(affine: MatrixAffine, algebra: MatrixAlgebra) -> np.ndarray:
    """Real Jacobian of the linear part over the 2*dim real coordinates."""
    d = algebra.dim
    cols = []
    for j in range(d):
        cols.append(_cvec(affine.linear(algebra.basis[j])))
    for j in range(d):
        cols.append(_cvec(affine.linear(1j * algebra.basis[j])))
    if not cols:
        probe = affine.linear(np.zeros((algebra.ambient_dim,) * 2, complex))
        return np.zeros((2 * probe.size, 0))
    return np.array(cols).T


class _AffineSet:
    """Exact projector onto the joint equality set in coordinate space."""

    def __init__(self, problem: FeasibilityProblem):
        rows, rhs = [], []
        for eq in problem.equalities:
            rows.append(_jacobian(eq.map, problem.algebra))
            rhs.append(_cvec(eq.target - eq.map.const))
        self.t = np.vstack(rows)
        self.rhs = np.concatenate(rhs)
        u, s, vt = np.linalg.svd(self.t, full_matrices=False)
        keep = s > 1e-12 * (s[0] if s.size else 1.0)
        self.pinv = (vt[keep].T / s[keep]) @ u[:, keep].T

    def project(self, u: np.ndarray) -> np.ndarray:
        return u - self.pinv @ (self.t @ u - self.rhs)


class _SpectralSet:
    """Clip-then-pullback projector for one floor or cap.

    One clip step alone is not a projection onto {u : constraint holds} when
    the clipped matrix leaves the affine range of the constraint map, so the
    clip/pullback pair is iterated (alternating projections between the
    spectral set and the affine range in constraint space) until the iterate
    lands in the set.
    """

    def __init__(self, con, problem: FeasibilityProblem):
        self.con = con
        self.is_floor = isinstance(con, HermFloor)
        self.jac = _jacobian(con.map, problem.algebra)
        self.const = _cvec(con.map.const)
        self.shape = con.map.const.shape
        self.inner_tol = 0.25 * problem.solver_tol
        u, s, vt = np.linalg.svd(self.jac, full_matrices=False)
        keep = s > 1e-12 * (s[0] if s.size else 1.0)
        self.pinv = (vt[keep].T / s[keep]) @ u[:, keep].T

    def value(self, u: np.ndarray) -> np.ndarray:
        return _cunvec(self.jac @ u + self.const, self.shape)

    def _clip(self, m: np.ndarray):
        """Nearest in-set matrix, or None when m already satisfies the set."""
        if self.is_floor:
            h = (m + dagger(m)) / 2.0
            w, v = np.linalg.eigh(h)
            if w[0] >= -self.inner_tol:
                return None
            return (v * np.maximum(w, 0.0)) @ dagger(v)
        sv_l, sv, sv_r = np.linalg.svd(m)
        if sv.size == 0 or sv[0] <= self.con.cap + self.inner_tol:
            return None
        return (sv_l * np.minimum(sv, self.con.cap)) @ sv_r

    def project(self, u: np.ndarray) -> np.ndarray:
        for _ in range(40):
            flat = self.jac @ u + self.const
            clipped = self._clip(_cunvec(flat, self.shape))
            if clipped is None:
                break
            u = u + self.pinv @ (_cvec(clipped) - flat)
        return u

    def residual(self, u: np.ndarray) -> float:
        m = self.value(u)
        if self.is_floor:
            return max(0.0, -min_real_eig(m))
        return max(0.0, op_norm(m) - self.con.cap)


def _residuals(problem, affine_set, spectral_sets, u) -> dict:
    out = {}
    if affine_set is not None:
        for eq in problem.equalities:
            a = problem.algebra.reconstruct(_coords_from_real(u, problem.algebra.dim))
            out[eq.label] = op_norm(eq.map(a) - eq.target)
    for s in spectral_sets:
        out[s.con.label] = s.residual(u)
    return out


def _coords_from_real(u: np.ndarray, d: int) -> np.ndarray:
    return u[:d] + 1j * u[d:]


def solve_feasibility(
    problem: FeasibilityProblem,
    seed: int = 0,
    max_rounds: int = 2000,
    warm_start=None,
    restarts: int = 2,
) -> FeasibilitySolution:
    """Dykstra-corrected alternating projections over the constraint sets.

    Deterministic given ``(problem, seed, warm_start)``.  Random restarts
    kick in on stagnation.  The verdict is ``feasible`` only when every
    residual is within ``problem.solver_tol``; otherwise ``unconverged``
    with the best residuals seen.
    """
    alg = problem.algebra
    d = alg.dim
    affine_set = _AffineSet(problem) if problem.equalities else None
    spectral_sets = [_SpectralSet(c, problem) for c in [*problem.floors, *problem.caps]]
    sets: list = ([affine_set] if affine_set is not None else []) + spectral_sets

    rng = np.random.default_rng(seed)
    if warm_start is not None:
        c0 = alg.coords(as_matrix(warm_start))
        u = np.concatenate([c0.real, c0.imag])
    else:
        u = np.zeros(2 * d)

    memory = [np.zeros_like(u) for _ in sets]
    best_u = u.copy()
    best_res = np.inf
    since_best = 0
    rounds_used = 0
    restarts_left = restarts

    for rounds_used in range(1, max_rounds + 1):
        for i, s in enumerate(sets):
            y = u + memory[i]
            u_new = s.project(y)
            memory[i] = y - u_new
            u = u_new
        if rounds_used <= 5 or rounds_used % 5 == 0 or rounds_used == max_rounds:
            res = _residuals(problem, affine_set, spectral_sets, u)
            worst = max(res.values()) if res else 0.0
            if worst < best_res:
                best_res, best_u, since_best = worst, u.copy(), 0
            else:
                since_best += 5
            if worst <= 0.5 * problem.solver_tol:
                break
            if since_best > 300 and restarts_left > 0:
                restarts_left -= 1
                since_best = 0
                u = best_u + 0.1 * rng.standard_normal(u.shape)
                memory = [np.zeros_like(u) for _ in sets]

    # Final polish: land exactly on the equality flat if that helps.
    candidates = [best_u, u]
    if affine_set is not None:
        candidates += [affine_set.project(best_u), affine_set.project(u)]
    scored = []
    for cand in candidates:
        res = _residuals(problem, affine_set, spectral_sets, cand)
        scored.append((max(res.values()) if res else 0.0, cand, res))
    worst, u, res = min(scored, key=lambda t: t[0])

    value = alg.reconstruct(_coords_from_real(u, d))
    verdict = "feasible" if worst <= problem.solver_tol else "unconverged"
    return FeasibilitySolution(value, res, verdict, rounds_used)


# -- constraint builders -----------------------------------------------------


def _eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def _identity_equality(left: np.ndarray, right: np.ndarray, target, label: str) -> AffineEquality:
    n = left.shape[0]
    amap = MatrixAffine([AffineTerm(left, right)], np.zeros((left.shape[0], right.shape[1]), complex))
    return AffineEquality(amap, np.asarray(target, complex), label)


def _half_f_cap(n: int, label: str = "1-2a in ball") -> NormCap:
    amap = MatrixAffine([AffineTerm(-2.0 * _eye(n), _eye(n))], _eye(n))
    return NormCap(amap, 1.0, label)


def _ball_cap(n: int, label: str = "a in ball") -> NormCap:
    amap = MatrixAffine([AffineTerm(_eye(n), _eye(n))], np.zeros((n, n), complex))
    return NormCap(amap, 1.0, label)


def _re_floor(z: np.ndarray, s: np.ndarray, label: str) -> HermFloor:
    n = z.shape[1]
    amap = MatrixAffine(
        [AffineTerm(z / 2.0, _eye(n)), AffineTerm(_eye(z.shape[0]) / 2.0, dagger(z), conj=True)],
        np.asarray(s, complex),
    )
    return HermFloor(amap, label)


def _sector_floors(n: int, eps: float, cap: float = 1.0) -> list:
    """Rotated-accretivity pair forcing ||Im a|| below eps for ||a|| <= cap."""
    rho = float(np.arcsin(min(1.0, 0.9 * eps / max(cap, 1e-12))))
    phi = np.pi / 2.0 - rho
    zero = np.zeros((n, n), complex)
    return [
        _re_floor(np.exp(1j * phi) * _eye(n), zero, "sector+"),
        _re_floor(np.exp(-1j * phi) * _eye(n), zero, "sector-"),
    ]


def _schur_floor(s1: np.ndarray, s2: np.ndarray, z: np.ndarray, w: np.ndarray, label: str) -> HermFloor:
    """Block floor [[s1, (z a + w)*], [z a + w, s2]] >= 0."""
    n = z.shape[1]
    top = np.vstack([_eye(n), np.zeros((n, n), complex)])  # embeds rows 0..n
    bot = np.vstack([np.zeros((n, n), complex), _eye(n)])
    left = np.hstack([_eye(n), np.zeros((n, n), complex)])  # embeds cols 0..n
    right = np.hstack([np.zeros((n, n), complex), _eye(n)])
    const = np.block([[s1, dagger(w)], [w, s2]]).astype(complex)
    terms = [
        AffineTerm(bot @ z, left),  # z a in the lower-left block
        AffineTerm(top, dagger(z) @ right, conj=True),  # a* z* upper-right
    ]
    return HermFloor(MatrixAffine(terms, const), label)


def _verify(checks: list, what: str) -> None:
    bad = [f"{label}: {value:.3e}" for label, value, ok in checks if not ok]
    if bad:
        raise VerificationFailedError(f"{what} failed post-verification: " + "; ".join(bad))


def _require_unital(a: MatrixAlgebra, tol: Tolerances) -> np.ndarray:
    e = identity_of(a, tol)
    if e is None:
        raise ValueError("this solver needs a unital algebra")
    return e


def _require_projection_in(a: Optional[MatrixAlgebra], p: np.ndarray, name: str, tol: Tolerances) -> None:
    if op_norm(p @ p - p) > 1e-8 or op_norm(p - dagger(p)) > 1e-8:
        raise ValueError(f"{name} is not an orthogonal projection")
    if a is not None:
        ok, res = contains(a, p, tol)
        if not ok:
            raise ValueError(f"{name} is not in the algebra (residual {res:.2e})")


# -- theorem solvers ---------------------------------------------------------


def dominate(
    a: MatrixAlgebra,
    b,
    eps: float = 1e-2,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> np.ndarray:
    """Find a nearly positive element of half-F dominating b.

    ``b`` must be Hermitian PSD in the C*-algebra generated by A with
    ||b|| < 1; the output x satisfies ||1 - 2x|| <= 1, Re(x) >= b (both
    within solver_tol) and ||Im x|| < eps.
    """
    b = as_matrix(b)
    e = _require_unital(a, tol)
    n = a.ambient_dim
    if op_norm(b - dagger(b)) > tol.eq_tol * max(1.0, op_norm(b)):
        raise ValueError("b must be Hermitian")
    if min_real_eig(b) < -tol.psd_slack:
        raise ValueError("b must be positive semidefinite")
    if op_norm(b) >= 1.0 - tol.eq_tol:
        raise ValueError("domination needs ||b|| < 1 strictly")
    cstar = generate_algebra(list(a.basis), mode="cstar", tol=tol)
    ok, res = contains(cstar, b, tol)
    if not ok:
        raise ValueError(f"b is not in C*(A) (residual {res:.2e})")

    problem = FeasibilityProblem(
        algebra=a,
        floors=[_re_floor(_eye(n), -b, "Re(a) >= b"), *_sector_floors(n, eps)],
        caps=[_half_f_cap(n)],
    )
    warm = 0.5 * (1.0 + op_norm(b)) * e
    sol = solve_feasibility(problem, seed=seed, warm_start=warm)
    if sol.verdict != "feasible":
        raise UnconvergedError("domination solve unconverged", sol)
    x = sol.value
    fm = f_membership(x, tol)
    checks = [
        ("half-F", -fm.half_f_gap, fm.half_f_gap >= -SOLVER_TOL),
        ("Re(a)-b PSD", -min_real_eig(x - b), min_real_eig(x - b) >= -SOLVER_TOL),
        ("Im small", op_norm(im_part(x)), op_norm(im_part(x)) < eps),
    ]
    _verify(checks, "dominate")
    return x


def decompose(
    a: MatrixAlgebra, b, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Write b = x - y with both x and y in half-F of A (||b|| < 1)."""
    b = as_matrix(b)
    e = _require_unital(a, tol)
    n = a.ambient_dim
    ok, res = contains(a, b, tol)
    if not ok:
        raise ValueError(f"b is not in the algebra (residual {res:.2e})")
    if op_norm(b) >= 1.0 - tol.eq_tol:
        raise ValueError("decomposition needs ||b|| < 1 strictly")

    # One unknown x; y = x - b inherits membership in A.
    shifted = MatrixAffine([AffineTerm(-2.0 * _eye(n), _eye(n))], _eye(n) + 2.0 * b)
    problem = FeasibilityProblem(
        algebra=a,
        caps=[_half_f_cap(n), NormCap(shifted, 1.0, "1-2(x-b) in ball")],
    )
    warm = (e + b) / 2.0
    sol = solve_feasibility(problem, seed=seed, warm_start=warm)
    if sol.verdict != "feasible":
        raise UnconvergedError("decomposition solve unconverged", sol)
    x = sol.value
    y = x - b
    fx = f_membership(x, tol)
    fy = f_membership(y, tol)
    checks = [
        ("x in half-F", -fx.half_f_gap, fx.half_f_gap >= -SOLVER_TOL),
        ("y in half-F", -fy.half_f_gap, fy.half_f_gap >= -SOLVER_TOL),
        ("b = x - y", op_norm(b - (x - y)), op_norm(b - (x - y)) <= SOLVER_TOL),
    ]
    _verify(checks, "decompose")
    return x, y


def interp_np(
    a: MatrixAlgebra,
    c,
    near_eps: float = 1e-2,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> np.ndarray:
    """Nearly positive x in half-F with |1 - x|^2 <= 1 - c (Schur encoded)."""
    c = as_matrix(c)
    e = _require_unital(a, tol)
    n = a.ambient_dim
    if op_norm(c - dagger(c)) > tol.eq_tol * max(1.0, op_norm(c)):
        raise ValueError("c must be Hermitian")
    if min_real_eig(c) < -tol.psd_slack:
        raise ValueError("c must be positive semidefinite")
    if op_norm(c) >= 1.0 - tol.eq_tol:
        raise ValueError("need ||c|| < 1 strictly")
    cstar = generate_algebra(list(a.basis), mode="cstar", tol=tol)
    ok, res = contains(cstar, c, tol)
    if not ok:
        raise ValueError(f"c is not in C*(A) (residual {res:.2e})")

    block = _schur_floor(_eye(n) - c, _eye(n), -_eye(n), _eye(n), "|1-a|^2 <= 1-c")
    problem = FeasibilityProblem(
        algebra=a,
        floors=[block, _re_floor(_eye(n), -c, "Re(a) >= c"), *_sector_floors(n, near_eps)],
        caps=[_half_f_cap(n)],
    )
    warm = 0.5 * (1.0 + op_norm(c)) * e
    sol = solve_feasibility(problem, seed=seed, warm_start=warm)
    if sol.verdict != "feasible":
        raise UnconvergedError("near-positive interpolation unconverged", sol)
    x = sol.value
    fm = f_membership(x, tol)
    big = np.block(
        [[_eye(n) - c, dagger(_eye(n) - x)], [_eye(n) - x, _eye(n)]]
    )
    checks = [
        ("half-F", -fm.half_f_gap, fm.half_f_gap >= -SOLVER_TOL),
        ("Schur block PSD", -min_real_eig(big), min_real_eig(big) >= -SOLVER_TOL),
        ("Im small", op_norm(im_part(x)), op_norm(im_part(x)) < near_eps),
    ]
    _verify(checks, "interp_np")
    return x


def urysohn_interpolate(
    a: MatrixAlgebra,
    q,
    u,
    eps: float = 1e-2,
    near_eps: float = 1e-2,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> np.ndarray:
    """Nearly positive x in half-F with x q = q x = q, tied to u.

    When u lies in A the output satisfies x u = u x = x exactly (within
    solver_tol); when u is only an ambient projection dominating q, the
    products x(1-u) and (1-u)x are made smaller than eps.
    """
    q = as_matrix(q)
    u = as_matrix(u)
    n = a.ambient_dim
    _require_projection_in(a, q, "q", tol)
    _require_projection_in(None, u, "u", tol)
    if min_real_eig(u - q) < -tol.psd_slack:
        raise ValueError("u must dominate q")
    u_in_algebra = contains(a, u, tol)[0]

    eye = _eye(n)
    equalities = [
        _identity_equality(eye, q, q, "a q = q"),
        _identity_equality(q, eye, q, "q a = q"),
    ]
    caps = [_half_f_cap(n)]
    if u_in_algebra:
        au = MatrixAffine([AffineTerm(eye, u), AffineTerm(-eye, eye)], np.zeros((n, n), complex))
        ua = MatrixAffine([AffineTerm(u, eye), AffineTerm(-eye, eye)], np.zeros((n, n), complex))
        equalities += [
            AffineEquality(au, np.zeros((n, n), complex), "a u = a"),
            AffineEquality(ua, np.zeros((n, n), complex), "u a = a"),
        ]
    else:
        comp = eye - u
        caps += [
            NormCap(MatrixAffine([AffineTerm(eye, comp)], np.zeros((n, n), complex)), 0.9 * eps, "a(1-u) small"),
            NormCap(MatrixAffine([AffineTerm(comp, eye)], np.zeros((n, n), complex)), 0.9 * eps, "(1-u)a small"),
        ]
    problem = FeasibilityProblem(
        algebra=a, equalities=equalities, floors=_sector_floors(n, near_eps), caps=caps
    )
    sol = solve_feasibility(problem, seed=seed, warm_start=q)
    if sol.verdict != "feasible":
        raise UnconvergedError("Urysohn solve unconverged", sol)
    x = sol.value
    fm = f_membership(x, tol)
    checks = [
        ("half-F", -fm.half_f_gap, fm.half_f_gap >= -SOLVER_TOL),
        ("x q = q", op_norm(x @ q - q), op_norm(x @ q - q) <= SOLVER_TOL),
        ("q x = q", op_norm(q @ x - q), op_norm(q @ x - q) <= SOLVER_TOL),
        ("Im small", op_norm(im_part(x)), op_norm(im_part(x)) < near_eps),
    ]
    if u_in_algebra:
        checks += [
            ("x u = x", op_norm(x @ u - x), op_norm(x @ u - x) <= SOLVER_TOL),
            ("u x = x", op_norm(u @ x - x), op_norm(u @ x - x) <= SOLVER_TOL),
        ]
    else:
        comp = eye - u
        checks += [
            ("x(1-u) < eps", op_norm(x @ comp), op_norm(x @ comp) < eps),
            ("(1-u)x < eps", op_norm(comp @ x), op_norm(comp @ x) < eps),
        ]
    _verify(checks, "urysohn_interpolate")
    return x


def _verify_strict_urysohn(a, q, p, x, tol) -> list:
    fm = f_membership(x, tol)
    peak = peak_projection(x, method="iterative", tol=tol)
    supp = support_projection(x, method="iterative", tol=tol)
    eye = _eye(x.shape[0])
    prod_supp = support_projection(x @ (eye - x), method="oracle", tol=tol)
    checks = [
        ("in algebra", contains(a, x, tol)[1], contains(a, x, tol)[0]),
        ("half-F", -fm.half_f_gap, fm.half_f_gap >= -SOLVER_TOL),
        ("x q = q", op_norm(x @ q - q), op_norm(x @ q - q) <= SOLVER_TOL),
        ("q x = q", op_norm(q @ x - q), op_norm(q @ x - q) <= SOLVER_TOL),
        ("x p = x", op_norm(x @ p - x), op_norm(x @ p - x) <= SOLVER_TOL),
        ("p x = x", op_norm(p @ x - x), op_norm(p @ x - x) <= SOLVER_TOL),
        ("u(x) = q", op_norm(peak.proj - q), peak.status != "diverged" and op_norm(peak.proj - q) <= 1e-5),
        ("s(x) = p", op_norm(supp.proj - p), supp.status != "diverged" and op_norm(supp.proj - p) <= 1e-5),
        ("s(x(1-x)) = p-q", op_norm(prod_supp.proj - (p - q)), op_norm(prod_supp.proj - (p - q)) <= 1e-5),
    ]
    return checks


def strict_urysohn(
    a: MatrixAlgebra,
    q,
    p,
    retries: int = 3,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
    fast_path: bool = True,
) -> np.ndarray:
    """Element of half-F peaking exactly at q with support exactly p.

    Tries the commuting shortcut x = (1-r) b + (1-b) r first (with
    b = (p - q)/2 and r = q, which always commute); if its verification
    fails, falls back to solve-then-verify with fresh seeds and a shrinking
    norm margin on the q-complement.  ``fast_path=False`` forces the solver
    route.
    """
    q = as_matrix(q)
    p = as_matrix(p)
    _require_projection_in(a, q, "q", tol)
    _require_projection_in(a, p, "p", tol)
    if min_real_eig(p - q) < -tol.psd_slack:
        raise ValueError("p must dominate q")
    n = a.ambient_dim
    eye = _eye(n)

    # Commuting shortcut.
    b = (p - q) / 2.0
    r = q
    if fast_path and op_norm(b @ r - r @ b) <= 1e-10:
        x = (eye - r) @ b + (eye - b) @ r
        checks = _verify_strict_urysohn(a, q, p, x, tol)
        if all(ok for _, _, ok in checks):
            return x

    margin = 0.25
    last_checks = None
    for attempt in range(max(1, retries)):
        comp = eye - q
        offq = MatrixAffine([AffineTerm(comp, comp)], np.zeros((n, n), complex))
        problem = FeasibilityProblem(
            algebra=a,
            equalities=[
                _identity_equality(eye, q, q, "x q = q"),
                _identity_equality(q, eye, q, "q x = q"),
                AffineEquality(
                    MatrixAffine([AffineTerm(eye, p), AffineTerm(-eye, eye)], np.zeros((n, n), complex)),
                    np.zeros((n, n), complex),
                    "x p = x",
                ),
                AffineEquality(
                    MatrixAffine([AffineTerm(p, eye), AffineTerm(-eye, eye)], np.zeros((n, n), complex)),
                    np.zeros((n, n), complex),
                    "p x = x",
                ),
            ],
            caps=[_half_f_cap(n), NormCap(offq, 1.0 - margin, "strict off q")],
        )
        sol = solve_feasibility(problem, seed=seed + attempt, warm_start=(p + q) / 2.0)
        if sol.verdict == "feasible":
            checks = _verify_strict_urysohn(a, q, p, sol.value, tol)
            if all(ok for _, _, ok in checks):
                return sol.value
            last_checks = checks
        margin *= 0.4
    detail = ""
    if last_checks:
        detail = "; ".join(f"{c[0]}: {c[1]:.2e}" for c in last_checks if not c[2])
    raise VerificationFailedError(
        f"strict Urysohn verification failed after {retries} retries ({detail})"
    )


def peak_interpolate(
    a: MatrixAlgebra, q, b, seed: int = 0, tol: Tolerances = DEFAULT_TOL
) -> np.ndarray:
    """Element g of half-F of A with g q = q g = b q.

    q is a projection in the unitization commuting with b, subject to
    ||b q|| <= 1 and ||(1 - 2b) q|| <= 1.
    """
    q = as_matrix(q)
    b = as_matrix(b)
    n = a.ambient_dim
    _require_projection_in(unitize(a, tol), q, "q", tol)
    ok, res = contains(a, b, tol)
    if not ok:
        raise ValueError(f"b is not in the algebra (residual {res:.2e})")
    if op_norm(b @ q - q @ b) > tol.eq_tol * max(1.0, op_norm(b)):
        raise ValueError("b must commute with q")
    if op_norm(b @ q) > 1.0 + tol.eq_tol:
        raise ValueError("||b q|| <= 1 is required")
    eye = _eye(n)
    if op_norm((eye - 2.0 * b) @ q) > 1.0 + tol.eq_tol:
        raise ValueError("||(1 - 2b) q|| <= 1 is required")

    target = b @ q
    problem = FeasibilityProblem(
        algebra=a,
        equalities=[
            _identity_equality(eye, q, target, "g q = b q"),
            _identity_equality(q, eye, target, "q g = b q"),
        ],
        caps=[_half_f_cap(n)],
    )
    sol = solve_feasibility(problem, seed=seed, warm_start=b)
    if sol.verdict != "feasible":
        raise UnconvergedError("peak interpolation unconverged", sol)
    g = sol.value
    fm = f_membership(g, tol)
    checks = [
        ("half-F", -fm.half_f_gap, fm.half_f_gap >= -SOLVER_TOL),
        ("g q = b q", op_norm(g @ q - target), op_norm(g @ q - target) <= SOLVER_TOL),
        ("q g = b q", op_norm(q @ g - target), op_norm(q @ g - target) <= SOLVER_TOL),
    ]
    _verify(checks, "peak_interpolate")
    return g


@dataclass(frozen=True)
class ConvexRegion:
    """A compact convex polygon in the plane, counterclockwise vertices."""

    vertices: np.ndarray
    kind: str = "polygon"

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=complex).reshape(-1)
        if v.size < 3:
            raise ValueError("a region needs at least 3 vertices")
        area = 0.5 * float(
            np.sum((v.real * np.roll(v, -1).imag - np.roll(v, -1).real * v.imag))
        )
        scale = max(1.0, float(np.abs(v).max()) ** 2)
        if abs(area) <= 1e-12 * scale:
            raise ValueError("region is degenerate (a line segment or a point)")
        if area < 0:
            v = v[::-1]
        edges = np.roll(v, -1) - v
        cross = (edges.real * np.roll(edges, -1).imag - np.roll(edges, -1).real * edges.imag)
        if np.any(cross < -1e-10 * scale):
            raise ValueError("vertices do not describe a convex polygon")
        object.__setattr__(self, "vertices", v)

    def half_planes(self) -> list:
        """(theta_k, h_k) pairs: the region is the set Re(e^{-i theta} z) <= h."""
        v = self.vertices
        out = []
        for k in range(v.size):
            edge = v[(k + 1) % v.size] - v[k]
            if abs(edge) <= 1e-14:
                continue
            theta = float(np.angle(edge)) - np.pi / 2.0
            h = float(np.max((np.exp(-1j * theta) * v).real))
            out.append((theta, h))
        return out

    def contains_point(self, z: complex, slack: float = 0.0) -> bool:
        return all((np.exp(-1j * t) * z).real <= h + slack for t, h in self.half_planes())

    def centroid(self) -> complex:
        return complex(np.mean(self.vertices))


def tietze_lift(
    a: MatrixAlgebra,
    q,
    b,
    region: ConvexRegion,
    seed: int = 0,
    tol: Tolerances = DEFAULT_TOL,
) -> np.ndarray:
    """Contractive g in A with g q = q g = b q and W(g) inside the region.

    The numerical range of the compression of b to the range of q must sit
    inside the region, which must not be a line segment; when A has no
    identity the region must contain 0.
    """
    q = as_matrix(q)
    b = as_matrix(b)
    n = a.ambient_dim
    _require_projection_in(unitize(a, tol), q, "q", tol)
    ok, res = contains(a, b, tol)
    if not ok:
        raise ValueError(f"b is not in the algebra (residual {res:.2e})")
    if op_norm(b @ q - q @ b) > tol.eq_tol * max(1.0, op_norm(b)):
        raise ValueError("b must commute with q")
    if op_norm(b @ q) > 1.0 + tol.eq_tol:
        raise ValueError("||b q|| <= 1 is required")
    planes = region.half_planes()
    if identity_of(a, tol) is None and not region.contains_point(0.0, tol.psd_slack):
        raise ValueError("a nonunital algebra requires 0 inside the region")

    # Numerical range of the compression q b q restricted to range(q).
    w, v = np.linalg.eigh(re_part(q))
    rng_vecs = v[:, w > 0.5]
    if rng_vecs.shape[1] > 0:
        comp = dagger(rng_vecs) @ b @ rng_vecs
        for theta, h in planes:
            top = float(np.linalg.eigvalsh(re_part(np.exp(-1j * theta) * comp))[-1])
            if top > h + tol.psd_slack:
                raise ValueError(
                    "numerical range of the compression leaves the region "
                    f"(direction {theta:.3f}: {top:.6f} > {h:.6f})"
                )

    eye = _eye(n)
    target = b @ q
    floors = [
        _re_floor(-np.exp(-1j * theta) * eye, h * eye, f"W(g) halfplane {k}")
        for k, (theta, h) in enumerate(planes)
    ]
    problem = FeasibilityProblem(
        algebra=a,
        equalities=[
            _identity_equality(eye, q, target, "g q = b q"),
            _identity_equality(q, eye, target, "q g = b q"),
        ],
        floors=floors,
        caps=[_ball_cap(n)],
    )
    warm = q @ b @ q + region.centroid() * (eye - q)
    sol = solve_feasibility(problem, seed=seed, warm_start=warm)
    if sol.verdict != "feasible":
        raise UnconvergedError("Tietze lift unconverged", sol)
    g = sol.value
    checks = [
        ("contraction", op_norm(g), op_norm(g) <= 1.0 + SOLVER_TOL),
        ("g q = b q", op_norm(g @ q - target), op_norm(g @ q - target) <= SOLVER_TOL),
        ("q g = b q", op_norm(q @ g - target), op_norm(q @ g - target) <= SOLVER_TOL),
    ]
    for k, (theta, h) in enumerate(planes):
        top = float(np.linalg.eigvalsh(re_part(np.exp(-1j * theta) * g))[-1])
        checks.append((f"W(g) halfplane {k}", top - h, top <= h + SOLVER_TOL))
    _verify(checks, "tietze_lift")
    return g
