from __future__ import annotations

import numpy as np
import pytest

from realpos.algebra import (
    contains,
    diagonal_algebra,
    full_algebra,
    span_algebra,
    upper_triangular_algebra,
)
from realpos.cones import f_membership
from realpos.interp import (
    AffineEquality,
    AffineTerm,
    ConvexRegion,
    FeasibilityProblem,
    MatrixAffine,
    UnconvergedError,
    decompose,
    dominate,
    interp_np,
    peak_interpolate,
    solve_feasibility,
    strict_urysohn,
    tietze_lift,
    urysohn_interpolate,
)
from realpos.matrices import dagger, im_part, min_real_eig, op_norm
from realpos.powers import power
from realpos.projections import peak_projection, support_projection


def _fixed_target_problem(alg, target):
    n = alg.ambient_dim
    eye = np.eye(n, dtype=complex)
    amap = MatrixAffine([AffineTerm(eye, eye)], np.zeros((n, n), complex))
    return FeasibilityProblem(alg, equalities=[AffineEquality(amap, target, "a = R")])


def test_solve_feasibility_exact_target(e11, e12):
    alg = span_algebra([e11, e12])
    target = 0.3 * e11 + (0.1 + 0.2j) * e12
    sol = solve_feasibility(_fixed_target_problem(alg, target))
    assert sol.verdict == "feasible"
    assert op_norm(sol.value - target) <= 1e-10
    assert sol.iterations == 1  # one affine projection lands on the target


def test_solve_feasibility_infeasible_target_reports_distance(e11, e12):
    alg = span_algebra([e12])
    sol = solve_feasibility(_fixed_target_problem(alg, e11.astype(complex)))
    assert sol.verdict == "unconverged"
    assert sol.residuals["a = R"] == pytest.approx(1.0, abs=1e-9)


def test_feasibility_problem_needs_constraints():
    with pytest.raises(ValueError):
        FeasibilityProblem(full_algebra(2))


def test_dominate_examples(e11):
    corner = span_algebra([e11])
    a = dominate(corner, 0.5 * e11, eps=0.01)
    assert f_membership(a).half_f_gap >= -1e-6
    assert min_real_eig(a - 0.5 * e11) >= -1e-6
    assert op_norm(im_part(a)) < 0.01

    a = dominate(full_algebra(2), 0.5 * np.eye(2), eps=0.01)
    assert min_real_eig(a - 0.5 * np.eye(2)) >= -1e-6

    rng = np.random.default_rng(5)
    g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = g @ dagger(g)
    b *= 0.9 / op_norm(b)
    a = dominate(upper_triangular_algebra(2), b, eps=0.05)
    assert f_membership(a).half_f_gap >= -1e-6
    assert min_real_eig(a - b) >= -1e-6


def test_dominate_preconditions(e11, e12):
    with pytest.raises(ValueError):
        dominate(full_algebra(2), np.eye(2), eps=0.1)  # norm not < 1
    with pytest.raises(ValueError):
        dominate(full_algebra(2), 0.5 * np.array([[0.0, 1.0], [0.0, 0.0]]), eps=0.1)
    with pytest.raises(ValueError):
        dominate(span_algebra([e12]), 0.5 * np.eye(2), eps=0.1)  # nonunital


def test_dominate_monotone_roots():
    # on a commutative algebra the returned element dominates b through roots
    alg = diagonal_algebra(3)
    rng = np.random.default_rng(9)
    b = np.diag(rng.random(3) * 0.8).astype(complex)
    a = dominate(alg, b, eps=0.01)
    for m in (2, 3):
        root = power(a, 1.0 / m).value
        assert min_real_eig(root - b) >= -1e-5


def test_decompose():
    up = upper_triangular_algebra(2)
    b = np.array([[0.3, 0.5], [0.0, -0.2]], dtype=complex)
    x, y = decompose(up, b)
    assert f_membership(x).half_f_gap >= -1e-6
    assert f_membership(y).half_f_gap >= -1e-6
    assert op_norm(b - (x - y)) <= 1e-6
    assert contains(up, x)[0] and contains(up, y)[0]

    x0, y0 = decompose(up, np.zeros((2, 2)))
    assert op_norm(x0 - y0) <= 1e-8

    xh, yh = decompose(full_algebra(2), 0.5 * np.eye(2))
    assert op_norm((xh - yh) - 0.5 * np.eye(2)) <= 1e-6

    with pytest.raises(ValueError):
        decompose(up, np.eye(2))


def test_interp_np():
    alg = diagonal_algebra(3)
    c = np.diag([0.1, 0.5, 0.8]).astype(complex)
    a = interp_np(alg, c)
    n = 3
    eye = np.eye(n)
    block = np.block([[eye - c, dagger(eye - a)], [eye - a, eye]])
    assert min_real_eig(block) >= -1e-6
    assert f_membership(a).half_f_gap >= -1e-6
    assert op_norm(im_part(a)) < 1e-2

    a0 = interp_np(full_algebra(2), np.zeros((2, 2)))
    assert f_membership(a0).half_f_gap >= -1e-6

    # scalar witness level: |1 - a|^2 <= 1/2 at a = (1 - 1/sqrt2)
    aw = (1.0 - 1.0 / np.sqrt(2.0)) * np.eye(2)
    blk = np.block([[0.5 * np.eye(2), dagger(np.eye(2) - aw)], [np.eye(2) - aw, np.eye(2)]])
    assert min_real_eig(blk) >= -1e-12


def test_urysohn_in_algebra_mode(e11):
    up = upper_triangular_algebra(2)
    a = urysohn_interpolate(up, e11.astype(complex), np.eye(2, dtype=complex))
    assert op_norm(a @ e11 - e11) <= 1e-6
    assert op_norm(e11 @ a - e11) <= 1e-6
    assert f_membership(a).half_f_gap >= -1e-6

    zero = np.zeros((2, 2), dtype=complex)
    a = urysohn_interpolate(up, zero, np.eye(2, dtype=complex))
    assert f_membership(a).half_f_gap >= -1e-6

    a = urysohn_interpolate(full_algebra(2), np.eye(2, dtype=complex), np.eye(2, dtype=complex))
    assert op_norm(a - np.eye(2)) <= 1e-6


def test_urysohn_ambient_mode():
    alg = diagonal_algebra(4)
    q = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    v = np.zeros((4, 1), dtype=complex)
    v[1, 0] = 1.0 / np.sqrt(2.0)
    v[2, 0] = 1j / np.sqrt(2.0)
    u = q + v @ dagger(v)  # not diagonal, so not in the algebra
    assert not contains(alg, u)[0]
    a = urysohn_interpolate(alg, q, u, eps=0.05)
    assert op_norm(a @ q - q) <= 1e-6
    assert op_norm(a @ (np.eye(4) - u)) < 0.05
    assert op_norm((np.eye(4) - u) @ a) < 0.05


def test_urysohn_requires_domination(e11):
    with pytest.raises(ValueError):
        urysohn_interpolate(full_algebra(2), np.eye(2, dtype=complex), e11.astype(complex))


def test_strict_urysohn():
    alg = diagonal_algebra(3)
    q = np.diag([1.0, 0.0, 0.0]).astype(complex)
    p = np.diag([1.0, 1.0, 0.0]).astype(complex)
    x = strict_urysohn(alg, q, p)
    assert op_norm(peak_projection(x).proj - q) <= 1e-5
    assert op_norm(support_projection(x).proj - p) <= 1e-5
    prod = support_projection(x @ (np.eye(3) - x), method="oracle").proj
    assert op_norm(prod - (p - q)) <= 1e-5

    x = strict_urysohn(alg, q, q)
    assert op_norm(x - q) <= 1e-6

    zero = np.zeros((3, 3), dtype=complex)
    x = strict_urysohn(alg, zero, zero)
    assert op_norm(x) <= 1e-6


def test_strict_urysohn_solver_route():
    # bypass the commuting shortcut and let the feasibility engine work
    q = np.diag([1.0, 0.0, 0.0]).astype(complex)
    p = np.diag([1.0, 1.0, 0.0]).astype(complex)
    for alg in (diagonal_algebra(3), upper_triangular_algebra(3)):
        x = strict_urysohn(alg, q, p, fast_path=False)
        assert op_norm(peak_projection(x).proj - q) <= 1e-5
        assert op_norm(support_projection(x).proj - p) <= 1e-5
        prod = support_projection(x @ (np.eye(3) - x), method="oracle").proj
        assert op_norm(prod - (p - q)) <= 1e-5


def test_peak_interpolate(e11):
    q = e11.astype(complex)
    b = np.diag([0.5, 5.0]).astype(complex)
    g = peak_interpolate(full_algebra(2), q, b)
    assert f_membership(g).half_f_gap >= -1e-6
    assert op_norm(g @ q - b @ q) <= 1e-6

    # b = q: any Urysohn-style output works
    g = peak_interpolate(full_algebra(2), q, q)
    assert op_norm(g @ q - q) <= 1e-6

    with pytest.raises(ValueError):
        peak_interpolate(full_algebra(2), q, np.array([[0.0, 1.0], [0.0, 0.0]]))  # no commuting


def test_convex_region_validation():
    with pytest.raises(ValueError):
        ConvexRegion(np.array([0.0 + 0j, 1.0 + 0j]))
    with pytest.raises(ValueError):
        ConvexRegion(np.array([0.0 + 0j, 0.5 + 0j, 1.0 + 0j]))  # collinear = segment
    with pytest.raises(ValueError):
        ConvexRegion(np.array([0 + 0j, 1 + 0j, 1 + 1j, 0.9 + 0.1j, 0 + 1j]))  # nonconvex
    # clockwise input is normalized
    cw = ConvexRegion(np.array([0 + 0j, 0 + 1j, 1 + 1j, 1 + 0j]))
    assert cw.contains_point(0.5 + 0.5j)
    assert not cw.contains_point(2.0 + 0.0j)
    assert len(cw.half_planes()) == 4


def test_tietze_lift(e11):
    square = ConvexRegion(np.array([0 - 0.25j, 1 - 0.25j, 1 + 0.25j, 0 + 0.25j]))
    q = e11.astype(complex)
    b = np.diag([0.5, 3.0j]).astype(complex)
    g = tietze_lift(full_algebra(2), q, b, square)
    assert op_norm(g) <= 1.0 + 1e-6
    assert op_norm(g @ q - b @ q) <= 1e-6
    for theta, h in square.half_planes():
        top = np.linalg.eigvalsh((np.exp(-1j * theta) * g + dagger(np.exp(-1j * theta) * g)) / 2.0)[-1]
        assert top <= h + 1e-6

    # compression numerical range escaping the region is a precondition error
    with pytest.raises(ValueError):
        tietze_lift(full_algebra(2), q, np.diag([5.0, 0.0]).astype(complex), square)


def test_tietze_nonunital_needs_zero_in_region(e11, e12):
    alg = span_algebra([e11, e12])  # no two-sided identity
    q = e11.astype(complex)
    b = 0.5 * e11
    away = ConvexRegion(np.array([0.3 + 0j, 0.7 + 0j, 0.7 + 0.2j, 0.3 + 0.2j]))
    with pytest.raises(ValueError, match="0"):
        tietze_lift(alg, q, b, away)
    around = ConvexRegion(np.array([-0.1 - 0.1j, 0.7 - 0.1j, 0.7 + 0.2j, -0.1 + 0.2j]))
    g = tietze_lift(alg, q, b, around)
    assert op_norm(g @ q - b @ q) <= 1e-6
    assert op_norm(g) <= 1.0 + 1e-6


def test_unconverged_error_carries_residuals(e11, e12):
    alg = span_algebra([e12])
    sol = solve_feasibility(_fixed_target_problem(alg, e11.astype(complex)), max_rounds=50)
    assert sol.verdict == "unconverged"
    err = UnconvergedError("nope", sol)
    assert err.solution is sol
