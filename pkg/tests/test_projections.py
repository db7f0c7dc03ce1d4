from __future__ import annotations

import numpy as np
import pytest

from realpos.algebra import contains, full_algebra, identity_of, upper_triangular_algebra
from realpos.cones import f_membership
from realpos.generators import gen_accretive, gen_half_f, gen_peaked_half_f, gen_sectorial, gen_unitary
from realpos.matrices import dagger, op_norm
from realpos.powers import NotAccretiveError, power, root_series
from realpos.projections import (
    hsa_and_ideal,
    is_peak_for,
    join,
    join_all,
    meet,
    peak_projection,
    support_projection,
)

from conftest import unit


def test_support_examples():
    res = support_projection(np.diag([0.0, 1.0, 1j]), method="both")
    assert np.allclose(res.proj, np.diag([0.0, 1.0, 1.0]), atol=1e-8)
    assert res.oracle_residual <= 1e-8

    zero = support_projection(np.zeros((2, 2)), method="both")
    assert zero.status == "zero" and op_norm(zero.proj) == 0.0

    eye = support_projection(np.eye(3), method="both")
    assert np.allclose(eye.proj, np.eye(3), atol=1e-10)


def test_support_rejects_non_accretive():
    with pytest.raises(NotAccretiveError):
        support_projection(-np.eye(2))


def test_support_iterative_vs_oracle_random():
    for k in range(40):
        n = 2 + k % 6
        rank = None if k % 2 == 0 else max(1, n - 1)
        x = gen_accretive(n, 7000 + k, rank=rank)
        res = support_projection(x, method="both")
        assert res.status != "diverged"
        assert res.oracle_residual <= 1e-6
        assert max(op_norm(res.proj @ x - x), op_norm(x @ res.proj - x)) <= 1e-7 * max(1.0, op_norm(x))


def test_support_root_invariance():
    for k in range(10):
        x = gen_accretive(4, 7100 + k, rank=3)
        p1 = support_projection(x, method="oracle").proj
        p2 = support_projection(power(x, 0.5).value, method="oracle").proj
        assert op_norm(p1 - p2) <= 1e-6


def test_peak_examples():
    res = peak_projection(np.diag([1.0, 0.5]), method="both")
    assert np.allclose(res.proj, np.diag([1.0, 0.0]), atol=1e-10)
    small = peak_projection(0.9 * gen_half_f(3, 71))
    assert small.status == "zero"
    with pytest.raises(ValueError):
        peak_projection(2.0 * np.eye(2))


def test_peak_divergence_is_first_class():
    assert peak_projection(np.diag([1.0, -1.0])).status == "diverged"
    assert peak_projection(np.diag([np.exp(0.7j), 1.0])).status == "diverged"


def test_peak_iterative_vs_oracle():
    for k in range(40):
        n = 2 + k % 6
        x, q_true = gen_peaked_half_f(n, 7200 + k)
        res = peak_projection(x, method="both")
        assert res.status == "converged"
        assert res.oracle_residual <= 1e-6
        assert op_norm(res.proj - q_true) <= 1e-6


def test_peak_root_invariance():
    for k in range(10):
        x, _ = gen_peaked_half_f(4, 7300 + k)
        root = root_series(x, 2).value
        root = root / max(1.0, op_norm(root))
        p1 = peak_projection(x).proj
        p2 = peak_projection(root).proj
        assert op_norm(p1 - p2) <= 1e-6


def test_is_peak_for():
    assert is_peak_for(np.diag([1.0, 0.5]), np.diag([1.0, 0.0]))
    assert not is_peak_for(np.diag([1.0, 1.0]), np.diag([1.0, 0.0]))
    x, _ = gen_peaked_half_f(4, 7400)
    q = peak_projection(x).proj
    assert is_peak_for(x, q)
    # strictly smaller projections fail the criterion
    w, v = np.linalg.eigh(q)
    keep = np.nonzero(w > 0.5)[0]
    if len(keep) > 1:
        smaller = v[:, keep[:-1]] @ dagger(v[:, keep[:-1]])
        assert not is_peak_for(x, smaller)
    with pytest.raises(ValueError):
        is_peak_for(np.diag([1.0, 0.5]), np.diag([0.0, 1.0]))  # q x != q


def test_join_meet():
    p1 = np.diag([1.0, 0.0]).astype(complex)
    p2 = np.diag([0.0, 1.0]).astype(complex)
    assert np.allclose(join(p1, p2), np.eye(2))
    tilted = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)
    assert np.allclose(join(p1, tilted), np.eye(2), atol=1e-10)
    assert np.allclose(join(p1, p1), p1, atol=1e-12)
    assert np.allclose(meet(p1, p2), np.zeros((2, 2)), atol=1e-10)
    assert np.allclose(meet(np.eye(2), p1), p1, atol=1e-10)
    assert np.allclose(join_all([p1, p2, tilted]), np.eye(2), atol=1e-10)
    with pytest.raises(ValueError):
        join(np.array([[0.5, 0.0], [0.0, 0.0]]), p1)


def test_convergence_rate_witness():
    # the proof's inequality bounds the root's distance to the support
    rng = np.random.default_rng(73)
    for k in range(10):
        n = 3 + k % 3
        x = gen_half_f(n, 7500 + k)
        s = support_projection(x, method="oracle").proj
        for depth in (1, 2, 4):
            a = power(x, 1.0 / 2.0**depth).value
            z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            z /= np.linalg.norm(z)
            lhs = np.linalg.norm((a - s) @ z) ** 2
            rhs = np.vdot(z, (s - (a + dagger(a)) / 2.0) @ z).real
            assert lhs <= rhs + 1e-7


def test_kernel_invariant_vectors():
    for k in range(20):
        n = 3 + k % 4
        x = gen_sectorial(n, 7600 + k, rho=0.6, rank=n - 1)
        h = x + dagger(x)
        w, v = np.linalg.eigh(h)
        s = support_projection(x, method="oracle").proj
        for i in range(n):
            if w[i] <= 1e-12:
                vec = v[:, i]
                assert np.linalg.norm(x @ vec) <= 1e-5
                assert np.linalg.norm(s @ vec) <= 1e-5
        for m in (2, 3, 4):
            y = power(x, 1.0 / m).value
            wy, vy = np.linalg.eigh((y + dagger(y)) / 2.0)
            for i in range(n):
                if wy[i] <= 1e-12:
                    assert np.linalg.norm(s @ vy[:, i]) <= 1e-5


def test_strict_urysohn_product_fact():
    # ||1 - 4(x - x^2)|| = ||(1-2x)^2|| <= 1, and for normal x the support
    # of x(1-x) splits off the peak part
    for k in range(20):
        n = 2 + k % 5
        x = gen_half_f(n, 7700 + k)
        eye = np.eye(n)
        prod = x @ (eye - x)
        assert op_norm(eye - 4.0 * prod) <= 1.0 + 1e-9
        assert f_membership(4.0 * prod).in_f
    rng = np.random.default_rng(79)
    for k in range(10):
        n = 3 + k % 3
        u = gen_unitary(n, 7800 + k)
        vals = np.concatenate([[1.0], rng.random(n - 1) * 0.9])  # normal half-F element
        x = u @ np.diag(vals) @ dagger(u)
        eye = np.eye(n)
        s_prod = support_projection(x @ (eye - x), method="oracle").proj
        s_x = support_projection(x, method="oracle").proj
        u_x = peak_projection(x).proj
        assert op_norm(s_prod - s_x @ (eye - u_x)) <= 1e-6


def test_hsa_and_ideal(e11, e12):
    full = full_algebra(2)
    d, j = hsa_and_ideal(full, e11)
    assert d.dim == 1 and contains(d, e11)[0]
    assert j.dim == 2 and contains(j, e12)[0]

    upper = upper_triangular_algebra(2)
    e22 = unit(2, 1, 1)
    d, j = hsa_and_ideal(upper, e22)
    assert d.dim == 1 and contains(d, e22)[0]
    assert j.dim == 1 and contains(j, e22)[0]

    e = identity_of(upper)
    d, j = hsa_and_ideal(upper, e)
    assert d.dim == upper.dim and j.dim == upper.dim

    with pytest.raises(NotAccretiveError):
        hsa_and_ideal(full, -np.eye(2))
