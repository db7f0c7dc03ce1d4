from __future__ import annotations

import numpy as np
import pytest

from realpos.algebra import contains, generate_algebra
from realpos.cones import sector_angle
from realpos.generators import gen_accretive, gen_half_f, gen_sectorial, gen_unitary
from realpos.matrices import im_part, min_real_eig, op_norm
from realpos.powers import (
    DefectiveMatrixError,
    NotAccretiveError,
    disk_order_check,
    holder_check,
    power,
    power_balakrishnan,
    power_spectral,
    rescaled_root_check,
    root_monotonicity_report,
    root_series,
    vav_identity_check,
)


def test_spectral_values(lemerdy):
    assert np.allclose(power_spectral(4.0 * np.eye(1), 0.5).value, 2.0 * np.eye(1))
    r = power_spectral(1j * np.eye(2), 0.5)
    assert np.allclose(r.value, np.exp(1j * np.pi / 4.0) * np.eye(2))
    root = power_spectral(lemerdy, 0.5)
    assert op_norm(root.value) > 1.0 + 1e-3  # roots escape the unit ball


def test_spectral_rejects_non_accretive():
    with pytest.raises(NotAccretiveError):
        power_spectral(-np.eye(2), 0.5)


def test_spectral_defective_raises():
    with pytest.raises(DefectiveMatrixError):
        power_spectral(np.array([[1.0, 1.0], [0.0, 1.0]]), 0.5)


def test_balakrishnan_values():
    r = power_balakrishnan(np.diag([1.0, 4.0]).astype(complex), 0.5, nodes=64)
    assert op_norm(r.value - np.diag([1.0, 2.0])) <= 1e-8
    r = power_balakrishnan(np.eye(3), 0.3, nodes=32)
    assert op_norm(r.value - np.eye(3)) <= 1e-10
    r = power_balakrishnan(1j * np.eye(1), 0.5, nodes=64)
    assert abs(r.value[0, 0] - np.exp(1j * np.pi / 4.0)) <= 1e-8


def test_balakrishnan_parameter_validation():
    with pytest.raises(ValueError):
        power_balakrishnan(np.eye(2), 1.5)
    with pytest.raises(ValueError):
        power_balakrishnan(np.eye(2), 0.5, nodes=8)


def test_balakrishnan_defective_fallback():
    jordan = np.array([[1.0, 1.0], [0.0, 1.0]])
    r = power(jordan, 0.5)
    assert r.method == "balakrishnan"
    assert np.allclose(r.value, [[1.0, 0.5], [0.0, 1.0]], atol=1e-9)
    # nilpotent perturbation of 1: the series truncates after two terms
    s = root_series(jordan, 2)
    assert np.allclose(s.value, [[1.0, 0.5], [0.0, 1.0]], atol=1e-12)


def test_root_series_values():
    assert np.allclose(root_series(np.eye(2), 2).value, np.eye(2))
    # boundary eigenvalue: the partial sum converges only at the tail rate
    r = root_series(np.diag([1.0, 0.0]).astype(complex), 2)
    assert op_norm(r.value - np.diag([1.0, 0.0])) <= r.est_error + 1e-12
    r = root_series(np.diag([1.0, 0.0]).astype(complex), 2, terms=20000)
    assert op_norm(r.value - np.diag([1.0, 0.0])) <= 5e-3
    r = root_series(0.5 * np.eye(2), 2)
    assert op_norm(r.value - np.sqrt(0.5) * np.eye(2)) <= r.est_error
    with pytest.raises(ValueError):
        root_series(3.0 * np.eye(2), 2)
    with pytest.raises(ValueError):
        root_series(np.eye(2), 1)


def test_power_general():
    x = gen_accretive(3, 23)
    assert np.allclose(power(x, 1.0).value, x)
    assert np.allclose(power(2.0 * np.eye(2), 1.5).value, 2.0 * np.sqrt(2.0) * np.eye(2))
    r = power(x, 0.3)
    s = power(x, 0.7)
    assert op_norm(r.value @ s.value - x) <= 1e-6


def test_power_scaling_law():
    x = gen_accretive(4, 29)
    for c in (0.5, 2.0, 10.0):
        for alpha in (0.5, 0.7):
            gap = op_norm(power(c * x, alpha).value - c**alpha * power(x, alpha).value)
            assert gap <= 1e-8


def test_power_continuity():
    x = gen_accretive(4, 31)
    base = power(x, 0.5).value
    diffs = [op_norm(power(x, 0.5 + 10.0**-k).value - base) for k in (1, 2, 3, 4)]
    assert all(diffs[i] > diffs[i + 1] for i in range(3))


def test_power_in_generated_algebra():
    x = gen_accretive(3, 37)
    oa = generate_algebra([x], mode="algebra")
    for alpha in (0.5, 1.0 / 3.0, 1.5):
        assert contains(oa, power(x, alpha).value)[1] <= 1e-6


def test_fractional_powers_land_in_their_sector():
    for k in range(10):
        x = gen_accretive(4, 650 + k)
        for alpha in (0.3, 0.5, 0.8):
            angle = sector_angle(power(x, alpha).value)
            assert angle is not None and angle <= alpha * np.pi / 2.0 + 1e-6


def test_sector_shrinkage():
    for k in range(10):
        x = gen_sectorial(3, 600 + k, rho=0.9)
        rho = sector_angle(x)
        for alpha in (0.3, 0.5):
            shrunk = sector_angle(power(x, alpha).value)
            assert shrunk is not None and shrunk <= alpha * rho + 1e-6


def test_imaginary_decay():
    # Im(x^{1/n}) decays with n; the limit bound scales with the root angle
    for k in range(5):
        x = gen_accretive(4, 700 + k)
        norms = [op_norm(im_part(power(x, 1.0 / n).value)) for n in (1, 2, 4, 8, 16, 32, 64)]
        assert all(norms[i] >= norms[i + 1] - 1e-7 for i in range(len(norms) - 1))
        cap = np.sin(np.pi / 128.0) * max(1.0, op_norm(power(x, 1.0 / 64).value))
        assert norms[-1] <= cap + 1e-7


def test_method_agreement_spot():
    x = gen_accretive(5, 41, min_margin=0.1)
    for r in (0.25, 0.5, 0.75):
        gap = op_norm(power_spectral(x, r).value - power_balakrishnan(x, r, 128).value)
        assert gap <= 1e-6 * max(1.0, op_norm(x) ** r)


def test_methods_at_dimension_cap():
    # the default REALPOS_MAX_DIM boundary still behaves
    x = gen_accretive(16, 43, min_margin=0.1)
    gap = op_norm(power_spectral(x, 0.5).value - power_balakrishnan(x, 0.5, 128).value)
    assert gap <= 1e-6 * max(1.0, op_norm(x) ** 0.5)


def test_vav_identity():
    a = np.diag([0.0, 1.0]).astype(complex)
    v = np.diag([0.0, 1.0]).astype(complex)
    assert vav_identity_check(a, v, 0.5) <= 1e-10
    a = gen_accretive(3, 43, min_margin=0.1)
    u = gen_unitary(3, 44)
    assert vav_identity_check(a, u, 0.5) <= 1e-7
    assert vav_identity_check(a, u, 2.0) <= 1e-9
    with pytest.raises(ValueError):
        vav_identity_check(a, np.diag([1.0, 0.0, 0.0]).astype(complex), 0.5)


def test_root_monotonicity(lemerdy):
    margins = root_monotonicity_report(0.5 * np.eye(2), 8)
    assert np.all(margins > 0.0)
    x = gen_half_f(4, 47)
    assert np.all(root_monotonicity_report(x, 8) >= -1e-7)
    # the counterexample genuinely fails monotonicity
    assert root_monotonicity_report(lemerdy, 8).min() <= -1e-3
    with pytest.raises(ValueError):
        root_monotonicity_report(np.eye(2), 13)


def test_rescaled_root_check(lemerdy):
    c, margins = rescaled_root_check(np.eye(2))
    assert c == pytest.approx(4.0, abs=1e-9)
    assert np.all(margins >= -1e-7)
    c, margins = rescaled_root_check(lemerdy)
    assert np.all(margins >= -1e-7)
    # scaling the matrix scales the constant and leaves the margins alone
    c_eye, margins_eye = rescaled_root_check(np.eye(2))
    c10, margins10 = rescaled_root_check(10.0 * np.eye(2))
    assert c10 == pytest.approx(10.0 * c_eye, abs=1e-8)
    assert np.allclose(margins10, margins_eye, atol=1e-9)


def test_holder_check():
    a = np.diag([1.0, 0.3]).astype(complex)
    assert holder_check(a, a, 0.5) == 0.0
    one = np.eye(1)
    ratio = holder_check(one, 0.0 * one, 0.5, samples=8)
    assert ratio == pytest.approx(1.0, abs=1e-12)
    rng = np.random.default_rng(51)
    d1 = np.diag(rng.random(4) + 1j * 0.2 * rng.standard_normal(4))
    d2 = np.diag(rng.random(4) + 1j * 0.2 * rng.standard_normal(4))
    r1 = holder_check(d1, d2, 0.5, samples=64, seed=0)
    r2 = holder_check(d1, d2, 0.5, samples=64, seed=1)
    assert np.isfinite(r1) and abs(r1 - r2) <= 0.2 * max(r1, r2)
    with pytest.raises(ValueError):
        holder_check(np.diag([1.0, 2.0]), np.array([[1.0, 0.5], [0.5, 1.0]]), 0.5)


def test_disk_order_check():
    x = gen_half_f(3, 53)  # inside F
    premise, conclusion = disk_order_check([0.0], [1.0, 1.0], x)
    assert premise >= -1e-12 and conclusion >= -1e-7
    premise, conclusion = disk_order_check([0.0], [1.0, 0.0, 1.0], x)
    assert premise >= -1e-12 and conclusion >= -1e-7
    premise, conclusion = disk_order_check([0.0, 1.0], [1.0], x)
    assert conclusion == pytest.approx(min_real_eig(x), abs=1e-10)
    with pytest.raises(ValueError):
        disk_order_check([0.0], [1.0], 5.0 * np.eye(2))
