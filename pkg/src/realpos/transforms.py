"""Cayley and fractional-linear transforms between accretive matrices and
strict contractions.

``f_transform`` maps the accretive matrices bijectively onto the strict
contractions satisfying ||1 - 2T|| <= 1; ``f_inverse`` is its inverse
T -> T (1 - T)^{-1}.
"""
from __future__ import annotations

import warnings

import numpy as np

from .matrices import DEFAULT_TOL, Tolerances, as_matrix, op_norm, solve

__all__ = ["cayley", "f_transform", "f_inverse"]


def cayley(x, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Cayley transform (x - 1)(x + 1)^{-1}; a contraction for accretive x."""
    x = as_matrix(x)
    eye = np.eye(x.shape[0], dtype=complex)
    # x - 1 and (x + 1)^{-1} commute, so left division is the same matrix.
    return solve(x + eye, x - eye, tol)


def f_transform(x, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """x (x + 1)^{-1}, equal to (1 + cayley(x)) / 2."""
    x = as_matrix(x)
    eye = np.eye(x.shape[0], dtype=complex)
    value = solve(x + eye, x, tol)
    alt = (eye + cayley(x, tol)) / 2.0
    if op_norm(value - alt) > 1e-10 * max(1.0, op_norm(value)):
        raise ArithmeticError(
            "resolvent and Cayley forms of the transform disagree; "
            "input is badly conditioned"
        )
    return value


def f_inverse(t, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Inverse transform T (1 - T)^{-1}.

    Requires ||T|| < 1; warns (rather than failing) when T is not in the
    half-F set, in which case the output need not be accretive.
    """
    t = as_matrix(t)
    eye = np.eye(t.shape[0], dtype=complex)
    norm = op_norm(t)
    if norm >= 1.0 - tol.eq_tol:
        raise ValueError(f"inverse transform needs ||T|| < 1, got {norm:.6f}")
    if op_norm(eye - 2.0 * t) > 1.0 + tol.psd_slack:
        warnings.warn(
            "input is outside the half-F set; the inverse transform is "
            "defined but its output may not be accretive",
            RuntimeWarning,
        )
    return solve(eye - t, t, tol)
