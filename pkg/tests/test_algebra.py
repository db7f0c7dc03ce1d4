from __future__ import annotations

import numpy as np
import pytest

from realpos.algebra import (
    a_h,
    algebra_from_json,
    algebra_from_name,
    algebra_to_json,
    amplify,
    contains,
    diagonal_algebra,
    full_algebra,
    generate_algebra,
    identity_of,
    span_algebra,
    unitize,
    upper_triangular_algebra,
)
from realpos.generators import gen_accretive
from realpos.matrices import op_norm

from conftest import unit


def test_generate_nilpotent(e12):
    alg = generate_algebra([e12], mode="algebra")
    assert alg.dim == 1


def test_generate_cstar_is_full(e12):
    alg = generate_algebra([e12], mode="cstar")
    assert alg.dim == 4
    assert alg.contains_identity


def test_generate_scalar():
    alg = generate_algebra([np.eye(2)], mode="algebra")
    assert alg.dim == 1


def test_generate_idempotent():
    rng = np.random.default_rng(3)
    x = gen_accretive(3, 5)
    alg = generate_algebra([x], mode="algebra")
    again = generate_algebra(list(alg.basis), mode="algebra")
    assert again.dim == alg.dim
    worst = max(op_norm(b - again.project(b)) for b in alg.basis)
    assert worst <= 1e-8


def test_contains(e11, e12):
    nil = span_algebra([e12])
    ok, res = contains(nil, e12)
    assert ok and res <= 1e-12
    ok, res = contains(nil, e11)
    assert not ok and res == pytest.approx(1.0)
    full = full_algebra(2)
    ok, res = contains(full, np.array([[1.0, 2j], [3.0, 4.0]]))
    assert ok and res <= 1e-12


def test_identity_of(e11, e12):
    assert np.allclose(identity_of(upper_triangular_algebra(2)), np.eye(2))
    assert identity_of(span_algebra([e12])) is None
    assert np.allclose(identity_of(span_algebra([e11])), e11)


def test_unitize(e11, e12):
    alg = unitize(span_algebra([e12]))
    assert alg.dim == 2 and alg.contains_identity
    assert unitize(full_algebra(2)).dim == 4
    grown = unitize(span_algebra([e11]))
    assert grown.dim == 2
    assert contains(grown, unit(2, 1, 1))[0]


def test_gram_and_closure_invariants():
    for alg in (upper_triangular_algebra(3), diagonal_algebra(4), full_algebra(2)):
        assert alg.gram_defect() <= 1e-10
        assert alg.closure_defect() <= 1e-8


def test_a_h_worked_examples(e11, e12):
    ah, q = a_h(upper_triangular_algebra(2), seed=0)
    assert op_norm(q - np.eye(2)) <= 1e-8
    assert ah.dim == 3

    with pytest.warns(RuntimeWarning):
        ah, q = a_h(span_algebra([e12]), seed=0)
    assert op_norm(q) <= 1e-10 and ah.dim == 0

    ah, q = a_h(span_algebra([e11, e12]), seed=0)
    assert op_norm(q - e11) <= 1e-8
    assert ah.dim == 1
    assert contains(ah, e11)[0]


def test_a_h_fixed_point(e11, e12):
    ah, q = a_h(span_algebra([e11, e12]), seed=1)
    ah2, q2 = a_h(ah, seed=2)
    assert op_norm(q2 - q) <= 1e-8
    assert ah2.dim == ah.dim


def test_amplify(e12):
    scalars = span_algebra([np.eye(1)])
    m2 = amplify(scalars, 2)
    assert m2.dim == 4 and m2.ambient_dim == 2
    nil = amplify(span_algebra([e12]), 2)
    assert nil.dim == 4 and nil.ambient_dim == 4
    up = amplify(upper_triangular_algebra(2), 2)
    assert up.dim == 12
    with pytest.raises(ValueError):
        amplify(full_algebra(8), 9)


def test_oa_of_accretive_sets_has_identity():
    # operator algebras generated by accretive elements are unital here
    for k in range(20):
        n = 2 + k % 5
        gens = [gen_accretive(n, 101 + 7 * k + j) for j in range(1 + k % 3)]
        alg = generate_algebra(gens, mode="algebra")
        assert identity_of(alg) is not None


def test_span_algebra_rejects_non_closed(e12):
    with pytest.raises(ValueError):
        span_algebra([e12 + e12.T.conj()])  # span{E12+E21} is not an algebra


def test_algebra_names_and_json():
    alg = algebra_from_name("blockupper:1,2")
    assert alg.ambient_dim == 3 and alg.dim == 7
    with pytest.raises(ValueError):
        algebra_from_name("bogus:2")
    data = algebra_to_json(alg)
    back = algebra_from_json(data)
    assert back.dim == alg.dim
    gens = algebra_from_json(
        {"generators": [{"n": 1, "entries": [[2.0, 0.0]]}], "mode": "algebra"}
    )
    assert gens.dim == 1
