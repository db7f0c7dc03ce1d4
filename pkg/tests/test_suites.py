from __future__ import annotations

import json

import pytest

from realpos.suites import run_suite, suite_names


def test_registry_is_complete():
    assert len(suite_names()) == 13


def test_unknown_suite_is_an_error():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("unknown")


def test_f_bijection_at_seed_42():
    report = run_suite("f-bijection", seed=42, sizes=range(2, 9))
    assert report.cases == 300 and not report.failures


def test_report_shape_and_determinism(tmp_path):
    r1 = run_suite("lemerdy", seed=7, dump_dir=str(tmp_path))
    r2 = run_suite("lemerdy", seed=7, dump_dir=str(tmp_path))
    d1, d2 = r1.to_json(), r2.to_json()
    assert d1.pop("wall_time") >= 0.0 and d2.pop("wall_time") >= 0.0
    assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)
    assert set(d1) == {
        "suite", "seed", "sizes", "cases", "failures", "tolerances", "extra", "passed",
    }
    assert d1["tolerances"]["solver_tol"] == 1e-6
    assert not list(tmp_path.iterdir())  # nothing failed, nothing dumped
