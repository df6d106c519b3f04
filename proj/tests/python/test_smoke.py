import json
from pathlib import Path

import numpy as np
import pytest

import genform

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def test_verify_all_suites():
    res = genform.run("verify")
    assert res.exit_code == 0
    rep = json.loads(res.report)
    assert rep["pass"] is True
    assert len(rep["suites"]) == 5
    for s in rep["suites"]:
        assert s["residual"] < 1e-9


def test_fault_injection_is_caught():
    res = genform.run("verify", flip_suite="clifford")
    assert res.exit_code == 4
    rep = json.loads(res.report)
    assert rep["first_failure"] == "clifford"


def test_generator_anticommutators():
    n = 3
    gens = [genform.generator_matrix(n, a) for a in range(2 * n)]
    eye = np.eye(2**n)
    for p in range(2 * n):
        for q in range(2 * n):
            anti = gens[p] @ gens[q] + gens[q] @ gens[p]
            expect = eye if abs(p - q) == n else np.zeros_like(eye)
            assert np.max(np.abs(anti - expect)) < 1e-12


def test_scalar_part_acts_as_identity():
    n = 4
    packed = np.zeros(genform.cl2_dim(n))
    packed[0] = 1.0
    M = genform.quadratic_matrix(n, packed)
    assert np.allclose(M, np.eye(2**n))


def test_volume_structure_tables():
    n, tuples = genform.structure_form("sl", 2)
    assert n == 4
    assert len(tuples) == 1
    assert tuples[0].shape == (16,)
    cdims, rdims = genform.fiber_dims("sl", 2)
    assert cdims == [1, 4, 7, 8, 8]
    assert rdims[0] == 1
    assert rdims[1:] == [2 * d for d in cdims[1:]]


def test_analyze_report_round_trips():
    res = genform.run("analyze", '{"kind":"sl","n":2}')
    assert res.exit_code == 0
    rep = json.loads(res.report)
    assert rep["pass"] is True
    assert rep["isotropy"]["dim"] == 15
    assert rep["fiber"]["complex_dims"] == [1, 4, 7, 8, 8]


def test_deform_fixture_runs_clean():
    job = (FIXTURES / "sl2_t4_deform.json").read_text()
    res = genform.run("deform", job)
    assert res.exit_code == 0
    rep = json.loads(res.report)
    assert rep["status"] == "ok"
    assert len(rep["coefficients"]) == 6
    for row in rep["orders"]:
        assert row["ob_harmonic"] <= 1e-9 * max(row["ob_norm"], 1.0)


def test_config_errors_raise_cleanly():
    res = genform.run("analyze", '{"kind":"nosuch"}')
    assert res.exit_code == 1
    assert "error" in json.loads(res.report)
    with pytest.raises(Exception):
        genform.generator_matrix(2, 9)
