import json

import numpy as np
import pytest

import cvforge


def test_fixtures_pass_their_axioms():
    e1 = cvforge.example_rank1()
    assert cvforge.check_saito(e1).passed
    assert cvforge.check_cv(e1).passed
    assert cvforge.check_connection(e1, "cv").passed
    e2 = cvforge.example_semisimple(2, [0.0, 1.0])
    assert cvforge.check_higgs_pair(e2).passed


def test_chart_round_trip(tmp_path):
    sg = cvforge.sinh_gordon_unfolded(5)
    path = tmp_path / "sg.json"
    sg.save(str(path))
    back = cvforge.Chart.load(str(path))
    assert (back.m, back.n, back.d) == (2, 2, 5)
    assert back.to_json() == sg.to_json()


def test_schema_error_carries_kind():
    doc = json.loads(cvforge.example_rank1().to_json())
    doc["schema"] = "cvforge/0"
    with pytest.raises(cvforge.CvforgeError) as info:
        cvforge.Chart.from_json(json.dumps(doc))
    assert info.value.kind == "SchemaError"


def test_rho_on_the_nilpotent_orbit():
    A = np.array([[1, 1j], [1j, -1]]) / 2
    assert cvforge.rho(A) == pytest.approx(-2.0)
    for S in cvforge.sample_nilpotent_cone(2, 20, 3):
        assert cvforge.rho(S) == pytest.approx(-2.0, abs=1e-8)
    with pytest.raises(cvforge.CvforgeError):
        cvforge.rho(np.zeros((2, 2)))


def test_canonical_and_sectional():
    sg = cvforge.sinh_gordon_unfolded(5)
    data = cvforge.canonical(sg)
    hM = data["hM"]
    assert np.allclose(hM, hM.conj().T)
    assert np.all(np.linalg.eigvalsh(hM) > 0)
    assert cvforge.curvature_discrepancy(sg) < 1e-8
    value, other = cvforge.sectional_curvature(sg, np.array([0.3, 1.0 - 0.5j]))
    assert value <= 1e-9
    assert abs(value - other) < 1e-8


def test_formal_iso_full_order():
    e2 = cvforge.example_semisimple(2, [0.0, 1.0])
    out = cvforge.solve_formal_iso(e2, e2, 4)
    assert out["achieved"] == 4
    assert max(out["residuals"]) < 1e-8
    assert out["harmonic"].passed


def test_bound_k0_is_seeded():
    sg = cvforge.sinh_gordon_unfolded(5)
    a = cvforge.bound_k0(sg, 200, 7)
    b = cvforge.bound_k0(sg, 200, 7)
    assert a["k0"] > 0
    assert a["k0"] == b["k0"]
    assert sum(a["histogram"]) == a["evaluated"]


def test_run_command_exit_codes(tmp_path):
    path = str(tmp_path / "e1.json")
    code, _ = cvforge.run_command(["fixture", "--name", "e1", "--out", path])
    assert code == 0
    code, report = cvforge.run_command(["check-cv", path])
    assert code == 0
    assert json.loads(report)["status"] == "pass"
    code, report = cvforge.run_command(["check-cv", str(tmp_path / "nope.json")])
    assert code == 2
