import json
import math
import os
import subprocess

import numpy as np
import pytest

import ltp


def test_flat_transport_is_identity():
    setup = ltp.make_model("flat")
    path = ltp.Path.segment([0.0, 0.0], [1.0, 1.0])
    h = ltp.transport_matrix(setup.provider, path, 0.0, 1.0, steps=256)
    assert np.allclose(h.value, np.eye(2), atol=1e-14)
    assert h.steps == 256


def test_constant_model_matches_matrix_exponential():
    g = np.array([[0.0, -1.0], [1.0, 0.0]])
    setup = ltp.make_model("constant", constant_g=g)
    path = ltp.Path.segment([0.0, 0.0], [1.0, 0.0])
    h = ltp.transport_matrix(setup.provider, path, 0.0, 1.0).value
    expected = np.array([[math.cos(1.0), math.sin(1.0)], [-math.sin(1.0), math.cos(1.0)]])
    assert np.linalg.norm(h - expected) <= 1e-10


def test_cocycle_composition_on_sphere():
    setup = ltp.make_model("sphere")
    path = ltp.Path.segment(setup.region_lo, setup.region_hi)
    full = ltp.transport_matrix(setup.provider, path, 0.1, 0.9).value
    first = ltp.transport_matrix(setup.provider, path, 0.1, 0.5).value
    second = ltp.transport_matrix(setup.provider, path, 0.5, 0.9).value
    assert np.linalg.norm(second @ first - full) <= 1e-9


def test_sphere_curvature_via_holonomy():
    setup = ltp.make_model("sphere")
    r = ltp.curvature_matrix(setup.provider, setup.family, setup.s0, setup.t0)
    est = ltp.holonomy_curvature_estimate(
        setup.provider, setup.family, setup.s0, setup.t0, [0.04, 0.02, 0.01]
    )
    assert np.linalg.norm(est.value - r) <= 1e-5
    assert abs(est.fitted_order - 2.0) <= 0.5


def test_torsion_plane_pentagon_ratio():
    setup = ltp.make_model("torsion_plane", torsion_c=0.4)
    h = 1e-3
    defect = ltp.pentagon_defect(setup.provider, setup.family, setup.s0, setup.t0, h, h)
    assert np.linalg.norm(defect / (h * h) - np.array([0.4, 0.0])) <= 1e-4


def test_flatness_verdicts_and_flat_frame():
    sphere = ltp.make_model("sphere")
    region = ltp.RegionGrid(sphere.region_lo, sphere.region_hi, 3, 3)
    verdict = ltp.flatness_verdict(sphere.provider, region)
    assert not verdict.flat_by_curvature
    assert not verdict.flat_by_transport
    assert verdict.consistent

    plane = ltp.make_model("torsion_plane")
    plane_region = ltp.RegionGrid(plane.region_lo, plane.region_hi, 3, 3)
    frame = ltp.construct_flat_frame(plane.provider, plane_region, plane.basepoint, np.eye(2))
    assert np.allclose(frame.basis_at(plane.basepoint), np.eye(2))

    with pytest.raises(ltp.NotFlatError):
        ltp.construct_flat_frame(sphere.provider, region, sphere.basepoint, np.eye(2))


def test_run_config_is_deterministic():
    cfg = json.dumps(
        {"schema": 1, "experiment": "torsion", "model": "torsion_plane", "seed": 3}
    )
    one = ltp.run_config(cfg)
    two = ltp.run_config(cfg)
    assert one == two
    body = json.loads(one)
    assert body["summary"]["failed"] == 0
    assert body["experiment"] == "torsion"


def test_run_config_csv_header():
    cfg = json.dumps({"schema": 1, "experiment": "axioms", "model": "flat"})
    csv_text = ltp.run_config_csv(cfg)
    assert csv_text.splitlines()[0] == "experiment,check,model,param_point,h,value,tolerance,pass"


def test_bad_config_raises_config_error():
    with pytest.raises(ltp.ConfigError):
        ltp.run_config(json.dumps({"schema": 1, "experiment": "warp"}))
    with pytest.raises(ltp.ConfigError):
        ltp.run_config("not json")


def test_invalid_arguments_raise_value_error():
    setup = ltp.make_model("flat")
    path = ltp.Path.segment([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        ltp.transport_matrix(setup.provider, path, 0.0, 2.0)


def test_names_listings():
    assert "sphere" in ltp.model_names()
    assert "flatness" in ltp.experiment_names()
    assert len(ltp.experiment_names()) == 9


def test_cli_binary_writes_report(tmp_path):
    geo = os.environ.get("GEO_BIN")
    if not geo:
        pytest.skip("GEO_BIN not set")
    out = tmp_path / "report.json"
    subprocess.run([geo, "axioms", "--model", "flat", "--out", str(out)], check=True)
    doc = json.loads(out.read_text())
    assert doc["body"]["summary"]["failed"] == 0
    assert "timestamp" in doc["header"]
