import json
import os
import subprocess

import numpy as np
import pytest

import mz

UNIT_BALL = {"kind": "ball", "center": [0, 0], "radius": 1}


def test_projection_onto_triangle():
    tri = {"kind": "vpolytope", "vertices": [[0, 0], [1, 0], [0, 1]]}
    d, foot = mz.project(tri, [1, 1])
    assert d == pytest.approx(np.sqrt(0.5), abs=1e-12)
    assert foot == pytest.approx([0.5, 0.5], abs=1e-12)


def test_hausdorff_segment_triangle():
    seg = {"kind": "vpolytope", "vertices": [[0, 0], [1, 0]]}
    tri = {"kind": "vpolytope", "vertices": [[0, 0], [1, 0], [0, 1]]}
    assert mz.hausdorff(seg, tri) == pytest.approx(1.0, abs=1e-12)


def test_profile_certificate():
    c = mz.profile_certificate(0.05)
    assert c["passed"]
    assert c["max_slope"] == pytest.approx(8 * 0.05, rel=0.01)


def test_schedule_identity():
    c1 = mz.operator_c1("gradient", 2)
    s = mz.build_schedule(0.5 * 0.09 * (1 + c1), 2, 1.0, 0.5, 1.0, c1)
    assert s["residual"] <= 1e-12


def test_fld_round_trip(tmp_path):
    a = np.random.default_rng(1).normal(size=(5, 6, 2))
    path = str(tmp_path / "f.fld")
    mz.write_fld(path, a, 0.25, [-1.0, 0.5])
    b, grid = mz.read_fld(path)
    assert np.array_equal(a, b)
    assert grid["shape"] == [5, 6]
    assert grid["spacing"] == 0.25


def test_whole_space_identity():
    x = np.linspace(-1, 1, 33)
    u = (0.5 * x[:, None] + 0.0 * x[None, :])[..., None]
    g, report = mz.truncate_whole_space(u, x[1] - x[0], [-1, -1], "gradient", UNIT_BALL, 0.5, 1.0)
    assert np.array_equal(g, u)
    assert report["total_mu"] == 0.0


def test_run_config_exit_codes(tmp_path):
    cfg = {"mode": "whole_space", "operator": "gradient", "u0": "missing.fld"}
    code, message, _ = mz.run_config(cfg, str(tmp_path))
    assert code == 2


def test_euler_potential():
    _, report = mz.run_euler_potential(3, 8, 1)
    assert report["A_sup"] <= 1e-10 * report["U_sup"]


def test_symbol_check():
    assert mz.symbol_check("euler", 3, 20)["failures"] == []
    assert mz.symbol_check("symgrad", 2, 20)["failures"] == []


@pytest.mark.skipif("MZ_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_profile_cert():
    out = subprocess.run([os.environ["MZ_CLI"], "profile-cert", "--epsilon", "0.05"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["passed"]
