import math

import numpy as np
import pytest

import fpattern

VORTEX = """
[pattern]
kind = axisymmetric
nx = 65
xmin = -1.25
xmax = 1.25
ymin = -1.25
ymax = 1.25
[output]
formats = csv
"""


def test_build_fields_shapes_and_values():
    f = fpattern.build_fields(VORTEX)
    assert f["phi"].shape == (65, 65)
    assert f["grid"]["nx"] == 65
    # Centre node: Phi = A, pressure low below ambient.
    assert f["phi"][32, 32] == pytest.approx(1.0)
    assert f["pi0"][32, 32] < f["pi0"][0, 0]
    assert np.all(f["rho"] > 0)


def test_velocity_is_anticlockwise():
    f = fpattern.build_fields(VORTEX)
    # East of the centre the flow points north.
    assert f["u_y"][32, 48] > 0
    assert abs(f["u_x"][32, 48]) < 1e-12


def test_residuals_rest_state_is_zero():
    r = fpattern.residuals("[pattern]\nkind = rest\nnx = 33\n")
    assert all(r[name] == (0.0, 0.0) for name in ("eikonal", "poisson", "momentum"))


def test_config_errors_map_to_value_error():
    with pytest.raises(fpattern.ConfigError, match="amplitude"):
        fpattern.build_fields("[pattern]\namplitude = 0\n")
    with pytest.raises(ValueError):
        fpattern.build_fields("[pattern]\nfoo = 1\n")


def test_numerical_error():
    with pytest.raises(fpattern.NumericalError):
        fpattern.build_fields("[pattern]\nnx = 33\n[physics]\npi_ambient = 0.1\n")


def test_run_writes_files(tmp_path):
    files = fpattern.run("build", VORTEX, tmp_path, threads=1)
    assert "phi.csv" in files
    assert (tmp_path / "manifest.txt").exists()
    header = (tmp_path / "pi0.csv").read_text().splitlines()[0]
    assert header == "x,y,pi0"


def test_constant_gradient_drift():
    # gamma = 2, C = 2.25 gives c0 = 3; after whole periods V returns to V0.
    X, V = fpattern.constant_gradient_solution((0.0, 0.0), (0.0, 0.01), 2.0, 2.25, 1.0, 2 * math.pi)
    assert V == pytest.approx((0.0, 0.0), abs=1e-15)
    assert X[0] == pytest.approx(-0.03 * 2 * math.pi)


def test_config_hash():
    assert fpattern.config_hash("") == 0xCBF29CE484222325
