import numpy as np
import pytest
from hypothesis import given, strategies as st

from harmcp2.grid import GridError, build_grid, chart_weight, fd_matrix, smooth_step

from conftest import grid


def test_weights_sum_to_sphere_area():
    for N in (8, 17, 32):
        assert grid(N).integrate(np.ones(grid(N).shape)) == pytest.approx(4 * np.pi, rel=1e-14)


@given(st.floats(0.05, 20.0), st.floats(0, 2 * np.pi))
def test_partition_of_unity(r, theta):
    z = r * np.exp(1j * theta)
    assert chart_weight(np.array(z)) + chart_weight(np.array(1 / z)) == pytest.approx(1.0, abs=1e-14)


def test_smooth_step_limits():
    t = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    assert smooth_step(t).tolist() == [0.0, 0.0, 0.5, 1.0, 1.0]


def test_hemisphere_integral_is_exact():
    # the chart swap z -> 1/z maps each hemisphere's weights onto the other's
    g = grid(32)
    x3 = g.sphere_points()[..., 2]
    assert g.integrate((x3 > 0).astype(float)) == pytest.approx(2 * np.pi, abs=1e-12)


def test_smooth_integrand_converges():
    errs = []
    for N in (32, 64):
        x3 = grid(N).sphere_points()[..., 2]
        errs.append(abs(grid(N).integrate(x3**2) - 4 * np.pi / 3))
    assert errs[0] < 1e-4 and errs[1] < errs[0] / 16


def test_sphere_points_unit():
    p = grid(16).sphere_points()
    assert np.allclose(np.linalg.norm(p, axis=-1), 1.0)


@pytest.mark.parametrize("deriv", [1, 2])
def test_fd_fourth_order(deriv):
    errs = []
    for n in (40, 80):
        x = np.linspace(0, 1, n)
        h = x[1] - x[0]
        exact = np.cos(3 * x) * 3 if deriv == 1 else -9 * np.sin(3 * x)
        errs.append(np.max(np.abs(fd_matrix(n, h, deriv) @ np.sin(3 * x) - exact)))
    assert errs[0] / errs[1] > 12


def test_fd_exact_on_quartics():
    x = np.linspace(-1, 1, 11)
    h = x[1] - x[0]
    assert np.allclose(fd_matrix(11, h, 1) @ x**4, 4 * x**3, atol=1e-10)
    assert np.allclose(fd_matrix(11, h, 2) @ x**4, 12 * x**2, atol=1e-9)


def test_complex_derivatives():
    g = grid(32)
    z = g.nodes
    f = z**3 + np.conj(z) ** 2
    assert np.max(np.abs(g.dz(f) - 3 * z**2)) < 1e-9
    assert np.max(np.abs(g.dzbar(f) - 2 * np.conj(z))) < 1e-9


def test_odd_grid_avoids_origin():
    g = grid(17)
    assert np.min(np.abs(g.nodes)) > 0.25 * g.h


@pytest.mark.parametrize("N", [7, 0, -3, 16.0, "32"])
def test_bad_resolution(N):
    with pytest.raises(GridError):
        build_grid(N)


def test_grid_is_read_only():
    with pytest.raises(ValueError):
        grid(8).weights[0, 0, 0] = 1.0
