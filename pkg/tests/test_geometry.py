import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from harmcp2.geometry import (
    covariant_derivative,
    curvature_apply,
    energy_split,
    fs_degree,
    fs_energy,
    jacobi_apply,
    jacobi_residual,
    metric,
    tension_residual,
    tension_tolerance,
)
from harmcp2.pipeline import killing_bump_field, map_from_array
from harmcp2.sampled import map_from_curve, project, sample_map

from conftest import grid

FOUR_PI = 4 * np.pi

vec3 = arrays(np.complex128, 3, elements=st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))


def _tangent(u, X):
    return project(X, u / np.linalg.norm(u))


def test_line_energy_and_degree(line):
    m = map_from_curve(line, grid(32))
    assert fs_energy(m) == pytest.approx(FOUR_PI, rel=1e-3)
    assert fs_degree(m) == pytest.approx(1.0, abs=1e-3)


def test_conjugate_line_has_degree_minus_one():
    conj = lambda pts, ch: np.stack([np.ones_like(pts), np.conj(pts), np.zeros_like(pts)], axis=-1)
    split = energy_split(sample_map(conj, grid(32)))
    assert split.degree == pytest.approx(-1.0, abs=1e-3)
    assert split.e_prime == pytest.approx(0.0, abs=1e-6)


def test_veronese_gauss_energy(veronese):
    m = map_from_curve(veronese, grid(32), "gauss-prime")
    assert fs_energy(m) == pytest.approx(4 * FOUR_PI, rel=1e-3)
    assert fs_degree(m) == pytest.approx(0.0, abs=1e-3)


def test_constant_map_is_trivial():
    g = grid(16)
    u = np.zeros(g.shape + (3,), complex)
    u[..., 0] = 1.0
    m = map_from_array(u, g)
    assert fs_energy(m) == 0.0 and tension_residual(m) == 0.0


def test_tension_detects_non_harmonic_map(veronese):
    g = grid(32)
    m = map_from_curve(veronese, g, "gauss-prime")
    bent = map_from_array(m.u + 0.3 * killing_bump_field(m).values, g)
    assert tension_residual(m) < 1e-2
    assert tension_residual(bent) > 0.1


def test_holomorphic_maps_are_harmonic(cubic):
    for N in (32, 64):
        assert tension_residual(map_from_curve(cubic, grid(N))) < tension_tolerance(N)


@settings(max_examples=50)
@given(vec3, vec3)
def test_curvature_antisymmetric(u, X):
    if np.linalg.norm(u) < 1e-3:
        return
    X = _tangent(u, X)
    assert np.allclose(curvature_apply(X, X, X), 0, atol=1e-12)


@settings(max_examples=50)
@given(vec3, vec3)
def test_holomorphic_sectional_curvature_is_one(u, X):
    if np.linalg.norm(u) < 1e-3:
        return
    X = _tangent(u, X)
    n2 = metric(X, X)
    if n2 < 1e-3:
        return
    K = metric(curvature_apply(X, 1j * X, 1j * X), X) / n2**2
    assert K == pytest.approx(1.0, rel=1e-10)


def test_totally_real_sectional_curvature_is_quarter():
    X = np.array([0, 0.5, 0], complex)
    Y = np.array([0, 0, 0.5], complex)
    # unit vectors at u = e0 with g(X, JY) = 0
    assert metric(X, X) == pytest.approx(1.0) and metric(X, 1j * Y) == 0.0
    assert metric(curvature_apply(X, Y, Y), X) == pytest.approx(0.25)


def _commutator_error(f, N):
    g = grid(N)
    m = map_from_curve(f, g, "gauss-prime")
    X = killing_bump_field(m).values
    Ex, Ey = m.perp(m.ux), m.perp(m.uy)
    nx = covariant_derivative(m, X, g.dx(X), m.ux)
    ny = covariant_derivative(m, X, g.dy(X), m.uy)
    xy = covariant_derivative(m, ny, g.dx(ny), m.ux)
    yx = covariant_derivative(m, nx, g.dy(nx), m.uy)
    R = curvature_apply(Ex, Ey, X)
    return g.sup(np.linalg.norm(xy - yx - R, axis=-1)) / g.sup(np.linalg.norm(R, axis=-1))


def test_curvature_sign_matches_connection(veronese):
    e32, e64 = _commutator_error(veronese, 32), _commutator_error(veronese, 64)
    assert e64 < 1e-2 and e32 / e64 > 8


def test_jacobi_of_zero_field(veronese):
    m = map_from_curve(veronese, grid(16), "gauss-prime")
    zero = m.field(np.zeros_like(m.u))
    assert jacobi_residual(m, zero) == 0.0
    assert np.all(jacobi_apply(m, zero).values == 0)


def test_jacobi_is_linear(veronese):
    m = map_from_curve(veronese, grid(16), "gauss-prime")
    a, b = killing_bump_field(m, 1), killing_bump_field(m, 2)
    lhs = jacobi_apply(m, a.scale(2.0) + b).values
    rhs = 2.0 * jacobi_apply(m, a).values + jacobi_apply(m, b).values
    assert np.allclose(lhs, rhs)


def test_non_jacobi_control_is_large(veronese):
    m = map_from_curve(veronese, grid(32), "gauss-prime")
    assert jacobi_residual(m, killing_bump_field(m)) > 1.0
