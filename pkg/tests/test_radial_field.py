"""径向场采样、重建与导数的测试。"""

import numpy as np
import pytest

from lognlw.exceptions import ConfigError, ResolutionError, UnsupportedDataError
from lognlw.models import FieldState, InitialData, RadialGrid
from lognlw.services.profiles import (
    build_initial_data,
    gaussian_bump,
    polynomial_bump,
    standing_wave,
    table_profile,
    zero_data,
)
from lognlw.services.radial_field import (
    derivatives_of,
    divide_by_r,
    reconstruct_u,
    sample_initial,
    support_radius_of,
)


def _state(grid, spec, v, w=None):
    return FieldState(v=np.asarray(v, dtype=float), w=np.zeros(grid.n + 1) if w is None else w, grid=grid, spec=spec)


def test_grid_nodes():
    grid = RadialGrid(r_max=8.0, n=512)
    nodes = grid.nodes
    assert nodes[0] == 0.0
    assert nodes[-1] == 8.0
    assert grid.dr == pytest.approx(8.0 / 512)
    assert grid.refined().n == 1024


def test_grid_rejects_too_few_cells():
    with pytest.raises(ValueError):
        RadialGrid(r_max=1.0, n=8)


def test_sample_zero(defocusing):
    state = sample_initial(RadialGrid(r_max=4.0, n=64), defocusing, zero_data())
    assert np.all(state.v == 0.0)
    assert np.all(state.w == 0.0)
    assert state.t == 0.0


def test_sample_gaussian_pointwise(defocusing):
    grid = RadialGrid(r_max=8.0, n=512)
    data = gaussian_bump(amplitude=1.0)
    state = sample_initial(grid, defocusing, data)
    r = grid.nodes
    np.testing.assert_array_equal(state.v[1:], r[1:] * data.u0(r[1:]))
    assert state.v[0] == 0.0
    assert np.all(state.v[r >= 3.0] == 0.0)


def test_sample_rejects_support_beyond_grid(defocusing):
    with pytest.raises(UnsupportedDataError):
        sample_initial(RadialGrid(r_max=8.0, n=256), defocusing, gaussian_bump(support_radius=8.0))


def test_sample_rejects_underresolved_support(defocusing):
    with pytest.raises(ResolutionError):
        sample_initial(RadialGrid(r_max=8.0, n=16), defocusing, gaussian_bump(support_radius=3.0))


def test_sample_rejects_leaking_data(defocusing):
    data = InitialData(u0=np.ones_like, u1=np.zeros_like, support_radius=1.0)
    with pytest.raises(UnsupportedDataError):
        sample_initial(RadialGrid(r_max=4.0, n=64), defocusing, data)


def test_sample_rejects_non_finite(defocusing):
    data = InitialData(u0=lambda r: np.full_like(r, np.nan), u1=np.zeros_like, support_radius=1.0)
    with pytest.raises(UnsupportedDataError):
        sample_initial(RadialGrid(r_max=4.0, n=64), defocusing, data)


def test_dirichlet_mode(linear):
    grid = RadialGrid(r_max=1.0, n=64)
    state = sample_initial(grid, linear, standing_wave(amplitude=1.0, mode=1, r_max=1.0))
    np.testing.assert_allclose(state.v, np.sin(np.pi * grid.nodes), atol=1e-15)
    with pytest.raises(UnsupportedDataError):
        sample_initial(grid, linear, InitialData(u0=np.ones_like, u1=np.zeros_like))


def test_reconstruct_identity_profile(defocusing):
    grid = RadialGrid(r_max=2.0, n=64)
    u = reconstruct_u(_state(grid, defocusing, grid.nodes))
    np.testing.assert_allclose(u, 1.0, rtol=1e-14)


def test_reconstruct_origin_from_gaussian(defocusing):
    grid = RadialGrid(r_max=4.0, n=256)
    r = grid.nodes
    u = reconstruct_u(_state(grid, defocusing, r * np.exp(-r * r)))
    assert abs(u[0] - 1.0) <= grid.dr


def test_origin_value_is_fourth_order(defocusing):
    for n in (64, 128):
        grid = RadialGrid(r_max=4.0, n=n)
        r, h = grid.nodes, grid.dr
        u = reconstruct_u(_state(grid, defocusing, r * np.exp(-r * r)))
        # v = r − r³ + r⁵/2 − r⁷/6 + …，u[0] = 1 − 2h⁴ + (10/3)h⁶ + …
        assert u[0] == pytest.approx(1.0 - 2.0 * h**4, abs=5.0 * h**6)
        assert abs(u[0] - 1.0) < 0.01 * h**2


def test_divide_by_r_exact_on_odd_cubics():
    grid = RadialGrid(r_max=1.0, n=32)
    r = grid.nodes
    out = divide_by_r(grid, r + r**3)
    assert out[0] == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(out[1:], 1.0 + r[1:] ** 2, rtol=1e-14)


def test_derivatives_of_constant():
    p_r, p_rr = derivatives_of(np.full(65, 3.0), 0.1)
    assert np.all(p_r == 0.0)
    assert np.all(p_rr == 0.0)


def test_derivatives_exact_on_quadratics():
    grid = RadialGrid(r_max=2.0, n=40)
    r = grid.nodes
    p_r, p_rr = derivatives_of(r * r, grid.dr)
    np.testing.assert_allclose(p_r, 2.0 * r, atol=1e-10)
    np.testing.assert_allclose(p_rr, 2.0, atol=1e-9)


def test_derivatives_second_order():
    errors = []
    for n in (100, 200):
        grid = RadialGrid(r_max=4.0, n=n)
        r = grid.nodes
        p_r, p_rr = derivatives_of(np.exp(-r * r), grid.dr)
        exact_r = -2.0 * r * np.exp(-r * r)
        exact_rr = (4.0 * r * r - 2.0) * np.exp(-r * r)
        errors.append(max(np.max(np.abs(p_r - exact_r)), np.max(np.abs(p_rr - exact_rr))))
    assert 3.0 <= errors[0] / errors[1] <= 5.0


def test_support_radius_of(defocusing):
    grid = RadialGrid(r_max=8.0, n=256)
    assert support_radius_of(sample_initial(grid, defocusing, zero_data())) is None
    radius = support_radius_of(sample_initial(grid, defocusing, polynomial_bump(support_radius=3.0)))
    assert 3.0 - grid.dr <= radius < 3.0


def test_table_profile(tmp_path, defocusing):
    path = tmp_path / "profile.csv"
    path.write_text("r,u0,u1\n0,1,0\n1,0.5,0\n2,0,0\n3,0,0\n", encoding="utf-8")
    data = table_profile(str(path), amplitude=2.0)
    assert data.support_radius == 2.0
    assert data.u0(np.array([0.5]))[0] == pytest.approx(1.5)
    assert data.u0(np.array([5.0]))[0] == 0.0


def test_table_profile_requires_trailing_zero(tmp_path):
    path = tmp_path / "profile.csv"
    path.write_text("0,1,0\n1,1,0\n", encoding="utf-8")
    with pytest.raises(UnsupportedDataError):
        table_profile(str(path))


def test_unknown_profile():
    with pytest.raises(ConfigError):
        build_initial_data("sawtooth")
