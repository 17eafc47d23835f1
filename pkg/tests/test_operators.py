from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fraclab.app.errors import ParameterError, ZeroExtensionError
from fraclab.app.modules.domain import (
    Domain,
    GridFunction,
    build_eigenbasis,
    build_grid,
    integrate,
    interior_bump,
    sample,
)
from fraclab.app.modules.operators import (
    FourierBox,
    FracOrder,
    FractionalOperator,
    frac_sobolev_norm,
    fourier_frac_laplacian,
    gagliardo_seminorm,
    l1_norm,
    l2_norm,
    normalization_constant,
    pair_integral,
    regional_frac_laplacian,
    restricted_frac_laplacian,
    spectral_frac_laplacian,
    sup_norm,
)


@pytest.fixture
def bump():
    domain = Domain.interval(-1.0, 1.0)
    grid = build_grid(domain, 256)
    return GridFunction(grid, interior_bump(domain, grid))


@given(st.integers(min_value=1, max_value=8), st.floats(min_value=0.05, max_value=0.95))
def test_spectral_operator_scales_eigenfunctions(j, alpha):
    domain = Domain.interval(0.0, np.pi)
    grid = build_grid(domain, 64)
    basis = build_eigenbasis(domain, grid)
    phi = basis.phi(j)
    result = spectral_frac_laplacian(phi, basis, alpha)
    np.testing.assert_allclose(result.values, j ** (2 * alpha) * phi.values, atol=1e-10 * j ** 2)


def test_operator_dispatch_guards(interval_grid):
    u = GridFunction(interval_grid, np.zeros(interval_grid.size))
    with pytest.raises(ParameterError):
        FractionalOperator.of("spectral", 0.5)
    with pytest.raises(ParameterError):
        FractionalOperator.of("laplace", 0.5)
    with pytest.raises(ParameterError):
        fourier_frac_laplacian(u, 1.0)
    with pytest.raises(ParameterError):
        FracOrder(0.5, 0.7)


def test_kernel_operators_need_zero_extension(interval_grid):
    ones = GridFunction(interval_grid, np.ones(interval_grid.size))
    with pytest.raises(ZeroExtensionError):
        restricted_frac_laplacian(ones, interval_grid, 0.5)


@pytest.mark.parametrize("kind", ["fourier", "restricted", "regional"])
def test_operators_are_homogeneous(bump, kind):
    op = FractionalOperator.of(kind, 0.4)
    np.testing.assert_allclose(op(3.0 * bump).values, 3.0 * op(bump).values, rtol=1e-12, atol=1e-12)


def test_simple_norms(interval_grid):
    ones = GridFunction(interval_grid, np.ones(interval_grid.size))
    assert sup_norm(ones) == pytest.approx(1.0)
    assert l1_norm(ones) == pytest.approx(2.0)
    assert l2_norm(ones) == pytest.approx(np.sqrt(2.0))


def test_spectral_sobolev_norm_of_eigenfunction(unit_pi):
    grid = build_grid(unit_pi, 64)
    basis = build_eigenbasis(unit_pi, grid)
    assert frac_sobolev_norm(basis.phi(2), "spectral", 0.5, basis) == pytest.approx(np.sqrt(2.0), rel=1e-10)
    assert frac_sobolev_norm(basis.phi(2), "spectral", 0.0, basis) == pytest.approx(1.0, rel=1e-10)


def test_restricted_energy_matches_fourier_norm(bump):
    alpha = 0.4
    energy = float(np.dot(bump.grid.weights, bump.values * restricted_frac_laplacian(bump, bump.grid, alpha).values))
    assert energy == pytest.approx(frac_sobolev_norm(bump, "fourier", alpha) ** 2, rel=0.05)


def test_regional_energy_is_below_restricted(bump):
    weights = bump.grid.weights
    restricted = float(np.dot(weights, bump.values * restricted_frac_laplacian(bump, bump.grid, 0.4).values))
    regional = float(np.dot(weights, bump.values * regional_frac_laplacian(bump, bump.grid, 0.4).values))
    assert regional < restricted


def test_whole_space_seminorm_matches_fourier_norm(bump):
    alpha = 0.4
    whole = pair_integral(bump, bump, 2.0 * alpha, region="whole")
    fourier = frac_sobolev_norm(bump, "fourier", alpha) ** 2
    assert 0.5 * normalization_constant(1, alpha) * whole == pytest.approx(fourier, rel=0.05)


def test_pair_integral_is_symmetric(interval, interval_grid):
    u = sample(interval_grid, lambda x: np.cos(np.pi * x / 2.0))
    v = sample(interval_grid, lambda x: 1.0 - x * x)
    assert pair_integral(u, v, 0.6) == pytest.approx(pair_integral(v, u, 0.6), rel=1e-12)


def test_seminorm_is_absolutely_homogeneous(bump):
    for p in (1, 2):
        base = gagliardo_seminorm(bump, bump.grid, 0.3, p=p)
        assert gagliardo_seminorm(-2.0 * bump, bump.grid, 0.3, p=p) == pytest.approx(2.0 * base, rel=1e-12)
    with pytest.raises(ParameterError):
        gagliardo_seminorm(bump, bump.grid, 0.3, p=3)


KINDS = ("spectral", "fourier", "restricted", "regional")


@lru_cache(maxsize=None)
def _symmetric_setup():
    domain = Domain.interval(-1.0, 1.0)
    grid = build_grid(domain, 128)
    basis = build_eigenbasis(domain, grid)
    bump = interior_bump(domain, grid)
    x = grid.nodes[:, 0]
    u = GridFunction(grid, bump * (1.0 + x))
    v = GridFunction(grid, bump * np.sin(3.0 * np.pi * x))
    return basis, u, v


@pytest.mark.parametrize("kind", KINDS)
@given(st.floats(min_value=-3.0, max_value=3.0), st.floats(min_value=-3.0, max_value=3.0))
def test_operators_are_linear(kind, a, b):
    basis, u, v = _symmetric_setup()
    op = FractionalOperator.of(kind, 0.4, basis)
    ou, ov = op(u).values, op(v).values
    combined = op(a * u + b * v).values
    scale = 1.0 + abs(a) * np.max(np.abs(ou)) + abs(b) * np.max(np.abs(ov))
    assert np.max(np.abs(combined - (a * ou + b * ov))) <= 1e-10 * scale


@pytest.mark.parametrize("kind", KINDS)
def test_reflected_input_gives_reflected_output(kind):
    basis, u, _ = _symmetric_setup()
    op = FractionalOperator.of(kind, 0.3, basis)
    reflected = u.with_values(u.values[::-1])
    expected = op(u).values[::-1]
    np.testing.assert_allclose(op(reflected).values, expected, atol=1e-10 * np.max(np.abs(expected)))


@given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=64, max_size=64),
       st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=64, max_size=64),
       st.floats(min_value=0.05, max_value=0.95))
def test_spectral_operator_is_self_adjoint(u_values, v_values, alpha):
    domain = Domain.interval(0.0, np.pi)
    grid = build_grid(domain, 64)
    basis = build_eigenbasis(domain, grid)
    u, v = GridFunction(grid, u_values), GridFunction(grid, v_values)
    left = integrate(spectral_frac_laplacian(u, basis, alpha) * v)
    right = integrate(u * spectral_frac_laplacian(v, basis, alpha))
    scale = l2_norm(spectral_frac_laplacian(u, basis, alpha)) * l2_norm(v) + 1.0
    assert abs(left - right) <= 1e-10 * scale


@pytest.mark.parametrize("a1, a2", [(0.2, 0.3), (0.1, 0.45), (0.35, 0.35)])
def test_fourier_box_applications_compose(bump, a1, a2):
    first = fourier_frac_laplacian(bump, a1, restrict=False)
    assert first.grid.size == 8 * bump.grid.size
    composed = fourier_frac_laplacian(first, a2, periodic=True, restrict=False)
    direct = fourier_frac_laplacian(bump, a1 + a2, restrict=False)
    scale = np.max(np.abs(direct.values))
    assert np.max(np.abs(composed.values - direct.values)) <= 1e-6 * scale

    cropped = FourierBox.around(bump.grid).crop(composed.values)
    np.testing.assert_allclose(cropped, fourier_frac_laplacian(bump, a1 + a2).values, atol=1e-6 * scale)
