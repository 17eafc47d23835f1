import numpy as np
import pytest
from scipy.special import gamma, kv

from fraclab.app.errors import DomainError, GridMismatchError, ParameterError, ResolutionError
from fraclab.app.modules.domain import GridFunction, build_eigenbasis, build_grid, interior_bump
from fraclab.app.modules.estimates import default_ygrid
from fraclab.app.modules.extension import (
    ExtensionField,
    YGrid,
    energy_identity_residual,
    extend_poisson,
    extend_spectral,
    extension_trace_constant,
    neumann_trace,
    poisson_kernel_mass,
    solve_weighted_pde,
    theta_kernel,
    theta_kernel_bessel,
    theta_kernel_dy,
)
from fraclab.app.modules.operators import fourier_frac_laplacian, l2_norm, spectral_frac_laplacian


@pytest.fixture
def half_line_setup(unit_pi):
    grid = build_grid(unit_pi, 64)
    return grid, build_eigenbasis(unit_pi, grid)


def test_theta_is_one_at_the_boundary():
    assert theta_kernel(4.0, 0.0, 0.3) == pytest.approx(1.0)
    assert theta_kernel_bessel(4.0, 0.0, 0.3) == pytest.approx(1.0)


def test_theta_half_order_is_exponential():
    y = np.linspace(0.0, 3.0, 31)
    np.testing.assert_allclose(theta_kernel(4.0, y, 0.5), np.exp(-2.0 * y), atol=1e-8)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_theta_quadrature_matches_bessel_form(alpha):
    y = np.linspace(0.01, 4.0, 40)
    for lam in (1.0, 9.0, 30.0):
        np.testing.assert_allclose(theta_kernel(lam, y, alpha), theta_kernel_bessel(lam, y, alpha), atol=1e-6)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_theta_derivative_matches_bessel_form(alpha):
    y = np.linspace(0.05, 3.0, 30)
    for lam in (1.0, 9.0):
        z = np.sqrt(lam) * y
        exact = -np.sqrt(lam) * 2.0 ** (1.0 - alpha) / gamma(alpha) * z ** alpha * kv(1.0 - alpha, z)
        np.testing.assert_allclose(theta_kernel_dy(lam, y, alpha), exact, rtol=1e-5, atol=1e-8)


def test_theta_derivative_half_order_is_exponential():
    y = np.linspace(0.1, 3.0, 30)
    np.testing.assert_allclose(theta_kernel_dy(4.0, y, 0.5), -2.0 * np.exp(-2.0 * y), rtol=1e-6, atol=1e-9)
    with pytest.raises(ParameterError):
        theta_kernel_dy(4.0, 0.0, 0.5)


def test_trace_constant_and_poisson_mass():
    assert extension_trace_constant(0.5) == pytest.approx(1.0)
    assert poisson_kernel_mass(np.inf, 0.7, 1, 0.3) == pytest.approx(1.0, rel=1e-8)


def test_ygrid_is_graded_and_validated():
    ygrid = YGrid.for_order(1.0, 0.25, K=40)
    nodes = ygrid.nodes
    assert nodes[0] == 0.0 and nodes[-1] == pytest.approx(6.0)
    assert ygrid.gamma == pytest.approx(4.0)
    assert np.all(np.diff(nodes) > 0)
    with pytest.raises(ParameterError):
        YGrid(y_max=1.0, K=1)
    with pytest.raises(ParameterError):
        YGrid(y_max=1.0, K=10, gamma=0.5)


def test_refined_ygrid_keeps_the_coarse_nodes():
    coarse = YGrid.for_order(1.0, 0.3, K=20)
    fine = coarse.refined(4)
    assert fine.K == 80 and fine.gamma == coarse.gamma
    np.testing.assert_allclose(fine.nodes[::4], coarse.nodes, rtol=1e-14, atol=1e-15)


def test_spectral_extension_of_first_mode(half_line_setup):
    grid, basis = half_line_setup
    ygrid = default_ygrid(grid, 0.5, 200)
    field = extend_spectral(basis.phi(1), basis, 0.5, ygrid)
    exact = np.outer(basis.phi(1).values, np.exp(-ygrid.nodes))
    np.testing.assert_allclose(field.values, exact, atol=1e-4)
    trace = neumann_trace(field, 0.5, basis.phi(1))
    np.testing.assert_allclose(trace.trace.values, basis.phi(1).values, atol=1e-4)


def test_spectral_trace_reproduces_operator(half_line_setup):
    grid, basis = half_line_setup
    alpha = 0.25
    g = basis.phi(2) + 0.5 * basis.phi(3)
    field = extend_spectral(g, basis, alpha, default_ygrid(grid, alpha, 200))
    trace = neumann_trace(field, alpha, g).trace
    exact = spectral_frac_laplacian(g, basis, alpha)
    assert l2_norm(trace - exact) <= 1e-2 * l2_norm(exact)


def test_trace_needs_enough_layers(half_line_setup):
    grid, basis = half_line_setup
    field = extend_spectral(basis.phi(1), basis, 0.5, YGrid(y_max=6.0, K=4))
    with pytest.raises(ResolutionError):
        neumann_trace(field, 0.5, basis.phi(1))


def test_poisson_trace_reproduces_fourier_operator(interval):
    grid = build_grid(interval, 128)
    g = GridFunction(grid, interior_bump(interval, grid))
    alpha = 0.5
    field = extend_poisson(g, alpha, default_ygrid(grid, alpha, 200), padding_factor=4)
    trace = neumann_trace(field, alpha, g).trace
    exact = fourier_frac_laplacian(g, alpha, padding_factor=4)
    assert l2_norm(trace - exact) <= 5e-2 * l2_norm(exact)


def test_poisson_extension_needs_interior_support(interval_grid):
    ones = GridFunction(interval_grid, np.ones(interval_grid.size))
    with pytest.raises(DomainError):
        extend_poisson(ones, 0.5, YGrid(y_max=1.0, K=10))


def test_weighted_solve_satisfies_energy_identity(interval):
    grid = build_grid(interval, 32)
    alpha = 0.3
    ygrid = default_ygrid(grid, alpha, 60)
    bottom = GridFunction(grid, interior_bump(interval, grid))
    z = solve_weighted_pde(None, bottom, alpha, interval, ygrid)
    assert z.solver_residual <= 1e-10
    np.testing.assert_array_equal(z.values[:, 0], bottom.values)
    np.testing.assert_array_equal(z.values[:, -1], 0.0)
    psi = z.with_values(np.outer(np.cos(0.5 * np.pi * grid.nodes[:, 0]), 1.0 - ygrid.nodes / ygrid.y_max))
    assert energy_identity_residual(z, psi, alpha) <= 1e-6


def test_extension_field_guards(interval_grid):
    ygrid = YGrid(y_max=1.0, K=10)
    with pytest.raises(GridMismatchError):
        ExtensionField(interval_grid, ygrid, np.zeros((interval_grid.size, 5)))
    values = np.zeros((interval_grid.size, 11))
    values[0, 0] = np.inf
    with pytest.raises(DomainError):
        ExtensionField(interval_grid, ygrid, values)
