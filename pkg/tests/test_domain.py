import numpy as np
import pytest
from hypothesis import given, strategies as st

from fraclab.app.errors import DomainError, GridMismatchError, ParameterError, ResolutionError
from fraclab.app.modules.domain import (
    Domain,
    GridFunction,
    build_cutoff,
    build_eigenbasis,
    cutoff_family,
    cutoff_gradient,
    build_grid,
    corpus_functions,
    dist_to_boundary,
    integrate,
    make_corpus,
    orthonormality_defect,
    project,
    sample,
    synthesize,
)


def test_midpoint_grid_covers_interval(interval):
    grid = build_grid(interval, 16)
    assert grid.shape == (16,)
    assert grid.nodes.min() > -1.0 and grid.nodes.max() < 1.0
    assert grid.weights.sum() == pytest.approx(2.0)
    assert grid.h == pytest.approx(2.0 / 16)


def test_grid_rejects_coarse_resolution(interval):
    with pytest.raises(ResolutionError):
        build_grid(interval, 4)


def test_invalid_domains_raise():
    with pytest.raises(DomainError):
        Domain.interval(1.0, 0.0)
    with pytest.raises(DomainError):
        Domain.ball(center=(0.0,), radius=0.0)
    with pytest.raises(DomainError):
        Domain.ball(center=(0.0, 0.0, 0.0), radius=1.0)


@pytest.mark.parametrize("n", [16, 64, 256])
def test_disc_grid_masks_exterior_nodes(n):
    disc = Domain.ball(center=(0.0, 0.0), radius=1.5)
    grid = build_grid(disc, n)
    assert not disc.is_box
    assert np.all(grid.weights[~grid.inside] == 0.0)
    assert np.all(grid.weights[grid.inside] > 0.0)
    assert grid.weights.sum() == pytest.approx(np.pi * 1.5 ** 2, rel=1e-12)


@given(st.floats(min_value=-0.99, max_value=0.99))
def test_distance_to_interval_boundary(x):
    domain = Domain.interval(-1.0, 1.0)
    assert dist_to_boundary(domain, x) == pytest.approx(min(x + 1.0, 1.0 - x))


def test_distance_outside_raises(interval):
    with pytest.raises(DomainError):
        dist_to_boundary(interval, 1.5)


def test_interval_eigenvalues_and_orthonormality(unit_pi):
    grid = build_grid(unit_pi, 64)
    basis = build_eigenbasis(unit_pi, grid, J=8)
    np.testing.assert_allclose(basis.lambdas, np.arange(1, 9) ** 2, rtol=1e-12)
    assert orthonormality_defect(basis) < 1e-10


def test_square_eigenvalue_ties_are_ordered_by_mode():
    square = Domain.rectangle((0.0, 1.0), (0.0, 1.0))
    grid = build_grid(square, 16)
    basis = build_eigenbasis(square, grid, J=3)
    np.testing.assert_allclose(basis.lambdas, [2 * np.pi ** 2, 5 * np.pi ** 2, 5 * np.pi ** 2])
    assert basis.modes == ((1, 1), (1, 2), (2, 1))


def test_ball_has_no_eigenbasis():
    ball = Domain.ball(center=(0.0,), radius=1.0)
    with pytest.raises(DomainError):
        build_eigenbasis(ball, build_grid(ball, 16))


def test_project_inverts_synthesize(interval_basis):
    coeffs = np.array([0.0, 1.0, -0.5, 0.25])
    recovered = project(synthesize(coeffs, interval_basis), interval_basis)
    np.testing.assert_allclose(recovered[:4], coeffs, atol=1e-12)
    np.testing.assert_allclose(recovered[4:], 0.0, atol=1e-12)


def test_sample_and_integrate(unit_pi):
    grid = build_grid(unit_pi, 128)
    f = sample(grid, np.sin)
    assert integrate(f) == pytest.approx(2.0, rel=1e-4)


def test_corpus_is_seeded_and_vanishes_near_boundary(interval, interval_grid):
    first = corpus_functions(make_corpus(interval, interval_grid, 6, seed=3))
    second = corpus_functions(make_corpus(interval, interval_grid, 6, seed=3))
    assert len(first) == 12
    near_edge = np.abs(interval_grid.nodes[:, 0]) > 0.8
    for a, b in zip(first, second):
        np.testing.assert_array_equal(a.values, b.values)
        assert np.all(a.values[near_edge] == 0.0)
        assert np.max(np.abs(a.values)) <= 3.0


def test_corpus_needs_a_pair(interval, interval_grid):
    with pytest.raises(ParameterError):
        make_corpus(interval, interval_grid, 0, seed=0)


def test_cutoff_plateau_and_support():
    ball = Domain.ball(center=(0.0,), radius=1.0)
    grid = build_grid(ball, 400)
    eps = 0.05
    u = build_cutoff(eps, grid)
    r = np.abs(grid.nodes[:, 0])
    np.testing.assert_allclose(u.values[r <= 1.0 - 2.0 * eps], 1.0)
    np.testing.assert_allclose(u.values[r >= 1.0 - eps], 0.0)
    with pytest.raises(ParameterError):
        build_cutoff(0.2, grid)


def test_cutoff_gradient_bound():
    family = cutoff_family(0.05)
    r = np.linspace(0.0, 1.0, 20001)
    slope = cutoff_gradient(r, family.epsilon, family.radius)
    assert slope.max() <= family.gradient_bound * (1.0 + 1e-12)
    assert slope.max() == pytest.approx(family.gradient_bound, rel=1e-4)
    assert np.all(slope[r < 1.0 - 2.0 * family.epsilon] == 0.0)
    with pytest.raises(ParameterError):
        cutoff_family(0.1)


def test_grid_function_guards(interval):
    a = GridFunction(build_grid(interval, 16), np.ones(16))
    b = GridFunction(build_grid(interval, 32), np.ones(32))
    with pytest.raises(GridMismatchError):
        a + b
    with pytest.raises(GridMismatchError):
        GridFunction(a.grid, np.ones(8))
    with pytest.raises(DomainError):
        GridFunction(a.grid, np.full(16, np.nan))


_DISC = Domain.ball(center=(0.0, 0.0), radius=1.0)
_STRIP = Domain.rectangle((0.0, 2.0), (0.0, 1.0))

disc_points = st.tuples(st.floats(min_value=0.0, max_value=0.999),
                        st.floats(min_value=0.0, max_value=2.0 * np.pi)).map(
    lambda p: (p[0] * np.cos(p[1]), p[0] * np.sin(p[1])))
strip_points = st.tuples(st.floats(min_value=0.001, max_value=1.999), st.floats(min_value=0.001, max_value=0.999))


@given(disc_points, disc_points)
def test_disc_distance_is_one_lipschitz(x, y):
    gap = abs(dist_to_boundary(_DISC, x) - dist_to_boundary(_DISC, y))
    assert gap <= np.hypot(x[0] - y[0], x[1] - y[1]) + 1e-12


@given(strip_points, strip_points)
def test_rectangle_distance_is_one_lipschitz(x, y):
    gap = abs(dist_to_boundary(_STRIP, x) - dist_to_boundary(_STRIP, y))
    assert gap <= np.hypot(x[0] - y[0], x[1] - y[1]) + 1e-12


@given(st.floats(min_value=0.01, max_value=0.099))
def test_cutoff_is_monotone_on_the_ramp(eps):
    ball = Domain.ball(center=(0.0,), radius=1.0)
    grid = build_grid(ball, 400)
    u = build_cutoff(eps, grid)
    x = grid.nodes[:, 0]
    right = u.values[x > 0.0]
    left = u.values[x < 0.0]
    assert np.all(np.diff(right) <= 1e-15)
    assert np.all(np.diff(left) >= -1e-15)
    assert np.all((u.values >= 0.0) & (u.values <= 1.0))
