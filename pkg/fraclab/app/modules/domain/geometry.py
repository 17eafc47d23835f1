"""
Grids, quadrature, boundary distance and the appendix cutoff family.
"""
import logging

import numpy as np

from ...errors import DomainError, ParameterError, ResolutionError
from .models import CutoffFamily, Domain, Grid, GridFunction

logger = logging.getLogger(__name__)

MIN_NODES_PER_AXIS = 8


def build_grid(domain: Domain, n_per_axis: int, include_boundary: bool = False) -> Grid:
    """
    Build a uniform composite quadrature grid over the domain.

    Midpoint nodes (the default) sit strictly inside the box with spacing
    L/n; with include_boundary the endpoints are nodes and trapezoid weights
    are used. On a disc the weights of interior nodes are scaled so they
    sum to the disc area.

    Args:
        domain: Domain to cover
        n_per_axis: Number of nodes per axis (>= 8)
        include_boundary: Use trapezoid nodes that include the endpoints

    Returns:
        Grid
    """
    n = int(n_per_axis)
    if n < MIN_NODES_PER_AXIS:
        raise ResolutionError(
            f"n_per_axis={n} is below the minimum of {MIN_NODES_PER_AXIS} nodes per axis.")

    axes, spacing, axis_weights = [], [], []
    for a, b in domain.box:
        length = b - a
        if include_boundary:
            h = length / (n - 1)
            axis = a + h * np.arange(n)
            w = np.full(n, h)
            w[0] = w[-1] = h / 2.0
        else:
            h = length / n
            axis = a + h * (np.arange(n) + 0.5)
            w = np.full(n, h)
        axes.append(axis)
        spacing.append(h)
        axis_weights.append(w)

    mesh = np.meshgrid(*axes, indexing="ij")
    nodes = np.stack([m.reshape(-1) for m in mesh], axis=1)
    weights = axis_weights[0]
    for w in axis_weights[1:]:
        weights = np.multiply.outer(weights, w)
    weights = np.asarray(weights, dtype=float).reshape(-1)

    inside = np.ones(nodes.shape[0], dtype=bool)
    if not domain.is_box:
        offsets = nodes - np.asarray(domain.center)
        inside = np.linalg.norm(offsets, axis=1) < domain.radius
        weights = np.where(inside, weights, 0.0)
        # masked cells miss O(h) of the disc; spread the defect so the weights sum to |domain|
        weights *= domain.measure / weights.sum()

    grid = Grid(domain=domain, axes=tuple(axes), spacing=tuple(spacing), nodes=nodes,
                weights=weights, inside=inside, include_boundary=include_boundary)
    logger.debug(f"Built grid {grid.shape} on {domain.describe()} (h={grid.h:.3e})")
    return grid


def integrate(f: GridFunction) -> float:
    """Quadrature of a grid function over its domain."""
    return float(np.dot(f.grid.weights, f.values))


def sample(grid: Grid, func) -> GridFunction:
    """Evaluate a callable of the coordinate arrays on the grid nodes."""
    coords = [grid.nodes[:, k] for k in range(grid.dimension)]
    return GridFunction(grid, np.broadcast_to(func(*coords), (grid.size,)).astype(float))


def dist_to_boundary(domain: Domain, x) -> float:
    """
    Euclidean distance from an interior point to the boundary.

    Raises:
        DomainError: if x is not inside the domain
    """
    point = np.atleast_1d(np.asarray(x, dtype=float))
    if point.shape != (domain.dimension,):
        raise DomainError(f"Point {x} does not have dimension {domain.dimension}.")
    d = float(distance_field(domain, point[None, :])[0])
    if d <= 0.0:
        raise DomainError(f"Point {tuple(point)} lies outside {domain.describe()}.")
    return d


def distance_field(domain: Domain, points: np.ndarray) -> np.ndarray:
    """Signed distance to the boundary (negative outside) for many points."""
    points = np.asarray(points, dtype=float)
    if domain.kind == "ball":
        return domain.radius - np.linalg.norm(points - np.asarray(domain.center), axis=1)
    gaps = []
    for k, (a, b) in enumerate(domain.bounds):
        gaps.append(np.minimum(points[:, k] - a, b - points[:, k]))
    return np.min(np.stack(gaps, axis=1), axis=1)


def grid_distance(grid: Grid) -> np.ndarray:
    """Distance to the boundary at every node (zero outside the domain)."""
    return np.maximum(distance_field(grid.domain, grid.nodes), 0.0)


def boundary_layer(grid: Grid) -> np.ndarray:
    """Mask of nodes in the outermost layer of the domain."""
    d = grid_distance(grid)
    return grid.inside & (d < grid.h)


def quintic_smoothstep(t):
    """C2 ramp from 0 to 1 on [0, 1]; peak slope 15/8."""
    t = np.clip(t, 0.0, 1.0)
    return t ** 3 * (10.0 - 15.0 * t + 6.0 * t * t)


def septic_smoothstep(t):
    """C3 ramp from 0 to 1 on [0, 1]."""
    t = np.clip(t, 0.0, 1.0)
    return t ** 4 * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t ** 3)


def cutoff_profile(radius_values, epsilon: float, radius: float = 1.0):
    """u_eps as a function of |x - center|."""
    t = (radius * (1.0 - epsilon) - radius_values) / (radius * epsilon)
    return quintic_smoothstep(t)


def cutoff_gradient(radius_values, epsilon: float, radius: float = 1.0):
    """Magnitude of the radial derivative of u_eps."""
    t = np.clip((radius * (1.0 - epsilon) - radius_values) / (radius * epsilon), 0.0, 1.0)
    return 30.0 * t * t * (1.0 - t) ** 2 / (radius * epsilon)


def build_cutoff(epsilon: float, grid: Grid) -> GridFunction:
    """
    Cutoff u_eps: 1 on B_{1-2eps}, 0 outside B_{1-eps}, quintic ramp between.

    The ramp has max |grad u_eps| = 15/(8 eps), inside the [1/eps, 4/eps] band.
    """
    if not 0.0 < epsilon < 0.1:
        raise ParameterError(f"Cutoff width eps={epsilon} must lie in (0, 1/10).")
    domain = grid.domain
    if domain.kind != "ball":
        raise DomainError("The cutoff family is defined on a ball.")
    r = np.linalg.norm(grid.nodes - np.asarray(domain.center), axis=1)
    values = cutoff_profile(r, epsilon, domain.radius)
    return GridFunction(grid, np.where(grid.inside, values, 0.0))


def cutoff_family(epsilon: float, radius: float = 1.0) -> CutoffFamily:
    if not 0.0 < epsilon < 0.1:
        raise ParameterError(f"Cutoff width eps={epsilon} must lie in (0, 1/10).")
    return CutoffFamily(epsilon=epsilon, radius=radius, gradient_bound=15.0 / (8.0 * epsilon * radius))
