"""
Hypersingular-kernel operators on zero-extended grid functions.

The restricted operator is evaluated as

    c * [ near(x) + u(x) * (W_far + W_outer) - sum_k w_k u(x + k h) ]

where the near block (|k_m| <= NEAR_CELLS in every axis) is handled by a
second-order Taylor expansion integrated exactly against the power-law
weight, the far lattice is a midpoint rule applied by FFT convolution, and
W_outer is the exact kernel mass outside the lattice box.
"""
import logging
from typing import Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.signal import fftconvolve
from scipy.special import gamma

from ...errors import DomainError, GridMismatchError, ParameterError, ZeroExtensionError
from ..domain import GridFunction, boundary_layer
from ..domain.models import Grid

logger = logging.getLogger(__name__)

NEAR_CELLS = 2
RAY_ORDER = 32
BALL_RAYS = 256
ZERO_EXTENSION_TOL = 1e-8


def normalization_constant(d: int, alpha: float) -> float:
    """c_{d,alpha} = 4^alpha Gamma(d/2 + alpha) / (pi^{d/2} |Gamma(-alpha)|)."""
    if d < 1:
        raise ParameterError(f"Dimension d={d} must be >= 1.")
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha={alpha} must lie in (0, 1).")
    return float(4.0 ** alpha * gamma(d / 2.0 + alpha) / (np.pi ** (d / 2.0) * abs(gamma(-alpha))))


def rectangle_rays(left, right, down, up, order: int = RAY_ORDER):
    """
    Polar quadrature of the plane as seen from points inside a rectangle.

    The angle range is split at the four corner directions so that the
    distance R(theta) to the boundary is smooth on every sector.

    Args:
        left, right, down, up: Distances to the four walls, arrays of shape (N,)
        order: Gauss-Legendre nodes per sector

    Returns:
        tuple: (theta, weights, R), each of shape (N, 4 * order)
    """
    xi, wq = leggauss(order)
    left, right, down, up = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (left, right, down, up))
    # (distance to wall, side before, side after, wall normal angle)
    walls = ((right, down, up, 0.0), (up, right, left, 0.5 * np.pi),
             (left, up, down, np.pi), (down, left, right, 1.5 * np.pi))
    thetas, weights, radii = [], [], []
    for dist, e_lo, e_hi, normal in walls:
        lo = -np.arctan(e_lo / dist)
        hi = np.arctan(e_hi / dist)
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        psi = mid[:, None] + half[:, None] * xi[None, :]
        thetas.append(normal + psi)
        weights.append(half[:, None] * wq[None, :])
        radii.append(dist[:, None] / np.cos(psi))
    return np.hstack(thetas), np.hstack(weights), np.hstack(radii)


def centered_box_rays(half_widths: Sequence[float], order: int = RAY_ORDER):
    """Polar quadrature around the center of the box [-A, A] x [-B, B]."""
    a, b = half_widths
    theta, w, r = rectangle_rays([a], [a], [b], [b], order)
    return theta[0], w[0], r[0]


def _ball_rays(grid: Grid):
    domain = grid.domain
    theta = 2.0 * np.pi * np.arange(BALL_RAYS) / BALL_RAYS
    e = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    p = grid.nodes - np.asarray(domain.center)
    pe = p @ e.T
    disc = np.maximum(pe * pe + domain.radius ** 2 - np.sum(p * p, axis=1)[:, None], 0.0)
    radii = -pe + np.sqrt(disc)
    weights = np.full_like(radii, 2.0 * np.pi / BALL_RAYS)
    return np.broadcast_to(theta, radii.shape), weights, radii


def exterior_tail(grid: Grid, s: float) -> np.ndarray:
    """
    tail_s(x) = integral over the complement of the domain of |x - y|^{-d-s}, per node.

    Closed form on intervals; polar quadrature on rectangles and 2D balls.
    Nodes outside the domain get 0.
    """
    if s <= 0:
        raise ParameterError(f"Tail exponent s={s} must be positive.")
    domain = grid.domain
    x = grid.nodes
    if grid.dimension == 1:
        a, b = domain.box[0]
        left = np.maximum(x[:, 0] - a, 1e-300)
        right = np.maximum(b - x[:, 0], 1e-300)
        tail = (left ** -s + right ** -s) / s
    else:
        if domain.kind == "ball":
            _, weights, radii = _ball_rays(grid)
        else:
            (a1, b1), (a2, b2) = domain.bounds
            _, weights, radii = rectangle_rays(x[:, 0] - a1, b1 - x[:, 0], x[:, 1] - a2, b2 - x[:, 1])
        radii = np.maximum(radii, 1e-300)
        tail = np.sum(weights * radii ** -s, axis=1) / s
    return np.where(grid.inside, tail, 0.0)


def near_moments(grid: Grid, alpha: float) -> np.ndarray:
    """M_m = integral over the near block of z_m^2 |z|^{-d-2 alpha} dz, per axis."""
    halves = [(NEAR_CELLS + 0.5) * h for h in grid.spacing]
    p = 2.0 - 2.0 * alpha
    if grid.dimension == 1:
        return np.array([2.0 * halves[0] ** p / p])
    theta, w, r = centered_box_rays(halves)
    return np.array([np.sum(w * np.cos(theta) ** 2 * r ** p) / p,
                     np.sum(w * np.sin(theta) ** 2 * r ** p) / p])


def outer_mass(grid: Grid, s: float) -> float:
    """Kernel mass of |z|^{-d-s} outside the lattice box of the grid."""
    halves = [(n - 0.5) * h for n, h in zip(grid.shape, grid.spacing)]
    if grid.dimension == 1:
        return float(2.0 * halves[0] ** -s / s)
    _, w, r = centered_box_rays(halves)
    return float(np.sum(w * r ** -s) / s)


def far_weights(grid: Grid, s: float) -> np.ndarray:
    """Midpoint weights h^d |z|^{-d-s} on lattice offsets outside the near block."""
    offsets = [np.arange(-(n - 1), n) for n in grid.shape]
    mesh = np.meshgrid(*offsets, indexing="ij")
    sq = sum((k * h) ** 2 for k, h in zip(mesh, grid.spacing))
    near = np.ones(sq.shape, dtype=bool)
    for k in mesh:
        near &= np.abs(k) <= NEAR_CELLS
    with np.errstate(divide="ignore"):
        w = grid.cell_volume * np.where(near, 0.0, sq ** (-(grid.dimension + s) / 2.0))
    return np.where(near, 0.0, w)


def _padded(grid: Grid, values: np.ndarray, width: int = 2):
    return np.pad(grid.reshape(values), width, mode="constant")


def second_derivatives(grid: Grid, values: np.ndarray):
    """Fourth-order central second differences per axis, zero extension outside the box."""
    arr = _padded(grid, values)
    out = []
    for axis, h in enumerate(grid.spacing):
        def shifted(k):
            index = [slice(2, -2)] * grid.dimension
            index[axis] = slice(2 + k, arr.shape[axis] - 2 + k)
            return arr[tuple(index)]
        d2 = (-shifted(2) + 16.0 * shifted(1) - 30.0 * shifted(0) + 16.0 * shifted(-1) - shifted(-2)) / (12.0 * h * h)
        out.append(d2.reshape(-1))
    return out


def gradient(grid: Grid, values: np.ndarray):
    """Fourth-order central first differences per axis, zero extension outside the box."""
    arr = _padded(grid, values)
    out = []
    for axis, h in enumerate(grid.spacing):
        def shifted(k):
            index = [slice(2, -2)] * grid.dimension
            index[axis] = slice(2 + k, arr.shape[axis] - 2 + k)
            return arr[tuple(index)]
        d1 = (-shifted(2) + 8.0 * shifted(1) - 8.0 * shifted(-1) + shifted(-2)) / (12.0 * h)
        out.append(d1.reshape(-1))
    return out


def check_zero_extension(u: GridFunction) -> None:
    """Raise ZeroExtensionError unless u vanishes on the boundary layer and outside the domain."""
    grid = u.grid
    if grid.include_boundary:
        raise DomainError("Kernel operators need a midpoint grid.")
    scale = max(1.0, float(np.max(np.abs(u.values))))
    edge = boundary_layer(grid) | ~grid.inside
    worst = float(np.max(np.abs(u.values[edge]), initial=0.0))
    if worst > ZERO_EXTENSION_TOL * scale:
        raise ZeroExtensionError(
            f"Function is {worst:.3e} at the boundary; kernel operators act on zero extensions.")


def _check_grid(u: GridFunction, grid: Grid):
    if grid is not None and not u.grid.same_as(grid):
        raise GridMismatchError("Function does not live on the given grid.")


def restricted_frac_laplacian(u: GridFunction, grid: Grid, alpha: float,
                              normalized: bool = True) -> GridFunction:
    """
    Restricted fractional Laplacian of the zero extension of u.

    Args:
        u: Grid function vanishing at the boundary
        grid: Grid of u
        alpha: Order in (0, 1)
        normalized: Multiply by c_{d,alpha}; the unnormalized kernel is used by the L1 bound

    Returns:
        GridFunction
    """
    _check_grid(u, grid)
    grid = u.grid
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha={alpha} must lie in (0, 1).")
    check_zero_extension(u)
    if min(grid.shape) <= 2 * NEAR_CELLS + 1:
        raise DomainError("Grid is smaller than the near-field block.")

    s = 2.0 * alpha
    values = u.values
    moments = near_moments(grid, alpha)
    near = -0.5 * sum(m * d2 for m, d2 in zip(moments, second_derivatives(grid, values)))

    weights = far_weights(grid, s)
    conv = fftconvolve(grid.reshape(values), weights, mode="same").reshape(-1)
    total = float(weights.sum()) + outer_mass(grid, s)
    result = near + values * total - conv

    if normalized:
        result = normalization_constant(grid.dimension, alpha) * result
    return GridFunction(grid, np.where(grid.inside, result, 0.0))


def regional_frac_laplacian(u: GridFunction, grid: Grid, alpha: float,
                            normalized: bool = True) -> GridFunction:
    """Regional operator: the restricted one minus c * u * tail_{2 alpha}."""
    full = restricted_frac_laplacian(u, grid, alpha, normalized=normalized)
    c = normalization_constant(u.grid.dimension, alpha) if normalized else 1.0
    return full.with_values(full.values - c * u.values * exterior_tail(u.grid, 2.0 * alpha))
