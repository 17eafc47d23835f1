"""
Norms and seminorms used on both sides of the estimates.
"""
import logging

import numpy as np

from ...errors import DomainError, GridMismatchError, ParameterError
from ..domain import Domain, EigenBasis, GridFunction, grid_distance
from ..domain.models import Grid
from .fourier import DEFAULT_PADDING, FourierBox
from .kernels import centered_box_rays, exterior_tail, gradient
from .models import as_kind
from .spectral import spectral_power_norm

logger = logging.getLogger(__name__)

PAIR_REGIONS = ("interior", "exterior", "whole")
WEIGHT_PROFILES = ("distance", "ball")


def sup_norm(u: GridFunction) -> float:
    inside = u.values[u.grid.inside]
    return float(np.max(np.abs(inside), initial=0.0))


def l2_norm(u: GridFunction) -> float:
    return float(np.sqrt(np.dot(u.grid.weights, u.values ** 2)))


def l1_norm(u: GridFunction) -> float:
    return float(np.dot(u.grid.weights, np.abs(u.values)))


def _check_domain(u: GridFunction, domain: Domain):
    if domain is not None and u.grid.domain != domain:
        raise GridMismatchError(f"Function lives on {u.grid.domain.describe()}, not {domain.describe()}.")


def weighted_l1_norm(u: GridFunction, domain: Domain, sigma: float) -> float:
    """Quadrature of |u| / dist(x, boundary)^{2 sigma}."""
    if not 0.0 < sigma < 1.0:
        raise ParameterError(f"sigma={sigma} must lie in (0, 1).")
    _check_domain(u, domain)
    dist = grid_distance(u.grid)
    weight = np.zeros_like(dist)
    positive = dist > 0
    weight[positive] = dist[positive] ** (-2.0 * sigma)
    return float(np.dot(u.grid.weights * weight, np.abs(u.values)))


def weighted_l2_norm(u: GridFunction, domain: Domain, sigma: float, profile: str = "distance") -> float:
    """
    (integral of u^2 / rho^{2 sigma})^{1/2}.

    rho is the distance to the boundary, or 1 - |x - c|^2 / R^2 for the
    'ball' profile.
    """
    if not 0.0 < sigma < 1.0:
        raise ParameterError(f"sigma={sigma} must lie in (0, 1).")
    if profile not in WEIGHT_PROFILES:
        raise ParameterError(f"Unknown weight profile '{profile}'.")
    _check_domain(u, domain)
    grid = u.grid
    if profile == "ball":
        if grid.domain.kind != "ball":
            raise DomainError("The 'ball' weight profile needs a ball domain.")
        offsets = grid.nodes - np.asarray(grid.domain.center)
        rho = 1.0 - np.sum(offsets ** 2, axis=1) / grid.domain.radius ** 2
    else:
        rho = grid_distance(grid)
    weight = np.zeros_like(rho)
    positive = rho > 0
    weight[positive] = rho[positive] ** (-2.0 * sigma)
    return float(np.sqrt(np.dot(grid.weights * weight, u.values ** 2)))


def frac_sobolev_norm(h: GridFunction, kind, beta: float, basis: EigenBasis = None,
                      padding_factor: int = DEFAULT_PADDING) -> float:
    """
    ||(-Delta)^{beta/2} h||_{L^2}, spectral or whole-space.

    Args:
        h: Grid function
        kind: 'spectral' or 'fourier'
        beta: Order in [0, 1)
        basis: Eigenbasis, needed by the spectral kind
        padding_factor: Box size for the fourier kind

    Returns:
        float
    """
    kind = as_kind(kind)
    if not 0.0 <= beta < 1.0:
        raise ParameterError(f"beta={beta} must lie in [0, 1).")
    if kind.tag not in ("spectral", "fourier"):
        raise ParameterError(f"No fractional Sobolev norm for the {kind} operator.")
    if beta == 0.0:
        return l2_norm(h)
    if kind.tag == "spectral":
        if basis is None:
            raise ParameterError("The spectral norm needs an eigenbasis.")
        return spectral_power_norm(h, basis, beta)
    box = FourierBox.around(h.grid, padding_factor)
    lifted = box.multiplier(box.pad(h.values), beta)
    return float(np.sqrt(np.sum(lifted ** 2) * h.grid.cell_volume))


def _block_slices(n, k):
    """Index ranges of x and x + k inside an axis of length n."""
    if k >= 0:
        return slice(0, n - k), slice(k, n)
    return slice(-k, n), slice(0, n + k)


def _lattice_pair_sum(grid: Grid, s: float, arrays, combine) -> float:
    """
    sum over node pairs x != y of w_x w_y combine(a(x), a(y)) |x - y|^{-d-s}.

    `arrays` are flat node arrays; combine receives the lists of their x and y blocks.
    """
    shaped = [grid.reshape(a) for a in arrays]
    w = grid.reshape(grid.weights)
    d = grid.dimension
    total = 0.0
    if d == 1:
        n, h = grid.shape[0], grid.spacing[0]
        for k in range(1, n):
            xs, ys = slice(0, n - k), slice(k, n)
            term = combine([a[xs] for a in shaped], [a[ys] for a in shaped])
            total += float(np.sum(w[xs] * w[ys] * term)) * (k * h) ** (-1.0 - s)
        return 2.0 * total
    (nx, ny), (hx, hy) = grid.shape, grid.spacing
    for k in range(0, nx):
        for l in range(-(ny - 1), ny):
            if k == 0 and l <= 0:
                continue
            sx_a, sx_b = _block_slices(nx, k)
            sy_a, sy_b = _block_slices(ny, l)
            xs, ys = (sx_a, sy_a), (sx_b, sy_b)
            wprod = w[xs] * w[ys]
            if not wprod.any():
                continue
            term = combine([a[xs] for a in shaped], [a[ys] for a in shaped])
            dist = np.hypot(k * hx, l * hy)
            total += float(np.sum(wprod * term)) * dist ** (-2.0 - s)
    return 2.0 * total


def _diagonal_bilinear(grid: Grid, u: np.ndarray, v: np.ndarray, s: float) -> float:
    """Taylor estimate of the self-cell part: grad u . M grad v, M = cell moments of z z^T |z|^{-d-s}."""
    if s >= 2.0:
        raise ParameterError(f"Pair exponent s={s} must be below 2.")
    du, dv = gradient(grid, u), gradient(grid, v)
    p = 2.0 - s
    if grid.dimension == 1:
        moments = [2.0 * (0.5 * grid.spacing[0]) ** p / p]
    else:
        theta, w, r = centered_box_rays([0.5 * h for h in grid.spacing])
        moments = [np.sum(w * np.cos(theta) ** 2 * r ** p) / p,
                   np.sum(w * np.sin(theta) ** 2 * r ** p) / p]
    density = sum(m * a * b for m, a, b in zip(moments, du, dv))
    return float(np.dot(grid.weights, density))


def _diagonal_absolute(grid: Grid, u: np.ndarray, s: float) -> float:
    """Self-cell part of the p = 1 double integral, |grad u . z| integrated exactly."""
    if s >= 1.0:
        raise ParameterError(f"Pair exponent s={s} must be below 1 when p = 1.")
    du = gradient(grid, u)
    p = 1.0 - s
    if grid.dimension == 1:
        density = np.abs(du[0]) * 2.0 * (0.5 * grid.spacing[0]) ** p / p
    else:
        theta, w, r = centered_box_rays([0.5 * h for h in grid.spacing])
        radial = w * r ** p / p
        density = np.abs(np.cos(theta)[None, :] * du[0][:, None]
                         + np.sin(theta)[None, :] * du[1][:, None]) @ radial
    return float(np.dot(grid.weights, density))


def pair_integral(u: GridFunction, v: GridFunction, s: float, region: str = "interior") -> float:
    """
    Double integral of (u(x) - u(y))(v(x) - v(y)) / |x - y|^{d+s}.

    Regions: 'interior' is the domain squared, 'exterior' is domain x complement
    (reduced to u v tail_s), 'whole' is interior + 2 * exterior.
    """
    if region not in PAIR_REGIONS:
        raise ParameterError(f"Unknown pair region '{region}'; expected one of {PAIR_REGIONS}.")
    if not u.grid.same_as(v.grid):
        raise GridMismatchError("Pair integral needs functions on one grid.")
    grid = u.grid
    result = 0.0
    if region in ("interior", "whole"):
        result += _lattice_pair_sum(grid, s, [u.values, v.values],
                                    lambda xs, ys: (xs[0] - ys[0]) * (xs[1] - ys[1]))
        result += _diagonal_bilinear(grid, u.values, v.values, s)
    if region in ("exterior", "whole"):
        exterior = float(np.dot(grid.weights, u.values * v.values * exterior_tail(grid, s)))
        result += exterior if region == "exterior" else 2.0 * exterior
    return result


def gagliardo_seminorm(u: GridFunction, grid: Grid, alpha: float, p: int = 2, region: str = "interior") -> float:
    """
    (double integral of |u(x) - u(y)|^p / |x - y|^{d + p alpha})^{1/p} over the region.

    Args:
        u: Grid function supported in the domain
        grid: Grid of u
        alpha: Smoothness in (0, 1)
        p: 1 or 2
        region: 'interior', 'exterior' or 'whole'

    Returns:
        float
    """
    if p not in (1, 2):
        raise ParameterError(f"Gagliardo exponent p={p} must be 1 or 2.")
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha={alpha} must lie in (0, 1).")
    if grid is not None and not u.grid.same_as(grid):
        raise GridMismatchError("Function does not live on the given grid.")
    if p == 2:
        return float(np.sqrt(max(pair_integral(u, u, 2.0 * alpha, region), 0.0)))
    if region not in PAIR_REGIONS:
        raise ParameterError(f"Unknown pair region '{region}'; expected one of {PAIR_REGIONS}.")
    g = u.grid
    s = alpha
    result = 0.0
    if region in ("interior", "whole"):
        result += _lattice_pair_sum(g, s, [u.values], lambda xs, ys: np.abs(xs[0] - ys[0]))
        result += _diagonal_absolute(g, u.values, s)
    if region in ("exterior", "whole"):
        exterior = float(np.dot(g.weights, np.abs(u.values) * exterior_tail(g, s)))
        result += exterior if region == "exterior" else 2.0 * exterior
    return result
