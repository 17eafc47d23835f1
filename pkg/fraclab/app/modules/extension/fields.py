"""
Closed-formula extensions: eigen-expansion for bounded domains, Poisson kernel for the whole space.
"""
import logging

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import gamma, kv

from ...errors import DomainError, GridMismatchError, ParameterError
from ..domain import EigenBasis, GridFunction, boundary_layer, project
from ..operators import DEFAULT_PADDING, FourierBox
from .kernels import poisson_kernel, poisson_kernel_mass, theta_kernel_bessel, theta_table
from .models import ExtensionField, YGrid

logger = logging.getLogger(__name__)

IMAGE_MASS_TOL = 1e-6
SUPPORT_TOL = 1e-12


def _coefficients(g: GridFunction, basis: EigenBasis) -> np.ndarray:
    if not g.grid.same_as(basis.grid):
        raise GridMismatchError("Boundary data and eigenbasis live on different grids.")
    return project(g, basis)


def extend_spectral(g: GridFunction, basis: EigenBasis, alpha: float, ygrid: YGrid) -> ExtensionField:
    """
    U(x, y_k) = sum_j g_j phi_j(x) theta_alpha(lambda_j, y_k).

    Args:
        g: Boundary data supported in the domain
        basis: Dirichlet eigenbasis on the grid of g
        alpha: Extension order in (0, 1)
        ygrid: Extension-variable grid

    Returns:
        ExtensionField with lateral Dirichlet conditions
    """
    coeffs = _coefficients(g, basis)
    table, _ = theta_table(tuple(basis.lambdas.tolist()), tuple(ygrid.nodes.tolist()), float(alpha))
    values = basis.phis.T @ (coeffs[:, None] * table)
    # U(., 0) is the data itself, not its truncated expansion.
    values[:, 0] = g.values
    return ExtensionField(basis.grid, ygrid, values, alpha=alpha)


def spectral_field_gradients(g: GridFunction, basis: EigenBasis, alpha: float, ygrid: YGrid):
    """
    Analytic gradient of the spectral extension at every (node, layer).

    Returns:
        tuple: (list of x-derivative arrays per axis, y-derivative array), each (N, K + 1);
        the y-derivative is 0 on the bottom layer where it is singular
    """
    coeffs = _coefficients(g, basis)
    table, dtable = theta_table(tuple(basis.lambdas.tolist()), tuple(ygrid.nodes.tolist()), float(alpha),
                                with_derivative=True)
    grad_x = [basis.gradients[axis].T @ (coeffs[:, None] * table) for axis in range(basis.grid.dimension)]
    grad_y = basis.phis.T @ (coeffs[:, None] * dtable)
    return grad_x, grad_y


def _check_support(g: GridFunction):
    edge = boundary_layer(g.grid) | ~g.grid.inside
    scale = max(1.0, float(np.max(np.abs(g.values))))
    if float(np.max(np.abs(g.values[edge]), initial=0.0)) > SUPPORT_TOL * scale:
        raise DomainError("Poisson extension needs data supported away from the edge of its box.")


def _warn_image_mass(box: FourierBox, ygrid: YGrid, alpha: float):
    half = 0.5 * min(n * h for n, h in zip(box.xi_norm.shape, box.grid.spacing))
    missing = 1.0 - poisson_kernel_mass(half, float(ygrid.y_max), box.grid.dimension, alpha)
    if missing > IMAGE_MASS_TOL:
        logger.warning(f"Poisson kernel mass {missing:.2e} falls outside the periodic box at y={ygrid.y_max:.3g}; "
                       f"raise the padding factor for far layers")


def extend_poisson(g: GridFunction, alpha: float, ygrid: YGrid, padding_factor: int = DEFAULT_PADDING,
                   method: str = "fft") -> ExtensionField:
    """
    U(x, y) = (P_alpha(., y) * g)(x) for data zero-extended to the whole space.

    The 'fft' method multiplies by the Fourier transform of the Poisson kernel,
    theta_alpha(|xi|^2, y), on a padded periodic box; 'direct' convolves with
    the sampled kernel and is only accurate for y well above the grid spacing.
    """
    if method not in ("fft", "direct"):
        raise ParameterError(f"Unknown Poisson extension method '{method}'.")
    _check_support(g)
    grid = g.grid
    y = ygrid.nodes
    values = np.empty((grid.size, ygrid.K + 1))
    values[:, 0] = g.values
    if method == "fft":
        box = FourierBox.around(grid, padding_factor)
        _warn_image_mass(box, ygrid, alpha)
        spectrum = np.fft.fftn(box.pad(g.values))
        for k in range(1, ygrid.K + 1):
            symbol = theta_kernel_bessel(1.0, box.xi_norm * y[k], alpha)
            values[:, k] = box.crop(np.real(np.fft.ifftn(spectrum * symbol)))
    else:
        offsets = [np.arange(-(n - 1), n) * h for n, h in zip(grid.shape, grid.spacing)]
        mesh = np.meshgrid(*offsets, indexing="ij")
        dist = np.sqrt(sum(m * m for m in mesh))
        data = grid.reshape(g.values * grid.weights)
        for k in range(1, ygrid.K + 1):
            kernel = poisson_kernel(dist, float(y[k]), grid.dimension, alpha)
            values[:, k] = fftconvolve(data, kernel, mode="same").reshape(-1)
    return ExtensionField(grid, ygrid, values, alpha=alpha, periodic=True)


def poisson_field_gradients(g: GridFunction, alpha: float, ygrid: YGrid, padding_factor: int = DEFAULT_PADDING):
    """Spectral x-gradients and the y-derivative of the whole-space extension, each (N, K + 1)."""
    grid = g.grid
    box = FourierBox.around(grid, padding_factor)
    spectrum = np.fft.fftn(box.pad(g.values))
    freqs = [2.0 * np.pi * np.fft.fftfreq(n, d=h) for n, h in zip(box.xi_norm.shape, grid.spacing)]
    mesh = np.meshgrid(*freqs, indexing="ij")
    y = ygrid.nodes
    grad_x = [np.empty((grid.size, ygrid.K + 1)) for _ in range(grid.dimension)]
    grad_y = np.zeros((grid.size, ygrid.K + 1))
    # d/dy theta(|xi|^2, y) = -|xi| (2/Gamma(alpha)) (z/2)^alpha K_{1-alpha}(z), z = |xi| y
    for k in range(ygrid.K + 1):
        symbol = theta_kernel_bessel(1.0, box.xi_norm * y[k], alpha) if y[k] > 0 else np.ones_like(box.xi_norm)
        layer = spectrum * symbol
        for axis, freq in enumerate(mesh):
            grad_x[axis][:, k] = box.crop(np.real(np.fft.ifftn(1j * freq * layer)))
        if y[k] > 0:
            z = box.xi_norm * y[k]
            with np.errstate(over="ignore", invalid="ignore"):
                dsym = -box.xi_norm * 2.0 / gamma(alpha) * (0.5 * z) ** alpha * kv(1.0 - alpha, z)
            dsym = np.nan_to_num(dsym, nan=0.0, posinf=0.0, neginf=0.0)
            grad_y[:, k] = box.crop(np.real(np.fft.ifftn(spectrum * dsym)))
    return grad_x, grad_y
