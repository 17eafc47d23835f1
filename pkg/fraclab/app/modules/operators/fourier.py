"""
Fourier multipliers |xi|^{2 alpha} applied to zero extensions on a padded periodic box.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ...errors import ParameterError
from ..domain import Domain, GridFunction, build_grid
from ..domain.models import Grid

logger = logging.getLogger(__name__)

DEFAULT_PADDING = 8
MIN_PADDING = 4


@dataclass(frozen=True, eq=False)
class FourierBox:
    """Periodic box padding_factor times the size of the grid, sharing its spacing."""

    grid: Grid
    padding_factor: int
    box_grid: Grid
    offsets: tuple
    xi_norm: np.ndarray

    @classmethod
    def around(cls, grid: Grid, padding_factor: int = DEFAULT_PADDING) -> "FourierBox":
        padding_factor = int(padding_factor)
        if padding_factor < MIN_PADDING:
            raise ParameterError(f"padding_factor={padding_factor} must be >= {MIN_PADDING}.")
        if grid.include_boundary:
            raise ParameterError("Fourier multipliers need a midpoint grid.")
        sizes, offsets, bounds = [], [], []
        for n, h, (a, _) in zip(grid.shape, grid.spacing, grid.domain.box):
            size = padding_factor * n
            offset = (size - n) // 2
            lo = a - offset * h
            sizes.append(size)
            offsets.append(offset)
            bounds.append((lo, lo + size * h))
        if grid.dimension == 1:
            box_domain = Domain.interval(*bounds[0])
        else:
            box_domain = Domain.rectangle(bounds[0], bounds[1])
        # build_grid uses one node count per axis, so every grid it makes pads to a square box.
        box_grid = build_grid(box_domain, sizes[0])

        freqs = [2.0 * np.pi * np.fft.fftfreq(size, d=h) for size, h in zip(sizes, grid.spacing)]
        mesh = np.meshgrid(*freqs, indexing="ij")
        xi_norm = np.sqrt(sum(f * f for f in mesh))
        return cls(grid=grid, padding_factor=padding_factor, box_grid=box_grid,
                   offsets=tuple(offsets), xi_norm=xi_norm)

    @classmethod
    def periodic(cls, grid: Grid) -> "FourierBox":
        """Treat the grid itself as one period: no padding, no window."""
        freqs = [2.0 * np.pi * np.fft.fftfreq(n, d=h) for n, h in zip(grid.shape, grid.spacing)]
        mesh = np.meshgrid(*freqs, indexing="ij")
        xi_norm = np.sqrt(sum(f * f for f in mesh))
        return cls(grid=grid, padding_factor=1, box_grid=grid, offsets=(0,) * grid.dimension, xi_norm=xi_norm)

    def _window(self):
        return tuple(slice(o, o + n) for o, n in zip(self.offsets, self.grid.shape))

    def pad(self, values: np.ndarray) -> np.ndarray:
        """Zero extension of grid values onto the box array."""
        out = np.zeros(self.xi_norm.shape)
        out[self._window()] = self.grid.reshape(values)
        return out

    def crop(self, box_values: np.ndarray) -> np.ndarray:
        """Restriction of a box array back to the flat grid values."""
        return np.asarray(box_values)[self._window()].reshape(-1)

    def multiplier(self, box_values: np.ndarray, exponent: float) -> np.ndarray:
        """Apply |xi|^exponent to a box array; the xi = 0 entry maps to 0."""
        return apply_fourier_multiplier(box_values, self.xi_norm, exponent)

    def gradient(self, box_values: np.ndarray):
        """Spectral gradient of a box array, one array per axis."""
        spectrum = np.fft.fftn(box_values)
        freqs = [2.0 * np.pi * np.fft.fftfreq(n, d=h) for n, h in zip(box_values.shape, self.grid.spacing)]
        mesh = np.meshgrid(*freqs, indexing="ij")
        return [np.real(np.fft.ifftn(1j * k * spectrum)) for k in mesh]


def apply_fourier_multiplier(box_values: np.ndarray, xi_norm: np.ndarray, exponent: float) -> np.ndarray:
    symbol = np.zeros_like(xi_norm)
    nonzero = xi_norm > 0
    symbol[nonzero] = xi_norm[nonzero] ** exponent
    return np.real(np.fft.ifftn(np.fft.fftn(box_values) * symbol))


def fourier_frac_laplacian(u: GridFunction, alpha: float, padding_factor: int = DEFAULT_PADDING,
                           restrict: bool = True, periodic: bool = False) -> GridFunction:
    """
    Multiplier |xi|^{2 alpha} applied to the zero extension of u, restricted to the grid.

    With restrict=False the result is returned on the whole padded box grid.
    With periodic=True u.grid is taken as one period of the box (no padding),
    so box-level applications compose exactly:

        fourier_frac_laplacian(fourier_frac_laplacian(u, a1, restrict=False), a2, periodic=True)
            == fourier_frac_laplacian(u, a1 + a2, restrict=False)

    Args:
        u: Compactly supported grid function (or one period of a box field)
        alpha: Order in (0, 1)
        padding_factor: Box size as a multiple of the domain size (>= 4)
        restrict: Crop the result back to u.grid
        periodic: Use u.grid as the periodic box

    Returns:
        GridFunction
    """
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha={alpha} must lie in (0, 1).")
    box = FourierBox.periodic(u.grid) if periodic else FourierBox.around(u.grid, padding_factor)
    applied = box.multiplier(box.pad(u.values), 2.0 * alpha)
    if restrict:
        return GridFunction(u.grid, box.crop(applied))
    return GridFunction(box.box_grid, applied.reshape(-1))
