"""
Spectral fractional Laplacian from a truncated Dirichlet eigenbasis.
"""
import logging

import numpy as np

from ...errors import GridMismatchError, ParameterError
from ..domain import EigenBasis, GridFunction, project

logger = logging.getLogger(__name__)

TAIL_COEFFICIENT_TOL = 1e-10


def spectral_coefficients(u: GridFunction, basis: EigenBasis) -> np.ndarray:
    """Project u and warn when the upper half of the spectrum is not negligible."""
    if not u.grid.same_as(basis.grid):
        raise GridMismatchError("Function and eigenbasis live on different grids.")
    coeffs = project(u, basis)
    tail = coeffs[basis.J // 2:]
    if tail.size and float(np.max(np.abs(tail))) >= TAIL_COEFFICIENT_TOL:
        logger.warning(f"Spectral truncation J={basis.J}: tail coefficient "
                       f"{float(np.max(np.abs(tail))):.2e} exceeds {TAIL_COEFFICIENT_TOL:.0e}")
    return coeffs


def spectral_frac_laplacian(u: GridFunction, basis: EigenBasis, alpha: float) -> GridFunction:
    """sum_j lambda_j^alpha u_j phi_j."""
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha={alpha} must lie in (0, 1).")
    coeffs = spectral_coefficients(u, basis)
    return GridFunction(basis.grid, (basis.lambdas ** alpha * coeffs) @ basis.phis)


def spectral_power_norm(u: GridFunction, basis: EigenBasis, beta: float) -> float:
    """(sum_j lambda_j^beta u_j^2)^{1/2}."""
    coeffs = spectral_coefficients(u, basis)
    return float(np.sqrt(np.sum(basis.lambdas ** beta * coeffs ** 2)))
