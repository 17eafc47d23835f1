"""
Closed-form Dirichlet eigenbases for intervals and rectangles.
"""
import itertools
import logging

import numpy as np

from ...errors import DomainError, GridMismatchError, ParameterError
from .models import EigenBasis, Grid, GridFunction

logger = logging.getLogger(__name__)


def _axis_modes(axis: np.ndarray, a: float, b: float, j: int):
    length = b - a
    k = j * np.pi / length
    norm = np.sqrt(2.0 / length)
    return norm * np.sin(k * (axis - a)), norm * k * np.cos(k * (axis - a)), k * k


def build_eigenbasis(domain, grid: Grid, J: int = None) -> EigenBasis:
    """
    First J Dirichlet eigenpairs in increasing eigenvalue order.

    Interval (a,b): lambda_j = (j pi/(b-a))^2, phi_j = sqrt(2/(b-a)) sin(j pi (x-a)/(b-a)).
    Rectangles use tensor products; ties are broken by the mode indices.

    Args:
        domain: Interval or rectangle
        grid: Grid built on the same domain
        J: Truncation count (defaults to n/4 modes)

    Returns:
        EigenBasis
    """
    if domain.kind == "ball":
        raise DomainError("No closed-form eigenbasis for a ball; it is only used by the appendix.")
    if grid.domain != domain:
        raise GridMismatchError("Grid was built on a different domain.")
    if J is None:
        J = max(1, min(grid.shape) // 4)
    J = int(J)
    if J < 1:
        raise ParameterError("Need at least one eigenpair.")

    # The discrete sine transform keeps modes below the axis node count orthonormal.
    top = 2 if grid.include_boundary else 1
    limits = [min(n - top, J) for n in grid.shape]
    candidates = []
    for mode in itertools.product(*[range(1, m + 1) for m in limits]):
        lam = sum((j * np.pi / (b - a)) ** 2 for j, (a, b) in zip(mode, domain.bounds))
        candidates.append((lam, mode))
    candidates.sort()
    if len(candidates) < J:
        raise ParameterError(f"Grid {grid.shape} resolves only {len(candidates)} modes, asked for {J}.")
    chosen = candidates[:J]

    dim = grid.dimension
    phis = np.empty((J, grid.size))
    gradients = np.empty((dim, J, grid.size))
    for idx, (_, mode) in enumerate(chosen):
        factors, derivs = [], []
        for axis_id, j in enumerate(mode):
            a, b = domain.bounds[axis_id]
            s, c, _ = _axis_modes(grid.axes[axis_id], a, b, j)
            factors.append(s)
            derivs.append(c)
        phis[idx] = _outer(factors).reshape(-1)
        for axis_id in range(dim):
            parts = [derivs[k] if k == axis_id else factors[k] for k in range(dim)]
            gradients[axis_id, idx] = _outer(parts).reshape(-1)

    lambdas = np.array([lam for lam, _ in chosen])
    logger.debug(f"Eigenbasis J={J} on {domain.describe()}: lambda_1={lambdas[0]:.6g}, lambda_J={lambdas[-1]:.6g}")
    return EigenBasis(grid=grid, lambdas=lambdas, phis=phis, gradients=gradients,
                      modes=tuple(mode for _, mode in chosen))


def _outer(vectors):
    out = vectors[0]
    for v in vectors[1:]:
        out = np.multiply.outer(out, v)
    return np.asarray(out)


def project(f: GridFunction, basis: EigenBasis) -> np.ndarray:
    """Coefficients u_j = int f phi_j, j = 1..J."""
    if not f.grid.same_as(basis.grid):
        raise GridMismatchError("Function and eigenbasis live on different grids.")
    return basis.phis @ (basis.grid.weights * f.values)


def synthesize(coeffs, basis: EigenBasis) -> GridFunction:
    """Sum_j coeffs_j phi_j on the grid."""
    coeffs = np.asarray(coeffs, dtype=float).reshape(-1)
    if coeffs.shape[0] > basis.J:
        raise GridMismatchError(f"{coeffs.shape[0]} coefficients for a basis of {basis.J} modes.")
    return GridFunction(basis.grid, coeffs @ basis.phis[:coeffs.shape[0]])


def orthonormality_defect(basis: EigenBasis) -> float:
    """max |<phi_i, phi_j> - delta_ij|."""
    gram = (basis.phis * basis.grid.weights) @ basis.phis.T
    return float(np.max(np.abs(gram - np.eye(basis.J))))
