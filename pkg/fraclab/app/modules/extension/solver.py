"""
Finite-volume solver for div(y^a grad Z) = F on domain x (0, Y_max), a = 1 - 2 alpha.

Faces in y carry the exact harmonic weight 1 / int y^{-a} dy, and the
x-Laplacian is scaled by the exact dual measure int y^a dy of each control
volume, so the degenerate weight is only ever integrated.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from ...errors import DomainError, GridMismatchError, ParameterError, SolverError
from ..domain import GridFunction
from ..domain.models import Grid
from .kernels import extension_trace_constant
from .models import ExtensionField, YGrid

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10


def power_integral(lo, hi, p):
    """int_lo^hi y^p dy for arrays lo < hi, including the logarithmic case p = -1."""
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    if abs(p + 1.0) < 1e-14:
        return np.log(hi / lo)
    return (hi ** (p + 1.0) - lo ** (p + 1.0)) / (p + 1.0)


@dataclass(frozen=True)
class WeightedStencil:
    """Face coefficients and dual measures of the y-discretization for a given weight exponent."""

    faces: np.ndarray
    duals: np.ndarray
    lengths: np.ndarray

    @classmethod
    def build(cls, ygrid: YGrid, a: float) -> "WeightedStencil":
        if not -1.0 < a < 1.0:
            raise ParameterError(f"Weight exponent a={a} must lie in (-1, 1).")
        y = ygrid.nodes
        faces = 1.0 / power_integral(y[:-1], y[1:], -a)
        edges = ygrid.midpoints
        duals = power_integral(edges[:-1], edges[1:], a)
        return cls(faces=faces, duals=duals, lengths=np.diff(edges))


def lateral_laplacian(xgrid: Grid) -> sparse.csr_matrix:
    """Dirichlet Laplacian on a midpoint grid; the wall sits half a cell outside the last node."""
    if not xgrid.domain.is_box:
        raise DomainError("The weighted solver needs an interval or rectangle.")
    ops = []
    for n, h in zip(xgrid.shape, xgrid.spacing):
        main = np.full(n, -2.0)
        main[0] = main[-1] = -3.0
        ops.append(sparse.diags([np.ones(n - 1), main, np.ones(n - 1)], [-1, 0, 1]) / (h * h))
    if len(ops) == 1:
        return ops[0].tocsr()
    nx, ny = xgrid.shape
    return (sparse.kron(ops[0], sparse.identity(ny)) + sparse.kron(sparse.identity(nx), ops[1])).tocsr()


def _layer_rhs(F: ExtensionField, stencil: WeightedStencil, rhs_weighted: bool) -> np.ndarray:
    """Integral of the right-hand side over every control volume in y, shape (N, K + 1)."""
    if F is None:
        return None
    measure = stencil.duals if rhs_weighted else stencil.lengths
    return F.values * measure[None, :]


def solve_weighted_pde(F: ExtensionField, bottom: GridFunction, alpha: float, domain, ygrid: YGrid,
                       rhs_weighted: bool = False) -> ExtensionField:
    """
    Solve div(y^{1-2 alpha} grad Z) = F with Z = bottom at y = 0, zero on the sides and at Y_max.

    Args:
        F: Right-hand side field, or None for F = 0; with rhs_weighted it holds G where F = y^a G
        bottom: Dirichlet data at y = 0
        alpha: Order in (0, 1)
        domain: Domain of the x-grid
        ygrid: Extension-variable grid
        rhs_weighted: Integrate F as y^a G with exact weights

    Returns:
        ExtensionField carrying the relative solver residual

    Raises:
        SolverError: if the relative residual exceeds 1e-10
    """
    xgrid = bottom.grid
    if xgrid.domain != domain:
        raise GridMismatchError("Bottom data does not live on the given domain.")
    if F is not None and (not F.xgrid.same_as(xgrid) or F.ygrid != ygrid):
        raise GridMismatchError("Right-hand side lives on a different grid.")
    a = 1.0 - 2.0 * alpha
    stencil = WeightedStencil.build(ygrid, a)
    K, N = ygrid.K, xgrid.size
    inner = K - 1

    A = stencil.faces
    t_main = -(A[:-1] + A[1:])
    t_y = sparse.diags([A[1:inner], t_main, A[1:inner]], [-1, 0, 1], shape=(inner, inner))
    lx = lateral_laplacian(xgrid)
    matrix = (sparse.kron(sparse.identity(N), t_y)
              + sparse.kron(lx, sparse.diags(stencil.duals[1:K]))).tocsc()

    rhs = np.zeros((N, inner))
    layer_rhs = _layer_rhs(F, stencil, rhs_weighted)
    if layer_rhs is not None:
        rhs += layer_rhs[:, 1:K]
    rhs[:, 0] -= A[0] * bottom.values
    b = rhs.reshape(-1)

    if not np.any(b):
        interior = np.zeros_like(b)
        residual = 0.0
    else:
        interior = spsolve(matrix, b)
        residual = float(np.linalg.norm(matrix @ interior - b) / np.linalg.norm(b))
    if not np.isfinite(residual) or residual > RESIDUAL_TOL:
        raise SolverError(f"Weighted solve residual {residual:.2e} exceeds {RESIDUAL_TOL:.0e}.")
    logger.debug(f"Weighted solve: {N}x{inner} unknowns, relative residual {residual:.2e}")

    values = np.zeros((N, K + 1))
    values[:, 0] = bottom.values
    values[:, 1:K] = interior.reshape(N, inner)
    return ExtensionField(xgrid, ygrid, values, alpha=alpha, solver_residual=residual)


def discrete_flux_trace(field: ExtensionField, alpha: float, F: ExtensionField = None,
                        rhs_weighted: bool = False) -> GridFunction:
    """
    -lim y^a Z_y read off the half control volume at y = 0, normalized by kappa_alpha.

    Exact for the discrete solution: it is the flux that balances the k = 0 row.
    """
    stencil = WeightedStencil.build(field.ygrid, 1.0 - 2.0 * alpha)
    lx = lateral_laplacian(field.xgrid)
    z = field.values
    raw = -stencil.faces[0] * (z[:, 1] - z[:, 0]) - stencil.duals[0] * (lx @ z[:, 0])
    layer_rhs = _layer_rhs(F, stencil, rhs_weighted)
    if layer_rhs is not None:
        raw = raw + layer_rhs[:, 0]
    return GridFunction(field.xgrid, raw / extension_trace_constant(alpha))


def weighted_bilinear_form(z: ExtensionField, psi: ExtensionField, alpha: float) -> float:
    """Discrete a(Z, psi) = sum over faces of y-differences plus dual-weighted x-gradient products."""
    stencil = WeightedStencil.build(z.ygrid, 1.0 - 2.0 * alpha)
    lx = lateral_laplacian(z.xgrid)
    w = z.xgrid.weights
    dz, dpsi = np.diff(z.values, axis=1), np.diff(psi.values, axis=1)
    y_part = np.dot(w, (dz * dpsi) @ stencil.faces)
    x_part = np.dot(w, np.sum(-(lx @ z.values) * psi.values * stencil.duals[None, :], axis=1))
    return float(y_part + x_part)


def energy_identity_residual(z: ExtensionField, psi: ExtensionField, alpha: float, F: ExtensionField = None,
                             rhs_weighted: bool = False) -> float:
    """
    |a(Z, psi) - int trace psi(., 0) + int int F psi| for a test field psi vanishing at Y_max.

    The trace is the raw (unnormalized) weighted flux.
    """
    if np.any(psi.values[:, -1] != 0):
        raise ParameterError("Test fields must vanish on the top layer.")
    stencil = WeightedStencil.build(z.ygrid, 1.0 - 2.0 * alpha)
    w = z.xgrid.weights
    trace = discrete_flux_trace(z, alpha, F, rhs_weighted).values * extension_trace_constant(alpha)
    total = weighted_bilinear_form(z, psi, alpha) - np.dot(w, trace * psi.values[:, 0])
    layer_rhs = _layer_rhs(F, stencil, rhs_weighted)
    if layer_rhs is not None:
        total += np.dot(w, np.sum(layer_rhs * psi.values, axis=1))
    return float(abs(total))
