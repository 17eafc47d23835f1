"""
The Leibniz defect (-Delta)^alpha(gh) - g (-Delta)^alpha h - h (-Delta)^alpha g and its estimate.
"""
import logging
from dataclasses import dataclass

import numpy as np

from ...errors import DomainError, GridMismatchError
from ..domain import EigenBasis, GridFunction, build_eigenbasis
from ..extension import (
    ExtensionField,
    YGrid,
    extend_poisson,
    extend_spectral,
    neumann_trace,
    poisson_field_gradients,
    solve_weighted_pde,
    spectral_field_gradients,
)
from ..operators import (
    DEFAULT_PADDING,
    FourierBox,
    FracOrder,
    FractionalOperator,
    as_kind,
    frac_sobolev_norm,
    l2_norm,
    sup_norm,
)
from .models import CONJECTURAL, NO_ESTIMATE, EstimateReport

logger = logging.getLogger(__name__)


def commutator(g: GridFunction, h: GridFunction, kind, alpha: float, basis: EigenBasis = None,
               padding_factor: int = DEFAULT_PADDING) -> GridFunction:
    """Op(g h) - g Op(h) - h Op(g) on the grid of g."""
    if not g.grid.same_as(h.grid):
        raise GridMismatchError("Commutator arguments live on different grids.")
    kind = as_kind(kind)
    if kind.tag == "regional":
        logger.warning("Regional commutator evaluated: no estimate is proven for this operator")
    op = FractionalOperator.of(kind, alpha, basis, padding_factor)
    return op(g * h) - g * op(h) - h * op(g)


def _whole_space_terms(g: GridFunction, h: GridFunction, alpha: float, padding_factor: int):
    """Commutator and (-Delta)^alpha g on the padded box, as box arrays."""
    box = FourierBox.around(g.grid, padding_factor)
    big_g, big_h = box.pad(g.values), box.pad(h.values)
    op_g = box.multiplier(big_g, 2.0 * alpha)
    comm = box.multiplier(big_g * big_h, 2.0 * alpha) - big_g * box.multiplier(big_h, 2.0 * alpha) - big_h * op_g
    return comm, op_g


def _kernel_sobolev_factor(h: GridFunction, kind, beta: float) -> float:
    if beta == 0.0:
        return l2_norm(h)
    return l2_norm(FractionalOperator.of(kind, beta / 2.0)(h))


def check_theorem_1(g: GridFunction, h: GridFunction, alpha: float, beta: float, kind="spectral",
                    basis: EigenBasis = None, padding_factor: int = DEFAULT_PADDING,
                    config: dict = None) -> EstimateReport:
    """
    ||D_alpha(g, h)|| <= C ||(-Delta)^{beta/2} h|| ||g||_inf^{beta/(2 alpha)} ||(-Delta)^alpha g||_inf^{(2 alpha - beta)/(2 alpha)}.

    The spectral kind uses L^2(domain) norms; the fourier kind measures the
    commutator and (-Delta)^alpha g on the whole padded box. Kernel kinds are
    computed with domain norms and flagged, since nothing is proven for them.
    """
    FracOrder(alpha, beta)
    kind = as_kind(kind)
    flags = ()
    if kind.tag == "fourier":
        comm, op_g = _whole_space_terms(g, h, alpha, padding_factor)
        lhs = float(np.sqrt(np.sum(comm ** 2) * g.grid.cell_volume))
        sup_op_g = float(np.max(np.abs(op_g)))
        sobolev = frac_sobolev_norm(h, kind, beta, padding_factor=padding_factor)
    elif kind.tag == "spectral":
        if basis is None:
            basis = build_eigenbasis(g.grid.domain, g.grid)
        op = FractionalOperator.of(kind, alpha, basis)
        lhs = l2_norm(commutator(g, h, kind, alpha, basis))
        sup_op_g = sup_norm(op(g))
        sobolev = frac_sobolev_norm(h, kind, beta, basis=basis)
    else:
        flags = (CONJECTURAL,) if kind.tag == "restricted" else (NO_ESTIMATE,)
        lhs = l2_norm(commutator(g, h, kind, alpha))
        sup_op_g = sup_norm(FractionalOperator.of(kind, alpha)(g))
        sobolev = _kernel_sobolev_factor(h, kind, beta)

    sup_g = sup_norm(g)
    rhs = sobolev * sup_g ** (beta / (2.0 * alpha)) * sup_op_g ** ((2.0 * alpha - beta) / (2.0 * alpha))
    cfg = {"kind": kind.tag, "alpha": alpha, "beta": beta, "grid": "x".join(map(str, g.grid.shape))}
    cfg.update(config or {})
    return EstimateReport(name="theorem_1", lhs=lhs, rhs=rhs,
                          rhs_factors={"sobolev_h": sobolev, "sup_g": sup_g, "sup_fraclap_g": sup_op_g},
                          config=cfg, flags=flags)


@dataclass(frozen=True, eq=False)
class CommutatorField:
    """Z = W - U V solved from div(y^{1-2 alpha} grad Z) = -2 y^{1-2 alpha} grad U . grad V, Z(., 0) = 0."""

    z: ExtensionField
    source: ExtensionField
    u: ExtensionField
    v: ExtensionField


def solve_commutator_field(g: GridFunction, h: GridFunction, alpha: float, basis: EigenBasis,
                           ygrid: YGrid) -> CommutatorField:
    """Solve the Z problem with the right-hand side assembled from the analytic gradients of U and V."""
    if not g.grid.same_as(h.grid):
        raise GridMismatchError("Commutator arguments live on different grids.")
    grid = g.grid
    if not grid.domain.is_box:
        raise DomainError("The Z problem is solved on intervals and rectangles.")
    u = extend_spectral(g, basis, alpha, ygrid)
    v = extend_spectral(h, basis, alpha, ygrid)
    gu_x, gu_y = spectral_field_gradients(g, basis, alpha, ygrid)
    gv_x, gv_y = spectral_field_gradients(h, basis, alpha, ygrid)
    source = -2.0 * (sum(a * b for a, b in zip(gu_x, gv_x)) + gu_y * gv_y)
    source_field = ExtensionField(grid, ygrid, source, alpha=alpha)
    zero = GridFunction(grid, np.zeros(grid.size))
    z = solve_weighted_pde(source_field, zero, alpha, grid.domain, ygrid, rhs_weighted=True)
    return CommutatorField(z=z, source=source_field, u=u, v=v)


def solve_whole_space_commutator_field(g: GridFunction, h: GridFunction, alpha: float, ygrid: YGrid,
                                       padding_factor: int = 4) -> CommutatorField:
    """
    Whole-space Z problem, truncated to the padded box with Dirichlet sides.

    U and V are Poisson extensions of g and h embedded in the box.
    """
    box = FourierBox.around(g.grid, padding_factor)
    big_g = GridFunction(box.box_grid, box.pad(g.values).reshape(-1))
    big_h = GridFunction(box.box_grid, box.pad(h.values).reshape(-1))
    u = extend_poisson(big_g, alpha, ygrid, padding_factor=padding_factor)
    v = extend_poisson(big_h, alpha, ygrid, padding_factor=padding_factor)
    gu_x, gu_y = poisson_field_gradients(big_g, alpha, ygrid, padding_factor)
    gv_x, gv_y = poisson_field_gradients(big_h, alpha, ygrid, padding_factor)
    source = -2.0 * (sum(a * b for a, b in zip(gu_x, gv_x)) + gu_y * gv_y)
    source_field = ExtensionField(box.box_grid, ygrid, source, alpha=alpha, periodic=True)
    zero = GridFunction(box.box_grid, np.zeros(box.box_grid.size))
    z = solve_weighted_pde(source_field, zero, alpha, box.box_grid.domain, ygrid, rhs_weighted=True)
    return CommutatorField(z=z, source=source_field, u=u, v=v)


def commutator_via_extension(g: GridFunction, h: GridFunction, alpha: float, basis: EigenBasis,
                             ygrid: YGrid) -> GridFunction:
    """Normalized Neumann trace of Z, which reproduces the spectral commutator."""
    solved = solve_commutator_field(g, h, alpha, basis, ygrid)
    zero = GridFunction(g.grid, np.zeros(g.grid.size))
    return neumann_trace(solved.z, alpha, zero).trace
