"""
Checks of the intermediate inequalities used to prove the commutator estimate.
"""
import logging

import numpy as np

from ...errors import ParameterError
from ..domain import EigenBasis, GridFunction, build_eigenbasis
from ..domain.models import Grid
from ..extension import (
    ExtensionField,
    YGrid,
    energy_identity_residual,
    extend_poisson,
    extend_spectral,
    extension_trace_constant,
    first_layer_ratio,
    neumann_trace,
    weighted_bilinear_form,
    weighted_field_l2,
    weighted_gradient_energy,
    weighted_lateral_energy,
    weighted_sup_gradient,
)
from ..extension.solver import power_integral
from ..operators import FourierBox, FracOrder, FractionalOperator, as_kind, frac_sobolev_norm, sup_norm
from .commutator import solve_commutator_field, solve_whole_space_commutator_field
from .models import EstimateReport

logger = logging.getLogger(__name__)

EMBED_PADDING = 4
TEST_FIELD_MODES = 3
TRACE_SIGNAL_FLOOR = 1e-6
TRACE_RELATIVE_FLOOR = 1e-3


def _first_eigenvalue(grid: Grid) -> float:
    return float(sum((np.pi / (b - a)) ** 2 for a, b in grid.domain.box))


def default_ygrid(grid: Grid, alpha: float, K: int = None) -> YGrid:
    """Six decay lengths of the slowest Dirichlet mode of the bounding box."""
    kwargs = {} if K is None else {"K": K}
    return YGrid.for_order(_first_eigenvalue(grid), alpha, **kwargs)


def _spectral_setup(f: GridFunction, basis: EigenBasis):
    return basis if basis is not None else build_eigenbasis(f.grid.domain, f.grid)


def _embedded(f: GridFunction) -> GridFunction:
    box = FourierBox.around(f.grid, EMBED_PADDING)
    return GridFunction(box.box_grid, box.pad(f.values).reshape(-1))


def _extension(f: GridFunction, order: float, kind, basis, ygrid) -> ExtensionField:
    if kind.tag == "spectral":
        return extend_spectral(f, basis, order, ygrid)
    return extend_poisson(_embedded(f), order, ygrid, padding_factor=EMBED_PADDING)


def _sup_operator(g: GridFunction, alpha: float, kind, basis) -> float:
    if kind.tag == "spectral":
        return sup_norm(FractionalOperator.of(kind, alpha, basis)(g))
    box = FourierBox.around(g.grid, EMBED_PADDING * EMBED_PADDING)
    return float(np.max(np.abs(box.multiplier(box.pad(g.values), 2.0 * alpha))))


def _check_kind(kind):
    kind = as_kind(kind)
    if kind.tag not in ("spectral", "fourier"):
        raise ParameterError(f"Sub-lemma checks run for spectral and fourier kinds, not {kind}.")
    return kind


def check_es2(h: GridFunction, alpha: float, beta: float, kind="spectral", basis: EigenBasis = None,
              ygrid: YGrid = None) -> EstimateReport:
    """
    int int y^{1-2 beta} |grad V|^2 <= C ||(-Delta)^{beta/2} h||^2 with V the alpha-extension of h.

    Also records the comparison with the beta-extension phi (ratio 1 when
    beta = alpha) and E(phi) / (kappa_beta ||(-Delta)^{beta/2} h||^2), which
    is 1 up to discretization.
    """
    FracOrder(alpha, beta)
    kind = _check_kind(kind)
    if kind.tag == "spectral":
        basis = _spectral_setup(h, basis)
    lowest = min(alpha, beta) if beta > 0 else alpha
    ygrid = ygrid or default_ygrid(h.grid, lowest)
    a = 1.0 - 2.0 * beta

    v = _extension(h, alpha, kind, basis, ygrid)
    lhs = weighted_gradient_energy(v, a)
    sobolev = frac_sobolev_norm(h, kind, beta, basis=basis)
    extras = {}
    if beta > 0:
        phi = v if beta == alpha else _extension(h, beta, kind, basis, ygrid)
        phi_energy = weighted_gradient_energy(phi, a)
        c_beta = extension_trace_constant(beta)
        extras["es1_ratio"] = lhs / phi_energy if phi_energy > 0 else 0.0
        extras["c_beta"] = c_beta
        extras["energy_constant_ratio"] = phi_energy / (c_beta * sobolev ** 2) if sobolev > 0 else 0.0
    return EstimateReport(name="es2", lhs=lhs, rhs=sobolev ** 2, rhs_factors={"sobolev_h_sq": sobolev ** 2},
                          config=_config(kind, alpha, beta, h.grid, ygrid), extras=extras)


def check_es42_es39(g: GridFunction, alpha: float, kind="spectral", basis: EigenBasis = None,
                    ygrid: YGrid = None) -> EstimateReport:
    """||y^{1-2 alpha} |grad U| ||_inf against ||(-Delta)^alpha g||_inf; the y^1 weight against ||g||_inf as extras."""
    kind = _check_kind(kind)
    FracOrder(alpha)
    if kind.tag == "spectral":
        basis = _spectral_setup(g, basis)
    ygrid = ygrid or default_ygrid(g.grid, alpha)
    u = _extension(g, alpha, kind, basis, ygrid)
    lhs = weighted_sup_gradient(u, 1.0 - 2.0 * alpha)
    sup_op = _sup_operator(g, alpha, kind, basis)
    es39_lhs = weighted_sup_gradient(u, 1.0)
    sup_g = sup_norm(g)
    extras = {"es39_lhs": es39_lhs, "es39_rhs": sup_g,
              "es39_ratio": es39_lhs / sup_g if sup_g > 0 else 0.0}
    return EstimateReport(name="es42", lhs=lhs, rhs=sup_op, rhs_factors={"sup_fraclap_g": sup_op},
                          config=_config(kind, alpha, None, g.grid, ygrid), extras=extras)


def _z_problem(g, h, alpha, kind, basis, ygrid):
    if kind.tag == "spectral":
        return solve_commutator_field(g, h, alpha, basis, ygrid)
    return solve_whole_space_commutator_field(g, h, alpha, ygrid, padding_factor=EMBED_PADDING)


def check_es43(g: GridFunction, h: GridFunction, alpha: float, beta: float, kind="spectral",
               basis: EigenBasis = None, ygrid: YGrid = None) -> EstimateReport:
    """int int y^{-1-2 alpha} |Z|^2 <= C ||(-Delta)^{beta/2} h||^2 ||g||_inf^{2 beta/alpha} ||(-Delta)^alpha g||_inf^{2(alpha-beta)/alpha}."""
    FracOrder(alpha, beta)
    kind = _check_kind(kind)
    if kind.tag == "spectral":
        basis = _spectral_setup(g, basis)
    ygrid = ygrid or default_ygrid(g.grid, alpha)
    solved = _z_problem(g, h, alpha, kind, basis, ygrid)
    lhs = weighted_field_l2(solved.z, -1.0 - 2.0 * alpha)
    sobolev = frac_sobolev_norm(h, kind, beta, basis=basis)
    sup_g = sup_norm(g)
    sup_op = _sup_operator(g, alpha, kind, basis)
    rhs = sobolev ** 2 * sup_g ** (2.0 * beta / alpha) * sup_op ** (2.0 * (alpha - beta) / alpha)
    return EstimateReport(name="es43", lhs=lhs, rhs=rhs,
                          rhs_factors={"sobolev_h_sq": sobolev ** 2, "sup_g": sup_g, "sup_fraclap_g": sup_op},
                          config=_config(kind, alpha, beta, g.grid, ygrid),
                          extras={"solver_residual": float(solved.z.solver_residual or 0.0)})


def _test_fields(z: ExtensionField, basis: EigenBasis):
    y = z.ygrid.nodes
    profile = (1.0 - y / y[-1]) * np.exp(-np.sqrt(basis.lambdas[0]) * y)
    for j in range(min(TEST_FIELD_MODES, basis.J)):
        yield z.with_values(np.outer(basis.phis[j], profile))


def check_z_energy_balance(g: GridFunction, h: GridFunction, alpha: float, basis: EigenBasis = None,
                           ygrid: YGrid = None) -> EstimateReport:
    """
    Balance obtained by testing the Z equation with y^{-2 alpha} Z:

        (1/(4 alpha)) int |lim y^{1-2 alpha} Z_y|^2 + int int y |grad_x (y^{-2 alpha} Z)|^2
            = 2 int int y^{1-2 alpha} grad U . grad V y^{-2 alpha} Z

    Extras record the discrete integration-by-parts residual of the scheme
    and the node-wise agreement of lim y^{-2 alpha} Z with (1/(2 alpha)) lim y^{1-2 alpha} Z_y.
    """
    FracOrder(alpha)
    basis = _spectral_setup(g, basis)
    ygrid = ygrid or default_ygrid(g.grid, alpha)
    solved = solve_commutator_field(g, h, alpha, basis, ygrid)
    z = solved.z
    zero = GridFunction(g.grid, np.zeros(g.grid.size))
    flux = neumann_trace(z, alpha, zero).raw_flux.values
    w = g.grid.weights

    y = ygrid.nodes
    limit = -flux / (2.0 * alpha)
    scaled = np.empty_like(z.values)
    scaled[:, 0] = limit
    scaled[:, 1:] = z.values[:, 1:] / y[1:] ** (2.0 * alpha)
    phi = z.with_values(scaled)

    lhs = np.dot(w, flux ** 2) / (4.0 * alpha) + weighted_lateral_energy(phi, 1.0)
    edges = ygrid.midpoints
    duals = power_integral(edges[:-1], edges[1:], 1.0 - 2.0 * alpha)
    rhs = float(np.dot(w, np.sum(-solved.source.values * scaled * duals[None, :], axis=1)))

    residuals = []
    z_energy = abs(weighted_bilinear_form(z, z, alpha))
    for psi in _test_fields(z, basis):
        scale = np.sqrt(z_energy * abs(weighted_bilinear_form(psi, psi, alpha))) + 1e-300
        residuals.append(energy_identity_residual(z, psi, alpha, solved.source, rhs_weighted=True) / scale)

    direct = first_layer_ratio(z, 2.0 * alpha).values
    mask = np.abs(limit) > max(TRACE_SIGNAL_FLOOR, TRACE_RELATIVE_FLOOR * float(np.max(np.abs(limit), initial=0.0)))
    relation = float(np.max(np.abs(direct[mask] - limit[mask]) / np.abs(limit[mask]), initial=0.0))

    return EstimateReport(name="z_energy_balance", lhs=float(lhs), rhs=abs(rhs),
                          rhs_factors={}, config=_config(as_kind("spectral"), alpha, None, g.grid, ygrid),
                          extras={"identity_residual": float(max(residuals, default=0.0)),
                                  "trace_relation_error": relation,
                                  "solver_residual": float(z.solver_residual or 0.0)})


def _config(kind, alpha, beta, grid: Grid, ygrid: YGrid) -> dict:
    cfg = {"kind": kind.tag, "alpha": alpha, "beta": beta if beta is not None else "",
           "grid": "x".join(map(str, grid.shape)), "y_layers": ygrid.K}
    return cfg
