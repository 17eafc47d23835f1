"""
Weighted energies of extension fields with exact power-law cell integrals in y.
"""
import logging

import numpy as np

from ...errors import IntegrabilityError, ParameterError
from .models import ExtensionField
from .solver import power_integral

logger = logging.getLogger(__name__)

BOTTOM_TOL = 1e-12


def _x_gradient_squares(field: ExtensionField) -> np.ndarray:
    """Sum over axes of squared face differences, zero extension past the walls; shape (N, K + 1)."""
    grid = field.xgrid
    shaped = field.values.reshape(grid.shape + (field.ygrid.K + 1,))
    total = np.zeros(shaped.shape)
    for axis, h in enumerate(grid.spacing):
        pad = [(0, 0)] * shaped.ndim
        pad[axis] = (1, 1)
        diffs = np.diff(np.pad(shaped, pad), axis=axis) / h
        # split each face between its two neighbouring nodes
        lo = [slice(None)] * shaped.ndim
        hi = [slice(None)] * shaped.ndim
        lo[axis] = slice(0, -1)
        hi[axis] = slice(1, None)
        total += 0.5 * (diffs[tuple(lo)] ** 2 + diffs[tuple(hi)] ** 2)
    return total.reshape(field.values.shape)


def _x_gradient(field: ExtensionField):
    """Central x-derivatives per axis, zero extension, shape (N, K + 1) each."""
    grid = field.xgrid
    shaped = field.values.reshape(grid.shape + (field.ygrid.K + 1,))
    out = []
    for axis, h in enumerate(grid.spacing):
        pad = [(0, 0)] * shaped.ndim
        pad[axis] = (1, 1)
        padded = np.pad(shaped, pad)
        fwd = [slice(None)] * shaped.ndim
        bwd = [slice(None)] * shaped.ndim
        fwd[axis] = slice(2, None)
        bwd[axis] = slice(0, -2)
        out.append(((padded[tuple(fwd)] - padded[tuple(bwd)]) / (2.0 * h)).reshape(field.values.shape))
    return out


def weighted_gradient_energy(field: ExtensionField, a: float) -> float:
    """
    int int y^a |grad field|^2 dx dy.

    The y-part uses the slope of each cell times the exact int y^a over the
    cell; the x-part uses face differences weighted by the dual measures.

    Raises:
        IntegrabilityError: a <= -1
    """
    y_part = np.dot(field.xgrid.weights, weighted_slope_profile(field, a))
    return float(y_part) + weighted_lateral_energy(field, a)


def weighted_lateral_energy(field: ExtensionField, a: float) -> float:
    """int int y^a |grad_x field|^2 dx dy with the dual measures of the y-grid."""
    if a <= -1.0:
        raise IntegrabilityError(f"Weight y^{a} is not integrable at y = 0.")
    edges = field.ygrid.midpoints
    duals = power_integral(edges[:-1], edges[1:], a)
    return float(np.dot(field.xgrid.weights, _x_gradient_squares(field) @ duals))


def weighted_slope_profile(field: ExtensionField, a: float) -> np.ndarray:
    """Per x-node int y^a |d_y field|^2 dy."""
    if a <= -1.0:
        raise IntegrabilityError(f"Weight y^{a} is not integrable at y = 0.")
    y = field.ygrid.nodes
    slopes = np.diff(field.values, axis=1) / np.diff(y)[None, :]
    return (slopes ** 2) @ power_integral(y[:-1], y[1:], a)


def weighted_sup_gradient(field: ExtensionField, a: float) -> float:
    """max over cells of (mean of y^a over the cell) * |grad field|."""
    if a <= -1.0:
        raise IntegrabilityError(f"Weight y^{a} has no finite cell mean at y = 0.")
    y = field.ygrid.nodes
    dy = np.diff(y)
    mean_weight = power_integral(y[:-1], y[1:], a) / dy
    slopes = np.diff(field.values, axis=1) / dy[None, :]
    grads = _x_gradient(field)
    lateral = sum(0.5 * (g[:, 1:] + g[:, :-1]) ** 2 for g in grads)
    magnitude = np.sqrt(slopes ** 2 + lateral)
    inside = field.xgrid.inside
    return float(np.max(mean_weight[None, :] * magnitude[inside], initial=0.0))


def weighted_field_l2(field: ExtensionField, a: float) -> float:
    """int int y^a field^2 dx dy."""
    return float(np.dot(field.xgrid.weights, weighted_field_profile(field, a)))


def weighted_field_profile(field: ExtensionField, a: float) -> np.ndarray:
    """
    Per x-node int y^a field^2 dy.

    Cells away from y = 0 integrate the linear interpolant exactly against
    y^a. For a <= -1 the field must vanish at y = 0 and the first cell uses
    field ~ field(y_1) (y / y_1)^{2 alpha}.

    Raises:
        IntegrabilityError: a <= -1 with non-zero bottom values, or no alpha on the field
    """
    y = field.ygrid.nodes
    z = field.values
    scale = max(1.0, float(np.max(np.abs(z))))
    singular = a <= -1.0
    if singular:
        if float(np.max(np.abs(z[:, 0]))) > BOTTOM_TOL * scale:
            raise IntegrabilityError(f"y^{a} |Z|^2 is only integrable when Z vanishes at y = 0.")
        if field.alpha is None:
            raise ParameterError("The first-cell model needs the extension order of the field.")

    lo, hi = y[:-1], y[1:]
    slope = (z[:, 1:] - z[:, :-1]) / (hi - lo)[None, :]
    c0 = z[:, :-1] - slope * lo[None, :]
    start = 1 if singular else 0
    m0 = power_integral(lo[start:], hi[start:], a)
    m1 = power_integral(lo[start:], hi[start:], a + 1.0)
    m2 = power_integral(lo[start:], hi[start:], a + 2.0)
    c0s, c1s = c0[:, start:], slope[:, start:]
    density = np.sum(c0s ** 2 * m0 + 2.0 * c0s * c1s * m1 + c1s ** 2 * m2, axis=1)
    if singular:
        power = 4.0 * field.alpha + a + 1.0
        if power <= 0:
            raise IntegrabilityError(f"y^{a} Z^2 with Z ~ y^(2 alpha) is not integrable at 0.")
        density = density + z[:, 1] ** 2 * y[1] ** (a + 1.0) / power
    return density
