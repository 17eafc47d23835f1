"""
Neumann trace extraction by fitting the known small-y expansion.
"""
import logging

import numpy as np

from ...errors import GridMismatchError, ResolutionError
from ..domain import GridFunction
from .kernels import extension_trace_constant
from .models import ExtensionField, TraceResult

logger = logging.getLogger(__name__)

FIT_LAYERS = 6
MIN_EXPONENT_GAP = 0.1


def fit_exponents(alpha: float):
    """Powers kept in the expansion field - data = c y^{2 alpha} + ...; leading power first."""
    powers = []
    for p in (2.0 * alpha, 4.0 * alpha, 2.0):
        if p <= 2.0 and all(abs(p - q) > MIN_EXPONENT_GAP for q in powers):
            powers.append(p)
    return powers


def neumann_trace(field: ExtensionField, alpha: float, bottom: GridFunction, layers: int = FIT_LAYERS) -> TraceResult:
    """
    Trace -lim y^{1-2 alpha} d_y field, normalized so that it reproduces the operator.

    Per node, field(x, y_k) - bottom(x) is least-squares fitted over the first
    `layers` off-zero layers; the raw flux is -2 alpha times the y^{2 alpha}
    coefficient and the trace divides it by kappa_alpha.

    Raises:
        ResolutionError: fewer than `layers` off-zero layers
    """
    if field.ygrid.K < layers:
        raise ResolutionError(f"Trace fit needs {layers} y-layers, the grid has {field.ygrid.K}.")
    if not bottom.grid.same_as(field.xgrid):
        raise GridMismatchError("Bottom data and field live on different grids.")
    y = field.ygrid.nodes[1:layers + 1]
    data = field.values[:, 1:layers + 1] - bottom.values[:, None]

    design = np.stack([y ** p for p in fit_exponents(alpha)], axis=1)
    coeffs, *_ = np.linalg.lstsq(design, data.T, rcond=None)
    raw = -2.0 * alpha * coeffs[0]

    trace = raw / extension_trace_constant(alpha)
    return TraceResult(trace=GridFunction(field.xgrid, trace), raw_flux=GridFunction(field.xgrid, raw),
                       fit_exponent=_leading_power(y, data), layers_used=layers)


def _leading_power(y: np.ndarray, data: np.ndarray) -> float:
    """Median slope of log|field - data| against log y over nodes with a visible signal."""
    magnitude = np.abs(data)
    scale = float(np.max(magnitude, initial=0.0))
    if scale == 0.0:
        return float("nan")
    usable = np.all(magnitude > 1e-8 * scale, axis=1)
    if not usable.any():
        return float("nan")
    log_y = np.log(y)
    centered = log_y - log_y.mean()
    logs = np.log(magnitude[usable])
    slopes = (logs - logs.mean(axis=1, keepdims=True)) @ centered / np.dot(centered, centered)
    return float(np.median(slopes))


def first_layer_ratio(field: ExtensionField, power: float) -> GridFunction:
    """(field(x, y_1) - field(x, 0)) / y_1^power, the direct estimate of lim y^{-power} (field - data)."""
    y1 = field.ygrid.nodes[1]
    return GridFunction(field.xgrid, (field.values[:, 1] - field.values[:, 0]) / y1 ** power)
