"""
Weighted Hardy inequality on the half line:

    int_0^inf y^{1-2 sigma} |w'|^2 dy >= sigma^2 int_0^inf y^{-1-2 sigma} |w|^2 dy,   w(0) = 0.
"""
import logging
import math
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy import integrate

from ...errors import IntegrabilityError, ParameterError
from ..extension import ExtensionField, weighted_field_profile, weighted_slope_profile
from .models import REPORTED_ONLY, EstimateReport

logger = logging.getLogger(__name__)

ORIGIN_TOL = 1e-12
SMALLEST_Y = 1e-12
STEP_FRACTION = 1e-5
QUAD_LIMIT = 200
PROFILE_FLOOR = 1e-14


def _validate_sigma(sigma: float):
    if not 0.0 < sigma < 1.0:
        raise ParameterError(f"sigma={sigma} must lie in (0, 1).")


def _derivative(w: Callable) -> Callable:
    def dw(y):
        step = STEP_FRACTION * y
        return (w(y + step) - w(y - step)) / (2.0 * step)
    return dw


def _half_line(integrand_near, integrand_far, exponent: float, y_max: float) -> float:
    """int_0^{y_max} y^exponent * integrand_near(y) on [0, 1] plus integrand_far beyond."""
    split = min(1.0, y_max)
    near, _ = integrate.quad(lambda y: integrand_near(max(y, SMALLEST_Y)), 0.0, split,
                             weight="alg", wvar=(exponent, 0.0), limit=QUAD_LIMIT)
    far = 0.0
    if y_max > 1.0:
        far, _ = integrate.quad(integrand_far, 1.0, y_max, limit=QUAD_LIMIT)
    return near + far


def check_hardy(w: Callable, sigma: float, dw: Optional[Callable] = None, y_max: float = math.inf,
                leading_power: float = 1.0, config: dict = None) -> EstimateReport:
    """
    Evaluate both sides of the Hardy inequality for a profile w.

    w ~ y^leading_power near 0; the singular factor y^{2p - 1 - 2 sigma} is
    handed to the algebraic-weight quadrature and the smooth quotients
    w / y^p, w' / y^{p-1} are integrated against it.

    Args:
        w: Callable on (0, y_max) with w(0) = 0
        sigma: Exponent in (0, 1)
        dw: Derivative of w, central differences when omitted
        y_max: Upper end of the half line
        leading_power: p with w(y) ~ y^p at 0

    Returns:
        EstimateReport: lhs = int y^{1-2 sigma} |w'|^2, rhs = sigma^2 int y^{-1-2 sigma} |w|^2

    Raises:
        IntegrabilityError: w(0) != 0 or leading_power <= sigma
    """
    _validate_sigma(sigma)
    if abs(float(w(0.0))) > ORIGIN_TOL:
        raise IntegrabilityError(f"Hardy profiles must vanish at 0, got w(0)={float(w(0.0))}.")
    p = leading_power
    if p <= sigma:
        raise IntegrabilityError(f"w ~ y^{p} makes y^(-1-2 sigma) w^2 non-integrable for sigma={sigma}.")
    dw = dw or _derivative(w)
    exponent = 2.0 * p - 1.0 - 2.0 * sigma

    lhs = _half_line(lambda y: (dw(y) / y ** (p - 1.0)) ** 2,
                     lambda y: y ** (1.0 - 2.0 * sigma) * dw(y) ** 2, exponent, y_max)
    weighted = _half_line(lambda y: (w(y) / y ** p) ** 2,
                          lambda y: y ** (-1.0 - 2.0 * sigma) * w(y) ** 2, exponent, y_max)
    rhs = sigma ** 2 * weighted
    cfg = {"sigma": sigma, "leading_power": p, "y_max": y_max}
    cfg.update(config or {})
    report = EstimateReport(name="hardy", lhs=max(lhs, 0.0), rhs=max(rhs, 0.0),
                            rhs_factors={"weighted_l2_sq": max(weighted, 0.0)}, config=cfg,
                            extras={"margin": lhs - rhs})
    if lhs < rhs:
        logger.warning(f"Hardy inequality violated: lhs={lhs:.6g} < rhs={rhs:.6g} (sigma={sigma})")
    return report


def extremal_ratio(sigma: float, delta: float) -> float:
    """lhs/rhs for w = y^{sigma + delta} e^{-y}; tends to 1 as delta -> 0."""
    return 1.0 + delta / (2.0 * sigma ** 2)


def hardy_extremal_sweep(sigma: float, deltas: Sequence[float]) -> List[EstimateReport]:
    """Reports for the near-extremal family y^{sigma + delta} e^{-y} with the predicted ratio as an extra."""
    _validate_sigma(sigma)
    reports = []
    for delta in sorted(deltas, reverse=True):
        if delta <= 0:
            raise ParameterError(f"delta={delta} must be positive.")
        q = sigma + delta
        report = check_hardy(lambda y, q=q: y ** q * np.exp(-y), sigma,
                             dw=lambda y, q=q: y ** (q - 1.0) * (q - y) * np.exp(-y),
                             leading_power=q, config={"delta": delta})
        report.extras["predicted_ratio"] = extremal_ratio(sigma, delta)
        reports.append(report)
    return reports


def check_hardy_profile(z: ExtensionField, sigma: float) -> EstimateReport:
    """
    Hardy inequality along y for every x-node of a solved field.

    Piecewise-linear in y with the first cell modelled as y^{2 alpha}; the
    discrete profiles are not exact Hardy pairs, so the report is not asserted.
    """
    _validate_sigma(sigma)
    grad = weighted_slope_profile(z, 1.0 - 2.0 * sigma)
    field = sigma ** 2 * weighted_field_profile(z, -1.0 - 2.0 * sigma)
    w = z.xgrid.weights
    active = field > PROFILE_FLOOR * max(1.0, float(np.max(field, initial=0.0)))
    worst = float(np.min(grad[active] / field[active])) if np.any(active) else 0.0
    return EstimateReport(name="hardy_profile", lhs=float(np.dot(w, grad)), rhs=float(np.dot(w, field)),
                          config={"sigma": sigma, "alpha": z.alpha},
                          extras={"min_node_ratio": worst, "nodes": int(np.count_nonzero(active))},
                          flags=(REPORTED_ONLY,))
