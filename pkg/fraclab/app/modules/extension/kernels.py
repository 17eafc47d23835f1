"""
Subordination kernel theta_alpha(lambda, y) and the whole-space Poisson kernel.

theta_alpha(lambda, y) = y^{2 alpha} / (4^alpha Gamma(alpha))
                         * int_0^inf exp(-y^2/(4t)) exp(-lambda t) t^{-1-alpha} dt

is evaluated with a trapezoid rule in s = ln t; the truncation of the t-range
is verified by checking that the integrand has decayed at both ends.
"""
import logging
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import gamma, gammaln, kv

from ...errors import AccuracyError, ParameterError

logger = logging.getLogger(__name__)

LOG_NODES = 1024
DECAY_EXPONENT = 50.0
ENDPOINT_TOL = 1e-10


def _check_order(alpha):
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha={alpha} must lie in (0, 1).")


def _log_t_nodes(lam: float, y: np.ndarray):
    """Per-y log-spaced t nodes spanning the support of the integrand; shape (len(y), LOG_NODES)."""
    reach = DECAY_EXPONENT + np.sqrt(lam) * y
    t_lo = np.minimum(1e-8 / lam, y * y / (4.0 * reach))
    t_hi = reach / lam
    s = np.linspace(0.0, 1.0, LOG_NODES)
    log_lo, log_hi = np.log(t_lo), np.log(t_hi)
    return log_lo[:, None] + (log_hi - log_lo)[:, None] * s[None, :], (log_hi - log_lo) / (LOG_NODES - 1)


def _theta_integrals(lam: float, y: np.ndarray, alpha: float, with_derivative: bool):
    """theta (and d theta / dy) for y > 0."""
    log_t, ds = _log_t_nodes(lam, y)
    t = np.exp(log_t)
    yy = y[:, None]
    # integrand in s = ln t, including the Jacobian t
    log_g = -yy * yy / (4.0 * t) - lam * t - alpha * log_t
    peak = np.max(log_g, axis=1, keepdims=True)
    g = np.exp(log_g - peak)
    ends = np.maximum(g[:, 0], g[:, -1])
    if np.any(ends > ENDPOINT_TOL):
        worst = int(np.argmax(ends))
        raise AccuracyError(
            f"theta quadrature did not decay at the endpoints (lambda={lam}, y={y[worst]:.3e}, "
            f"ratio={ends[worst]:.2e}).")
    weights = np.full(LOG_NODES, 1.0)
    weights[0] = weights[-1] = 0.5
    base = np.sum(g * weights, axis=1) * ds
    log_pref = 2.0 * alpha * np.log(y) - alpha * np.log(4.0) - gammaln(alpha) + peak[:, 0]
    theta = np.exp(log_pref) * base
    if not with_derivative:
        return theta, None
    moment = np.sum(g * weights * (-yy / (2.0 * t)), axis=1) * ds
    dtheta = 2.0 * alpha / y * theta + np.exp(log_pref) * moment
    return theta, dtheta


def theta_kernel(lam: float, y, alpha: float):
    """
    theta_alpha(lambda, y) for scalar or array y >= 0.

    Raises:
        AccuracyError: if the truncated t-range misses integrand mass
    """
    _check_order(alpha)
    if lam < 0:
        raise ParameterError(f"lambda={lam} must be non-negative.")
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y_arr < 0):
        raise ParameterError("theta_kernel needs y >= 0.")
    out = np.ones_like(y_arr)
    positive = y_arr > 0
    if lam > 0 and positive.any():
        out[positive], _ = _theta_integrals(float(lam), y_arr[positive], alpha, with_derivative=False)
    return out if np.ndim(y) else float(out[0])


def theta_kernel_dy(lam: float, y, alpha: float):
    """d theta_alpha / dy for y > 0 (singular like y^{2 alpha - 1} at 0)."""
    _check_order(alpha)
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y_arr <= 0):
        raise ParameterError("theta_kernel_dy needs y > 0.")
    if lam == 0:
        out = np.zeros_like(y_arr)
    else:
        _, out = _theta_integrals(float(lam), y_arr, alpha, with_derivative=True)
    return out if np.ndim(y) else float(out[0])


def theta_kernel_bessel(lam: float, y, alpha: float):
    """Closed form (2/Gamma(alpha)) (sqrt(lambda) y / 2)^alpha K_alpha(sqrt(lambda) y)."""
    _check_order(alpha)
    z = np.sqrt(lam) * np.atleast_1d(np.asarray(y, dtype=float))
    out = np.ones_like(z)
    positive = z > 0
    zp = z[positive]
    with np.errstate(over="ignore", invalid="ignore"):
        vals = 2.0 / gamma(alpha) * (0.5 * zp) ** alpha * kv(alpha, zp)
    out[positive] = np.nan_to_num(vals, nan=0.0, posinf=0.0)
    return out if np.ndim(y) else float(out[0])


@lru_cache(maxsize=64)
def theta_table(lambdas: tuple, y_nodes: tuple, alpha: float, with_derivative: bool = False):
    """theta (and d theta / dy at y > 0) for every (lambda_j, y_k); arrays of shape (J, K + 1)."""
    y = np.asarray(y_nodes)
    table = np.ones((len(lambdas), len(y)))
    dtable = np.zeros_like(table)
    positive = y > 0
    for j, lam in enumerate(lambdas):
        theta, dtheta = _theta_integrals(float(lam), y[positive], alpha, with_derivative)
        table[j, positive] = theta
        if with_derivative:
            dtable[j, positive] = dtheta
    return table, dtable


def extension_trace_constant(alpha: float) -> float:
    """kappa_alpha = 2^{1-2 alpha} Gamma(1-alpha)/Gamma(alpha) = -lim y^{1-2 alpha} theta_y / lambda^alpha."""
    _check_order(alpha)
    return float(2.0 ** (1.0 - 2.0 * alpha) * gamma(1.0 - alpha) / gamma(alpha))


def poisson_kernel_constant(d: int, alpha: float) -> float:
    """c_{d,alpha} = Gamma((d + 2 alpha)/2) / (pi^{d/2} Gamma(alpha)), unit mass for every y."""
    _check_order(alpha)
    return float(gamma((d + 2.0 * alpha) / 2.0) / (np.pi ** (d / 2.0) * gamma(alpha)))


def poisson_kernel(x_norm, y: float, d: int, alpha: float):
    """P_alpha(x, y) = c y^{2 alpha} / (|x|^2 + y^2)^{(d + 2 alpha)/2}."""
    c = poisson_kernel_constant(d, alpha)
    x_norm = np.asarray(x_norm, dtype=float)
    return c * y ** (2.0 * alpha) / (x_norm ** 2 + y * y) ** ((d + 2.0 * alpha) / 2.0)


def poisson_kernel_mass(radius: float, y: float, d: int, alpha: float) -> float:
    """Mass of P_alpha(., y) inside |x| <= radius (radius = inf gives 1)."""
    if y <= 0:
        return 1.0
    c = poisson_kernel_constant(d, alpha)
    sphere = 2.0 if d == 1 else 2.0 * np.pi
    upper = np.inf if np.isinf(radius) else radius / y
    value, _ = integrate.quad(lambda u: u ** (d - 1) * (1.0 + u * u) ** (-(d + 2.0 * alpha) / 2.0), 0.0, upper,
                              limit=200)
    return float(sphere * c * value)
