"""
Parameter validation helpers.

Each helper returns (is_valid, error_message) so that callers can either raise
or collect messages, as the config schema does.
"""
import math
from typing import Any, Iterable, Optional


def _is_number(value: Any) -> bool:
    try:
        return math.isfinite(float(value))
    except (TypeError, ValueError):
        return False


def validate_fractional_order(alpha: Any, beta: Optional[Any] = None) -> tuple[bool, str]:
    """
    Validate 0 < alpha < 1 and, when given, 0 <= beta <= alpha.

    Args:
        alpha: Order of the operator
        beta: Optional lower order (beta = 0 is allowed)

    Returns:
        tuple: (is_valid, error_message)
    """
    if not _is_number(alpha):
        return False, f"alpha must be a finite number, got {alpha!r}."
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        return False, f"alpha={alpha} must satisfy 0 < alpha < 1."
    if beta is None:
        return True, ""
    if not _is_number(beta):
        return False, f"beta must be a finite number, got {beta!r}."
    beta = float(beta)
    if beta < 0.0:
        return False, f"beta={beta} must satisfy beta >= 0."
    if beta > alpha:
        return False, f"beta={beta} > alpha={alpha} violates the ordering 0 <= beta <= alpha."
    return True, ""


def validate_unit_interval(value: Any, field_name: str, upper: float = 1.0) -> tuple[bool, str]:
    """Validate 0 < value < upper."""
    if not _is_number(value):
        return False, f"{field_name} must be a finite number."
    if not 0.0 < float(value) < upper:
        return False, f"{field_name}={value} must lie in (0, {upper})."
    return True, ""


def validate_counterexample_orders(alpha, alpha0, alpha1, alpha2) -> tuple[bool, str]:
    """
    Validate 0 < alpha < alpha0 < 1/2 and alpha < alpha1 < alpha2 < 1/2.

    Returns:
        tuple: (is_valid, error_message)
    """
    for name, value in (("alpha", alpha), ("alpha0", alpha0), ("alpha1", alpha1), ("alpha2", alpha2)):
        ok, message = validate_unit_interval(value, name, upper=0.5)
        if not ok:
            return False, message
    if not alpha < alpha0:
        return False, f"alpha={alpha} must be smaller than alpha0={alpha0}."
    if not alpha < alpha1 < alpha2:
        return False, f"Need alpha < alpha1 < alpha2, got {alpha}, {alpha1}, {alpha2}."
    return True, ""


def validate_epsilon_list(eps_list: Iterable[Any], minimum_count: int = 4) -> tuple[bool, str]:
    """Validate at least `minimum_count` cutoff widths, each in (0, 1/10)."""
    values = list(eps_list)
    if len(values) < minimum_count:
        return False, f"Need at least {minimum_count} eps values, got {len(values)}."
    for value in values:
        ok, message = validate_unit_interval(value, "eps", upper=0.1)
        if not ok:
            return False, message
    if len(set(float(v) for v in values)) != len(values):
        return False, "eps values must be distinct."
    return True, ""


def validate_domain_string(text: str) -> tuple[bool, str]:
    """
    Validate a domain string: 'interval:a,b', 'rectangle:a1,b1,a2,b2' or 'ball:radius,dim'.
    """
    if not text or ":" not in text:
        return False, f"Domain {text!r} must look like 'interval:a,b'."
    kind, _, rest = text.partition(":")
    parts = [p.strip() for p in rest.split(",") if p.strip()]
    if not all(_is_number(p) for p in parts):
        return False, f"Domain {text!r} has non-numeric entries."
    expected = {"interval": 2, "rectangle": 4, "ball": 2}
    if kind not in expected:
        return False, f"Unknown domain kind {kind!r}."
    if len(parts) != expected[kind]:
        return False, f"Domain kind {kind!r} takes {expected[kind]} numbers."
    values = [float(p) for p in parts]
    if kind == "ball":
        if values[0] <= 0 or values[1] not in (1.0, 2.0):
            return False, "Ball needs a positive radius and dimension 1 or 2."
    else:
        for a, b in zip(values[::2], values[1::2]):
            if not a < b:
                return False, f"Axis bounds ({a}, {b}) must satisfy a < b."
    return True, ""
