"""
Operator taxonomy and fractional order parameters.
"""
from dataclasses import dataclass
from typing import Optional

from ...errors import ParameterError
from ...utils.validation import validate_fractional_order

OPERATOR_KINDS = ("spectral", "restricted", "regional", "fourier")
BOUNDED_KINDS = ("spectral", "regional")


@dataclass(frozen=True)
class OperatorKind:
    tag: str

    def __post_init__(self):
        if self.tag not in OPERATOR_KINDS:
            raise ParameterError(f"Unknown operator kind '{self.tag}'; expected one of {OPERATOR_KINDS}.")

    @property
    def needs_bounded_domain(self) -> bool:
        return self.tag in BOUNDED_KINDS

    def __str__(self):
        return self.tag


@dataclass(frozen=True)
class FracOrder:
    alpha: float
    beta: Optional[float] = None

    def __post_init__(self):
        ok, message = validate_fractional_order(self.alpha, self.beta)
        if not ok:
            raise ParameterError(message)


def as_kind(kind) -> OperatorKind:
    return kind if isinstance(kind, OperatorKind) else OperatorKind(str(kind))
