"""
One entry point for the four operator flavors.
"""
import logging
from dataclasses import dataclass
from typing import Optional

from ...errors import DomainError, ParameterError
from ..domain import EigenBasis, GridFunction
from .fourier import DEFAULT_PADDING, fourier_frac_laplacian
from .kernels import regional_frac_laplacian, restricted_frac_laplacian
from .models import OperatorKind, as_kind
from .spectral import spectral_frac_laplacian

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FractionalOperator:
    """(-Delta)^alpha of a given kind, bound to its discretization data."""

    kind: OperatorKind
    alpha: float
    basis: Optional[EigenBasis] = None
    padding_factor: int = DEFAULT_PADDING

    @classmethod
    def of(cls, kind, alpha: float, basis: EigenBasis = None, padding_factor: int = DEFAULT_PADDING):
        kind = as_kind(kind)
        if kind.tag == "spectral" and basis is None:
            raise ParameterError("The spectral operator needs an eigenbasis.")
        return cls(kind=kind, alpha=alpha, basis=basis, padding_factor=padding_factor)

    def __call__(self, u: GridFunction) -> GridFunction:
        tag = self.kind.tag
        if self.kind.needs_bounded_domain and not u.grid.domain.measure > 0:
            raise DomainError(f"The {tag} operator needs a bounded domain.")
        if tag == "spectral":
            return spectral_frac_laplacian(u, self.basis, self.alpha)
        if tag == "restricted":
            return restricted_frac_laplacian(u, u.grid, self.alpha)
        if tag == "regional":
            return regional_frac_laplacian(u, u.grid, self.alpha)
        return fourier_frac_laplacian(u, self.alpha, self.padding_factor)
