"""
Extension-variable grids and fields on domain x (0, Y_max).
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ...errors import DomainError, GridMismatchError, ParameterError
from ..domain import GridFunction
from ..domain.models import Grid

DEFAULT_LAYERS = 200
DECAY_LENGTHS = 6.0


@dataclass(frozen=True)
class YGrid:
    """Graded nodes y_k = y_max (k/K)^gamma, k = 0..K."""

    y_max: float
    K: int = DEFAULT_LAYERS
    gamma: float = 1.0

    def __post_init__(self):
        if not self.y_max > 0:
            raise ParameterError(f"y_max={self.y_max} must be positive.")
        if int(self.K) < 2:
            raise ParameterError(f"Need at least 2 y-layers, got K={self.K}.")
        if self.gamma < 1.0:
            raise ParameterError(f"Grading gamma={self.gamma} must be >= 1.")

    @classmethod
    def for_order(cls, lambda_1: float, alpha: float, K: int = DEFAULT_LAYERS, gamma: Optional[float] = None):
        """Truncate at 6 decay lengths of the slowest mode; grade with max(2, 1/alpha)."""
        if not lambda_1 > 0:
            raise ParameterError(f"lambda_1={lambda_1} must be positive.")
        if gamma is None:
            gamma = max(2.0, 1.0 / alpha)
        return cls(y_max=DECAY_LENGTHS / np.sqrt(lambda_1), K=int(K), gamma=float(gamma))

    @property
    def nodes(self) -> np.ndarray:
        return self.y_max * (np.arange(self.K + 1) / self.K) ** self.gamma

    @property
    def midpoints(self) -> np.ndarray:
        """Control-volume edges: 0, (y_k + y_{k+1})/2 ..., y_max."""
        y = self.nodes
        return np.concatenate([[0.0], 0.5 * (y[1:] + y[:-1]), [y[-1]]])

    def refined(self, factor: int = 2) -> "YGrid":
        return YGrid(y_max=self.y_max, K=self.K * factor, gamma=self.gamma)


@dataclass(frozen=True, eq=False)
class ExtensionField:
    """
    Values of a field at every (x-node, y-layer) pair; shape (N, K + 1).

    `periodic` marks whole-space fields (no lateral Dirichlet condition).
    """

    xgrid: Grid
    ygrid: YGrid
    values: np.ndarray
    alpha: Optional[float] = None
    periodic: bool = False
    solver_residual: Optional[float] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        expected = (self.xgrid.size, self.ygrid.K + 1)
        if values.shape != expected:
            raise GridMismatchError(f"Field has shape {values.shape}, expected {expected}.")
        if not np.all(np.isfinite(values)):
            raise DomainError("Extension field values must be finite.")
        object.__setattr__(self, "values", values)

    def layer(self, k: int) -> GridFunction:
        return GridFunction(self.xgrid, self.values[:, k])

    @property
    def bottom(self) -> GridFunction:
        return self.layer(0)

    def with_values(self, values) -> "ExtensionField":
        return ExtensionField(self.xgrid, self.ygrid, values, alpha=self.alpha, periodic=self.periodic)

    def __sub__(self, other: "ExtensionField") -> "ExtensionField":
        _check_compatible(self, other)
        return self.with_values(self.values - other.values)

    def __add__(self, other: "ExtensionField") -> "ExtensionField":
        _check_compatible(self, other)
        return self.with_values(self.values + other.values)

    def __mul__(self, other):
        if isinstance(other, ExtensionField):
            _check_compatible(self, other)
            return self.with_values(self.values * other.values)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def rows(self):
        """(x..., y, value) tuples for CSV export."""
        y = self.ygrid.nodes
        for i, node in enumerate(self.xgrid.nodes):
            for k, yk in enumerate(y):
                yield (*node.tolist(), float(yk), float(self.values[i, k]))


def _check_compatible(a: ExtensionField, b: ExtensionField):
    if not a.xgrid.same_as(b.xgrid) or a.ygrid != b.ygrid:
        raise GridMismatchError("Extension fields live on different grids.")


@dataclass(frozen=True, eq=False)
class TraceResult:
    """Normalized Neumann trace plus the raw weighted flux and the fitted leading power."""

    trace: GridFunction
    raw_flux: GridFunction
    fit_exponent: float
    layers_used: int
