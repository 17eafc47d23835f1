"""
Geometry and sampled-function types shared by every module.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ...errors import DomainError, GridMismatchError

DOMAIN_KINDS = ("interval", "rectangle", "ball")


@dataclass(frozen=True)
class Domain:
    """Bounded interval, rectangle, or ball (d = 1, 2)."""

    kind: str
    bounds: Tuple[Tuple[float, float], ...] = ()
    center: Tuple[float, ...] = ()
    radius: float = 0.0

    def __post_init__(self):
        if self.kind not in DOMAIN_KINDS:
            raise DomainError(f"Unknown domain kind '{self.kind}'.")
        if self.kind == "ball":
            if self.radius <= 0:
                raise DomainError("Ball radius must be positive.")
            if len(self.center) not in (1, 2):
                raise DomainError("Ball dimension must be 1 or 2.")
        else:
            expected = 1 if self.kind == "interval" else 2
            if len(self.bounds) != expected:
                raise DomainError(f"{self.kind} needs {expected} axis bound pair(s).")
            for a, b in self.bounds:
                if not a < b:
                    raise DomainError(f"Axis bounds must satisfy a < b, got ({a}, {b}).")

    @classmethod
    def interval(cls, a, b):
        return cls("interval", bounds=((float(a), float(b)),))

    @classmethod
    def rectangle(cls, x_bounds, y_bounds):
        return cls("rectangle", bounds=(tuple(map(float, x_bounds)), tuple(map(float, y_bounds))))

    @classmethod
    def ball(cls, center=(0.0,), radius=1.0):
        center = tuple(float(c) for c in np.atleast_1d(center))
        return cls("ball", center=center, radius=float(radius))

    @property
    def dimension(self) -> int:
        if self.kind == "ball":
            return len(self.center)
        return len(self.bounds)

    @property
    def box(self) -> Tuple[Tuple[float, float], ...]:
        """Axis-aligned bounding box."""
        if self.kind == "ball":
            return tuple((c - self.radius, c + self.radius) for c in self.center)
        return self.bounds

    @property
    def measure(self) -> float:
        if self.kind == "ball":
            if self.dimension == 1:
                return 2.0 * self.radius
            return np.pi * self.radius ** 2
        return float(np.prod([b - a for a, b in self.bounds]))

    @property
    def is_box(self) -> bool:
        """True when the domain coincides with its bounding box."""
        return self.kind != "ball" or self.dimension == 1

    def describe(self) -> str:
        if self.kind == "ball":
            return f"ball(center={self.center}, radius={self.radius})"
        return f"{self.kind}{self.bounds}"


@dataclass(frozen=True, eq=False)
class Grid:
    """
    Tensor-product midpoint grid over the bounding box of a domain.

    Nodes are stored flat in C order of `shape`; `weights` vanish at nodes that
    fall outside the domain (only possible for a 2D ball).
    """

    domain: Domain
    axes: Tuple[np.ndarray, ...]
    spacing: Tuple[float, ...]
    nodes: np.ndarray
    weights: np.ndarray
    inside: np.ndarray
    include_boundary: bool = False

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(len(axis) for axis in self.axes)

    @property
    def size(self) -> int:
        return int(self.nodes.shape[0])

    @property
    def dimension(self) -> int:
        return len(self.axes)

    @property
    def h(self) -> float:
        return float(max(self.spacing))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def reshape(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values).reshape(self.shape)

    def same_as(self, other: "Grid") -> bool:
        if self is other:
            return True
        return (self.domain == other.domain and self.shape == other.shape
                and np.allclose(self.nodes, other.nodes))

    def rows(self):
        """(x..., weight) per node."""
        for node, weight in zip(self.nodes, self.weights):
            yield (*node.tolist(), float(weight))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real values sampled at the nodes of a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if values.shape[0] != self.grid.size:
            raise GridMismatchError(
                f"Function has {values.shape[0]} values but grid has {self.grid.size} nodes.")
        if not np.all(np.isfinite(values)):
            raise DomainError("Grid function values must be finite.")
        object.__setattr__(self, "values", values)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.grid, values)

    def rows(self):
        """(x..., value) per node."""
        for node, value in zip(self.grid.nodes, self.values):
            yield (*node.tolist(), float(value))

    def __add__(self, other):
        return self.with_values(self.values + _values_of(other, self.grid))

    def __sub__(self, other):
        return self.with_values(self.values - _values_of(other, self.grid))

    def __mul__(self, other):
        return self.with_values(self.values * _values_of(other, self.grid))

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)


def _values_of(other, grid):
    if isinstance(other, GridFunction):
        if not other.grid.same_as(grid):
            raise GridMismatchError("Grid functions live on different grids.")
        return other.values
    return other


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """Truncated Dirichlet eigenpairs sampled on a grid."""

    grid: Grid
    lambdas: np.ndarray
    phis: np.ndarray
    # gradients[axis, j, node]
    gradients: np.ndarray
    modes: Tuple[Tuple[int, ...], ...] = field(default=())

    @property
    def J(self) -> int:
        return int(self.lambdas.shape[0])

    def phi(self, j: int) -> GridFunction:
        """Eigenfunction with 1-based index j."""
        return GridFunction(self.grid, self.phis[j - 1])


@dataclass(frozen=True)
class CutoffFamily:
    """Parameters of the smoothed cutoff u_eps on a ball."""

    epsilon: float
    radius: float = 1.0
    gradient_bound: Optional[float] = None
