"""
Report types for estimate checks and scaling studies.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
from scipy import stats

from ...errors import ParameterError

logger = logging.getLogger(__name__)

FIT_R2_THRESHOLD = 0.95
MIN_FIT_SAMPLES = 4

# Flags attached to reports whose inequality is not a proven statement.
CONJECTURAL = "conjectural"
NO_ESTIMATE = "no estimate proven"
INCONCLUSIVE = "inconclusive"
REPORTED_ONLY = "reported only"


@dataclass
class EstimateReport:
    """
    One instance of an inequality lhs <= C * rhs.

    rhs_factors holds the named norms that make up rhs; extras holds
    intermediate quantities of the proof that are reported alongside.
    """

    name: str
    lhs: float
    rhs: float
    rhs_factors: Dict[str, float] = field(default_factory=dict)
    config: Dict[str, object] = field(default_factory=dict)
    extras: Dict[str, float] = field(default_factory=dict)
    flags: Tuple[str, ...] = ()

    def __post_init__(self):
        for label, value in [("lhs", self.lhs), ("rhs", self.rhs), *self.rhs_factors.items()]:
            if not math.isfinite(value) or value < 0:
                raise ParameterError(f"Report '{self.name}': {label}={value} must be finite and >= 0.")
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)

    @property
    def ratio(self) -> float:
        if self.lhs == 0.0:
            return 0.0
        if self.rhs == 0.0:
            return math.inf
        return self.lhs / self.rhs

    @property
    def asserted(self) -> bool:
        return not ({CONJECTURAL, NO_ESTIMATE, REPORTED_ONLY} & set(self.flags))

    def to_row(self) -> Dict[str, object]:
        """Flat mapping used by the CSV emitter: config columns, lhs, factors, rhs, ratio, extras."""
        row: Dict[str, object] = {"check": self.name}
        row.update(self.config)
        row["lhs"] = self.lhs
        row.update({f"rhs.{k}": v for k, v in self.rhs_factors.items()})
        row["rhs"] = self.rhs
        row["ratio"] = self.ratio
        row.update({f"extra.{k}": v for k, v in self.extras.items()})
        row["flags"] = ";".join(self.flags)
        return row


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares line through (log eps, log value)."""

    samples: Tuple[Tuple[float, float], ...]
    fitted_slope: float
    intercept: float
    r2: float

    @classmethod
    def fit(cls, samples: List[Tuple[float, float]]) -> "ScalingFit":
        if len(samples) < MIN_FIT_SAMPLES:
            raise ParameterError(f"A scaling fit needs at least {MIN_FIT_SAMPLES} samples, got {len(samples)}.")
        eps = np.array([s[0] for s in samples], dtype=float)
        values = np.array([s[1] for s in samples], dtype=float)
        if np.any(eps <= 0) or np.any(values <= 0):
            raise ParameterError("Scaling fits need positive samples.")
        result = stats.linregress(np.log(eps), np.log(values))
        r2 = float(min(max(result.rvalue ** 2, 0.0), 1.0))
        fit = cls(samples=tuple((float(e), float(v)) for e, v in samples),
                  fitted_slope=float(result.slope), intercept=float(result.intercept), r2=r2)
        if fit.inconclusive:
            logger.warning(f"Scaling fit inconclusive: slope={fit.fitted_slope:.4f}, r2={r2:.3f}")
        return fit

    @property
    def inconclusive(self) -> bool:
        return self.r2 < FIT_R2_THRESHOLD
