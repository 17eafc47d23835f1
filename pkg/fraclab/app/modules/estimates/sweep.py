"""
Ratio sweeps over corpus pairs, orders, operator kinds and refinement levels.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ...errors import ParameterError
from ...utils.validation import validate_fractional_order
from ..domain import Domain, build_eigenbasis, build_grid, make_corpus
from ..operators import as_kind
from .commutator import check_theorem_1
from .lemmas import check_es2, check_es42_es39, check_es43, default_ygrid
from .models import EstimateReport

logger = logging.getLogger(__name__)

SWEEP_CHECKS = ("theorem_1", "es2", "es42", "es43")
LEMMA_KINDS = ("spectral", "fourier")
DRIFT_TOLERANCE = 0.10


@dataclass(frozen=True, order=True)
class CellKey:
    """Aggregation key; beta is -1 for checks that do not depend on it."""

    check: str
    kind: str
    alpha: float
    beta: float
    level: int


@dataclass
class SweepResult:
    reports: List[Tuple[CellKey, int, EstimateReport]] = field(default_factory=list)

    def max_ratios(self) -> Dict[CellKey, float]:
        out: Dict[CellKey, float] = {}
        for key, _, report in self.reports:
            out[key] = max(out.get(key, 0.0), report.ratio)
        return out

    def drifts(self) -> Dict[Tuple[str, str, float, float], float]:
        """Relative change of the max ratio between the two finest levels, per (check, kind, alpha, beta)."""
        by_cell: Dict[Tuple[str, str, float, float], Dict[int, float]] = {}
        for key, value in self.max_ratios().items():
            by_cell.setdefault((key.check, key.kind, key.alpha, key.beta), {})[key.level] = value
        out = {}
        for cell, levels in sorted(by_cell.items()):
            if len(levels) < 2:
                continue
            coarse, fine = (levels[n] for n in sorted(levels)[-2:])
            out[cell] = abs(fine - coarse) / fine if fine > 0 else 0.0
        return out

    def unstable_cells(self, tolerance: float = DRIFT_TOLERANCE):
        return [cell for cell, drift in self.drifts().items() if drift >= tolerance]


def _betas(alpha: float, betas: Optional[Sequence[float]]) -> List[float]:
    if betas is None:
        return [alpha / 2.0, alpha]
    for beta in betas:
        valid, message = validate_fractional_order(alpha, beta)
        if not valid:
            raise ParameterError(message)
    return list(betas)


def _tasks(alphas, betas, kinds, checks) -> List[Tuple[str, str, float, float]]:
    tasks = []
    for kind in kinds:
        for alpha in alphas:
            for check in checks:
                if check != "theorem_1" and kind not in LEMMA_KINDS:
                    continue
                if check == "es42":
                    tasks.append((check, kind, alpha, -1.0))
                    continue
                tasks.extend((check, kind, alpha, beta) for beta in _betas(alpha, betas))
    return tasks


def _run_check(check, kind, alpha, beta, g, h, basis, y_layers):
    basis = basis if kind == "spectral" else None
    if check == "theorem_1":
        return check_theorem_1(g, h, alpha, beta, kind=kind, basis=basis)
    order = min(alpha, beta) if beta > 0 else alpha
    ygrid = default_ygrid(g.grid, order, y_layers)
    if check == "es2":
        return check_es2(h, alpha, beta, kind=kind, basis=basis, ygrid=ygrid)
    if check == "es42":
        return check_es42_es39(g, alpha, kind=kind, basis=basis, ygrid=ygrid)
    return check_es43(g, h, alpha, beta, kind=kind, basis=basis, ygrid=ygrid)


def ratio_sweep(domain: Domain, alphas: Sequence[float], betas: Optional[Sequence[float]] = None,
                kinds: Sequence[str] = LEMMA_KINDS, levels: Sequence[int] = (32, 64), corpus_size: int = 12,
                seed: int = 0, checks: Sequence[str] = SWEEP_CHECKS, workers: Optional[int] = None,
                y_layers: Optional[int] = None) -> SweepResult:
    """
    Run the commutator estimate and the sub-lemma checks over the cross product.

    betas defaults to (alpha/2, alpha) for each alpha. Sub-lemma checks only
    run for the spectral and fourier kinds. Cells run on a thread pool and
    are merged by sorted key, so the result does not depend on scheduling.
    """
    unknown = set(checks) - set(SWEEP_CHECKS)
    if unknown:
        raise ParameterError(f"Unknown sweep checks: {sorted(unknown)}.")
    kinds = [as_kind(k).tag for k in kinds]
    tasks = _tasks(alphas, betas, kinds, checks)

    jobs = []
    for level in sorted(levels):
        grid = build_grid(domain, level)
        pairs = make_corpus(domain, grid, corpus_size, seed)
        basis = build_eigenbasis(domain, grid) if "spectral" in kinds else None
        for check, kind, alpha, beta in tasks:
            for index, (g, h) in enumerate(pairs):
                key = CellKey(check, kind, alpha, beta, level)
                jobs.append((key, index, (check, kind, alpha, beta, g, h, basis, y_layers)))

    logger.info(f"Ratio sweep: {len(jobs)} cells on {len(levels)} level(s), workers={workers}")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [(key, index, pool.submit(_run_check, *args)) for key, index, args in jobs]
        merged = [(key, index, future.result()) for key, index, future in futures]
    merged.sort(key=lambda item: (item[0], item[1]))
    result = SweepResult(reports=merged)
    for cell in result.unstable_cells():
        logger.warning(f"Max ratio drifts by >= {DRIFT_TOLERANCE:.0%} between the finest levels: {cell}")
    return result
