"""
Experiment suites behind the command line: each one runs a family of checks,
returns rows for report.csv, the asserted invariants, and the charts it drew.
"""
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from ..config import Config
from ..errors import EXIT_INVARIANT, EXIT_OK
from ..models import ExperimentConfig
from ..modules.domain import Domain, GridFunction, build_eigenbasis, build_grid, corpus_functions, make_corpus
from ..modules.estimates import (
    EstimateReport,
    check_hardy,
    check_hardy_profile,
    check_l1_theorem,
    check_theorem_1,
    check_truncation_identity,
    check_z_energy_balance,
    commutator,
    commutator_via_extension,
    default_ygrid,
    hardy_extremal_sweep,
    ratio_sweep,
    run_counterexample,
    solve_commutator_field,
)
from ..modules.estimates.lemmas import EMBED_PADDING
from ..modules.estimates.sweep import DRIFT_TOLERANCE, SweepResult
from ..modules.extension import (
    FIT_LAYERS,
    extend_poisson,
    extend_spectral,
    neumann_trace,
    theta_kernel,
    theta_kernel_bessel,
)
from ..modules.extension.solver import RESIDUAL_TOL
from ..modules.operators import fourier_frac_laplacian, l2_norm, spectral_frac_laplacian, sup_norm
from ..utils.logging_config import log_experiment_event
from .chart_service import ChartService
from .csv_report_service import CSVReportService, format_cell

logger = logging.getLogger(__name__)

RATIO_CEILING = 1e3
COVARIANCE_TOL = 1e-10
ES1_TOL = 1e-8
TRACE_RELATION_TOL = 0.05
L1_DRIFT_TOLERANCE = 0.15
EXTERIOR_SLACK = 0.02
TRUNCATION_GAP_TOL = 0.05
HARDY_CLOSED_FORM_TOL = 1e-3
EXTREMAL_TOL = 1e-6
CLOSED_FORM_TOL = 1e-4
BESSEL_TOL = 1e-6
TRACE_TOL = 1e-2
POISSON_TRACE_TOL = 2e-2
COMMUTATOR_TRACE_TOL = 3.0 * TRACE_TOL

HARDY_SIGMAS = (0.25, 0.5, 0.75)
HARDY_DELTAS = (0.2, 0.1, 0.05, 0.02, 0.01)
L1_ALPHAS = (0.2, 0.3, 0.4)
L1_BUMPS = (0, 1, 2, 5, 6)
EXTENSION_GRID_N = (128, 256, 512)
COUNTEREXAMPLE_ALPHA = 0.3


@dataclass
class ExperimentOutcome:
    rows: List[dict] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    charts: List[str] = field(default_factory=list)
    tables: List[str] = field(default_factory=list)
    inconclusive: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _relative_l2(approx: GridFunction, exact: GridFunction):
    diff = l2_norm(approx - exact)
    ref = l2_norm(exact)
    return diff, ref


def _oracle_report(name, diff, ref, config) -> EstimateReport:
    return EstimateReport(name=name, lhs=diff, rhs=ref, config=config)


# ---------------------------------------------------------------- sweeps

def _sweep_rows(result: SweepResult, experiment: str) -> List[dict]:
    rows = []
    for key, index, report in result.reports:
        rows.extend(CSVReportService.report_rows([report], experiment=experiment, level=key.level, pair=index))
    return rows


def _sweep_checks(result: SweepResult, outcome: ExperimentOutcome, levels):
    asserted = [(key, report) for key, _, report in result.reports if report.asserted]
    outcome.checks["ratios_finite"] = all(math.isfinite(r.ratio) for _, r in asserted)
    outcome.checks["ratio_ceiling"] = all(r.ratio <= RATIO_CEILING for _, r in asserted)
    asserted_kinds = {key.kind for key, _ in asserted}
    maxima = result.max_ratios()
    for key in sorted(maxima):
        beta = "" if key.beta < 0 else f" beta={key.beta:g}"
        outcome.notes.append(f"max ratio {key.check} {key.kind} alpha={key.alpha:g}{beta} n={key.level}: "
                             f"{format_cell(maxima[key])}")
    if len(levels) >= 2:
        drifts = {cell: d for cell, d in result.drifts().items() if cell[1] in asserted_kinds}
        for cell, drift in drifts.items():
            outcome.notes.append(f"drift {cell[0]} {cell[1]} alpha={cell[2]:g} beta={cell[3]:g}: {drift:.4f}")
        outcome.checks["refinement_drift"] = all(d < DRIFT_TOLERANCE for d in drifts.values())
    else:
        outcome.notes.append("single refinement level: drift not assessed")


def _sweep_chart(result: SweepResult, check: str, out_dir: str) -> Optional[str]:
    series: Dict[str, list] = {}
    for key, value in sorted(result.max_ratios().items()):
        if key.check != check:
            continue
        label = f"{key.kind} a={key.alpha:g}" + ("" if key.beta < 0 else f" b={key.beta:g}")
        series.setdefault(label, []).append((key.level, value))
    return ChartService.line_chart(series, f"{check}: max ratio under refinement", "n", "max ratio",
                                   out_dir, f"{check}_refinement.svg")


def _commutator_sweep(cfg: ExperimentConfig, defaults) -> ExperimentOutcome:
    domain = cfg.build_domain()
    alphas = cfg.alpha or list(defaults.ALPHAS)
    levels = cfg.grid_n or list(defaults.GRID_N)
    result = ratio_sweep(domain, alphas, cfg.beta, cfg.kinds, levels, cfg.corpus_size, cfg.seed,
                         checks=("theorem_1",), workers=cfg.workers, y_layers=cfg.y_layers)
    outcome = ExperimentOutcome(rows=_sweep_rows(result, cfg.experiment))
    _sweep_checks(result, outcome, levels)

    # both sides are 1-homogeneous in h and in g
    grid = build_grid(domain, min(levels))
    g, h = make_corpus(domain, grid, 1, cfg.seed)[0]
    kind = next((k for k in cfg.kinds if k in ("spectral", "fourier")), "fourier")
    basis = build_eigenbasis(domain, grid) if kind == "spectral" else None
    alpha = alphas[0]
    beta = cfg.beta[0] if cfg.beta else alpha / 2.0
    base = check_theorem_1(g, h, alpha, beta, kind=kind, basis=basis)
    for label, (gg, hh) in (("h", (g, 3.0 * h)), ("g", (3.0 * g, h))):
        scaled = check_theorem_1(gg, hh, alpha, beta, kind=kind, basis=basis)
        gap = abs(scaled.ratio - base.ratio) / max(base.ratio, 1e-300)
        outcome.checks[f"scaling_covariance_{label}"] = gap <= COVARIANCE_TOL
        outcome.notes.append(f"scaling {label} -> 3{label}: ratio gap {gap:.3e}")

    chart = _sweep_chart(result, "theorem_1", cfg.out)
    outcome.charts.extend([chart] if chart else [])
    return outcome


def _lemmas(cfg: ExperimentConfig, defaults) -> ExperimentOutcome:
    domain = cfg.build_domain()
    alphas = cfg.alpha or list(defaults.ALPHAS)
    levels = cfg.grid_n or list(defaults.GRID_N)
    kinds = [k for k in cfg.kinds if k in ("spectral", "fourier")] or ["spectral"]
    result = ratio_sweep(domain, alphas, cfg.beta, kinds, levels, cfg.corpus_size, cfg.seed,
                         checks=("es2", "es42", "es43"), workers=cfg.workers, y_layers=cfg.y_layers)
    outcome = ExperimentOutcome(rows=_sweep_rows(result, cfg.experiment))
    _sweep_checks(result, outcome, levels)

    es1 = [r.extras["es1_ratio"] for key, _, r in result.reports
           if key.check == "es2" and key.beta == key.alpha and "es1_ratio" in r.extras]
    if es1:
        outcome.checks["es1_equal_orders"] = all(abs(v - 1.0) <= ES1_TOL for v in es1)

    if "spectral" in kinds and domain.is_box and domain.kind != "ball":
        _z_problem_checks(cfg, domain, alphas, max(levels), outcome)

    for check in ("es2", "es42", "es43"):
        chart = _sweep_chart(result, check, cfg.out)
        outcome.charts.extend([chart] if chart else [])
    return outcome


def _z_problem_checks(cfg, domain: Domain, alphas, level: int, outcome: ExperimentOutcome):
    grid = build_grid(domain, level)
    basis = build_eigenbasis(domain, grid)
    g, h = make_corpus(domain, grid, 1, cfg.seed)[0]
    reports = []
    residuals, relations = [], []
    for alpha in alphas:
        ygrid = default_ygrid(grid, alpha, cfg.y_layers)
        balance = check_z_energy_balance(g, h, alpha, basis, ygrid)
        reports.append(balance)
        residuals.append(balance.extras["identity_residual"])
        relations.append(balance.extras["trace_relation_error"])
        z = solve_commutator_field(g, h, alpha, basis, ygrid).z
        for beta in (cfg.beta or [alpha / 2.0, alpha]):
            sigma = 2.0 * alpha - beta
            if beta > 0 and sigma < 1.0:
                reports.append(check_hardy_profile(z, sigma))
    outcome.rows.extend(CSVReportService.report_rows(reports, experiment=cfg.experiment, level=level, pair=0))
    outcome.checks["z_identity_residual"] = max(residuals) <= 10.0 * RESIDUAL_TOL
    outcome.checks["z_trace_relation"] = max(relations) <= TRACE_RELATION_TOL
    outcome.notes.append(f"Z identity residual max {max(residuals):.3e}; trace relation max {max(relations):.3e}")


# ---------------------------------------------------------------- hardy

def _hardy_profiles():
    """(label, w, w', leading power) for profiles with w(0) = 0."""
    return [
        ("y*exp(-y)", lambda y: y * np.exp(-y), lambda y: (1.0 - y) * np.exp(-y), 1.0),
        ("y^2*exp(-y)", lambda y: y * y * np.exp(-y), lambda y: y * (2.0 - y) * np.exp(-y), 2.0),
        ("sin(y)*exp(-y)", lambda y: np.sin(y) * np.exp(-y), lambda y: (np.cos(y) - np.sin(y)) * np.exp(-y), 1.0),
        ("y/(1+y)^3", lambda y: y / (1.0 + y) ** 3, lambda y: (1.0 - 2.0 * y) / (1.0 + y) ** 4, 1.0),
    ]


def _hardy(cfg: ExperimentConfig, defaults) -> ExperimentOutcome:
    reports = []
    closed = check_hardy(lambda y: y * np.exp(-y), 0.5, config={"profile": "y*exp(-y)", "derivative": "numeric"})
    reports.append(closed)
    for label, w, dw, power in _hardy_profiles():
        for sigma in HARDY_SIGMAS:
            reports.append(check_hardy(w, sigma, dw=dw, leading_power=power,
                                       config={"profile": label, "derivative": "exact"}))
    sweeps = {sigma: hardy_extremal_sweep(sigma, HARDY_DELTAS) for sigma in HARDY_SIGMAS}
    for sweep in sweeps.values():
        for report in sweep:
            report.config["profile"] = "y^(sigma+delta)*exp(-y)"
            reports.append(report)

    outcome = ExperimentOutcome(rows=CSVReportService.report_rows(reports, experiment=cfg.experiment))
    outcome.checks["hardy_holds"] = all(r.lhs >= r.rhs for r in reports)
    outcome.checks["closed_form_ratio"] = abs(closed.ratio - 2.0) <= HARDY_CLOSED_FORM_TOL
    outcome.checks["extremal_monotone"] = all(
        all(b.ratio < a.ratio for a, b in zip(sweep, sweep[1:])) for sweep in sweeps.values())
    outcome.checks["extremal_prediction"] = all(
        abs(r.ratio / r.extras["predicted_ratio"] - 1.0) <= EXTREMAL_TOL for sweep in sweeps.values() for r in sweep)
    outcome.notes.append(f"closed form y*exp(-y), sigma=0.5: lhs={closed.lhs:.10f} rhs={closed.rhs:.10f} "
                         f"ratio={closed.ratio:.10f}")
    for sigma, sweep in sweeps.items():
        outcome.notes.append(f"sigma={sigma:g} extremal ratios: " + ", ".join(f"{r.ratio:.6f}" for r in sweep))

    series = {f"sigma={sigma:g}": [(r.config["delta"], r.ratio - 1.0) for r in sweep]
              for sigma, sweep in sweeps.items()}
    chart = ChartService.line_chart(series, "Hardy quotient excess on the extremal family", "delta",
                                    "ratio - 1", cfg.out, "hardy_extremal.svg")
    outcome.charts.extend([chart] if chart else [])
    return outcome


# ---------------------------------------------------------------- appendix

def _counterexample(cfg: ExperimentConfig, defaults) -> ExperimentOutcome:
    alpha = (cfg.alpha or [COUNTEREXAMPLE_ALPHA])[0]
    n = (cfg.grid_n or [defaults.COUNTEREXAMPLE_NODES])[-1]
    result = run_counterexample(alpha, cfg.alpha0, cfg.alpha1, cfg.alpha2, cfg.eps_list, n)
    outcome = ExperimentOutcome(rows=CSVReportService.report_rows(result.reports(), experiment=cfg.experiment,
                                                                  level=n))
    outcome.checks.update(result.checks)
    outcome.inconclusive.extend(result.inconclusive)
    fit = result.seminorm_fit
    outcome.notes.append(f"seminorm fit: slope={fit.fitted_slope:.6f} intercept={fit.intercept:.6f} "
                         f"r2={fit.r2:.6f}{' (inconclusive)' if fit.inconclusive else ''}")
    outcome.notes.append(f"proven decay rate 1-2*alpha0 = {1.0 - 2.0 * cfg.alpha0:.4f}")
    outcome.notes.append("Hardy quotients G/W: " + ", ".join(f"{q:.6g}" for q in result.hardy_quotients))

    series = {
        "G (seminorm^2)": list(zip(result.epsilons, result.seminorm)),
        "W (weighted L2^2)": list(zip(result.epsilons, result.weighted)),
        "H (half-norm^2)": list(zip(result.epsilons, result.halfnorm)),
    }
    chart = ChartService.line_chart(series, f"Cutoff family on B_1, alpha={alpha:g}", "eps", "value",
                                    cfg.out, "counterexample_scaling.svg")
    outcome.charts.extend([chart] if chart else [])
    return outcome


def _l1_bumps(domain: Domain, grid, seed: int) -> List[GridFunction]:
    functions = corpus_functions(make_corpus(domain, grid, 4, seed))
    return [functions[i] for i in L1_BUMPS]


def _l1_theorem(cfg: ExperimentConfig, defaults) -> ExperimentOutcome:
    domain = cfg.build_domain()
    alphas = cfg.alpha or list(L1_ALPHAS)
    levels = sorted(cfg.grid_n or list(defaults.L1_GRID_N))
    outcome = ExperimentOutcome()
    maxima: Dict[tuple, Dict[int, float]] = {}
    exterior_ok, sign_ok = True, True
    for level in levels:
        grid = build_grid(domain, level)
        bumps = _l1_bumps(domain, grid, cfg.seed)
        for alpha in alphas:
            delta = cfg.delta_fraction * alpha
            for index, u in enumerate(bumps):
                report = check_l1_theorem(u, alpha, delta)
                outcome.rows.extend(CSVReportService.report_rows([report], experiment=cfg.experiment,
                                                                 level=level, pair=index))
                for name, value in (("z5", report.ratio), ("z4", report.extras["z4_ratio"])):
                    cell = maxima.setdefault((name, alpha), {})
                    cell[level] = max(cell.get(level, 0.0), value)
                exterior_ok &= report.extras["exterior_ratio"] <= 1.0 + EXTERIOR_SLACK
                if index == 0 and level == levels[0]:
                    flipped = check_l1_theorem(-u, alpha, delta)
                    sign_ok &= math.isclose(flipped.lhs, report.lhs, rel_tol=1e-12) and \
                        math.isclose(flipped.rhs, report.rhs, rel_tol=1e-12)

    outcome.checks["ratios_finite"] = all(math.isfinite(v) for cell in maxima.values() for v in cell.values())
    outcome.checks["exterior_bound"] = exterior_ok
    outcome.checks["sign_flip_invariance"] = sign_ok
    if len(levels) >= 2:
        drifts = {}
        for (name, alpha), cell in sorted(maxima.items()):
            coarse, fine = cell[levels[-2]], cell[levels[-1]]
            drifts[(name, alpha)] = abs(fine - coarse) / fine if fine > 0 else 0.0
            outcome.notes.append(f"{name} max ratio alpha={alpha:g}: n={levels[-2]} {format_cell(coarse)}, "
                                 f"n={levels[-1]} {format_cell(fine)}, drift {drifts[(name, alpha)]:.4f}")
        outcome.checks["refinement_drift"] = all(d < L1_DRIFT_TOLERANCE for d in drifts.values())

    grid = build_grid(domain, levels[-1])
    bump = _l1_bumps(domain, grid, cfg.seed)[2]
    identity = check_truncation_identity(bump, alphas[0], 0.5 * sup_norm(bump))
    outcome.rows.extend(CSVReportService.report_rows([identity], experiment=cfg.experiment, level=levels[-1]))
    outcome.checks["truncation_identity"] = identity.extras["relative_gap"] <= TRUNCATION_GAP_TOL
    outcome.notes.append(f"truncation identity relative gap {identity.extras['relative_gap']:.3e}")

    series = {f"{name} alpha={alpha:g}": sorted(cell.items()) for (name, alpha), cell in sorted(maxima.items())}
    chart = ChartService.line_chart(series, "L1 bound: max ratio under refinement", "n", "max ratio",
                                    cfg.out, "l1_refinement.svg")
    outcome.charts.extend([chart] if chart else [])
    return outcome


# ---------------------------------------------------------------- extension

def _extension_convergence(cfg: ExperimentConfig, defaults) -> ExperimentOutcome:
    outcome = ExperimentOutcome()
    reports = []
    levels = sorted(cfg.grid_n or list(EXTENSION_GRID_N))
    alphas = cfg.alpha or list(defaults.ALPHAS)

    # alpha = 1/2 on (0, pi): the extension of phi_1 is exp(-y) phi_1
    half_line = Domain.interval(0.0, np.pi)
    grid = build_grid(half_line, levels[-1])
    basis = build_eigenbasis(half_line, grid)
    ygrid = default_ygrid(grid, 0.5, cfg.y_layers)
    phi1 = basis.phi(1)
    field = extend_spectral(phi1, basis, 0.5, ygrid)
    exact = np.outer(phi1.values, np.exp(-ygrid.nodes))
    closed_error = float(np.max(np.abs(field.values - exact)))
    outcome.checks["closed_form_extension"] = closed_error <= CLOSED_FORM_TOL
    outcome.notes.append(f"extend_spectral(phi_1), alpha=1/2: max error {closed_error:.3e}")
    outcome.tables.append(CSVReportService.write_grid_function(phi1, cfg.out, "phi1.csv"))
    outcome.tables.append(CSVReportService.write_field(field, cfg.out, "extension_phi1.csv"))

    bessel_gap = 0.0
    for alpha in alphas:
        y = default_ygrid(grid, alpha, cfg.y_layers).nodes
        for lam in basis.lambdas[:8]:
            quad = theta_kernel(float(lam), y, alpha)
            bessel = theta_kernel_bessel(float(lam), y, alpha)
            bessel_gap = max(bessel_gap, float(np.max(np.abs(quad - bessel))))
    outcome.checks["theta_bessel_agreement"] = bessel_gap <= BESSEL_TOL
    outcome.notes.append(f"theta quadrature vs Bessel closed form: max gap {bessel_gap:.3e}")

    domain = cfg.build_domain()
    finest = {"spectral": 0.0, "poisson": 0.0, "commutator": 0.0}
    for level in levels:
        grid = build_grid(domain, level)
        basis = build_eigenbasis(domain, grid)
        pairs = make_corpus(domain, grid, min(cfg.corpus_size, 3), cfg.seed)
        for alpha in alphas:
            ygrid = default_ygrid(grid, alpha, cfg.y_layers)
            cfg_row = {"alpha": alpha, "level": level, "y_layers": ygrid.K}
            for index, (g, h) in enumerate(pairs):
                trace = neumann_trace(extend_spectral(g, basis, alpha, ygrid), alpha, g).trace
                diff, ref = _relative_l2(trace, spectral_frac_laplacian(g, basis, alpha))
                report = _oracle_report("spectral_trace", diff, ref, {**cfg_row, "pair": index})
                reports.append(report)
                if level == levels[-1]:
                    finest["spectral"] = max(finest["spectral"], report.ratio)

                via = commutator_via_extension(g, h, alpha, basis, ygrid)
                diff, ref = _relative_l2(via, commutator(g, h, "spectral", alpha, basis))
                report = _oracle_report("commutator_trace", diff, ref, {**cfg_row, "pair": index})
                reports.append(report)
                if level == levels[-1]:
                    finest["commutator"] = max(finest["commutator"], report.ratio)

            g = pairs[0][0]
            poisson = extend_poisson(g, alpha, ygrid, padding_factor=EMBED_PADDING)
            trace = neumann_trace(poisson, alpha, g).trace
            diff, ref = _relative_l2(trace, fourier_frac_laplacian(g, alpha, padding_factor=EMBED_PADDING))
            report = _oracle_report("poisson_trace", diff, ref, {**cfg_row, "pair": 0})
            reports.append(report)
            if level == levels[-1]:
                finest["poisson"] = max(finest["poisson"], report.ratio)

    outcome.checks["spectral_trace_oracle"] = finest["spectral"] <= TRACE_TOL
    outcome.checks["poisson_trace_oracle"] = finest["poisson"] <= POISSON_TRACE_TOL
    outcome.checks["commutator_trace_oracle"] = finest["commutator"] <= COMMUTATOR_TRACE_TOL
    outcome.notes.append("finest-level relative errors: " + ", ".join(f"{k}={v:.3e}" for k, v in finest.items()))

    # trace error against the number of y-layers on the finest grid
    grid = build_grid(domain, levels[-1])
    basis = build_eigenbasis(domain, grid)
    g = make_corpus(domain, grid, 1, cfg.seed)[0][0]
    outcome.tables.append(CSVReportService.write_grid(grid, cfg.out, "grid.csv"))
    series = {}
    for alpha in alphas:
        points = []
        coarse = default_ygrid(grid, alpha, max(cfg.y_layers // 4, FIT_LAYERS))
        for factor in (1, 2, 4):
            ygrid = coarse.refined(factor)
            trace = neumann_trace(extend_spectral(g, basis, alpha, ygrid), alpha, g).trace
            diff, ref = _relative_l2(trace, spectral_frac_laplacian(g, basis, alpha))
            points.append((ygrid.K, diff / ref if ref > 0 else 0.0))
        series[f"alpha={alpha:g}"] = points
    chart = ChartService.line_chart(series, "Spectral trace error against y-layers", "K", "relative L2 error",
                                    cfg.out, "extension_layers.svg")
    outcome.charts.extend([chart] if chart else [])
    outcome.rows = CSVReportService.report_rows(reports, experiment=cfg.experiment)
    return outcome


EXPERIMENT_RUNNERS: Dict[str, Callable] = {
    "commutator-sweep": _commutator_sweep,
    "lemmas": _lemmas,
    "hardy": _hardy,
    "counterexample": _counterexample,
    "l1-theorem": _l1_theorem,
    "extension-convergence": _extension_convergence,
}


class ExperimentService:
    """Run one experiment and write report.csv, summary.txt and its charts."""

    @staticmethod
    def write_summary(cfg: ExperimentConfig, outcome: ExperimentOutcome) -> str:
        os.makedirs(cfg.out, exist_ok=True)
        path = os.path.join(cfg.out, "summary.txt")
        lines = [f"experiment: {cfg.experiment}", f"rows: {len(outcome.rows)}", ""]
        lines.extend(outcome.notes)
        lines.append("")
        for name, ok in outcome.checks.items():
            lines.append(f"{'PASS' if ok else 'FAIL'} {name}")
        for name in outcome.inconclusive:
            lines.append(f"INCONCLUSIVE {name}")
        lines.append("")
        lines.append(f"result: {'PASS' if outcome.passed else 'FAIL'}")
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write("\n".join(lines) + "\n")
        return path

    @staticmethod
    def run(cfg: ExperimentConfig, defaults=Config) -> int:
        """
        Run the configured experiment.

        Returns:
            int: 0 when every asserted invariant holds, 2 otherwise
        """
        runner = EXPERIMENT_RUNNERS[cfg.experiment]
        log_experiment_event("START", {"experiment": cfg.experiment, "out": cfg.out})
        outcome = runner(cfg, defaults)
        CSVReportService.write_rows(outcome.rows, cfg.out)
        ExperimentService.write_summary(cfg, outcome)
        failed = [name for name, ok in outcome.checks.items() if not ok]
        log_experiment_event("FINISH", {"experiment": cfg.experiment, "rows": len(outcome.rows),
                                        "charts": len(outcome.charts), "tables": len(outcome.tables)},
                             success=not failed, error=", ".join(failed) or None)
        return EXIT_OK if outcome.passed else EXIT_INVARIANT
