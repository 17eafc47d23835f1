import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fraclab.app.errors import IntegrabilityError, ParameterError
from fraclab.app.modules.domain import Domain, GridFunction, build_grid, interior_bump, make_corpus
from fraclab.app.modules.estimates import (
    CONJECTURAL,
    INCONCLUSIVE,
    REPORTED_ONLY,
    CellKey,
    CounterexampleResult,
    EstimateReport,
    ScalingFit,
    check_es2,
    check_es42_es39,
    check_es43,
    check_hardy,
    check_l1_theorem,
    check_theorem_1,
    check_truncation_identity,
    check_z_energy_balance,
    commutator,
    commutator_via_extension,
    default_ygrid,
    extremal_ratio,
    hardy_extremal_sweep,
    ratio_sweep,
    run_counterexample,
    slope_verdict,
    truncation,
)
from fraclab.app.modules.operators import l2_norm


@pytest.fixture
def bump_512():
    domain = Domain.interval(-1.0, 1.0)
    grid = build_grid(domain, 512)
    return GridFunction(grid, interior_bump(domain, grid))


def test_report_ratio_conventions():
    assert EstimateReport("x", lhs=0.0, rhs=0.0).ratio == 0.0
    assert math.isinf(EstimateReport("x", lhs=1.0, rhs=0.0).ratio)
    assert EstimateReport("x", lhs=3.0, rhs=2.0).ratio == pytest.approx(1.5)
    assert not EstimateReport("x", lhs=1.0, rhs=1.0, flags=(CONJECTURAL,)).asserted
    assert not EstimateReport("x", lhs=1.0, rhs=1.0, flags=(REPORTED_ONLY,)).asserted
    with pytest.raises(ParameterError):
        EstimateReport("x", lhs=-1.0, rhs=1.0)
    with pytest.raises(ParameterError):
        EstimateReport("x", lhs=1.0, rhs=float("nan"))


def test_report_row_layout():
    row = EstimateReport("es2", lhs=2.0, rhs=4.0, rhs_factors={"sobolev_h_sq": 4.0},
                         config={"alpha": 0.5}, extras={"es1_ratio": 1.0}).to_row()
    assert list(row) == ["check", "alpha", "lhs", "rhs.sobolev_h_sq", "rhs", "ratio", "extra.es1_ratio", "flags"]
    assert row["ratio"] == 0.5


@given(st.floats(min_value=-2.0, max_value=2.0), st.floats(min_value=0.1, max_value=10.0))
def test_scaling_fit_recovers_power_law(slope, scale):
    eps = [0.08, 0.04, 0.02, 0.01]
    fit = ScalingFit.fit([(e, scale * e ** slope) for e in eps])
    assert fit.fitted_slope == pytest.approx(slope, abs=1e-9)
    assert not fit.inconclusive or abs(slope) < 1e-6


def test_scaling_fit_needs_four_samples():
    with pytest.raises(ParameterError):
        ScalingFit.fit([(0.1, 1.0), (0.05, 2.0), (0.02, 3.0)])


@pytest.mark.parametrize("kind", ["spectral", "fourier"])
def test_theorem_1_ratio_is_scale_invariant(interval, interval_grid, interval_basis, kind):
    g, h = make_corpus(interval, interval_grid, 3, seed=0)[2]
    basis = interval_basis if kind == "spectral" else None
    base = check_theorem_1(g, h, 0.5, 0.25, kind=kind, basis=basis)
    assert math.isfinite(base.ratio) and base.ratio > 0
    for gg, hh in ((g, 3.0 * h), (3.0 * g, h)):
        scaled = check_theorem_1(gg, hh, 0.5, 0.25, kind=kind, basis=basis)
        assert scaled.ratio == pytest.approx(base.ratio, rel=1e-10)


def test_theorem_1_rejects_bad_orders(interval_basis, corpus_pair):
    g, h = corpus_pair
    with pytest.raises(ParameterError):
        check_theorem_1(g, h, 0.4, 0.6, basis=interval_basis)
    with pytest.raises(ParameterError):
        check_theorem_1(g, h, 1.2, 0.1, basis=interval_basis)


def test_kernel_kinds_are_flagged(corpus_pair):
    g, h = corpus_pair
    report = check_theorem_1(g, h, 0.4, 0.2, kind="restricted")
    assert not report.asserted
    assert check_theorem_1(g, h, 0.4, 0.2, kind="regional").flags


def test_commutator_is_symmetric(interval_basis):
    grid = interval_basis.grid
    g, h = make_corpus(grid.domain, grid, 4, seed=1)[3]
    np.testing.assert_allclose(commutator(g, h, "spectral", 0.4, interval_basis).values,
                               commutator(h, g, "spectral", 0.4, interval_basis).values, atol=1e-10)


def test_commutator_trace_matches_direct_commutator(interval, interval_grid, interval_basis):
    g, h = make_corpus(interval, interval_grid, 1, seed=0)[0]
    alpha = 0.5
    via = commutator_via_extension(g, h, alpha, interval_basis, default_ygrid(interval_grid, alpha, 200))
    direct = commutator(g, h, "spectral", alpha, interval_basis)
    assert l2_norm(via - direct) <= 5e-2 * l2_norm(direct)


def test_es2_equal_orders_match_the_extension_energy(interval_basis, corpus_pair):
    _, h = corpus_pair
    report = check_es2(h, 0.5, 0.5, basis=interval_basis, ygrid=default_ygrid(interval_basis.grid, 0.5, 80))
    assert report.extras["es1_ratio"] == 1.0
    assert report.lhs > 0 and math.isfinite(report.ratio)


def test_es2_rejects_kernel_kinds(corpus_pair):
    _, h = corpus_pair
    with pytest.raises(ParameterError):
        check_es2(h, 0.5, 0.25, kind="restricted")


def test_es42_and_es43_are_finite(interval_basis, corpus_pair):
    g, h = corpus_pair
    ygrid = default_ygrid(interval_basis.grid, 0.5, 80)
    es42 = check_es42_es39(g, 0.5, basis=interval_basis, ygrid=ygrid)
    assert es42.rhs > 0 and math.isfinite(es42.ratio)
    assert es42.extras["es39_rhs"] == pytest.approx(1.0)
    es43 = check_es43(g, h, 0.5, 0.25, basis=interval_basis, ygrid=ygrid)
    assert math.isfinite(es43.ratio)
    assert es43.extras["solver_residual"] <= 1e-10


def test_z_energy_balance_identity_is_exact(interval_basis, corpus_pair):
    g, h = corpus_pair
    report = check_z_energy_balance(g, h, 0.5, interval_basis, default_ygrid(interval_basis.grid, 0.5, 80))
    assert report.extras["identity_residual"] <= 1e-8
    assert report.lhs > 0 and math.isfinite(report.extras["trace_relation_error"])


def test_hardy_closed_form():
    exact = check_hardy(lambda y: y * np.exp(-y), 0.5, dw=lambda y: (1.0 - y) * np.exp(-y))
    assert exact.lhs == pytest.approx(0.25, rel=1e-7)
    assert exact.rhs == pytest.approx(0.125, rel=1e-7)
    numeric = check_hardy(lambda y: y * np.exp(-y), 0.5)
    assert numeric.ratio == pytest.approx(2.0, rel=1e-3)


def test_hardy_rejects_non_vanishing_profiles():
    with pytest.raises(IntegrabilityError):
        check_hardy(lambda y: np.exp(-y), 0.5)
    with pytest.raises(IntegrabilityError):
        check_hardy(lambda y: np.sqrt(y) * np.exp(-y), 0.75, leading_power=0.5)


@pytest.mark.parametrize("sigma", [0.25, 0.5, 0.75])
def test_extremal_family_approaches_sharp_constant(sigma):
    reports = hardy_extremal_sweep(sigma, [0.01, 0.2, 0.05])
    assert [r.config["delta"] for r in reports] == [0.2, 0.05, 0.01]
    ratios = [r.ratio for r in reports]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    for r in reports:
        assert r.ratio == pytest.approx(extremal_ratio(sigma, r.config["delta"]), rel=1e-6)
        assert r.ratio > 1.0


def test_truncation_clips_symmetrically(interval_grid):
    u = GridFunction(interval_grid, np.linspace(-2.0, 2.0, interval_grid.size))
    t = truncation(u, 0.5)
    assert np.max(np.abs(t.values)) == pytest.approx(0.5)
    np.testing.assert_array_equal(np.sign(t.values), np.sign(u.values))
    with pytest.raises(ParameterError):
        truncation(u, 0.0)


def test_l1_bound_and_exterior_interaction(bump_512):
    report = check_l1_theorem(bump_512, 0.3, 0.03)
    assert report.lhs > 0 and math.isfinite(report.ratio)
    assert report.extras["exterior_ratio"] <= 1.02
    flipped = check_l1_theorem(-bump_512, 0.3, 0.03)
    assert flipped.ratio == pytest.approx(report.ratio, rel=1e-12)
    with pytest.raises(ParameterError):
        check_l1_theorem(bump_512, 0.3, 0.1)


def test_truncation_identity_holds(bump_512):
    report = check_truncation_identity(bump_512, 0.2, 0.5)
    assert report.extras["relative_gap"] <= 0.05


def test_counterexample_structure():
    result = run_counterexample(0.3, 0.4, 0.35, 0.45, [0.01, 0.08, 0.02, 0.04], n=1024)
    assert result.epsilons == [0.08, 0.04, 0.02, 0.01]
    reports = result.reports()
    assert len(reports) == 4
    for report, quotient in zip(reports, result.hardy_quotients):
        assert report.ratio == pytest.approx(quotient)
    assert set(result.checks) | set(result.inconclusive) == {"weighted_band", "halfnorm_band", "seminorm_slope",
                                                             "quotient_decreasing", "seminorm_separation"}
    assert not set(result.checks) & set(result.inconclusive)


def test_slope_verdict_skips_noisy_fits():
    noisy = ScalingFit.fit(list(zip((0.08, 0.04, 0.02, 0.01), (1.0, 0.6, 1.1, 0.7))))
    assert noisy.inconclusive
    assert slope_verdict(noisy, 0.4) is None



def test_inconclusive_counterexample_rows_are_flagged():
    eps = [0.08, 0.04, 0.02, 0.01]
    seminorm = [1.0, 0.6, 1.1, 0.7]
    result = CounterexampleResult(
        alpha=0.3, alpha0=0.4, alpha1=0.35, alpha2=0.45, epsilons=eps, weighted=[1.0] * 4,
        seminorm=seminorm, halfnorm=[1.0] * 4, halfnorm_regional=[0.5] * 4, halfnorm_tail=[0.5] * 4,
        seminorm_alpha1=seminorm, seminorm_fit=ScalingFit.fit(list(zip(eps, seminorm))),
        inconclusive=["seminorm_slope"])
    assert all(report.flags == (INCONCLUSIVE,) for report in result.reports())
    assert result.passed


@pytest.mark.parametrize("slope, expected", [(0.5, True), (0.1, True), (-0.2, False)])
def test_slope_verdict_on_clean_power_laws(slope, expected):
    # threshold at alpha0 = 0.4 is 1 - 0.8 - 0.15 = 0.05
    fit = ScalingFit.fit([(e, 2.0 * e ** slope) for e in (0.08, 0.04, 0.02, 0.01)])
    assert not fit.inconclusive
    assert slope_verdict(fit, 0.4) is expected


def test_counterexample_rejects_bad_orders():
    with pytest.raises(ParameterError):
        run_counterexample(0.3, 0.25, 0.35, 0.45, n=256)
    with pytest.raises(ParameterError):
        run_counterexample(eps_list=[0.08, 0.04, 0.02], n=256)


def test_ratio_sweep_is_deterministic(interval):
    kwargs = dict(alphas=[0.5], kinds=["spectral", "fourier"], levels=(16, 32), corpus_size=2,
                  checks=("theorem_1", "es42"), y_layers=20)
    first = ratio_sweep(interval, workers=1, **kwargs)
    second = ratio_sweep(interval, workers=4, **kwargs)
    assert [(k, i) for k, i, _ in first.reports] == [(k, i) for k, i, _ in second.reports]
    assert [r.ratio for _, _, r in first.reports] == pytest.approx([r.ratio for _, _, r in second.reports], rel=1e-12)
    # theorem_1 takes beta in (alpha/2, alpha); es42 has no beta
    assert len(first.reports) == 2 * 2 * (2 + 1) * 2
    assert CellKey("es42", "fourier", 0.5, -1.0, 32) in first.max_ratios()
    assert set(first.drifts()) == {(c, k, 0.5, b) for k in ("fourier", "spectral")
                                   for c, b in (("theorem_1", 0.25), ("theorem_1", 0.5), ("es42", -1.0))}


def test_ratio_sweep_rejects_unknown_checks(interval):
    with pytest.raises(ParameterError):
        ratio_sweep(interval, [0.5], checks=("nope",))
