import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.credit.exceptions import EmptyTailError, LengthMismatchError, MeasureSpecError
from src.credit.schemas import Method, Obligor, PortfolioSpec, RiskMeasureKind, RiskMeasureSpec
from src.credit.service import (
    cvar,
    default_indicator,
    loss,
    loss_sample,
    payoff_cap_outcomes,
    search_tolerance,
    search_upper,
    tail_prob,
    to_separable,
    var_search,
)
from src.distributions.service import sample_normals
from src.integrator.estimators import e_samp
from src.integrator.schemas import RunConfig
from src.qae.schemas import QaeGrid


def sorted_quantile(losses: np.ndarray, alpha: float) -> float:
    ordered = np.sort(losses)
    n = len(ordered)
    return float(ordered[n - math.floor(alpha * n) - 1])


@pytest.fixture
def cfg64() -> RunConfig:
    return RunConfig(n_samples=64, m_inner=6, m_outer=6)


def test_obligor_validation():
    with pytest.raises(ValidationError):
        Obligor(exposure=0.0, alpha=0.1, z=0.0)
    with pytest.raises(ValidationError):
        Obligor(exposure=1.5, alpha=0.1, z=0.0)
    with pytest.raises(ValidationError):
        Obligor(exposure=1.0, alpha=1.0, z=0.0)
    with pytest.raises(ValidationError):
        PortfolioSpec(obligors=())


def test_default_indicator_is_strict():
    obligor = Obligor(exposure=1.0, alpha=0.0, z=0.5)
    assert default_indicator(3.0, 0.5, obligor) == 0
    assert default_indicator(3.0, 0.4999, obligor) == 1


def test_loss_sums_defaulted_exposures(portfolio4):
    # ε_com = 0, so only the idiosyncratic loading matters
    eps = [-1.0, 1.0, -1.0, 0.0]
    expected = 1.0 + 0.25 + 0.75
    assert loss(portfolio4, 0.0, eps) == expected


def test_loss_length_mismatch(portfolio4):
    with pytest.raises(LengthMismatchError):
        loss(portfolio4, 0.0, [0.0, 0.0])


def test_loss_sample_matches_per_sample_loss(portfolio4, binding):
    n_samples = 16
    width = portfolio4.n_obl + 1
    normals = sample_normals(binding, 1, n_samples * width).reshape(n_samples, width)
    expected = [loss(portfolio4, row[0], row[1:]) for row in normals]
    np.testing.assert_array_equal(loss_sample(portfolio4, binding, n_samples), expected)


def test_losses_are_integers_for_unit_exposures(portfolio8, binding):
    losses = loss_sample(portfolio8, binding, 64)
    np.testing.assert_array_equal(losses, np.round(losses))
    assert losses.min() >= 0 and losses.max() <= 8


def test_tail_prob_is_sample_frequency(portfolio8, binding, cfg64):
    losses = loss_sample(portfolio8, binding, cfg64.n_samples)
    for level in (0.0, 1.5, 3.5):
        expected = np.count_nonzero(losses > level) / cfg64.n_samples
        assert tail_prob(portfolio8, level, cfg64, binding=binding) == expected


def test_tail_prob_monotone(portfolio8, binding, cfg64):
    levels = np.linspace(0.0, 8.0, 33)
    tails = [tail_prob(portfolio8, float(level), cfg64, binding=binding) for level in levels]
    assert all(a >= b for a, b in zip(tails, tails[1:]))
    assert tails[-1] == 0.0


def test_previous_method_equals_classical(portfolio4, binding, cfg16):
    for level in (0.0, 0.6, 1.3, 2.1):
        classical = tail_prob(portfolio4, level, cfg16, Method.CLASSICAL, binding)
        previous = tail_prob(portfolio4, level, cfg16, Method.PREVIOUS, binding)
        assert previous == pytest.approx(classical, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.05, 0.1, 0.25, 0.5])
def test_var_search_matches_sorted_quantile(portfolio8, binding, cfg64, alpha):
    tol = 1e-6
    quantile = sorted_quantile(loss_sample(portfolio8, binding, cfg64.n_samples), alpha)
    value = var_search(portfolio8, alpha, cfg64, tol=tol, binding=binding)
    assert quantile <= value < quantile + tol


def test_var_search_dyadic_portfolio(portfolio4, binding, cfg16):
    quantile = sorted_quantile(loss_sample(portfolio4, binding, cfg16.n_samples), 0.25)
    value = var_search(portfolio4, 0.25, cfg16, tol=1e-4, binding=binding)
    assert quantile <= value < quantile + 1e-4


def test_var_search_no_defaults(cfg16):
    safe = PortfolioSpec(obligors=(Obligor(exposure=1.0, alpha=0.3, z=-20.0),))
    assert var_search(safe, 0.05, cfg16) == 0.0


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2])
def test_var_search_rejects_alpha(portfolio4, cfg4, alpha):
    with pytest.raises(MeasureSpecError):
        var_search(portfolio4, alpha, cfg4)


def test_cvar_is_tail_mean(portfolio8, binding, cfg64):
    losses = loss_sample(portfolio8, binding, cfg64.n_samples)
    level = 1.5
    expected = float(np.mean(losses[losses > level]))
    assert cvar(portfolio8, level, cfg64, binding=binding) == pytest.approx(expected, rel=1e-12)


def test_cvar_dominates_var(portfolio8, binding, cfg64):
    value_at_risk = var_search(portfolio8, 0.2, cfg64, binding=binding)
    losses = loss_sample(portfolio8, binding, cfg64.n_samples)
    if np.any(losses > value_at_risk):
        assert cvar(portfolio8, value_at_risk, cfg64, binding=binding) > value_at_risk


def test_cvar_previous_equals_classical(portfolio4, binding, cfg16):
    classical = cvar(portfolio4, 0.6, cfg16, Method.CLASSICAL, binding)
    previous = cvar(portfolio4, 0.6, cfg16, Method.PREVIOUS, binding)
    assert previous == pytest.approx(classical, rel=1e-12)


def test_cvar_empty_tail(portfolio4, binding, cfg16):
    with pytest.raises(EmptyTailError):
        cvar(portfolio4, portfolio4.total_exposure, cfg16, binding=binding)


def test_cvar_custom_normalization(portfolio8, binding, cfg64):
    default = cvar(portfolio8, 1.5, cfg64, binding=binding)
    scaled = cvar(portfolio8, 1.5, cfg64, binding=binding, normalization=1.0 / 16)
    assert scaled == pytest.approx(default, rel=1e-12)
    with pytest.raises(MeasureSpecError):
        cvar(portfolio8, 1.5, cfg64, binding=binding, normalization=0.5)


def test_to_separable_needs_threshold(portfolio4, binding):
    with pytest.raises(MeasureSpecError):
        to_separable(portfolio4, RiskMeasureSpec(kind=RiskMeasureKind.VAR), binding)


def test_to_separable_payoffs(portfolio4, binding):
    var_payoff = to_separable(
        portfolio4, RiskMeasureSpec(kind=RiskMeasureKind.VAR, l_alpha=1.0), binding
    ).payoff
    assert var_payoff(1.0) == 0.0
    assert var_payoff(1.25) == 1.0
    cvar_integrand = to_separable(
        portfolio4, RiskMeasureSpec(kind=RiskMeasureKind.CVAR, l_alpha=1.0), binding
    )
    assert cvar_integrand.dimension == 4
    assert cvar_integrand.payoff(1.25) == pytest.approx(1.25 / 2.5)
    assert cvar_integrand.payoff(0.5) == 0.0
    # inner estimates above ΣE_i stay amplitude-encodable
    assert cvar_integrand.payoff(3.9) == 1.0


def test_classical_expectation_matches_e_samp(portfolio8, binding, cfg64):
    measure = RiskMeasureSpec(kind=RiskMeasureKind.CVAR, l_alpha=2.5)
    integrand = to_separable(portfolio8, measure, binding)
    losses = loss_sample(portfolio8, binding, cfg64.n_samples)
    classical = math.fsum(integrand.payoff(float(x)) for x in losses) / cfg64.n_samples
    assert e_samp(integrand, cfg64) == pytest.approx(classical, abs=1e-12)


@pytest.mark.parametrize("level", [0.5, 1.5, 2.5, 3.5])
def test_new_method_tail_agrees_with_classical(portfolio8, binding, level):
    cfg = RunConfig(n_samples=64, m_inner=10, m_outer=6)
    classical = tail_prob(portfolio8, level, cfg, Method.CLASSICAL, binding)
    nested = tail_prob(portfolio8, level, cfg, Method.NEW, binding)
    assert nested == pytest.approx(classical, abs=0.02)


def test_new_method_cvar_agrees_with_classical(portfolio8, binding):
    cfg = RunConfig(n_samples=64, m_inner=10, m_outer=6)
    classical = cvar(portfolio8, 1.5, cfg, Method.CLASSICAL, binding)
    nested = cvar(portfolio8, 1.5, cfg, Method.NEW, binding)
    assert nested == pytest.approx(classical, rel=0.1)


def test_var_search_tolerance_below_float_spacing(portfolio8, binding, cfg64):
    quantile = sorted_quantile(loss_sample(portfolio8, binding, cfg64.n_samples), 0.1)
    effective = search_tolerance(portfolio8, 1e-18, Method.CLASSICAL)
    assert effective == math.ulp(8.0)
    value = var_search(portfolio8, 0.1, cfg64, tol=1e-18, binding=binding)
    assert quantile <= value <= quantile + effective


def test_search_upper_covers_inner_estimates(portfolio4):
    assert search_upper(portfolio4, Method.CLASSICAL) == 2.5
    assert search_upper(portfolio4, Method.PREVIOUS) == 2.5
    assert search_upper(portfolio4, Method.NEW) == 4.0


def test_new_method_var_keeps_tail_below_alpha(portfolio4, binding):
    cfg = RunConfig(n_samples=16, m_inner=3, m_outer=6)
    alpha = 0.01
    value = var_search(portfolio4, alpha, cfg, tol=1e-6, method=Method.NEW, binding=binding)
    assert tail_prob(portfolio4, value, cfg, Method.NEW, binding) <= alpha
    if tail_prob(portfolio4, portfolio4.total_exposure, cfg, Method.NEW, binding) > alpha:
        assert value > portfolio4.total_exposure


def test_var_search_non_increasing_in_alpha(portfolio8, binding, cfg64):
    alphas = [0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.8]
    values = [var_search(portfolio8, alpha, cfg64, binding=binding) for alpha in alphas]
    assert all(later <= earlier for earlier, later in zip(values, values[1:]))


def test_loss_variance_grows_with_common_loading(binding):
    cfg = RunConfig(n_samples=1024)

    def book(alpha: float) -> PortfolioSpec:
        return PortfolioSpec(
            obligors=tuple(Obligor(exposure=1.0, alpha=alpha, z=-1.0) for _ in range(16))
        )

    variances = [
        float(np.var(loss_sample(book(alpha), binding, cfg.n_samples)))
        for alpha in (0.0, 0.4, 0.8)
    ]
    assert variances[0] < variances[1] < variances[2]


def test_payoff_cap_outcomes(portfolio4, portfolio8):
    grid = QaeGrid(m=4)
    cvar_measure = RiskMeasureSpec(kind=RiskMeasureKind.CVAR, l_alpha=0.5)
    # ΣE = 2.5 < D = 4: inner outcomes with 4·sin²(θ̃π) > 2.5 are capped
    assert payoff_cap_outcomes(portfolio4, cvar_measure, grid) > 0
    # unit exposures: C·D = 1, the cap never binds
    assert payoff_cap_outcomes(portfolio8, cvar_measure, grid) == 0
    var_measure = RiskMeasureSpec(kind=RiskMeasureKind.VAR, l_alpha=0.5)
    assert payoff_cap_outcomes(portfolio4, var_measure, grid) == 0
