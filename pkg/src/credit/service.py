"""Merton-model portfolio loss and the VaR / CVaR measures built on it.

The loss of sample j is L_j = Σ_i E_i·Θ(Z_i < z_i) with
Z_i = α_i ε_com,j + √(1−α_i²) ε_i,j, which is exactly the separable form
g(Σ_i f(ε_com, ε_i; c_i)) the integrator works with (D = N_obl).
"""
import logging
import math
from typing import Sequence

import numpy as np

from src.credit.exceptions import (
    EmptyTailError,
    LengthMismatchError,
    MeasureSpecError,
    UnbracketedQuantileError,
)
from src.credit.schemas import Method, Obligor, PortfolioSpec, RiskMeasureKind, RiskMeasureSpec
from src.distributions.schemas import StreamBinding
from src.distributions.service import sample_normals
from src.integrator.estimators import e_samp, p1_new
from src.integrator.schemas import RunConfig, SeparableIntegrand
from src.qae.kernel import amplitude_from_theta
from src.qae.schemas import QaeGrid

logger = logging.getLogger(__name__)

NORMALIZATION_SLACK = 1e-12


def default_indicator(eps_com: float, eps_i: float, obligor: Obligor) -> int:
    """Θ(Z_i, z_i): 1 when the latent variable falls strictly below the threshold."""
    latent = obligor.alpha * eps_com + obligor.idiosyncratic_loading * eps_i
    return 1 if latent < obligor.z else 0


def obligor_loss(eps_com: float, eps_i: float, obligor: Obligor) -> float:
    """f(ε_com, ε_i; E_i, α_i, z_i) = E_i·Θ(Z_i, z_i)."""
    return obligor.exposure * default_indicator(eps_com, eps_i, obligor)


def loss(portfolio: PortfolioSpec, eps_com: float, eps_vec: Sequence[float]) -> float:
    """Portfolio loss for one draw of the common and idiosyncratic variables.

    Raises:
        LengthMismatchError: If eps_vec does not hold one variate per obligor
    """
    if len(eps_vec) != portfolio.n_obl:
        raise LengthMismatchError(portfolio.n_obl, len(eps_vec))
    return math.fsum(
        obligor_loss(eps_com, float(eps_i), obligor)
        for obligor, eps_i in zip(portfolio.obligors, eps_vec)
    )


def loss_sample(portfolio: PortfolioSpec, binding: StreamBinding, n_samples: int) -> np.ndarray:
    """Every sample loss L_1..L_N read straight off the stream.

    Sample j consumes stream elements (j−1)(D+1)+1 .. j(D+1): ε_com,j first,
    then ε_1,j .. ε_D,j.
    """
    width = portfolio.n_obl + 1
    normals = sample_normals(binding, 1, n_samples * width).reshape(n_samples, width)
    alpha = np.array([obligor.alpha for obligor in portfolio.obligors])
    loading = np.array([obligor.idiosyncratic_loading for obligor in portfolio.obligors])
    threshold = np.array([obligor.z for obligor in portfolio.obligors])
    exposure = np.array([obligor.exposure for obligor in portfolio.obligors])

    latent = alpha * normals[:, :1] + loading * normals[:, 1:]
    contributions = np.where(latent < threshold, exposure, 0.0)
    return np.array([math.fsum(row) for row in contributions])


def _normalization(portfolio: PortfolioSpec, measure: RiskMeasureSpec) -> float:
    normalization = measure.normalization or 1.0 / portfolio.total_exposure
    if normalization * portfolio.total_exposure > 1.0 + NORMALIZATION_SLACK:
        raise MeasureSpecError(
            f"C={normalization} lets C·L exceed 1 (total exposure {portfolio.total_exposure})"
        )
    return normalization


def to_separable(
    portfolio: PortfolioSpec, measure: RiskMeasureSpec, binding: StreamBinding
) -> SeparableIntegrand:
    """Loss integrand with the VaR indicator or the CVaR payoff as g.

    Raises:
        MeasureSpecError: If L_alpha is missing or C does not keep g within [0, 1]
    """
    if measure.l_alpha is None:
        raise MeasureSpecError(f"{measure.kind.value} payoff needs l_alpha")
    l_alpha = measure.l_alpha

    if measure.kind is RiskMeasureKind.VAR:

        def payoff(total_loss: float) -> float:
            return 1.0 if total_loss > l_alpha else 0.0

    else:
        normalization = _normalization(portfolio, measure)

        # the inner estimate D·sin²(θ̃π) can overshoot ΣE_i, so cap C·L at 1
        def payoff(total_loss: float) -> float:
            return min(normalization * total_loss, 1.0) if total_loss > l_alpha else 0.0

    return SeparableIntegrand(
        name=f"credit-{measure.kind.value}",
        terms=portfolio.obligors,
        term_fn=obligor_loss,
        payoff=payoff,
        stream=binding,
    )


def payoff_cap_outcomes(portfolio: PortfolioSpec, measure: RiskMeasureSpec, grid: QaeGrid) -> int:
    """Inner outcomes θ̃ on which the CVaR payoff cap min(C·L, 1) binds."""
    if measure.kind is not RiskMeasureKind.CVAR or measure.l_alpha is None:
        return 0
    arguments = portfolio.n_obl * amplitude_from_theta(grid.points)
    capped = (arguments > measure.l_alpha) & (_normalization(portfolio, measure) * arguments > 1.0)
    return int(np.count_nonzero(capped))


def _expectation(
    portfolio: PortfolioSpec,
    measure: RiskMeasureSpec,
    cfg: RunConfig,
    method: Method,
    binding: StreamBinding,
) -> float:
    if method is Method.CLASSICAL:
        losses = loss_sample(portfolio, binding, cfg.n_samples)
        integrand = to_separable(portfolio, measure, binding)
        return math.fsum(integrand.payoff(float(x)) for x in losses) / cfg.n_samples
    integrand = to_separable(portfolio, measure, binding)
    if method is Method.PREVIOUS:
        return e_samp(integrand, cfg)
    return p1_new(integrand, cfg)


def tail_prob(
    portfolio: PortfolioSpec,
    l_alpha: float,
    cfg: RunConfig,
    method: Method = Method.CLASSICAL,
    binding: StreamBinding | None = None,
) -> float:
    """P(L > L_α) over the N_samp stream samples.

    ``classical`` and ``previous`` give the exact sample frequency, ``new`` the
    success probability of the nested estimator with the indicator payoff.
    """
    measure = RiskMeasureSpec(kind=RiskMeasureKind.VAR, l_alpha=l_alpha)
    return _expectation(portfolio, measure, cfg, method, binding or StreamBinding())


def search_upper(portfolio: PortfolioSpec, method: Method) -> float:
    """Upper end of the VaR bracket: the largest loss the method can report.

    The nested method applies g to D·sin²(θ̃π), which reaches D even when
    ΣE_i < D.
    """
    if method is Method.NEW:
        return float(max(portfolio.n_obl, portfolio.total_exposure))
    return portfolio.total_exposure


def search_tolerance(portfolio: PortfolioSpec, tol: float, method: Method) -> float:
    """tol raised to the float spacing at the top of the bracket."""
    return max(tol, math.ulp(search_upper(portfolio, method)))


def var_search(
    portfolio: PortfolioSpec,
    alpha: float,
    cfg: RunConfig,
    tol: float = 1e-6,
    method: Method = Method.CLASSICAL,
    binding: StreamBinding | None = None,
) -> float:
    """Bisect for the smallest L_α with tail_prob(L_α) <= alpha.

    The bracket starts at [0, search_upper] and every evaluation reuses the same
    stream samples, so the search runs over a fixed right-continuous step
    function. A tol below the float spacing at the bracket is raised to it.

    Returns:
        float: Upper end of the final bracket, within tol of the empirical
            (1 − alpha)-quantile of the loss

    Raises:
        MeasureSpecError: If alpha is outside (0, 1)
        UnbracketedQuantileError: If the tail at the upper end still exceeds alpha
    """
    if not 0.0 < alpha < 1.0:
        raise MeasureSpecError(f"alpha must lie in (0, 1), got {alpha}")
    binding = binding or StreamBinding()

    def tail(level: float) -> float:
        return tail_prob(portfolio, level, cfg, method, binding)

    if tail(0.0) <= alpha:
        return 0.0
    low, high = 0.0, search_upper(portfolio, method)
    top_tail = tail(high)
    if top_tail > alpha:
        raise UnbracketedQuantileError(high, top_tail, alpha)
    effective_tol = search_tolerance(portfolio, tol, method)
    if effective_tol > tol:
        logger.warning(f"VaR tolerance {tol} is below float spacing, using {effective_tol}")
    evaluations = 2
    while high - low > effective_tol:
        middle = 0.5 * (low + high)
        if not low < middle < high:
            break
        if tail(middle) <= alpha:
            high = middle
        else:
            low = middle
        evaluations += 1
    logger.info(f"VaR at alpha={alpha} ({method.value}): {high} after {evaluations} tail evaluations")
    return high


def cvar(
    portfolio: PortfolioSpec,
    l_alpha: float,
    cfg: RunConfig,
    method: Method = Method.CLASSICAL,
    binding: StreamBinding | None = None,
    normalization: float | None = None,
) -> float:
    """E[L | L > L_α], recovered as E[C·L·Θ(L_α, L)] / (C·P(L > L_α)).

    Raises:
        EmptyTailError: If no sample loss exceeds L_alpha
    """
    binding = binding or StreamBinding()
    tail = tail_prob(portfolio, l_alpha, cfg, method, binding)
    if tail <= 0.0:
        raise EmptyTailError(l_alpha)
    measure = RiskMeasureSpec(
        kind=RiskMeasureKind.CVAR, l_alpha=l_alpha, normalization=normalization
    )
    scale = _normalization(portfolio, measure)
    expectation = _expectation(portfolio, measure, cfg, method, binding)
    return expectation / (scale * tail)
