"""Previous-method and nested-QAE estimators over a separable integrand."""
import logging
import math

import numpy as np

from src.distributions.service import (
    epsilon_com,
    epsilon_ind,
    normal_from_word,
    stream_index_com,
    zero_uniform_count,
)
from src.integrator.exceptions import (
    BoundUnavailableError,
    IntegrandRangeError,
    SampleIndexError,
)
from src.integrator.schemas import (
    ClampCounts,
    DeltaEstimate,
    ErrorCurvePoint,
    QueryCounts,
    RunConfig,
    SeparableIntegrand,
)
from src.pcg.generator import stream_words
from src.qae.kernel import (
    amplitude_from_theta,
    fold,
    h_direct,
    qae_pmf,
    qae_sample_many,
    second_moment,
    theta_from_amplitude,
)
from src.qae.schemas import QaeGrid, QaePmf

logger = logging.getLogger(__name__)

RANGE_SLACK = 1e-12


def _unit_checked(value: float, what: str, where: str) -> float:
    if not -RANGE_SLACK <= value <= 1.0 + RANGE_SLACK:
        raise IntegrandRangeError(what, value, where)
    return min(max(value, 0.0), 1.0)


def _check_sample_index(j: int, cfg: RunConfig | None = None) -> None:
    limit = cfg.n_samples if cfg is not None else math.inf
    if not 1 <= j <= limit:
        raise SampleIndexError(j, cfg.n_samples if cfg is not None else None)


def jumped_terms(integrand: SeparableIntegrand, j: int) -> list[float]:
    """f values of sample j, each variate fetched by its own jump (U_J)."""
    stream = integrand.stream
    dimension = integrand.dimension
    eps_com = epsilon_com(stream.params, stream.seed, j, dimension, stream.fixed_point)
    values = []
    for i, term in enumerate(integrand.terms, start=1):
        eps_i = epsilon_ind(stream.params, stream.seed, i, j, dimension, stream.fixed_point)
        values.append(
            _unit_checked(integrand.term_fn(eps_com, eps_i, term), "f", f"i={i}, j={j}")
        )
    return values


def sequential_terms(integrand: SeparableIntegrand, j: int) -> list[float]:
    """f values of sample j: one jump to ε_com,j, then D progress steps (U_P)."""
    stream = integrand.stream
    params, fixed_point = stream.params, stream.fixed_point
    words = stream_words(
        params, stream.seed, stream_index_com(j, integrand.dimension), integrand.dimension + 1
    )
    eps_com = normal_from_word(next(words), params.state_bits, fixed_point)
    values = []
    for i, (term, word) in enumerate(zip(integrand.terms, words), start=1):
        eps_i = normal_from_word(word, params.state_bits, fixed_point)
        values.append(
            _unit_checked(integrand.term_fn(eps_com, eps_i, term), "f", f"i={i}, j={j}")
        )
    return values


def term_sum(integrand: SeparableIntegrand, j: int) -> float:
    """D·S_j = Σ_i f(ε_com,j, ε_i,j; c_i)."""
    _check_sample_index(j)
    return math.fsum(jumped_terms(integrand, j))


def s_j(integrand: SeparableIntegrand, j: int) -> float:
    """S_j = (1/D) Σ_i f(ε_com,j, ε_i,j; c_i), the amplitude the inner QAE estimates."""
    return min(term_sum(integrand, j) / integrand.dimension, 1.0)


def _payoff(integrand: SeparableIntegrand, argument: float, where: str) -> float:
    return _unit_checked(integrand.payoff(argument), "g", where)


def sample_payoffs(integrand: SeparableIntegrand, cfg: RunConfig) -> list[float]:
    """g(D·S_j) for every sample, computed the previous method's way."""
    return [
        _payoff(integrand, math.fsum(sequential_terms(integrand, j)), f"j={j}")
        for j in range(1, cfg.n_samples + 1)
    ]


def e_samp(integrand: SeparableIntegrand, cfg: RunConfig) -> float:
    """E_samp = (1/N_samp) Σ_j g(Σ_i f(...)), exactly what the previous method measures."""
    value = math.fsum(sample_payoffs(integrand, cfg)) / cfg.n_samples
    logger.debug(f"E_samp for {integrand.name} over {cfg.n_samples} samples: {value}")
    return value


def payoff_on_grid(integrand: SeparableIntegrand, grid: QaeGrid) -> np.ndarray:
    """g̃(θ̃) = g(D sin²(θ̃π)) on every inner outcome."""
    arguments = integrand.dimension * amplitude_from_theta(grid.points)
    return np.array(
        [_payoff(integrand, float(x), f"theta~={k}/{grid.M}") for k, x in enumerate(arguments)]
    )


def _p1_unclipped(integrand: SeparableIntegrand, cfg: RunConfig) -> float:
    grid = cfg.inner_grid
    payoffs = payoff_on_grid(integrand, grid)
    contributions = []
    for j in range(1, cfg.n_samples + 1):
        pmf = qae_pmf(theta_from_amplitude(s_j(integrand, j)), grid)
        contributions.append(math.fsum(pmf.probs * payoffs))
    return math.fsum(contributions) / cfg.n_samples


def p1_new(integrand: SeparableIntegrand, cfg: RunConfig) -> float:
    """Exact probability of reading 1 on the payoff qubit of the nested method.

    p1 = (1/N_samp) Σ_j Σ_θ̃ G(θ̃; θ_j, M) g̃(θ̃), costing O(N_samp·(D + M)).
    """
    grid = cfg.inner_grid
    value = min(max(_p1_unclipped(integrand, cfg), 0.0), 1.0)
    logger.debug(f"p1 for {integrand.name} with M={grid.M}: {value}")
    return value


def clamp_counts(integrand: SeparableIntegrand, cfg: RunConfig) -> ClampCounts:
    """Count every place a run forced a value back into range instead of failing."""
    dimension = integrand.dimension
    samples = range(1, cfg.n_samples + 1)
    arguments = dimension * amplitude_from_theta(cfg.inner_grid.points)
    raw_payoffs = [integrand.payoff(float(x)) for x in arguments]
    raw_p1 = _p1_unclipped(integrand, cfg)
    return ClampCounts(
        zero_uniforms=zero_uniform_count(integrand.stream, 1, cfg.n_samples * (dimension + 1)),
        s_j_clamped=sum(1 for j in samples if term_sum(integrand, j) / dimension > 1.0),
        payoff_outcomes_clamped=sum(1 for value in raw_payoffs if not 0.0 <= value <= 1.0),
        p1_clamped=not 0.0 <= raw_p1 <= 1.0,
    )


def delta_bound(integrand: SeparableIntegrand, j: int, cfg: RunConfig) -> DeltaEstimate:
    """First-order relative error Δ(D, S_j, M) of sample j and its leading bound.

    Raises:
        BoundUnavailableError: If g′ is missing (indicator payoffs) or g(D·S_j) = 0
    """
    _check_sample_index(j, cfg)
    if integrand.payoff_derivative is None:
        raise BoundUnavailableError(f"integrand '{integrand.name}' has no smooth payoff derivative")
    dimension = integrand.dimension
    amplitude = s_j(integrand, j)
    argument = dimension * amplitude
    payoff = integrand.payoff(argument)
    if payoff == 0.0:
        raise BoundUnavailableError(f"g(D·S_j) = 0 at j={j}")
    slope = integrand.payoff_derivative(argument)
    grid = cfg.inner_grid
    h = h_direct(theta_from_amplitude(amplitude), grid)
    return DeltaEstimate(
        j=j,
        s_j=amplitude,
        h=h,
        delta=dimension * slope * h / payoff,
        bound=dimension * abs(slope) / (payoff * grid.M),
    )


def taylor_prediction(integrand: SeparableIntegrand, cfg: RunConfig, order: int = 1) -> float:
    """Predicted p1 − E_samp from the Taylor expansion of g̃ around D·S_j.

    order=1 gives (1/N) Σ_j D g′ H_j; order=2 adds (1/N) Σ_j ½ D² g″ V_j with
    V the kernel's second moment. Both are exact when g is of that degree.
    """
    if integrand.payoff_derivative is None:
        raise BoundUnavailableError(f"integrand '{integrand.name}' has no smooth payoff derivative")
    if order >= 2 and integrand.payoff_second_derivative is None:
        raise BoundUnavailableError(f"integrand '{integrand.name}' has no second derivative")
    dimension = integrand.dimension
    grid = cfg.inner_grid
    terms = []
    for j in range(1, cfg.n_samples + 1):
        amplitude = s_j(integrand, j)
        argument = dimension * amplitude
        theta = theta_from_amplitude(amplitude)
        term = dimension * integrand.payoff_derivative(argument) * h_direct(theta, grid)
        if order >= 2:
            term += (
                0.5
                * dimension**2
                * integrand.payoff_second_derivative(argument)
                * second_moment(theta, grid)
            )
        terms.append(term)
    return math.fsum(terms) / cfg.n_samples


def error_bound(integrand: SeparableIntegrand, cfg: RunConfig) -> float:
    """Leading bound on |p1 − E_samp|: (1/N) Σ_j D·|g′(D·S_j)|/M."""
    if integrand.payoff_derivative is None:
        raise BoundUnavailableError(f"integrand '{integrand.name}' has no smooth payoff derivative")
    dimension = integrand.dimension
    slopes = [
        abs(integrand.payoff_derivative(dimension * s_j(integrand, j)))
        for j in range(1, cfg.n_samples + 1)
    ]
    return dimension * math.fsum(slopes) / (cfg.n_samples * cfg.inner_grid.M)


def outer_pmf(p1: float, cfg: RunConfig) -> QaePmf:
    """Distribution of the outer estimation register for success probability p1."""
    return qae_pmf(theta_from_amplitude(p1), cfg.outer_grid)


def estimates_from_p1(
    p1: float, cfg: RunConfig, randomness: np.random.Generator, shots: int
) -> list[float]:
    outcomes = qae_sample_many(theta_from_amplitude(p1), cfg.outer_grid, randomness, shots)
    return [float(x) for x in amplitude_from_theta(fold(outcomes))]


def run_end_to_end(
    integrand: SeparableIntegrand,
    cfg: RunConfig,
    randomness: np.random.Generator,
    shots: int,
) -> list[float]:
    """Sample the full nested pipeline ``shots`` times.

    Returns:
        list[float]: sin²(θ̃π) of each folded outer outcome, estimates of E_samp
    """
    if shots == 0:
        return []
    return estimates_from_p1(p1_new(integrand, cfg), cfg, randomness, shots)


def query_counts(cfg: RunConfig, dimension: int) -> QueryCounts:
    """Calls of the f-block: D per outer Grover step before, M_inner per step now."""
    inner, outer = cfg.inner_grid.M, cfg.outer_grid.M
    return QueryCounts(
        n_f_prev=dimension * outer,
        n_f_new=inner * outer,
        reduction=inner / dimension,
    )


def inner_qubits_for_tolerance(typical_scale: float, delta_rel: float) -> int:
    """Smallest m with 2^m >= (l·δ_rel)⁻¹."""
    target = 1.0 / (typical_scale * delta_rel)
    return max(1, math.ceil(math.log2(target) - 1e-12))


def error_curve(
    integrand: SeparableIntegrand, cfg: RunConfig, m_values: list[int]
) -> list[ErrorCurvePoint]:
    """|p1 − E_samp| against the inner register size, for the plot-data table."""
    exact = e_samp(integrand, cfg)
    smooth = integrand.payoff_derivative is not None
    curved = smooth and integrand.payoff_second_derivative is not None
    points = []
    for m in m_values:
        run = cfg.model_copy(update={"m_inner": m})
        p1 = p1_new(integrand, run)
        points.append(
            ErrorCurvePoint(
                m_inner=m,
                M=run.inner_grid.M,
                e_samp=exact,
                p1=p1,
                abs_error=abs(p1 - exact),
                first_order=taylor_prediction(integrand, run, 1) if smooth else None,
                second_order=taylor_prediction(integrand, run, 2) if curved else None,
                bound=error_bound(integrand, run) if smooth else None,
            )
        )
    return points
