"""Small integrands with known closed forms, used to check the error model."""
import math

from src.distributions.schemas import StreamBinding
from src.integrator.schemas import SeparableIntegrand, TermParams, WeightTerm

DEFAULT_BIAS = -0.85


def _logistic(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))


def loaded_logistic(eps_com: float, eps_i: float, term: WeightTerm) -> float:
    """f = logistic(w·ε_com + √(1−w²)·ε_i + bias), always inside (0, 1)."""
    w = term.weight
    return _logistic(w * eps_com + math.sqrt(1.0 - w * w) * eps_i + term.bias)


def half(eps_com: float, eps_i: float, term: TermParams) -> float:
    return 0.5


def weight_terms(dimension: int, weight: float = 0.5, bias: float = DEFAULT_BIAS) -> tuple[WeightTerm, ...]:
    return tuple(WeightTerm(weight=weight, bias=bias) for _ in range(dimension))


def constant_integrand(
    dimension: int, level: float = 0.25, stream: StreamBinding | None = None
) -> SeparableIntegrand:
    """f ≡ 1/2 and g ≡ level: every estimator must return exactly ``level``."""
    return SeparableIntegrand(
        name="constant",
        terms=tuple(TermParams() for _ in range(dimension)),
        term_fn=half,
        payoff=lambda x: level,
        payoff_derivative=lambda x: 0.0,
        payoff_second_derivative=lambda x: 0.0,
        stream=stream or StreamBinding(),
    )


def linear_integrand(
    dimension: int,
    weight: float = 0.5,
    bias: float = DEFAULT_BIAS,
    stream: StreamBinding | None = None,
) -> SeparableIntegrand:
    """g(x) = x/D; the first-order error prediction is exact."""
    return SeparableIntegrand(
        name="linear",
        terms=weight_terms(dimension, weight, bias),
        term_fn=loaded_logistic,
        payoff=lambda x: x / dimension,
        payoff_derivative=lambda x: 1.0 / dimension,
        payoff_second_derivative=lambda x: 0.0,
        stream=stream or StreamBinding(),
    )


def smooth_integrand(
    dimension: int,
    weight: float = 0.5,
    bias: float = DEFAULT_BIAS,
    stream: StreamBinding | None = None,
) -> SeparableIntegrand:
    """g(x) = (x/D)²; the second-order error prediction is exact."""
    return SeparableIntegrand(
        name="smooth",
        terms=weight_terms(dimension, weight, bias),
        term_fn=loaded_logistic,
        payoff=lambda x: (x / dimension) ** 2,
        payoff_derivative=lambda x: 2.0 * x / dimension**2,
        payoff_second_derivative=lambda x: 2.0 / dimension**2,
        stream=stream or StreamBinding(),
    )


SYNTHETIC_INTEGRANDS = {
    "constant": constant_integrand,
    "linear": linear_integrand,
    "smooth": smooth_integrand,
}
