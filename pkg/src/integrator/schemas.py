from typing import Any, Callable

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.distributions.schemas import StreamBinding
from src.qae.schemas import MAX_REGISTER_QUBITS, QaeGrid

TermFunction = Callable[[float, float, Any], float]
PayoffFunction = Callable[[float], float]


class TermParams(BaseModel):
    """Per-term constants c_i handed to f; concrete integrands subclass it."""

    model_config = ConfigDict(frozen=True, extra="forbid")


class WeightTerm(TermParams):
    """Loading on the common variable and an offset for the synthetic integrands."""

    weight: float = Field(ge=-1.0, le=1.0)
    bias: float = 0.0


class SeparableIntegrand(BaseModel):
    """F = g(Σ_i f(ε_com, ε_i; c_i)) bound to a PRN stream.

    Attributes:
        name: Label used in reports
        terms: c_1, ..., c_D
        term_fn: f(ε_com, ε_i, c_i) with values in [0, 1]
        payoff: g on [0, D] with values in [0, 1]
        payoff_derivative: g′, needed for the first-order error model
        payoff_second_derivative: g″, needed for the second-order error model
        stream: PCG stream realizing ε_com,j and ε_i,j
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    terms: tuple[TermParams, ...] = Field(min_length=1)
    term_fn: TermFunction
    payoff: PayoffFunction
    payoff_derivative: PayoffFunction | None = None
    payoff_second_derivative: PayoffFunction | None = None
    stream: StreamBinding = Field(default_factory=StreamBinding)

    @property
    def dimension(self) -> int:
        return len(self.terms)


class RunConfig(BaseModel):
    """Sample count and register sizes of one nested-QAE run.

    Attributes:
        n_samples: N_samp, a power of two
        m_inner: qubits of the inner estimation register (M = 2^m_inner)
        m_outer: qubits of the outer estimation register
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_samples: int = Field(default=16, ge=1)
    m_inner: int = Field(default=6, ge=1, le=MAX_REGISTER_QUBITS)
    m_outer: int = Field(default=6, ge=1, le=MAX_REGISTER_QUBITS)

    @field_validator("n_samples")
    @classmethod
    def check_power_of_two(cls, value: int) -> int:
        if value & (value - 1):
            raise ValueError(f"N_samp must be a power of two, got {value}")
        return value

    @property
    def n_samp_bits(self) -> int:
        return self.n_samples.bit_length() - 1

    @property
    def inner_grid(self) -> QaeGrid:
        return QaeGrid(m=self.m_inner)

    @property
    def outer_grid(self) -> QaeGrid:
        return QaeGrid(m=self.m_outer)


class DeltaEstimate(BaseModel):
    """First-order relative error of one sample's payoff."""

    j: int
    s_j: float
    h: float
    delta: float
    bound: float


class QueryCounts(BaseModel):
    n_f_prev: int
    n_f_new: int
    reduction: float


class ErrorCurvePoint(BaseModel):
    m_inner: int
    M: int
    e_samp: float
    p1: float
    abs_error: float
    first_order: float | None = None
    second_order: float | None = None
    bound: float | None = None



class ClampCounts(BaseModel):
    """How often a run's values were forced back into their encodable range.

    Attributes:
        zero_uniforms: Stream words whose uniform hit the u = 0 clamp
        s_j_clamped: Samples whose S_j exceeded 1 by rounding
        payoff_outcomes_clamped: Inner outcomes where g̃ left [0, 1] by rounding
        p1_clamped: Whether p1 itself had to be clipped to [0, 1]
    """

    zero_uniforms: int
    s_j_clamped: int
    payoff_outcomes_clamped: int
    p1_clamped: bool
