from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.config import settings
from src.pcg.schemas import PcgParams, parse_integer_literal


class FixedPointSpec(BaseModel):
    """Fixed-point emulation of the quantum arithmetic registers.

    Attributes:
        n_dig: Fraction bits kept from each PRN word and, in quantized mode,
            for every intermediate of the inverse CDF
        quantize: Round intermediates to n_dig fraction bits
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_dig: int = Field(default=settings.N_DIG, ge=1, le=53)
    quantize: bool = False

    @property
    def zero_clamp(self) -> float:
        # half an ulp of the fixed-point grid stands in for u = 0
        return 2.0 ** -(self.n_dig + 1)


class InvCdfInterval(BaseModel):
    """One piece of the piecewise rational inverse-CDF approximation.

    ``numerator`` and ``denominator`` are Horner coefficients, highest power first,
    in the interval's working variable (q = u − 1/2 centrally, q = √(−2 ln u) in
    the tails).
    """

    model_config = ConfigDict(frozen=True)

    upper: float = Field(gt=0.0, le=1.0)
    kind: Literal["tail_low", "central", "tail_high"]
    numerator: tuple[float, ...]
    denominator: tuple[float, ...]


class InvCdfApprox(BaseModel):
    model_config = ConfigDict(frozen=True)

    intervals: tuple[InvCdfInterval, ...]

    @property
    def n_icdf(self) -> int:
        return len(self.intervals)

    @model_validator(mode="after")
    def check_breakpoints(self) -> "InvCdfApprox":
        uppers = [interval.upper for interval in self.intervals]
        if any(lo >= hi for lo, hi in zip(uppers, uppers[1:])):
            raise ValueError("interval breakpoints must be strictly increasing")
        if uppers[-1] != 1.0:
            raise ValueError("the last interval must close the unit interval")
        return self


class StreamBinding(BaseModel):
    """PCG stream plus word-to-uniform conversion used to realize ε_com and ε_i."""

    model_config = ConfigDict(frozen=True)

    params: PcgParams = Field(default_factory=PcgParams)
    seed: int = Field(default=settings.PCG_SEED, ge=0)
    fixed_point: FixedPointSpec = Field(default_factory=FixedPointSpec)

    @field_validator("seed", mode="before")
    @classmethod
    def parse_seed(cls, value):
        return parse_integer_literal(value)

    @model_validator(mode="after")
    def check_widths(self) -> "StreamBinding":
        if self.seed >= self.params.modulus:
            raise ValueError(f"seed {self.seed} is outside [0, {self.params.modulus})")
        if self.fixed_point.n_dig > self.params.state_bits:
            raise ValueError(
                f"n_dig={self.fixed_point.n_dig} exceeds state_bits={self.params.state_bits}"
            )
        return self
