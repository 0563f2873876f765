from src.core.compat import StrEnum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.config import settings

MAX_STATE_BITS = 64

PERMUTATION_ALIASES = {
    "xorshift-high-then-rotate": "xsh-rr",
    "xorshift-rotate": "xsh-rr",
    "none": "identity",
}


class Permutation(StrEnum):
    """Output permutations f^perm applied to the background LCG word."""

    IDENTITY = "identity"
    XSH_RR = "xsh-rr"
    RXS_M_XS = "rxs-m-xs"


def parse_integer_literal(value):
    """Accept decimal integers and "0x"-prefixed strings for PRN constants."""
    if isinstance(value, str):
        return int(value.strip(), 0)
    return value


class PcgParams(BaseModel):
    """LCG constants plus the output permutation.

    Attributes:
        a: LCG multiplier, odd and greater than one
        c: LCG increment
        state_bits: log2 of the modulus m
        perm: output permutation
    """

    model_config = ConfigDict(frozen=True)

    a: int = Field(default=settings.PCG_MULTIPLIER)
    c: int = Field(default=settings.PCG_INCREMENT, ge=0)
    state_bits: int = Field(default=settings.PCG_STATE_BITS, ge=2, le=MAX_STATE_BITS)
    perm: Permutation = Field(default=settings.PCG_PERMUTATION, validate_default=True)

    @field_validator("a", "c", mode="before")
    @classmethod
    def parse_constants(cls, value):
        return parse_integer_literal(value)

    @field_validator("perm", mode="before")
    @classmethod
    def resolve_alias(cls, value):
        if isinstance(value, str):
            return PERMUTATION_ALIASES.get(value.strip().lower(), value.strip().lower())
        return value

    @model_validator(mode="after")
    def check_lcg_constants(self) -> "PcgParams":
        # c(a^i−1)/(a−1) is undefined at a = 1
        if self.a <= 1:
            raise ValueError(f"multiplier a must be greater than 1, got {self.a}")
        if self.a % 2 == 0:
            raise ValueError(f"multiplier a must be odd, got {self.a}")
        if self.a >= self.modulus:
            raise ValueError(f"multiplier a={self.a} must be below the modulus {self.modulus}")
        if self.c >= self.modulus:
            raise ValueError(f"increment c={self.c} must be below the modulus {self.modulus}")
        if self.perm is Permutation.RXS_M_XS and self.state_bits != 64:
            raise ValueError("permutation 'rxs-m-xs' is defined for 64-bit state only")
        return self

    @property
    def modulus(self) -> int:
        return 1 << self.state_bits

    @property
    def mask(self) -> int:
        return self.modulus - 1


class PcgState(BaseModel):
    """Background LCG state x̃_i together with its stream position i."""

    model_config = ConfigDict(frozen=True)

    params: PcgParams
    x_tilde: int = Field(ge=0)
    index: int = Field(ge=0)

    @model_validator(mode="after")
    def check_range(self) -> "PcgState":
        if self.x_tilde >= self.params.modulus:
            raise ValueError(
                f"x_tilde={self.x_tilde} is outside [0, {self.params.modulus})"
            )
        return self
