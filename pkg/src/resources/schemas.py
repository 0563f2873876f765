from src.core.compat import StrEnum

from pydantic import BaseModel, ConfigDict, Field

from src.core.config import settings


class CircuitMethod(StrEnum):
    PREVIOUS = "previous"
    NEW = "new"


class ResourceParams(BaseModel):
    """Register widths entering the T-count model.

    Attributes:
        n_prn: PCG state bits n_PRN
        n_dig: Fixed-point fraction bits
        n_icdf: Number of inverse-CDF intervals
        n_samp: log₂ N_samp
        n_obl: log₂ N_obl (= log₂ D)
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_prn: int = Field(default=settings.PCG_STATE_BITS, ge=1)
    n_dig: int = Field(default=settings.N_DIG, ge=1)
    n_icdf: int = Field(default=settings.N_ICDF, ge=0)
    n_samp: int = Field(default=settings.N_SAMP_BITS, ge=1)
    n_obl: int = Field(default=settings.N_OBL_BITS, ge=1)

    @property
    def n_exp(self) -> int:
        """Bits of the jump exponent (j−1)(D+1)+i."""
        return self.n_samp + self.n_obl


class CostTerm(BaseModel):
    """One line of the T-count breakdown of a single f evaluation."""

    component: str
    formula: str
    count: int
    t_count: int


class RegisterDescriptor(BaseModel):
    name: str
    role: str
    width: int | None = None


class CostReport(BaseModel):
    t_one_prev: int
    t_one_new: int
    ratio_one: float
    query_reduction: float
    total_ratio: float
    rounded_t_one_prev: float
    rounded_t_one_new: float
    rounded_ratio_one: int
    rounded_query_reduction: float
    rounded_total_ratio: float
