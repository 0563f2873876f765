import math
from src.core.compat import StrEnum

from pydantic import BaseModel, ConfigDict, Field

from src.integrator.schemas import TermParams


class Method(StrEnum):
    """How the expectation over the PRN samples is evaluated."""

    CLASSICAL = "classical"
    PREVIOUS = "previous"
    NEW = "new"


class RiskMeasureKind(StrEnum):
    VAR = "var"
    CVAR = "cvar"


class Obligor(TermParams):
    """One Merton-model obligor, the c_i of the loss integrand.

    Attributes:
        exposure: Normalised exposure E_i in (0, 1]
        alpha: Loading α_i on the common factor, 0 <= α_i < 1
        z: Default threshold z_i; obligor i defaults when Z_i < z_i
        name: Optional label carried through from the portfolio file
    """

    exposure: float = Field(gt=0.0, le=1.0)
    alpha: float = Field(ge=0.0, lt=1.0)
    z: float
    name: str | None = None

    @property
    def idiosyncratic_loading(self) -> float:
        return math.sqrt(1.0 - self.alpha * self.alpha)


class PortfolioSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    obligors: tuple[Obligor, ...] = Field(min_length=1)

    @property
    def n_obl(self) -> int:
        return len(self.obligors)

    @property
    def total_exposure(self) -> float:
        return math.fsum(obligor.exposure for obligor in self.obligors)


class RiskMeasureSpec(BaseModel):
    """Payoff g of the risk measure.

    Attributes:
        kind: VaR uses g(L) = Θ(L_α, L), CVaR uses g(L) = C·L·Θ(L_α, L)
        alpha: Tail probability level
        l_alpha: Loss threshold L_α
        normalization: C; defaults to 1/ΣE_i so that g <= 1
    """

    model_config = ConfigDict(frozen=True)

    kind: RiskMeasureKind = RiskMeasureKind.VAR
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    l_alpha: float | None = None
    normalization: float | None = Field(default=None, gt=0.0)
