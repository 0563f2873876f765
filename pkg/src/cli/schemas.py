from src.core.compat import StrEnum
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.config import settings
from src.credit.schemas import Method, Obligor, RiskMeasureKind
from src.distributions.schemas import FixedPointSpec, StreamBinding
from src.integrator.schemas import RunConfig
from src.pcg.schemas import PcgParams, parse_integer_literal
from src.qae.schemas import MAX_REGISTER_QUBITS
from src.resources.schemas import ResourceParams


class Command(StrEnum):
    PCG_CHECK = "pcg-check"
    QAE = "qae"
    SIMULATE = "simulate"
    VAR = "var"
    CVAR = "cvar"
    TCOUNT = "tcount"
    VERIFY = "verify"


class Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class PcgSection(Section):
    """Generator constants and seed; integers may be given as "0x..." strings."""

    a: int = settings.PCG_MULTIPLIER
    c: int = settings.PCG_INCREMENT
    state_bits: int = settings.PCG_STATE_BITS
    perm: str = settings.PCG_PERMUTATION
    seed: int = Field(default=settings.PCG_SEED, ge=0)

    @field_validator("a", "c", "seed", mode="before")
    @classmethod
    def parse_literal(cls, value):
        return parse_integer_literal(value)

    @model_validator(mode="after")
    def check_constants(self) -> "PcgSection":
        self.params  # raises on invalid LCG constants
        return self

    @property
    def params(self) -> PcgParams:
        return PcgParams(a=self.a, c=self.c, state_bits=self.state_bits, perm=self.perm)


class PcgCheckSection(Section):
    start: int = Field(default=1, ge=1)
    count: int = Field(default=8, ge=1, le=100_000)


class QaeSection(Section):
    """Either an amplitude a = sin²(θπ) or the phase θ itself."""

    amplitude: float | None = Field(default=None, ge=0.0, le=1.0)
    theta: float | None = Field(default=None, ge=0.0, le=1.0)
    m: int = Field(default=6, ge=1, le=MAX_REGISTER_QUBITS)

    @model_validator(mode="after")
    def check_one_input(self) -> "QaeSection":
        if self.amplitude is not None and self.theta is not None:
            raise ValueError("give either qae.amplitude or qae.theta, not both")
        return self


class IntegrandSection(Section):
    kind: Literal["constant", "linear", "smooth", "credit"] = "smooth"
    dimension: int = Field(default=16, ge=1, le=4096)
    weight: float = Field(default=0.5, ge=-1.0, le=1.0)
    bias: float = -0.85
    level: float = Field(default=0.25, ge=0.0, le=1.0)


class PortfolioSection(Section):
    """Portfolio file (CSV with exposure, alpha, z[, name]) or inline obligors."""

    path: Path | None = None
    obligors: list[Obligor] | None = None
    auto_normalize: bool = False

    @model_validator(mode="after")
    def check_source(self) -> "PortfolioSection":
        if (self.path is None) == (self.obligors is None):
            raise ValueError("give exactly one of portfolio.path and portfolio.obligors")
        if self.path is not None and not self.path.is_file():
            raise ValueError(f"portfolio file {self.path} does not exist")
        return self


class MeasureSection(Section):
    kind: RiskMeasureKind = RiskMeasureKind.VAR
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    l_alpha: float | None = None
    normalization: float | None = Field(default=None, gt=0.0)
    tol: float = Field(default=1e-6, gt=0.0)
    method: Method = Method.CLASSICAL


class ResourceSection(ResourceParams):
    typical_scale: float = Field(default=settings.TYPICAL_SCALE, gt=0.0)
    delta_rel: float = Field(default=settings.DELTA_REL, gt=0.0)
    dimension: int | None = Field(default=None, ge=1)

    @property
    def params(self) -> ResourceParams:
        return ResourceParams(
            n_prn=self.n_prn,
            n_dig=self.n_dig,
            n_icdf=self.n_icdf,
            n_samp=self.n_samp,
            n_obl=self.n_obl,
        )


class SweepSection(Section):
    m_values: list[int] = Field(default_factory=lambda: [5, 6, 7, 8, 9, 10])

    @field_validator("m_values")
    @classmethod
    def check_register_sizes(cls, values: list[int]) -> list[int]:
        for m in values:
            if not 1 <= m <= MAX_REGISTER_QUBITS:
                raise ValueError(f"register size m={m} is outside 1..{MAX_REGISTER_QUBITS}")
        return values


class VerifySection(Section):
    param_sets: int = Field(default=settings.VERIFY_PARAM_SETS, ge=1)
    max_jump: int = Field(default=settings.VERIFY_MAX_JUMP, ge=1)
    n_theta: int = Field(default=1000, ge=10)
    max_qubits: int = Field(default=10, ge=2, le=16)


class RunSpec(Section):
    """A validated command plus every config section, defaults filled in.

    Sections a command does not use are still validated, so one document can
    drive several commands.
    """

    command: Command
    pcg: PcgSection = Field(default_factory=PcgSection)
    fixed_point: FixedPointSpec = Field(default_factory=FixedPointSpec)
    run: RunConfig = Field(default_factory=RunConfig)
    pcg_check: PcgCheckSection = Field(default_factory=PcgCheckSection)
    qae: QaeSection = Field(default_factory=QaeSection)
    integrand: IntegrandSection = Field(default_factory=IntegrandSection)
    portfolio: PortfolioSection | None = None
    measure: MeasureSection = Field(default_factory=MeasureSection)
    resources: ResourceSection = Field(default_factory=ResourceSection)
    sweep: SweepSection = Field(default_factory=SweepSection)
    verify: VerifySection = Field(default_factory=VerifySection)
    shots: int = Field(default=settings.DEFAULT_SHOTS, ge=0)
    rng_seed: int = Field(default=settings.RNG_SEED, ge=0)
    output_dir: Path = settings.OUTPUT_DIR

    @field_validator("rng_seed", mode="before")
    @classmethod
    def parse_rng_seed(cls, value):
        return parse_integer_literal(value)

    @model_validator(mode="after")
    def check_cross_section(self) -> "RunSpec":
        if self.fixed_point.n_dig > self.pcg.state_bits:
            raise ValueError(
                f"fixed_point.n_dig={self.fixed_point.n_dig} exceeds "
                f"pcg.state_bits={self.pcg.state_bits}"
            )
        if self.pcg.seed >= 1 << self.pcg.state_bits:
            raise ValueError(
                f"pcg.seed={self.pcg.seed} is outside the range of pcg.state_bits={self.pcg.state_bits}"
            )
        if self.command in (Command.VAR, Command.CVAR) and self.portfolio is None:
            raise ValueError(f"command {self.command.value} needs a portfolio section")
        if (
            self.command is Command.SIMULATE
            and self.integrand.kind == "credit"
            and self.portfolio is None
        ):
            raise ValueError("integrand.kind=credit needs a portfolio section")
        return self

    @property
    def binding(self) -> StreamBinding:
        return StreamBinding(params=self.pcg.params, seed=self.pcg.seed, fixed_point=self.fixed_point)

    def summary_config(self) -> dict[str, Any]:
        """Effective configuration echoed into the summary, defaults included."""
        return self.model_dump(mode="json", exclude={"output_dir"})
