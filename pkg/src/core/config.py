from pathlib import Path

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .version import __version__


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(
        env_file=str(Path(__file__).parent.parent.parent / ".env"),
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # Basic settings
    APP_NAME: str = "Nested QAE Desk"
    APP_VERSION: str = __version__

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Reports
    OUTPUT_DIR: Path = Path("results")
    REPORT_DELIMITER: str = "\t"

    # PCG defaults (64-bit published LCG constants)
    PCG_MULTIPLIER: int = 6364136223846793005
    PCG_INCREMENT: int = 1442695040888963407
    PCG_STATE_BITS: int = 64
    PCG_PERMUTATION: str = "xsh-rr"
    PCG_SEED: int = 42

    # Cost model widths of the reference workload
    N_DIG: int = 16
    N_ICDF: int = 109
    N_SAMP_BITS: int = 20
    N_OBL_BITS: int = 20

    # Tolerances of the query-reduction model
    TYPICAL_SCALE: float = 1e-2
    DELTA_REL: float = 1e-2

    # Simulation
    DEFAULT_SHOTS: int = 10_000
    RNG_SEED: int = 20240101

    # Verification sweep sizes
    VERIFY_PARAM_SETS: int = 100
    VERIFY_MAX_JUMP: int = 10_000

    @field_validator("PCG_MULTIPLIER", "PCG_INCREMENT", "PCG_SEED", mode="before")
    @classmethod
    def parse_integer_literal(cls, value):
        # PRN constants are often written in hex: "0x5851F42D4C957F2D"
        if isinstance(value, str):
            return int(value.strip(), 0)
        return value


# Create settings instance
settings = Settings()
