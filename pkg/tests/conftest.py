import numpy as np
import pytest

from src.credit.schemas import Obligor, PortfolioSpec
from src.distributions.schemas import FixedPointSpec, StreamBinding
from src.integrator.schemas import RunConfig
from src.pcg.schemas import PcgParams

SMALL_A = 25173
SMALL_C = 13849


@pytest.fixture
def default_params() -> PcgParams:
    return PcgParams()


@pytest.fixture
def small_params() -> PcgParams:
    return PcgParams(a=SMALL_A, c=SMALL_C, state_bits=16)


@pytest.fixture
def binding() -> StreamBinding:
    return StreamBinding(seed=0x853C49E6748FEA9B)


@pytest.fixture
def fixed_point() -> FixedPointSpec:
    return FixedPointSpec()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def portfolio4() -> PortfolioSpec:
    """Dyadic exposures so every loss sum is exact in floating point."""
    return PortfolioSpec(
        obligors=(
            Obligor(exposure=1.0, alpha=0.5, z=-0.3, name="a"),
            Obligor(exposure=0.5, alpha=0.3, z=0.0, name="b"),
            Obligor(exposure=0.25, alpha=0.6, z=-0.5, name="c"),
            Obligor(exposure=0.75, alpha=0.0, z=0.2, name="d"),
        )
    )


@pytest.fixture
def portfolio8() -> PortfolioSpec:
    """Unit exposures: every loss is an integer in 0..8."""
    alphas = (0.2, 0.4, 0.5, 0.3, 0.6, 0.1, 0.45, 0.35)
    thresholds = (-0.2, 0.0, -0.4, 0.1, -0.1, -0.3, 0.2, -0.5)
    return PortfolioSpec(
        obligors=tuple(
            Obligor(exposure=1.0, alpha=alpha, z=z, name=f"ob{i}")
            for i, (alpha, z) in enumerate(zip(alphas, thresholds), start=1)
        )
    )


@pytest.fixture
def cfg4() -> RunConfig:
    return RunConfig(n_samples=4, m_inner=6, m_outer=6)


@pytest.fixture
def cfg16() -> RunConfig:
    return RunConfig(n_samples=16, m_inner=6, m_outer=6)
