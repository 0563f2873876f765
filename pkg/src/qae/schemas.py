import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

MAX_REGISTER_QUBITS = 24


class QaeGrid(BaseModel):
    """Measurement register of m qubits; outcomes I_M = {0/M, ..., (M−1)/M}."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1, le=MAX_REGISTER_QUBITS)

    @classmethod
    def of_size(cls, size: int) -> "QaeGrid":
        if size < 2 or size & (size - 1):
            raise ValueError(f"register size must be a power of two >= 2, got {size}")
        return cls(m=size.bit_length() - 1)

    @property
    def M(self) -> int:
        return 1 << self.m

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.M, dtype=np.float64) / self.M


class QaePmf(BaseModel):
    """Outcome distribution G(θ̃; θ, M) of one amplitude estimation."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: QaeGrid
    theta: float
    probs: np.ndarray

    @field_validator("probs")
    @classmethod
    def check_distribution(cls, probs: np.ndarray) -> np.ndarray:
        if np.any(probs < 0.0):
            raise ValueError("probabilities must be non-negative")
        total = math.fsum(probs)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        probs.setflags(write=False)
        return probs

    @property
    def mode(self) -> float:
        return float(np.argmax(self.probs)) / self.grid.M
