from src.core.exceptions import ComputationError, ConfigValidationError


class IntegrandRangeError(ComputationError):
    def __init__(self, what: str, value: float, where: str):
        super().__init__(
            detail=f"{what} must lie in [0, 1] to be amplitude-encoded, got {value} at {where}"
        )


class BoundUnavailableError(ComputationError):
    def __init__(self, reason: str):
        super().__init__(detail=f"Error bound unavailable: {reason}")


class SampleIndexError(ConfigValidationError):
    def __init__(self, j: int, n_samples: int | None = None):
        if n_samples is None:
            detail = f"Sample index must be at least 1, got {j}"
        else:
            detail = f"Sample index must satisfy 1 <= j <= N_samp={n_samples}, got {j}"
        super().__init__(detail=detail)
