from src.core.exceptions import ConfigValidationError


class AmplitudeDomainError(ConfigValidationError):
    def __init__(self, amplitude: float):
        super().__init__(detail=f"Amplitude must lie in [0, 1], got {amplitude}")
