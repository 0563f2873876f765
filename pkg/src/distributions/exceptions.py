from src.core.exceptions import ConfigValidationError


class PrecisionError(ConfigValidationError):
    def __init__(self, n_dig: int, n_prn: int):
        super().__init__(
            detail=f"n_dig={n_dig} cannot exceed the PRN word width n_PRN={n_prn}"
        )


class UniformDomainError(ConfigValidationError):
    def __init__(self, u: float):
        super().__init__(detail=f"Inverse normal CDF needs 0 < u < 1, got {u}")


class TermIndexError(ConfigValidationError):
    def __init__(self, i: int, j: int, dimension: int):
        super().__init__(
            detail=f"Term index must satisfy 1 <= i <= D={dimension} and j >= 1, got i={i}, j={j}"
        )
