from pathlib import Path

from src.core.exceptions import ComputationError, ConfigValidationError


class ExposureError(ConfigValidationError):
    def __init__(self, name: str, exposure: float):
        super().__init__(
            detail=(
                f"Exposure of obligor {name} is {exposure}; exposures must lie in (0, 1], "
                "enable auto-normalisation to divide by the largest one"
            )
        )


class LengthMismatchError(ConfigValidationError):
    def __init__(self, expected: int, got: int):
        super().__init__(
            detail=f"Expected one idiosyncratic variate per obligor ({expected}), got {got}"
        )


class MeasureSpecError(ConfigValidationError):
    def __init__(self, reason: str):
        super().__init__(detail=f"Invalid risk measure: {reason}")


class EmptyTailError(ComputationError):
    def __init__(self, l_alpha: float):
        super().__init__(detail=f"No sampled loss exceeds L_alpha={l_alpha}; CVaR is undefined")


class PortfolioFileError(ConfigValidationError):
    def __init__(self, path: Path, reason: str):
        super().__init__(detail=f"Cannot load portfolio {path}: {reason}")


class UnbracketedQuantileError(ComputationError):
    def __init__(self, upper: float, tail: float, alpha: float):
        super().__init__(
            detail=f"VaR search bracket does not close: tail at {upper} is {tail} > alpha={alpha}"
        )
