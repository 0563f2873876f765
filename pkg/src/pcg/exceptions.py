from src.core.exceptions import ConfigValidationError


class SeedOutOfRangeError(ConfigValidationError):
    def __init__(self, seed: int, modulus: int):
        super().__init__(
            detail=f"Seed {seed} is outside the LCG state range [0, {modulus})"
        )


class StreamIndexError(ConfigValidationError):
    def __init__(self, index: int):
        super().__init__(
            detail=f"Stream index must be a positive integer (the stream is 1-indexed), got {index}"
        )
