from src.core.exceptions import ComputationError


class VerificationFailedError(ComputationError):
    def __init__(self, failed: int):
        super().__init__(detail=f"{failed} invariant check(s) failed; see report.tsv")
