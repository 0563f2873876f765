class NestedQaeError(Exception):
    """Base error for every failure the command line reports.

    Attributes:
        detail: Human-readable description printed verbatim by the CLI
        exit_code: Process exit status associated with this error family
    """

    exit_code: int = 2

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ConfigValidationError(NestedQaeError):
    """Invalid parameters or config documents (exit status 1)."""

    exit_code = 1


class ComputationError(NestedQaeError):
    """Failure while running a validated pipeline (exit status 2)."""

    exit_code = 2
