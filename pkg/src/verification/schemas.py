from pydantic import BaseModel, computed_field


class CheckResult(BaseModel):
    """Outcome of one invariant check.

    Attributes:
        name: Short identifier used in reports
        cases: Number of instances evaluated
        failures: Instances violating the invariant
        max_deviation: Largest deviation observed, in the check's own units
        tolerance: Allowed deviation
    """

    name: str
    cases: int
    failures: int
    max_deviation: float = 0.0
    tolerance: float = 0.0

    @computed_field
    @property
    def passed(self) -> bool:
        return self.failures == 0


class VerificationReport(BaseModel):
    checks: list[CheckResult]

    @computed_field
    @property
    def passed_count(self) -> int:
        return sum(check.passed for check in self.checks)

    @computed_field
    @property
    def failed_count(self) -> int:
        return len(self.checks) - self.passed_count
