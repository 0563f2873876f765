import logging
import math

import numpy as np
from scipy.special import ndtri

from src.core.config import settings
from src.distributions.service import inv_normal_cdf
from src.pcg.generator import inverse_output, jump, output, progress, seed
from src.pcg.schemas import PcgParams, Permutation
from src.qae.kernel import (
    CONFIDENCE_FLOOR,
    h_closed,
    h_direct,
    h_product,
    qae_confidence,
    qae_pmf,
)
from src.qae.schemas import QaeGrid
from src.verification.schemas import CheckResult, VerificationReport

H_TOLERANCE = 1e-9
PMF_TOLERANCE = 1e-12
QUANTILE_TOLERANCE = 1e-6
DENSE_PREFIX = 256


def _random_word(rng: np.random.Generator, bits: int = 64) -> int:
    return int.from_bytes(rng.bytes(8), "little") & ((1 << bits) - 1)


class VerificationService:
    """Runs the generator, kernel and quantile invariants over randomized inputs.

    Every check draws its inputs from one seeded numpy Generator, so a report is
    reproducible from ``rng_seed`` alone.
    """

    def __init__(
        self,
        rng_seed: int = settings.RNG_SEED,
        param_sets: int = settings.VERIFY_PARAM_SETS,
        max_jump: int = settings.VERIFY_MAX_JUMP,
        n_theta: int = 1000,
        max_qubits: int = 10,
    ):
        self.rng = np.random.default_rng(rng_seed)
        self.param_sets = param_sets
        self.max_jump = max_jump
        self.n_theta = n_theta
        self.max_qubits = max_qubits
        self.logger = logging.getLogger(__name__)

    def _random_params(self) -> tuple[PcgParams, int]:
        a = _random_word(self.rng) | 1
        if a == 1:
            a = 3
        params = PcgParams(a=a, c=_random_word(self.rng), state_bits=64)
        return params, _random_word(self.rng)

    def _off_grid_pairs(self) -> list[tuple[float, QaeGrid]]:
        pairs = []
        while len(pairs) < self.n_theta:
            theta = float(self.rng.uniform(0.0, 0.5))
            grid = QaeGrid(m=int(self.rng.integers(2, self.max_qubits + 1)))
            scaled = theta * grid.M
            if abs(scaled - round(scaled)) > 1e-6:
                pairs.append((theta, grid))
        return pairs

    def check_jump_matches_progress(self) -> CheckResult:
        """jump(x0, i) equals i progress steps; every index up to 256, then a stride."""
        checkpoints = set(range(DENSE_PREFIX + 1)) | set(range(0, self.max_jump + 1, 97))
        checkpoints.add(self.max_jump)
        cases = failures = 0
        for _ in range(self.param_sets):
            params, x0 = self._random_params()
            state = seed(params, x0)
            for i in range(self.max_jump + 1):
                if i in checkpoints:
                    cases += 1
                    if jump(params, x0, i).x_tilde != state.x_tilde:
                        failures += 1
                state = progress(state)
        return CheckResult(name="jump_equals_progress", cases=cases, failures=failures)

    def check_output_bijective(self) -> CheckResult:
        cases = failures = 0
        for perm in Permutation:
            for _ in range(self.param_sets):
                params = PcgParams(perm=perm)
                word = _random_word(self.rng)
                state = seed(params, word)
                cases += 1
                if inverse_output(params, output(state)) != word:
                    failures += 1
        return CheckResult(name="output_permutation_bijective", cases=cases, failures=failures)

    def check_pmf_normalized(self) -> CheckResult:
        worst = 0.0
        cases = failures = 0
        for m in range(2, self.max_qubits + 1):
            grid = QaeGrid(m=m)
            for theta in self.rng.uniform(0.0, 1.0, size=self.n_theta // 10):
                deviation = abs(math.fsum(qae_pmf(float(theta), grid).probs) - 1.0)
                worst = max(worst, deviation)
                cases += 1
                failures += deviation > PMF_TOLERANCE
        return CheckResult(
            name="pmf_normalized",
            cases=cases,
            failures=failures,
            max_deviation=worst,
            tolerance=PMF_TOLERANCE,
        )

    def check_h_closed_form(self) -> CheckResult:
        worst = 0.0
        failures = 0
        pairs = self._off_grid_pairs()
        for theta, grid in pairs:
            direct = h_direct(theta, grid)
            deviation = max(
                abs(h_closed(theta, grid) - direct), abs(h_product(theta, grid) - direct)
            )
            worst = max(worst, deviation)
            failures += deviation > H_TOLERANCE
        return CheckResult(
            name="h_closed_matches_direct",
            cases=len(pairs),
            failures=failures,
            max_deviation=worst,
            tolerance=H_TOLERANCE,
        )

    def check_h_bound(self) -> CheckResult:
        """max |H|·M stays at or below one."""
        worst = 0.0
        failures = 0
        pairs = self._off_grid_pairs()
        for theta, grid in pairs:
            scaled = abs(h_direct(theta, grid)) * grid.M
            worst = max(worst, scaled)
            failures += scaled > 1.0 + H_TOLERANCE
        return CheckResult(
            name="h_times_m_bounded",
            cases=len(pairs),
            failures=failures,
            max_deviation=worst,
            tolerance=1.0 + H_TOLERANCE,
        )

    def check_confidence_floor(self) -> CheckResult:
        """Folded outcomes land within 1/M of θ with probability >= 8/π²."""
        thetas = self.rng.uniform(0.0, 0.5, size=self.n_theta)
        cases = failures = 0
        worst = 1.0
        for m in range(2, self.max_qubits + 1):
            grid = QaeGrid(m=m)
            for theta in thetas:
                confidence = qae_confidence(float(theta), grid)
                worst = min(worst, confidence)
                cases += 1
                failures += confidence < CONFIDENCE_FLOOR
        return CheckResult(
            name="confidence_above_8_over_pi2",
            cases=cases,
            failures=failures,
            max_deviation=CONFIDENCE_FLOOR - worst,
            tolerance=0.0,
        )

    def check_inverse_cdf(self) -> CheckResult:
        u = np.linspace(1e-6, 1.0 - 1e-6, 100_000)
        deviation = np.abs(inv_normal_cdf(u) - ndtri(u))
        failures = int(np.count_nonzero(deviation > QUANTILE_TOLERANCE))
        return CheckResult(
            name="inverse_cdf_accuracy",
            cases=u.size,
            failures=failures,
            max_deviation=float(deviation.max()),
            tolerance=QUANTILE_TOLERANCE,
        )

    def run_all(self) -> VerificationReport:
        checks = [
            self.check_jump_matches_progress(),
            self.check_output_bijective(),
            self.check_pmf_normalized(),
            self.check_h_closed_form(),
            self.check_h_bound(),
            self.check_confidence_floor(),
            self.check_inverse_cdf(),
        ]
        for check in checks:
            level = logging.INFO if check.passed else logging.ERROR
            self.logger.log(
                level, f"{check.name}: {check.cases - check.failures}/{check.cases} passed"
            )
        return VerificationReport(checks=checks)
