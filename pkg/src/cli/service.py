import logging
import math

import numpy as np
from pydantic import BaseModel, Field

from src.cli.report import LineTag, ReportLine, TableData
from src.cli.schemas import Command, RunSpec
from src.core.exceptions import ComputationError
from src.credit.repository import PortfolioRepository
from src.credit.schemas import Method, PortfolioSpec, RiskMeasureKind, RiskMeasureSpec
from src.credit.service import (
    cvar,
    loss_sample,
    payoff_cap_outcomes,
    search_tolerance,
    tail_prob,
    to_separable,
    var_search,
)
from src.distributions.inverse_cdf import NORMAL_QUANTILE
from src.distributions.service import normal_from_word, uniform_from_word, zero_uniform_count
from src.integrator.estimators import (
    clamp_counts,
    e_samp,
    error_bound,
    error_curve,
    inner_qubits_for_tolerance,
    outer_pmf,
    p1_new,
    query_counts,
    run_end_to_end,
    taylor_prediction,
)
from src.integrator.exceptions import BoundUnavailableError
from src.integrator.schemas import ErrorCurvePoint, SeparableIntegrand
from src.integrator.synthetic import SYNTHETIC_INTEGRANDS, constant_integrand
from src.pcg.generator import stream_element, stream_words
from src.qae.kernel import (
    amplitude_from_theta,
    fold,
    h_closed,
    h_direct,
    h_leading,
    h_product,
    qae_confidence,
    qae_pmf,
    qae_sample_many,
    second_moment,
    theta_from_amplitude,
)
from src.qae.schemas import QaeGrid
from src.resources.cost_model import cost_breakdown, cost_report, register_inventory
from src.resources.schemas import CircuitMethod
from src.verification.exceptions import VerificationFailedError
from src.verification.service import VerificationService

ERROR_CURVE_FILENAME = "error_vs_m.tsv"


class CommandResult(BaseModel):
    """Everything a command produces before it is written to disk."""

    lines: list[ReportLine] = Field(default_factory=list)
    results: dict = Field(default_factory=dict)
    tables: dict[str, TableData] = Field(default_factory=dict)

    def add(self, tag: LineTag, key: str, value, note: str = "") -> None:
        self.lines.append(ReportLine(tag=tag, key=key, value=value, note=note))
        self.results[key] = value


def sort_quantile(losses: np.ndarray, alpha: float) -> float:
    """Empirical (1 − alpha)-quantile: the smallest sample loss x with P(L > x) <= alpha."""
    ordered = np.sort(losses)
    count = ordered.size
    return float(ordered[count - math.floor(alpha * count) - 1])


def _shot_statistics(estimates: list[float], p1: float, grid: QaeGrid) -> dict:
    if not estimates:
        return {"shots": 0}
    theta = theta_from_amplitude(p1)
    thetas = np.arcsin(np.sqrt(np.asarray(estimates))) / np.pi
    within = int(np.count_nonzero(np.abs(thetas - theta) < 1.0 / grid.M))
    return {
        "shots": len(estimates),
        "mean": float(np.mean(estimates)),
        "std": float(np.std(estimates)),
        "within_1_over_m": within / len(estimates),
    }


class RunService:
    """Dispatches a validated RunSpec to the pipeline of its command."""

    def __init__(self, spec: RunSpec):
        self.spec = spec
        self.rng = np.random.default_rng(spec.rng_seed)
        self.logger = logging.getLogger(__name__)

    def run(self) -> CommandResult:
        handlers = {
            Command.PCG_CHECK: self.pcg_check,
            Command.QAE: self.qae,
            Command.SIMULATE: self.simulate,
            Command.VAR: self.var,
            Command.CVAR: self.cvar,
            Command.TCOUNT: self.tcount,
            Command.VERIFY: self.verify,
        }
        self.logger.info(f"Running {self.spec.command.value}")
        return handlers[self.spec.command]()

    def load_portfolio(self) -> PortfolioSpec:
        section = self.spec.portfolio
        if section is None:
            raise ComputationError(detail="no portfolio configured")
        if section.path is not None:
            return PortfolioRepository(section.path).load(auto_normalize=section.auto_normalize)
        return PortfolioSpec(obligors=tuple(section.obligors))

    def credit_measure(self) -> RiskMeasureSpec:
        measure = self.spec.measure
        return RiskMeasureSpec(
            kind=measure.kind,
            alpha=measure.alpha,
            l_alpha=measure.l_alpha,
            normalization=measure.normalization,
        )

    def build_integrand(self) -> SeparableIntegrand:
        section = self.spec.integrand
        binding = self.spec.binding
        if section.kind == "credit":
            measure = self.spec.measure
            if measure.l_alpha is None:
                raise ComputationError(detail="integrand.kind=credit needs measure.l_alpha")
            return to_separable(self.load_portfolio(), self.credit_measure(), binding)
        if section.kind == "constant":
            return constant_integrand(section.dimension, section.level, stream=binding)
        return SYNTHETIC_INTEGRANDS[section.kind](
            section.dimension, section.weight, section.bias, stream=binding
        )

    def add_clamps(self, result: CommandResult, integrand: SeparableIntegrand) -> None:
        """Echo every value the run clamped instead of rejecting."""
        spec = self.spec
        clamps = clamp_counts(integrand, spec.run)
        notes = {
            "zero_uniforms": f"u = 0 replaced by 2^-{spec.fixed_point.n_dig + 1}",
            "s_j_clamped": "S_j capped at 1",
            "payoff_outcomes_clamped": "g~ clipped to [0, 1]",
            "p1_clamped": "p1 clipped to [0, 1]",
        }
        for key, value in clamps.model_dump().items():
            result.add(LineTag.DIAG, key, value, notes[key])
        if spec.integrand.kind == "credit":
            result.add(
                LineTag.DIAG,
                "payoff_cap_outcomes",
                payoff_cap_outcomes(self.load_portfolio(), self.credit_measure(), spec.run.inner_grid),
                "inner outcomes with C*L capped at 1",
            )

    def add_search_tolerance(self, result: CommandResult, portfolio: PortfolioSpec) -> None:
        measure = self.spec.measure
        effective = search_tolerance(portfolio, measure.tol, measure.method)
        note = "raised to float spacing" if effective > measure.tol else ""
        result.add(LineTag.DIAG, "tol", measure.tol)
        result.add(LineTag.DIAG, "tol_effective", effective, note)

    def add_zero_uniforms(self, result: CommandResult, portfolio: PortfolioSpec) -> None:
        spec = self.spec
        count = spec.run.n_samples * (portfolio.n_obl + 1)
        result.add(
            LineTag.DIAG,
            "zero_uniforms",
            zero_uniform_count(spec.binding, 1, count),
            f"u = 0 replaced by 2^-{spec.fixed_point.n_dig + 1}",
        )

    def pcg_check(self) -> CommandResult:
        """Stream words by jump and by progress side by side, with their variates."""
        spec = self.spec
        params, x0 = spec.pcg.params, spec.pcg.seed
        start, count = spec.pcg_check.start, spec.pcg_check.count
        result = CommandResult()
        rows = []
        mismatches = 0
        for offset, word in enumerate(stream_words(params, x0, start, count)):
            index = start + offset
            jumped = stream_element(params, x0, index)
            mismatches += jumped != word
            rows.append(
                [
                    index,
                    f"0x{word:0{(params.state_bits + 3) // 4}x}",
                    jumped == word,
                    uniform_from_word(word, params.state_bits, spec.fixed_point.n_dig),
                    normal_from_word(word, params.state_bits, spec.fixed_point),
                ]
            )
        result.tables["stream.tsv"] = TableData(
            header=["index", "word", "jump_equals_progress", "uniform", "normal"], rows=rows
        )
        result.results["stream"] = [dict(zip(result.tables["stream.tsv"].header, row)) for row in rows]
        result.add(LineTag.DIAG, "elements_checked", count)
        result.add(LineTag.DIAG, "jump_progress_mismatches", mismatches)
        result.add(
            LineTag.DIAG,
            "zero_uniforms_clamped",
            zero_uniform_count(spec.binding, start, count),
            f"u = 0 replaced by 2^-{spec.fixed_point.n_dig + 1}",
        )
        return result

    def qae(self) -> CommandResult:
        section = self.spec.qae
        grid = QaeGrid(m=section.m)
        if section.theta is not None:
            theta = section.theta
        else:
            theta = theta_from_amplitude(section.amplitude if section.amplitude is not None else 0.5)
        pmf = qae_pmf(theta, grid)
        result = CommandResult()
        result.add(LineTag.DIAG, "theta", theta)
        result.add(LineTag.DIAG, "amplitude", float(amplitude_from_theta(theta)))
        result.add(LineTag.DIAG, "M", grid.M)
        result.add(LineTag.DIAG, "mode", pmf.mode)
        result.add(LineTag.REF, "confidence", qae_confidence(theta, grid), "bound 8/pi^2")
        result.add(LineTag.DIAG, "h_direct", h_direct(theta, grid))
        result.add(LineTag.DIAG, "h_closed", h_closed(theta, grid))
        result.add(LineTag.DIAG, "h_product", h_product(theta, grid))
        result.add(LineTag.DIAG, "h_leading", h_leading(theta, grid))
        result.add(LineTag.DIAG, "second_moment", second_moment(theta, grid))
        if self.spec.shots:
            outcomes = fold(qae_sample_many(theta, grid, self.rng, self.spec.shots))
            within = float(np.mean(np.abs(outcomes - min(theta, 1.0 - theta)) < 1.0 / grid.M))
            result.add(LineTag.DIAG, "shots", self.spec.shots)
            result.add(LineTag.DIAG, "sampled_within_1_over_m", within)
        result.tables["pmf.tsv"] = TableData(
            header=["theta_tilde", "probability"],
            rows=[[float(x), float(p)] for x, p in zip(grid.points, pmf.probs)],
        )
        return result

    def simulate(self) -> CommandResult:
        spec = self.spec
        cfg = spec.run
        integrand = self.build_integrand()
        result = CommandResult()
        exact = e_samp(integrand, cfg)
        p1 = p1_new(integrand, cfg)
        result.add(LineTag.DIAG, "integrand", integrand.name)
        result.add(LineTag.DIAG, "D", integrand.dimension)
        result.add(LineTag.DIAG, "N_samp", cfg.n_samples)
        result.add(LineTag.DIAG, "M_inner", cfg.inner_grid.M)
        result.add(LineTag.DIAG, "M_outer", cfg.outer_grid.M)
        result.add(LineTag.DIAG, "E_samp", exact)
        result.add(LineTag.DIAG, "p1", p1)
        result.add(LineTag.DIAG, "abs_error", abs(p1 - exact))
        try:
            result.add(LineTag.DIAG, "error_bound", error_bound(integrand, cfg))
            result.add(LineTag.DIAG, "first_order", taylor_prediction(integrand, cfg, 1))
            if integrand.payoff_second_derivative is not None:
                result.add(LineTag.DIAG, "second_order", taylor_prediction(integrand, cfg, 2))
        except BoundUnavailableError as e:
            result.add(LineTag.DIAG, "error_bound", None, e.detail)

        self.add_clamps(result, integrand)

        counts = query_counts(cfg, integrand.dimension)
        result.add(LineTag.DIAG, "N_f_prev", counts.n_f_prev)
        result.add(LineTag.DIAG, "N_f_new", counts.n_f_new)
        result.add(LineTag.DIAG, "query_reduction", counts.reduction)
        resources = spec.resources
        result.add(
            LineTag.DIAG,
            "m_inner_for_tolerance",
            inner_qubits_for_tolerance(resources.typical_scale, resources.delta_rel),
            "smallest m with 2^m >= 1/(l*delta_rel)",
        )

        pmf = outer_pmf(p1, cfg)
        result.add(LineTag.DIAG, "outer_mode", pmf.mode)
        estimates = run_end_to_end(integrand, cfg, self.rng, spec.shots)
        for key, value in _shot_statistics(estimates, p1, cfg.outer_grid).items():
            result.add(LineTag.DIAG, f"end_to_end_{key}", value)

        curve = error_curve(integrand, cfg, spec.sweep.m_values)
        result.tables[ERROR_CURVE_FILENAME] = TableData(
            header=list(ErrorCurvePoint.model_fields),
            rows=[list(point.model_dump().values()) for point in curve],
        )
        result.results["error_curve"] = [point.model_dump() for point in curve]
        return result

    def var(self) -> CommandResult:
        spec = self.spec
        measure = spec.measure
        portfolio = self.load_portfolio()
        binding = spec.binding
        result = CommandResult()
        l_alpha = var_search(portfolio, measure.alpha, spec.run, measure.tol, measure.method, binding)
        oracle = sort_quantile(loss_sample(portfolio, binding, spec.run.n_samples), measure.alpha)
        result.add(LineTag.DIAG, "N_obl", portfolio.n_obl)
        result.add(LineTag.DIAG, "N_samp", spec.run.n_samples)
        result.add(LineTag.DIAG, "alpha", measure.alpha)
        result.add(LineTag.DIAG, "method", measure.method.value)
        result.add(LineTag.DIAG, "VaR", l_alpha)
        result.add(LineTag.DIAG, "tail_prob_at_VaR", tail_prob(portfolio, l_alpha, spec.run, measure.method, binding))
        result.add(LineTag.DIAG, "sort_quantile", oracle)
        self.add_search_tolerance(result, portfolio)
        self.add_zero_uniforms(result, portfolio)
        return result

    def cvar(self) -> CommandResult:
        spec = self.spec
        measure = spec.measure
        portfolio = self.load_portfolio()
        binding = spec.binding
        result = CommandResult()
        losses = loss_sample(portfolio, binding, spec.run.n_samples)
        l_alpha = measure.l_alpha
        if l_alpha is None:
            l_alpha = var_search(portfolio, measure.alpha, spec.run, measure.tol, measure.method, binding)
            result.add(LineTag.DIAG, "VaR", l_alpha, "from bisection")
            self.add_search_tolerance(result, portfolio)
        value = cvar(portfolio, l_alpha, spec.run, measure.method, binding, measure.normalization)
        tail = losses[losses > l_alpha]
        result.add(LineTag.DIAG, "method", measure.method.value)
        result.add(LineTag.DIAG, "L_alpha", l_alpha)
        result.add(LineTag.DIAG, "CVaR", value)
        result.add(LineTag.DIAG, "oracle_tail_mean", float(np.mean(tail)) if tail.size else None)
        self.add_zero_uniforms(result, portfolio)
        if measure.method is Method.NEW:
            capped = payoff_cap_outcomes(
                portfolio,
                RiskMeasureSpec(
                    kind=RiskMeasureKind.CVAR, l_alpha=l_alpha, normalization=measure.normalization
                ),
                spec.run.inner_grid,
            )
            result.add(LineTag.DIAG, "payoff_cap_outcomes", capped, "inner outcomes with C*L capped at 1")
        return result

    def tcount(self) -> CommandResult:
        resources = self.spec.resources
        params = resources.params
        report = cost_report(params, resources.typical_scale, resources.delta_rel, resources.dimension)
        result = CommandResult()
        result.add(LineTag.REF, "T_one_prev", report.t_one_prev, f"quoted {report.rounded_t_one_prev:.1e}")
        result.add(LineTag.REF, "T_one_new", report.t_one_new, f"quoted {report.rounded_t_one_new:.1e}")
        result.add(LineTag.REF, "ratio_one", report.ratio_one, f"quoted {report.rounded_ratio_one}")
        result.add(LineTag.REF, "query_reduction", report.query_reduction, f"quoted {report.rounded_query_reduction:g}")
        result.add(LineTag.REF, "total_ratio", report.total_ratio, f"quoted {report.rounded_total_ratio:g}")
        result.add(LineTag.DIAG, "rounded_ratio_one", report.rounded_ratio_one)
        result.add(LineTag.DIAG, "rounded_query_reduction", report.rounded_query_reduction)
        result.add(LineTag.DIAG, "rounded_total_ratio", report.rounded_total_ratio)
        result.add(LineTag.DIAG, "n_exp", params.n_exp)
        result.add(
            LineTag.DIAG,
            "n_icdf_implemented",
            NORMAL_QUANTILE.n_icdf,
            f"intervals of the simulated inverse CDF; the cost model uses n_icdf={params.n_icdf}",
        )
        rows = []
        for method in CircuitMethod:
            for term in cost_breakdown(params, method):
                rows.append([method.value, term.component, term.formula, term.count, term.t_count])
        result.tables["cost_breakdown.tsv"] = TableData(
            header=["method", "component", "formula", "count", "t_count"], rows=rows
        )
        registers = [
            [method.value, register.name, register.width, register.role]
            for method in CircuitMethod
            for register in register_inventory(method, params)
        ]
        result.tables["registers.tsv"] = TableData(
            header=["method", "register", "width", "role"], rows=registers
        )
        result.results["registers"] = {
            method.value: [register.model_dump() for register in register_inventory(method, params)]
            for method in CircuitMethod
        }
        return result

    def verify(self) -> CommandResult:
        section = self.spec.verify
        report = VerificationService(
            rng_seed=self.spec.rng_seed,
            param_sets=section.param_sets,
            max_jump=section.max_jump,
            n_theta=section.n_theta,
            max_qubits=section.max_qubits,
        ).run_all()
        result = CommandResult()
        for check in report.checks:
            result.add(
                LineTag.DIAG,
                check.name,
                "pass" if check.passed else "FAIL",
                f"{check.cases - check.failures}/{check.cases}, max deviation {check.max_deviation:.3e}",
            )
        result.add(LineTag.DIAG, "passed", report.passed_count)
        result.add(LineTag.DIAG, "failed", report.failed_count)
        result.results["checks"] = [check.model_dump() for check in report.checks]
        return result

    def check_outcome(self, result: CommandResult) -> None:
        """Raise after the report is written when a verification run found violations."""
        if self.spec.command is Command.VERIFY and result.results.get("failed", 0):
            raise VerificationFailedError(result.results["failed"])
