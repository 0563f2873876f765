"""Piecewise rational approximation of the standard normal quantile function.

Three pieces (lower tail, central region, upper tail) with relative error below
1.2e-9 over the open unit interval. The upper tail is evaluated by reflection,
Φ⁻¹(u) = −Φ⁻¹(1 − u), which keeps the approximation exactly antisymmetric.
"""
from typing import Callable

import numpy as np

from src.distributions.schemas import FixedPointSpec, InvCdfApprox, InvCdfInterval

TAIL_BREAKPOINT = 0.02425

CENTRAL_NUMERATOR = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
CENTRAL_DENOMINATOR = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
    1.0,
)
TAIL_NUMERATOR = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
TAIL_DENOMINATOR = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
    1.0,
)

NORMAL_QUANTILE = InvCdfApprox(
    intervals=(
        InvCdfInterval(
            upper=TAIL_BREAKPOINT,
            kind="tail_low",
            numerator=TAIL_NUMERATOR,
            denominator=TAIL_DENOMINATOR,
        ),
        InvCdfInterval(
            upper=1.0 - TAIL_BREAKPOINT,
            kind="central",
            numerator=CENTRAL_NUMERATOR,
            denominator=CENTRAL_DENOMINATOR,
        ),
        InvCdfInterval(
            upper=1.0,
            kind="tail_high",
            numerator=TAIL_NUMERATOR,
            denominator=TAIL_DENOMINATOR,
        ),
    )
)

Rounder = Callable[[np.ndarray], np.ndarray]


def _identity(values: np.ndarray) -> np.ndarray:
    return values


def fixed_point_rounder(spec: FixedPointSpec) -> Rounder:
    """Round to the nearest multiple of 2^-n_dig when quantization is on."""
    if not spec.quantize:
        return _identity
    scale = float(1 << spec.n_dig)

    def _round(values: np.ndarray) -> np.ndarray:
        return np.round(values * scale) / scale

    return _round


def _horner(coefficients: tuple[float, ...], x: np.ndarray, rnd: Rounder) -> np.ndarray:
    acc = np.full_like(x, coefficients[0])
    for coefficient in coefficients[1:]:
        acc = rnd(acc * x + coefficient)
    return acc


def evaluate(
    approx: InvCdfApprox, u: np.ndarray, rnd: Rounder = _identity
) -> np.ndarray:
    """Evaluate the approximation on an array of u in (0, 1)."""
    low, central, _ = approx.intervals
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    upper_half = u > 0.5
    v = np.where(upper_half, 1.0 - u, u)  # v in (0, 1/2]

    result = np.empty_like(v)
    in_tail = v < low.upper
    if np.any(in_tail):
        q = rnd(np.sqrt(rnd(-2.0 * np.log(v[in_tail]))))
        result[in_tail] = rnd(
            _horner(low.numerator, q, rnd) / _horner(low.denominator, q, rnd)
        )
    in_center = ~in_tail
    if np.any(in_center):
        q = rnd(v[in_center] - 0.5)
        r = rnd(q * q)
        result[in_center] = rnd(
            rnd(_horner(central.numerator, r, rnd) * q)
            / _horner(central.denominator, r, rnd)
        )
    return np.where(upper_half, -result, result)
