import math

import numpy as np

from src.distributions.exceptions import PrecisionError, TermIndexError, UniformDomainError
from src.distributions.inverse_cdf import NORMAL_QUANTILE, evaluate, fixed_point_rounder
from src.distributions.schemas import FixedPointSpec, StreamBinding
from src.pcg.exceptions import StreamIndexError
from src.pcg.generator import stream_element, stream_words
from src.pcg.schemas import PcgParams

DEFAULT_FIXED_POINT = FixedPointSpec()


def uniform_from_word(word: int, n_prn: int, n_dig: int) -> float:
    """Keep the top n_dig bits of an n_PRN-bit word as a fraction in [0, 1).

    Raises:
        PrecisionError: If n_dig > n_prn
    """
    if n_dig > n_prn:
        raise PrecisionError(n_dig, n_prn)
    return (word >> (n_prn - n_dig)) / float(1 << n_dig)


def inv_normal_cdf(u, fixed_point: FixedPointSpec | None = None):
    """Standard normal quantile Φ⁻¹(u) for scalar or array input.

    Args:
        u: Probability or array of probabilities in the open interval (0, 1)
        fixed_point: When ``quantize`` is set, intermediates are rounded to
            n_dig fraction bits

    Returns:
        float for scalar input, numpy.ndarray otherwise

    Raises:
        UniformDomainError: If any u lies outside (0, 1)
    """
    values = np.asarray(u, dtype=np.float64)
    outside = ~((values > 0.0) & (values < 1.0))
    if np.any(outside):
        raise UniformDomainError(float(values[outside].flat[0]))
    rnd = fixed_point_rounder(fixed_point or DEFAULT_FIXED_POINT)
    result = evaluate(NORMAL_QUANTILE, values, rnd)
    if values.ndim == 0:
        return float(result[0])
    return result.reshape(values.shape)


def normal_from_word(word: int, n_prn: int, fixed_point: FixedPointSpec) -> float:
    """Convert one PRN word to a normal variate, clamping u = 0 to half an ulp."""
    u = uniform_from_word(word, n_prn, fixed_point.n_dig)
    if u == 0.0:
        u = fixed_point.zero_clamp
    return inv_normal_cdf(u, fixed_point)


def stream_index_com(j: int, dimension: int) -> int:
    """Stream index consumed by ε_com,j: (j−1)(D+1)+1."""
    if j < 1:
        raise StreamIndexError(j)
    return (j - 1) * (dimension + 1) + 1


def stream_index_ind(i: int, j: int, dimension: int) -> int:
    """Stream index consumed by ε_i,j: (j−1)(D+1)+i+1."""
    if not 1 <= i <= dimension or j < 1:
        raise TermIndexError(i, j, dimension)
    return (j - 1) * (dimension + 1) + i + 1


def epsilon_com(
    params: PcgParams,
    x0: int,
    j: int,
    dimension: int,
    fixed_point: FixedPointSpec = DEFAULT_FIXED_POINT,
) -> float:
    word = stream_element(params, x0, stream_index_com(j, dimension))
    return normal_from_word(word, params.state_bits, fixed_point)


def epsilon_ind(
    params: PcgParams,
    x0: int,
    i: int,
    j: int,
    dimension: int,
    fixed_point: FixedPointSpec = DEFAULT_FIXED_POINT,
) -> float:
    word = stream_element(params, x0, stream_index_ind(i, j, dimension))
    return normal_from_word(word, params.state_bits, fixed_point)


def sample_normals(binding: StreamBinding, start: int, count: int) -> np.ndarray:
    """Normal variates for stream elements start .. start+count−1 in one block."""
    params, fixed_point = binding.params, binding.fixed_point
    shift = params.state_bits - fixed_point.n_dig
    if shift < 0:
        raise PrecisionError(fixed_point.n_dig, params.state_bits)
    words = stream_words(params, binding.seed, start, count)
    u = np.fromiter((word >> shift for word in words), dtype=np.float64, count=count)
    u = u / math.ldexp(1.0, fixed_point.n_dig)
    u[u == 0.0] = fixed_point.zero_clamp
    return inv_normal_cdf(u, fixed_point)


def zero_uniform_count(binding: StreamBinding, start: int, count: int) -> int:
    """How many of stream elements start .. start+count−1 hit the u = 0 clamp."""
    params, fixed_point = binding.params, binding.fixed_point
    shift = params.state_bits - fixed_point.n_dig
    if shift < 0:
        raise PrecisionError(fixed_point.n_dig, params.state_bits)
    return sum(1 for word in stream_words(params, binding.seed, start, count) if word >> shift == 0)
