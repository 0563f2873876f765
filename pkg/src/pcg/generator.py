from typing import Iterator

from src.pcg.exceptions import SeedOutOfRangeError, StreamIndexError
from src.pcg.permutations import inverse_permute, permute
from src.pcg.schemas import PcgParams, PcgState


def seed(params: PcgParams, x0: int) -> PcgState:
    """Place the background LCG at index 0 with state x0.

    Raises:
        SeedOutOfRangeError: If x0 is not in [0, m)
    """
    if not 0 <= x0 < params.modulus:
        raise SeedOutOfRangeError(x0, params.modulus)
    return PcgState(params=params, x_tilde=x0, index=0)


def progress(state: PcgState) -> PcgState:
    """One LCG step: x̃_{i+1} = (a·x̃_i + c) mod m."""
    params = state.params
    return PcgState(
        params=params,
        x_tilde=(params.a * state.x_tilde + params.c) & params.mask,
        index=state.index + 1,
    )


def advance_word(params: PcgParams, x0: int, steps: int) -> int:
    """Return the LCG word ``steps`` positions after x0.

    Evaluates (a^i·x0 + c(a^i−1)/(a−1)) mod m by doubling the affine map
    (A, C) -> (A², (A+1)·C), so the quotient never appears as a division.
    """
    mask = params.mask
    acc_mult, acc_plus = 1, 0
    cur_mult, cur_plus = params.a, params.c
    while steps > 0:
        if steps & 1:
            acc_mult = (acc_mult * cur_mult) & mask
            acc_plus = (acc_plus * cur_mult + cur_plus) & mask
        cur_plus = ((cur_mult + 1) * cur_plus) & mask
        cur_mult = (cur_mult * cur_mult) & mask
        steps >>= 1
    return (acc_mult * x0 + acc_plus) & mask


def jump(params: PcgParams, x0: int, i: int) -> PcgState:
    """Jump straight to stream position i (the U_J operation).

    Args:
        params: LCG constants and permutation
        x0: Seed x̃_0
        i: Target index, i >= 0

    Returns:
        PcgState: State holding x̃_i at index i

    Raises:
        SeedOutOfRangeError: If x0 is not in [0, m)
        StreamIndexError: If i is negative
    """
    if not 0 <= x0 < params.modulus:
        raise SeedOutOfRangeError(x0, params.modulus)
    if i < 0:
        raise StreamIndexError(i)
    return PcgState(params=params, x_tilde=advance_word(params, x0, i), index=i)


def output(state: PcgState) -> int:
    """Permuted output word x_i = f^perm(x̃_i)."""
    params = state.params
    return permute(state.x_tilde, params.perm, params.state_bits)


def inverse_output(params: PcgParams, word: int) -> int:
    """Recover x̃_i from an output word."""
    return inverse_permute(word, params.perm, params.state_bits)


def stream_element(params: PcgParams, x0: int, i: int) -> int:
    """Element x_i of the 1-indexed stream; x_1 = f^perm((a·x0 + c) mod m).

    Raises:
        StreamIndexError: If i < 1
    """
    if i < 1:
        raise StreamIndexError(i)
    return output(jump(params, x0, i))


def stream_words(params: PcgParams, x0: int, start: int, count: int) -> Iterator[int]:
    """Yield x_start, ..., x_{start+count-1}: one jump, then progress steps."""
    if start < 1:
        raise StreamIndexError(start)
    if not 0 <= x0 < params.modulus:
        raise SeedOutOfRangeError(x0, params.modulus)
    word = advance_word(params, x0, start)
    for _ in range(count):
        yield permute(word, params.perm, params.state_bits)
        word = (params.a * word + params.c) & params.mask
