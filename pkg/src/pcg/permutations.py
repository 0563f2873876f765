"""Bijective output permutations for PCG state words.

All permutations act on the full ``state_bits``-bit word so every output can be
mapped back to the background LCG state.
"""
from src.pcg.schemas import Permutation

RXS_M_XS_MULTIPLIER = 12605985483714917081
RXS_M_XS_INVERSE = pow(RXS_M_XS_MULTIPLIER, -1, 1 << 64)
MASK64 = (1 << 64) - 1


def xorshift_right(word: int, shift: int) -> int:
    return word ^ (word >> shift)


def unxorshift_right(word: int, shift: int, bits: int) -> int:
    """Invert ``x ^ (x >> shift)`` on a ``bits``-bit word."""
    result = word
    for _ in range(-(-bits // shift)):
        result = word ^ (result >> shift)
    return result


def _xsh_rr_layout(bits: int) -> tuple[int, int, int]:
    """Return (rotation bits, rotated low bits, xorshift amount)."""
    rot_bits = max(1, (bits - 1).bit_length())
    low_bits = bits - rot_bits
    # The xorshift must leave the top rot_bits untouched so the rotation is recoverable
    shift = max(rot_bits, bits // 2)
    return rot_bits, low_bits, shift


def _rotate_right(word: int, amount: int, bits: int) -> int:
    if bits == 0 or amount == 0:
        return word
    mask = (1 << bits) - 1
    return ((word >> amount) | (word << (bits - amount))) & mask


def _rotate_left(word: int, amount: int, bits: int) -> int:
    return _rotate_right(word, (bits - amount) % bits, bits) if bits else word


def xsh_rr(word: int, bits: int) -> int:
    """Xorshift the high half down, then rotate the low bits by the top bits."""
    _, low_bits, shift = _xsh_rr_layout(bits)
    mixed = xorshift_right(word, shift)
    top = mixed >> low_bits
    low = mixed & ((1 << low_bits) - 1)
    rotation = top % low_bits if low_bits else 0
    return (top << low_bits) | _rotate_right(low, rotation, low_bits)


def xsh_rr_inverse(word: int, bits: int) -> int:
    _, low_bits, shift = _xsh_rr_layout(bits)
    top = word >> low_bits
    low = word & ((1 << low_bits) - 1)
    rotation = top % low_bits if low_bits else 0
    mixed = (top << low_bits) | _rotate_left(low, rotation, low_bits)
    return unxorshift_right(mixed, shift, bits)


def rxs_m_xs(word: int) -> int:
    """Random xorshift, multiply, xorshift on a 64-bit word."""
    shift = (word >> 59) + 5
    mixed = (xorshift_right(word, shift) * RXS_M_XS_MULTIPLIER) & MASK64
    return xorshift_right(mixed, 43)


def rxs_m_xs_inverse(word: int) -> int:
    mixed = (unxorshift_right(word, 43, 64) * RXS_M_XS_INVERSE) & MASK64
    # shift >= 5 keeps the top five bits, which select the shift
    shift = (mixed >> 59) + 5
    return unxorshift_right(mixed, shift, 64)


def permute(word: int, perm: Permutation, bits: int) -> int:
    """Apply f^perm to a ``bits``-bit word."""
    match perm:
        case Permutation.IDENTITY:
            return word
        case Permutation.XSH_RR:
            return xsh_rr(word, bits)
        case Permutation.RXS_M_XS:
            return rxs_m_xs(word)
    raise ValueError(f"Unknown permutation: {perm}")


def inverse_permute(word: int, perm: Permutation, bits: int) -> int:
    match perm:
        case Permutation.IDENTITY:
            return word
        case Permutation.XSH_RR:
            return xsh_rr_inverse(word, bits)
        case Permutation.RXS_M_XS:
            return rxs_m_xs_inverse(word)
    raise ValueError(f"Unknown permutation: {perm}")
