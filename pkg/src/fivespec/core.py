"""Spectral analysis primitives for Boolean functions.

A function f of n variables is stored as a bit-packed truth table: bit k
of the packed integer is f at input index k, where the assignment
(x1, ..., xn) maps to index x1*2^(n-1) + x2*2^(n-2) + ... + xn, i.e. x1
is the most significant index bit. Walsh spectra and ANF coefficient
vectors are indexed the same way, so masks and monomial exponents share
the truth-table index space.

All quantities here are exact integers; there is no floating point and
therefore no tolerance anywhere in this module.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from ._kernels import off_profile_count, spectrum_stats, walsh_from_bits

MAX_VARIABLES = 20

# brute_force_nonlinearity walks all 2^(n+1) affine functions; past this
# size it stops being a usable oracle.
ORACLE_MAX_VARIABLES = 12

BENT = "bent"
PLATEAUED = "plateaued"
FIVE_VALUED = "five-valued"
OTHER = "other"


def _check_var_count(n):
    if not isinstance(n, int) or not 1 <= n <= MAX_VARIABLES:
        raise ValueError(f"variable count must be an integer in [1, {MAX_VARIABLES}], got {n!r}")


@functools.lru_cache(maxsize=None)
def full_mask(n):
    """All-ones packed vector of length 2^n."""
    return (1 << (1 << n)) - 1


@functools.lru_cache(maxsize=None)
def _index_bit_column(bit, n):
    # Packed vector whose entry at index k equals bit `bit` of k.
    block = ((1 << (1 << bit)) - 1) << (1 << bit)
    span = 1 << (bit + 1)
    total = 1 << n
    while span < total:
        block |= block << span
        span <<= 1
    return block


def variable_column(i, n):
    """Packed truth table of the projection (x1, ..., xn) -> xi."""
    _check_var_count(n)
    if not 1 <= i <= n:
        raise ValueError(f"variable index {i} out of range for {n} variables")
    return _index_bit_column(n - i, n)


def pack_bits(bits) -> int:
    """Pack a 0/1 sequence into an integer, entry k at bit k."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("expected a non-empty one-dimensional bit vector")
    if np.any(arr > 1):
        raise ValueError("bit vector entries must be 0 or 1")
    data = np.packbits(arr, bitorder="little").tobytes()
    return int.from_bytes(data, "little")


def unpack_bits(packed: int, size: int) -> np.ndarray:
    """Expand a packed integer back into a uint8 vector of `size` entries."""
    nbytes = (size + 7) // 8
    raw = np.frombuffer(packed.to_bytes(nbytes, "little"), np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size]


def bits_to_hex(bits) -> str:
    """Hex form of a bit vector, most significant nibble first.

    Entry 0 of the vector becomes the most significant bit of the first
    hex digit, so the string reads in truth-table index order.
    """
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.size % 4 != 0:
        raise ValueError("hex format needs a bit length divisible by 4")
    digits = arr.size // 4
    return np.packbits(arr, bitorder="big").tobytes().hex()[:digits]


def hex_to_bits(text: str, size: int) -> np.ndarray:
    """Inverse of bits_to_hex for a vector of `size` bits."""
    if size % 4 != 0 or len(text) != size // 4:
        raise ValueError(f"expected {size // 4} hex digits for {size} bits, got {len(text)}")
    try:
        raw = bytes.fromhex(text if len(text) % 2 == 0 else text + "0")
    except ValueError:
        raise ValueError(f"not a valid hex string: {text!r}") from None
    return np.unpackbits(np.frombuffer(raw, np.uint8), bitorder="big")[:size]


class _PackedVector:
    """Shared behaviour of bit-vector values of length 2^n."""

    __slots__ = ("n", "packed")

    def __init__(self, n: int, packed: int):
        _check_var_count(n)
        if not 0 <= packed <= full_mask(n):
            raise ValueError(f"packed value does not fit in 2^{n} bits")
        self.n = n
        self.packed = packed

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def weight(self) -> int:
        """Hamming weight of the stored vector."""
        return self.packed.bit_count()

    @property
    def bits(self) -> np.ndarray:
        return unpack_bits(self.packed, self.size)

    @classmethod
    def from_bits(cls, bits):
        arr = np.asarray(bits, dtype=np.uint8)
        n = arr.size.bit_length() - 1
        if arr.ndim != 1 or arr.size != 1 << n or n < 1:
            raise ValueError(f"bit vector length must be 2^n with n >= 1, got {arr.size}")
        return cls(n, pack_bits(arr))

    @classmethod
    def from_hex(cls, text: str, n: int | None = None):
        if n is None:
            nbits = 4 * len(text)
            n = nbits.bit_length() - 1
            if nbits == 0 or nbits != 1 << n:
                raise ValueError(f"hex length {len(text)} does not encode 2^n bits")
        _check_var_count(n)
        return cls(n, pack_bits(hex_to_bits(text, 1 << n)))

    def to_hex(self) -> str:
        if self.n < 2:
            raise ValueError("hex form needs at least 4 bits (n >= 2)")
        return bits_to_hex(self.bits)

    def __eq__(self, other):
        return type(other) is type(self) and other.n == self.n and other.packed == self.packed

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.packed))

    def __repr__(self):
        body = self.to_hex() if self.n >= 2 else "".join(str(b) for b in self.bits)
        return f"{type(self).__name__}(n={self.n}, {body})"


class TruthTable(_PackedVector):
    """Truth table of an n-variable Boolean function, 1 <= n <= 20."""


class AnfVector(_PackedVector):
    """Algebraic normal form coefficients h(a), same index order as TruthTable."""


class WalshSpectrum:
    """Vector of the 2^n signed Walsh-Hadamard coefficients of a function."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        _check_var_count(n)
        arr = np.asarray(coeffs, dtype=np.int64)
        if arr.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} coefficients for n={n}, got shape {arr.shape}")
        self.n = n
        self.coeffs = arr

    def distinct_values(self) -> tuple:
        """Sorted distinct signed coefficient values."""
        return tuple(int(v) for v in np.unique(self.coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, WalshSpectrum)
            and other.n == self.n
            and bool(np.array_equal(other.coeffs, self.coeffs))
        )

    def __hash__(self):
        return hash((self.n, self.coeffs.tobytes()))

    def __repr__(self):
        return f"WalshSpectrum(n={self.n}, distinct={self.distinct_values()})"


@dataclass(frozen=True)
class SpectrumProfile:
    """Shape classification of a Walsh spectrum.

    kind is one of BENT, PLATEAUED, FIVE_VALUED or OTHER. exponents holds
    the base-2 exponents of the nonzero magnitudes involved: (n/2,) for
    bent, the amplitude exponent for plateaued, and the two exponents in
    increasing order for five-valued spectra. The exponent range is
    reported as found, never clamped.
    """

    kind: str
    distinct_values: tuple
    exponents: tuple = ()

    @property
    def distinct_count(self) -> int:
        return len(self.distinct_values)

    @property
    def is_five_valued(self) -> bool:
        return self.kind == FIVE_VALUED

    def describe(self) -> str:
        if self.kind == BENT:
            return "bent"
        if self.kind == PLATEAUED:
            return f"plateaued(amplitude 2^{self.exponents[0]})"
        if self.kind == FIVE_VALUED:
            lo, hi = self.exponents
            return f"five-valued(magnitudes 2^{lo}, 2^{hi})"
        return f"other({self.distinct_count} distinct values)"


def _power_exponent(value: int):
    # Exponent k with value == 2^k, or None.
    if value > 0 and value & (value - 1) == 0:
        return value.bit_length() - 1
    return None


def walsh_transform(tt: TruthTable) -> WalshSpectrum:
    """Correlation of f with every linear mask, via the fast butterfly.

    Bit-exact against the definitional sum over all inputs per mask; the
    butterfly just reuses partial sums to get O(n * 2^n).
    """
    return WalshSpectrum(tt.n, walsh_from_bits(tt.bits))


def mobius_transform_packed(packed: int, n: int) -> int:
    """Binary Mobius transform on a packed vector of 2^n bits."""
    for b in range(n):
        lower = packed & (full_mask(n) ^ _index_bit_column(b, n))
        packed ^= lower << (1 << b)
    return packed


def mobius_transform(v) -> np.ndarray:
    """XOR-accumulate each entry over every index it covers.

    Maps a truth table to its ANF coefficients and back; the transform is
    an involution. The input must have power-of-two length.
    """
    arr = np.asarray(v, dtype=np.uint8)
    n = arr.size.bit_length() - 1
    if arr.ndim != 1 or arr.size == 0 or arr.size != 1 << n:
        raise ValueError(f"bit vector length must be a power of two, got {arr.size}")
    if np.any(arr > 1):
        raise ValueError("bit vector entries must be 0 or 1")
    if n == 0:
        return arr.copy()
    return unpack_bits(mobius_transform_packed(pack_bits(arr), n), arr.size)


def truth_table_to_anf(tt: TruthTable) -> AnfVector:
    return AnfVector(tt.n, mobius_transform_packed(tt.packed, tt.n))


def anf_to_truth_table(anf: AnfVector) -> TruthTable:
    return TruthTable(anf.n, mobius_transform_packed(anf.packed, anf.n))


def nonlinearity(spec: WalshSpectrum) -> int:
    """Distance to the closest affine function: 2^(n-1) - max|W|/2."""
    max_abs = int(spectrum_stats(spec.coeffs)[0])
    return (1 << (spec.n - 1)) - max_abs // 2


def balancedness_deficit(tt: TruthTable) -> int:
    """Bits that must change to reach weight 2^(n-1); zero iff balanced."""
    return abs(tt.weight - (1 << (tt.n - 1)))


def classify_spectrum(spec: WalshSpectrum) -> SpectrumProfile:
    """Classify a spectrum as bent, plateaued, five-valued or other."""
    values = spec.distinct_values()
    magnitudes = sorted({abs(v) for v in values if v != 0})
    has_zero = 0 in values

    if not has_zero and len(magnitudes) == 1 and spec.n % 2 == 0:
        exp = _power_exponent(magnitudes[0])
        if exp is not None and exp * 2 == spec.n:
            return SpectrumProfile(BENT, values, (exp,))

    if len(magnitudes) == 1:
        exp = _power_exponent(magnitudes[0])
        if exp is not None:
            return SpectrumProfile(PLATEAUED, values, (exp,))

    if len(values) == 5 and has_zero and len(magnitudes) == 2:
        lo = _power_exponent(magnitudes[0])
        hi = _power_exponent(magnitudes[1])
        if lo is not None and hi is not None:
            return SpectrumProfile(FIVE_VALUED, values, (lo, hi))

    return SpectrumProfile(OTHER, values)


@functools.lru_cache(maxsize=None)
def _linear_tables(n):
    # Packed truth tables of all 2^n linear functions a.x, indexed by a.
    tables = [0] * (1 << n)
    for a in range(1, 1 << n):
        low = a & -a
        tables[a] = tables[a ^ low] ^ _index_bit_column(low.bit_length() - 1, n)
    return tuple(tables)


def brute_force_nonlinearity(tt: TruthTable) -> int:
    """Minimum Hamming distance to all 2^(n+1) affine functions.

    Literal-definition oracle, independent of the Walsh transform; only
    meant for verification at small n.
    """
    if tt.n > ORACLE_MAX_VARIABLES:
        raise ValueError(f"oracle limited to n <= {ORACLE_MAX_VARIABLES}, got n={tt.n}")
    size = tt.size
    best = size
    for lin in _linear_tables(tt.n):
        d = (tt.packed ^ lin).bit_count()
        if d < best:
            best = d
        if size - d < best:
            best = size - d
    return best


def algebraic_degree(anf: AnfVector) -> int:
    """Largest monomial degree present; 0 for the all-zero vector."""
    degree = 0
    rem = anf.packed
    while rem:
        low = rem & -rem
        w = (low.bit_length() - 1).bit_count()
        if w > degree:
            degree = w
        rem ^= low
    return degree


__all__ = [
    "MAX_VARIABLES",
    "ORACLE_MAX_VARIABLES",
    "BENT",
    "PLATEAUED",
    "FIVE_VALUED",
    "OTHER",
    "TruthTable",
    "WalshSpectrum",
    "AnfVector",
    "SpectrumProfile",
    "walsh_transform",
    "mobius_transform",
    "mobius_transform_packed",
    "truth_table_to_anf",
    "anf_to_truth_table",
    "nonlinearity",
    "balancedness_deficit",
    "classify_spectrum",
    "brute_force_nonlinearity",
    "algebraic_degree",
    "variable_column",
    "full_mask",
    "pack_bits",
    "unpack_bits",
    "bits_to_hex",
    "hex_to_bits",
]
