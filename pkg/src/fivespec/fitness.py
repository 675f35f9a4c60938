"""The two search objectives over balanced five-valued-spectrum functions.

Both functions first punish imbalance with a negative score. fitness1 then
rewards hitting exactly five distinct spectrum values before optimizing
nonlinearity plus a tie-breaking fractional term; fitness2 divides the
nonlinearity by a count of coefficients outside the target magnitude set.

Scores are doubles, but every reachable value is exactly representable
(integer part <= 2^15, fractional resolution 2^-16 at the supported n),
so comparisons need no tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._kernels import off_profile_count, spectrum_stats
from .core import TruthTable, WalshSpectrum


@dataclass(frozen=True)
class FitnessValue:
    """Score plus the measurements it was assembled from.

    Only the fields that fed the active tier are filled; the rest stay
    None. Ordering of individuals uses `value` alone.
    """

    value: float
    nonlinearity: int
    deficit: int
    distinct_values: int | None = None
    max_value_count: int | None = None
    penalty_count: int | None = None

    def __float__(self):
        return self.value


def pen(spec: WalshSpectrum) -> int:
    """Coefficients outside the allowed five-value magnitude set.

    Allowed values are {0, +-2^((n-1)/2), +-2^((n+1)/2)} for odd n and
    {0, +-2^(n/2), +-2^((n+2)/2)} for even n.
    """
    n = spec.n
    if n % 2:
        low, high = 1 << ((n - 1) // 2), 1 << ((n + 1) // 2)
    else:
        low, high = 1 << (n // 2), 1 << ((n + 2) // 2)
    return int(off_profile_count(spec.coeffs, low, high))


def _deficit(tt: TruthTable, spec: WalshSpectrum) -> int:
    # W(0) = 2^n - 2*weight, so the spectrum must agree with the table
    assert int(spec.coeffs[0]) == tt.size - 2 * tt.weight, "spectrum does not match truth table"
    return abs(tt.weight - (tt.size >> 1))


def fitness1(tt: TruthTable, spec: WalshSpectrum) -> FitnessValue:
    """Three tiers: reach balancedness, then five values, then nonlinearity.

    Unbalanced functions score minus the deficit. Balanced ones with
    #values != 5 score 1/(1+|#values-5|), at most 1/2. Balanced five-valued
    ones score nl + (2^n - #max_values)/2^n, where #max_values counts the
    coefficients of maximal magnitude; the fraction never reaches 1, so the
    tiers cannot overlap.
    """
    deficit = _deficit(tt, spec)
    max_abs, max_count, distinct = (int(v) for v in spectrum_stats(spec.coeffs))
    nl = (1 << (spec.n - 1)) - max_abs // 2
    if deficit:
        return FitnessValue(float(-deficit), nl, deficit, distinct_values=distinct)
    if distinct != 5:
        value = 1.0 / (1 + abs(distinct - 5))
        return FitnessValue(value, nl, 0, distinct_values=distinct)
    value = nl + (tt.size - max_count) / tt.size
    return FitnessValue(value, nl, 0, distinct_values=distinct, max_value_count=max_count)


def fitness2(tt: TruthTable, spec: WalshSpectrum) -> FitnessValue:
    """Nonlinearity damped by the out-of-profile coefficient count."""
    deficit = _deficit(tt, spec)
    max_abs = int(spectrum_stats(spec.coeffs)[0])
    nl = (1 << (spec.n - 1)) - max_abs // 2
    if deficit:
        return FitnessValue(float(-deficit), nl, deficit)
    penalty = pen(spec)
    return FitnessValue(nl / (1 + penalty), nl, 0, penalty_count=penalty)


FITNESS_FUNCTIONS = {
    "f1": fitness1,
    "f2": fitness2,
}

__all__ = ["FitnessValue", "fitness1", "fitness2", "pen", "FITNESS_FUNCTIONS"]
