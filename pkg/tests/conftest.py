"""Shared builders: deterministic balanced functions with known spectra.

mm_five_valued uses an inner-product construction. With a map pi on m-bit
values that misses 0 and sends both 1 and 2 to 1, f(x, y) = x . pi(y) on
2m variables is balanced and its spectrum takes exactly the five values
{0, +-2^m, +-2^(m+1)}: missed outputs give zero coefficients, the doubled
output gives 0/+-2^(m+1), and the rest stay bent-like at +-2^m. XORing an
extra variable on top (lift_odd) doubles every coefficient, which yields
odd-size fixtures with the same shape. Tests assert these facts rather
than trusting them.
"""

from fivespec.core import TruthTable


def mm_five_valued(m: int) -> TruthTable:
    half = 1 << m

    def pi(y):
        if y in (1, 2):
            return 1
        return 2 if y == 0 else y

    bits = []
    for idx in range(half * half):
        x, y = idx >> m, idx & (half - 1)
        bits.append((x & pi(y)).bit_count() & 1)
    return TruthTable.from_bits(bits)


def lift_odd(tt: TruthTable) -> TruthTable:
    comp = tt.packed ^ ((1 << tt.size) - 1)
    return TruthTable(tt.n + 1, tt.packed | (comp << tt.size))


def five_valued_fixture(n: int) -> TruthTable:
    tt = mm_five_valued(n // 2)
    return lift_odd(tt) if n % 2 else tt


def function_of(expr, n: int) -> TruthTable:
    """Truth table of expr([x1..xn]) with x1 the most significant index bit."""
    bits = []
    for idx in range(1 << n):
        x = [(idx >> (n - i)) & 1 for i in range(1, n + 1)]
        bits.append(expr(x))
    return TruthTable.from_bits(bits)
