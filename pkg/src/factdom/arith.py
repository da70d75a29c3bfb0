"""Exact scalar arithmetic and certified dyadic interval enclosures.

Everything downstream decides orderings of real quantities (logarithms,
threshold functions) through this module. The ground rules are therefore
strict: integers and rationals are exact, and every RealInterval operation
rounds outward, so the true real result always lies inside the reported
enclosure. No floating point is used anywhere.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


class Ordering(Enum):
    LT = -1
    EQ = 0
    GT = 1


def rational_cmp(a: Fraction, b: Fraction) -> Ordering:
    """Exact comparison of two rationals by cross multiplication."""
    lhs = a.numerator * b.denominator
    rhs = b.numerator * a.denominator
    if lhs < rhs:
        return Ordering.LT
    if lhs > rhs:
        return Ordering.GT
    return Ordering.EQ


# ---------------------------------------------------------------------------
# digit expansions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DigitExpansion:
    """Base-b positional representation, least-significant digit first.

    The leading (last stored) digit is always >= 1; the zero value has no
    representation here by design, since every call site works with n >= 1.
    """

    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if not self.digits:
            raise ValueError("empty digit sequence (zero has no representation)")
        if any(d < 0 or d >= self.base for d in self.digits):
            raise ValueError(f"digit out of range for base {self.base}: {self.digits}")
        if self.digits[-1] < 1:
            raise ValueError("most significant digit must be >= 1")

    def value(self) -> int:
        total = 0
        for d in reversed(self.digits):
            total = total * self.base + d
        return total

    def digit_sum(self) -> int:
        return sum(self.digits)

    def display(self) -> tuple[int, ...]:
        """Digits most-significant first, the order used in written tuples."""
        return tuple(reversed(self.digits))

    def __len__(self) -> int:
        return len(self.digits)


def digits(n: int, b: int) -> DigitExpansion:
    """Base-b digit expansion of n >= 1."""
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = []
    while n:
        n, d = divmod(n, b)
        out.append(d)
    return DigitExpansion(base=b, digits=tuple(out))


def digit_sum(n: int, b: int) -> int:
    """Sum of the base-b digits of n >= 1."""
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    total = 0
    while n:
        n, d = divmod(n, b)
        total += d
    return total


def floor_log(n: int, b: int) -> int:
    """Largest L with b**L <= n, by exact integer comparisons only."""
    if b < 2:
        raise ValueError(f"base must be >= 2, got {b}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    result = 0
    power = b
    while power <= n:
        power *= b
        result += 1
    return result


# ---------------------------------------------------------------------------
# dyadic rationals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dyadic:
    """Exact dyadic rational mant * 2**exp, normalized so mant is odd or zero."""

    mant: int
    exp: int

    def __post_init__(self) -> None:
        m, e = self.mant, self.exp
        if m == 0:
            e = 0
        else:
            shift = (m & -m).bit_length() - 1  # trailing zero bits
            m >>= shift
            e += shift
        object.__setattr__(self, "mant", m)
        object.__setattr__(self, "exp", e)

    @staticmethod
    def from_int(n: int) -> Dyadic:
        return Dyadic(n, 0)

    @staticmethod
    def from_fraction(value: Fraction, bits: int, round_up: bool) -> Dyadic:
        """Directed rounding of an arbitrary rational onto the 2**-(bits+3) grid."""
        mant = _div_dir(value.numerator << (bits + 3), value.denominator, round_up)
        return Dyadic(mant, -(bits + 3))

    def to_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.mant << self.exp)
        return Fraction(self.mant, 1 << -self.exp)

    def mantissa_at(self, exp: int) -> int:
        """Exact integer mantissa of this value at the 2**exp grid."""
        if exp > self.exp:
            raise ValueError("cannot re-express exactly at a coarser grid")
        return self.mant << (self.exp - exp)

    def decimal(self) -> str:
        """Exact decimal expansion (dyadics always terminate in base 10)."""
        if self.exp >= 0:
            return str(self.mant << self.exp)
        k = -self.exp
        scaled = self.mant * 5**k  # mant / 2^k == mant * 5^k / 10^k
        sign = "-" if scaled < 0 else ""
        text = str(abs(scaled)).rjust(k + 1, "0")
        whole, frac = text[:-k], text[-k:]
        frac = frac.rstrip("0") or "0"
        return f"{sign}{whole}.{frac}"

    @staticmethod
    def from_decimal(text: str) -> Dyadic:
        """Inverse of decimal(); rejects strings that are not exactly dyadic."""
        whole, _, frac = text.partition(".")
        value = Fraction(int(whole + frac) if whole + frac not in ("", "-") else 0,
                         10 ** len(frac))
        if value.denominator & (value.denominator - 1):
            raise ValueError(f"{text!r} is not a dyadic rational")
        return Dyadic(value.numerator, -(value.denominator.bit_length() - 1))

    def _pair_at_common_exp(self, other: Dyadic) -> tuple[int, int]:
        e = min(self.exp, other.exp)
        return self.mant << (self.exp - e), other.mant << (other.exp - e)

    def __lt__(self, other: Dyadic) -> bool:
        a, b = self._pair_at_common_exp(other)
        return a < b

    def __le__(self, other: Dyadic) -> bool:
        a, b = self._pair_at_common_exp(other)
        return a <= b

    def __add__(self, other: Dyadic) -> Dyadic:
        e = min(self.exp, other.exp)
        a, b = self._pair_at_common_exp(other)
        return Dyadic(a + b, e)

    def __neg__(self) -> Dyadic:
        return Dyadic(-self.mant, self.exp)

    def __sub__(self, other: Dyadic) -> Dyadic:
        return self + (-other)

    def scale(self, k: int) -> Dyadic:
        """Exact product with an integer."""
        return Dyadic(self.mant * k, self.exp)


def _div_dir(num: int, den: int, round_up: bool) -> int:
    """num/den rounded to an integer toward -inf (floor) or +inf (ceil)."""
    if round_up:
        return -((-num) // den)
    return num // den


# ---------------------------------------------------------------------------
# certified intervals
# ---------------------------------------------------------------------------


class EnclosureError(RuntimeError):
    """An internal soundness check on an interval enclosure failed."""


@dataclass(frozen=True)
class RealInterval:
    """Enclosure [lo, hi] of a real value, with outward-rounded endpoints.

    precision_bits is the grid the endpoints were last rounded on: both lie
    on multiples of 2**-(precision_bits+3). The enclosure contract is the
    only invariant that matters: the true value is never outside [lo, hi].
    """

    lo: Dyadic
    hi: Dyadic
    precision_bits: int

    def __post_init__(self) -> None:
        if self.precision_bits < 1:
            raise ValueError("precision_bits must be positive")
        if self.hi < self.lo:
            raise ValueError("interval endpoints out of order")

    @staticmethod
    def from_fraction(value: Fraction, bits: int) -> RealInterval:
        return RealInterval(
            Dyadic.from_fraction(value, bits, round_up=False),
            Dyadic.from_fraction(value, bits, round_up=True),
            bits,
        )

    def lo_fraction(self) -> Fraction:
        return self.lo.to_fraction()

    def hi_fraction(self) -> Fraction:
        return self.hi.to_fraction()

    def width(self) -> Fraction:
        return self.hi.to_fraction() - self.lo.to_fraction()

    def contains(self, value: Fraction) -> bool:
        return self.lo.to_fraction() <= value <= self.hi.to_fraction()

    def encloses(self, other: RealInterval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def midpoint(self) -> Fraction:
        return (self.lo.to_fraction() + self.hi.to_fraction()) / 2

    # -- arithmetic (outward everywhere) ------------------------------------

    def _rounded(self, lo: Fraction, hi: Fraction, bits: int) -> RealInterval:
        return RealInterval(
            Dyadic.from_fraction(lo, bits, round_up=False),
            Dyadic.from_fraction(hi, bits, round_up=True),
            bits,
        )

    def add(self, other: RealInterval) -> RealInterval:
        bits = min(self.precision_bits, other.precision_bits)
        return RealInterval(self.lo + other.lo, self.hi + other.hi, bits)

    def sub(self, other: RealInterval) -> RealInterval:
        bits = min(self.precision_bits, other.precision_bits)
        return RealInterval(self.lo - other.hi, self.hi - other.lo, bits)

    def shift(self, c: Fraction) -> RealInterval:
        bits = self.precision_bits
        return self._rounded(self.lo.to_fraction() + c, self.hi.to_fraction() + c, bits)

    def rsub(self, c: Fraction) -> RealInterval:
        """Enclosure of c - self."""
        bits = self.precision_bits
        return self._rounded(c - self.hi.to_fraction(), c - self.lo.to_fraction(), bits)

    def scale(self, c: Fraction | int) -> RealInterval:
        c = Fraction(c)
        bits = self.precision_bits
        lo, hi = self.lo.to_fraction(), self.hi.to_fraction()
        if c >= 0:
            return self._rounded(c * lo, c * hi, bits)
        return self._rounded(c * hi, c * lo, bits)

    def div(self, other: RealInterval) -> RealInterval:
        """Quotient; the divisor interval must be strictly positive."""
        if not (Dyadic.from_int(0) < other.lo):
            raise ValueError("division requires a strictly positive divisor interval")
        bits = min(self.precision_bits, other.precision_bits)
        a1, a2 = self.lo.to_fraction(), self.hi.to_fraction()
        b1, b2 = other.lo.to_fraction(), other.hi.to_fraction()
        corners = (a1 / b1, a1 / b2, a2 / b1, a2 / b2)
        return self._rounded(min(corners), max(corners), bits)

    def div_int(self, k: int) -> RealInterval:
        if k <= 0:
            raise ValueError("div_int requires a positive integer divisor")
        return self.scale(Fraction(1, k))

    def round_to(self, bits: int) -> RealInterval:
        return self._rounded(self.lo.to_fraction(), self.hi.to_fraction(), bits)

    # -- certified ordering ---------------------------------------------------

    def strictly_below(self, other: RealInterval) -> bool:
        """True certifies self's real value < other's real value."""
        return self.hi < other.lo

    def separated(self, other: RealInterval) -> Ordering | None:
        if self.hi < other.lo:
            return Ordering.LT
        if other.hi < self.lo:
            return Ordering.GT
        return None


# ---------------------------------------------------------------------------
# certified natural logarithm
# ---------------------------------------------------------------------------

# atanh series: ln m = 2*atanh(t) with t = (m-1)/(m+1). After reducing the
# argument to [1,2), t stays below 1/3, so 1/(1-t^2) <= 9/8 < 8/7 bounds the
# geometric tail of the series.


def _atanh_mantissas(num: int, den: int, work_bits: int) -> tuple[int, int]:
    """Sound mantissa bounds of atanh(num/den) on the 2**-(work_bits+3) grid.

    Requires 0 <= num/den <= 1/3. Every rounding is directed so that the
    true value lies within [lo, hi] grid units.
    """
    if num == 0:
        return 0, 0
    if 3 * num > den:
        raise EnclosureError(f"atanh argument {num}/{den} above the reduced range")
    one = 1 << (work_bits + 3)
    t_lo = _div_dir(num * one, den, round_up=False)
    t_hi = _div_dir(num * one, den, round_up=True)
    # t^2 bounds on the same grid
    t2_lo = (t_lo * t_lo) >> (work_bits + 3)
    t2_hi = _div_dir(t_hi * t_hi, one, round_up=True)
    sum_lo, sum_hi = 0, 0
    pow_lo, pow_hi = t_lo, t_hi  # bounds of t^(2j+1)
    j = 0
    while True:
        sum_lo += pow_lo // (2 * j + 1)
        sum_hi += _div_dir(pow_hi, 2 * j + 1, round_up=True)
        next_hi = _div_dir(pow_hi * t2_hi, one, round_up=True)
        # tail after term j: sum_{i>j} t^(2i+1)/(2i+1) <= t^(2j+3)/(2j+3) * 8/7
        tail = _div_dir(next_hi * 8, 7 * (2 * j + 3), round_up=True)
        if tail <= 2:
            sum_hi += tail
            return sum_lo, sum_hi
        pow_lo = (pow_lo * t2_lo) >> (work_bits + 3)
        pow_hi = next_hi
        j += 1


@functools.lru_cache(maxsize=None)
def _ln_mantissas(x: int, bits: int) -> tuple[int, int]:
    """Sound mantissa bounds of ln x on the 2**-(bits+3) grid."""
    e = x.bit_length() - 1  # x = m * 2^e with m in [1, 2)
    work = bits + 32 + 2 * e.bit_length()
    ln2_lo, ln2_hi = _atanh_mantissas(1, 3, work)
    ln2_lo, ln2_hi = 2 * ln2_lo, 2 * ln2_hi
    m_num = x - (1 << e)
    m_lo, m_hi = _atanh_mantissas(m_num, x + (1 << e), work)
    total_lo = 2 * m_lo + e * ln2_lo
    total_hi = 2 * m_hi + e * ln2_hi
    shift = work - bits
    return total_lo >> shift, _div_dir(total_hi, 1 << shift, round_up=True)


def interval_ln(x: int, precision_bits: int) -> RealInterval:
    """Sound enclosure of ln x for a natural x >= 2.

    The guarantee is hi - lo <= 2**(-precision_bits+2); the construction
    (argument reduction to [1,2), atanh series with an explicit tail bound,
    outward rounding throughout) keeps the true ln x inside the result.
    """
    if x < 2:
        raise ValueError(f"interval_ln requires x >= 2, got {x}")
    if precision_bits < 1:
        raise ValueError("precision_bits must be positive")
    lo_m, hi_m = _ln_mantissas(x, precision_bits)
    exp = -(precision_bits + 3)
    result = RealInterval(Dyadic(lo_m, exp), Dyadic(hi_m, exp), precision_bits)
    if hi_m - lo_m > 32:  # 32 grid units == 2^(-precision_bits+2)
        raise EnclosureError(f"ln enclosure wider than contract for x={x}")
    return result


def ln_mantissa_bounds(x: int, precision_bits: int) -> tuple[int, int]:
    """Integer bounds l, h with l <= ln(x) * 2**(precision_bits+3) <= h.

    Shares the interval_ln cache; intended for bulk comparison loops where
    building interval objects per comparison would dominate the runtime.
    """
    if x < 2:
        raise ValueError(f"ln bounds require x >= 2, got {x}")
    return _ln_mantissas(x, precision_bits)
