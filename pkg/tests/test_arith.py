import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from factdom.arith import (
    DigitExpansion,
    Dyadic,
    Ordering,
    RealInterval,
    digit_sum,
    digits,
    floor_log,
    interval_ln,
    rational_cmp,
)


# ---------------------------------------------------------------------------
# digit expansions
# ---------------------------------------------------------------------------


def test_digits_written_order_examples():
    assert digits(25, 3).digits == (1, 2, 2)
    assert digits(25, 3).display() == (2, 2, 1)
    assert digits(49, 7).display() == (1, 0, 0)


@pytest.mark.parametrize("b", [2, 3, 7, 10, 257])
def test_digits_of_one(b):
    assert digits(1, b).digits == (1,)


def test_digits_rejects_zero_and_bad_base():
    with pytest.raises(ValueError):
        digits(0, 2)
    with pytest.raises(ValueError):
        digits(5, 1)


def test_digit_expansion_invariants_enforced():
    with pytest.raises(ValueError):
        DigitExpansion(base=3, digits=(3, 1))  # digit >= base
    with pytest.raises(ValueError):
        DigitExpansion(base=3, digits=(1, 0))  # leading zero
    with pytest.raises(ValueError):
        DigitExpansion(base=3, digits=())


def test_digit_sum_examples():
    assert digit_sum(25, 3) == 5
    assert digit_sum(49, 5) == 9
    for n in range(1, 7):
        assert digit_sum(n, 7) == n


@given(st.integers(min_value=1, max_value=10**30), st.integers(min_value=2, max_value=1000))
def test_digits_round_trip(n, b):
    assert digits(n, b).value() == n


def test_digit_properties_at_scale():
    rng = random.Random(20260810)
    for _ in range(10**4):
        n = rng.randrange(1, 10**30)
        b = rng.randrange(2, 10**4)
        expansion = digits(n, b)
        assert expansion.value() == n
        s = expansion.digit_sum()
        L = floor_log(n, b)
        assert 1 <= s <= (b - 1) * (L + 1)
        assert (n - s) % (b - 1) == 0
        assert L + 1 == len(expansion)


# ---------------------------------------------------------------------------
# floor_log
# ---------------------------------------------------------------------------


def test_floor_log_examples():
    assert floor_log(81, 3) == 4
    assert floor_log(80, 3) == 3
    # oracle by repeated multiplication: 11^1 = 11 <= 117 < 121 = 11^2
    largest = 0
    power = 11
    while power <= 117:
        largest += 1
        power *= 11
    assert largest == 1
    assert floor_log(117, 11) == largest
    assert len(digits(117, 11)) == largest + 1  # two digits: (10, 7)


def test_floor_log_exact_power_boundaries():
    for b in (2, 3, 5, 10):
        for k in range(1, 12):
            assert floor_log(b**k, b) == k
            assert floor_log(b**k - 1, b) == k - 1
    with pytest.raises(ValueError):
        floor_log(5, 1)


# ---------------------------------------------------------------------------
# rational comparison
# ---------------------------------------------------------------------------


def test_rational_cmp_examples():
    # 5*27 = 135 < 150 = 25*6
    assert rational_cmp(Fraction(5, 6), Fraction(25, 27)) is Ordering.LT
    assert rational_cmp(Fraction(7, 13), Fraction(7, 13)) is Ordering.EQ
    assert rational_cmp(Fraction(1, 1), Fraction(5, 6)) is Ordering.GT


# ---------------------------------------------------------------------------
# dyadics
# ---------------------------------------------------------------------------


def test_dyadic_normalization_and_equality():
    assert Dyadic(4, 0) == Dyadic(1, 2)
    assert Dyadic(0, 17) == Dyadic(0, 0)
    assert Dyadic(3, -1) != Dyadic(3, 0)


def test_dyadic_decimal_round_trip():
    cases = [Dyadic(3, -1), Dyadic(-7, -5), Dyadic(1, 10), Dyadic(0, 0), Dyadic(12345, -20)]
    for d in cases:
        assert Dyadic.from_decimal(d.decimal()) == d
    assert Dyadic(3, -1).decimal() == "1.5"
    with pytest.raises(ValueError):
        Dyadic.from_decimal("0.3")  # not dyadic


def test_dyadic_directed_rounding_brackets_value():
    rng = random.Random(7)
    for _ in range(500):
        fr = Fraction(rng.randrange(-10**9, 10**9), rng.randrange(1, 10**9))
        lo = Dyadic.from_fraction(fr, 40, round_up=False)
        hi = Dyadic.from_fraction(fr, 40, round_up=True)
        assert lo.to_fraction() <= fr <= hi.to_fraction()
        assert hi.to_fraction() - lo.to_fraction() <= Fraction(1, 2**43)


# ---------------------------------------------------------------------------
# interval_ln
# ---------------------------------------------------------------------------


def ln_oracle(x: int, terms: int = 120) -> tuple[Fraction, Fraction]:
    """Independent series enclosure of ln x via ln(x) = -ln(1/x) route:
    atanh form with exact Fraction arithmetic and an explicit tail bound."""
    t = Fraction(x - 1, x + 1)
    partial = Fraction(0)
    power = t
    for j in range(terms):
        partial += power / (2 * j + 1)
        power *= t * t
    # remaining tail is positive and below power/(1 - t^2)
    tail = power / (1 - t * t)
    return 2 * partial, 2 * (partial + tail)


def test_interval_ln_2_against_series_oracle():
    lo, hi = ln_oracle(2)
    assert hi - lo < Fraction(1, 10**50)  # oracle is itself 50-digit tight
    enclosure = interval_ln(2, 30)
    assert enclosure.lo_fraction() <= lo and hi <= enclosure.hi_fraction()
    assert enclosure.width() <= Fraction(1, 2**28)


@pytest.mark.parametrize("x", [2, 3, 5, 7, 11, 101, 10**6 + 3, 10**18 + 9])
@pytest.mark.parametrize("bits", [16, 64, 200])
def test_interval_ln_soundness_and_width(x, bits):
    enclosure = interval_ln(x, bits)
    lo, hi = ln_oracle(min(x, 50), 400) if x <= 50 else (None, None)
    if lo is not None:
        assert enclosure.lo_fraction() < hi and lo < enclosure.hi_fraction()
        assert enclosure.contains((lo + hi) / 2) or enclosure.width() < hi - lo
    assert enclosure.width() <= Fraction(1, 2 ** (bits - 2))


def test_interval_ln_refinement_nesting():
    for x in (2, 3, 17, 1000003):
        for bits in (20, 40, 80):
            coarse = interval_ln(x, bits)
            fine = interval_ln(x, 2 * bits)
            ulp = Fraction(1, 2 ** (bits + 3))
            assert coarse.lo_fraction() - ulp <= fine.lo_fraction()
            assert fine.hi_fraction() <= coarse.hi_fraction() + ulp


def test_interval_ln_4_is_twice_ln_2_up_to_slack():
    for bits in (24, 64, 128):
        ln4 = interval_ln(4, bits)
        ln2 = interval_ln(2, bits)
        doubled_lo = 2 * ln2.lo_fraction()
        doubled_hi = 2 * ln2.hi_fraction()
        slack = Fraction(4, 2 ** (bits + 3))
        assert doubled_lo - slack <= ln4.lo_fraction()
        assert ln4.hi_fraction() <= doubled_hi + slack


def test_interval_ln_cross_precision_soundness():
    rng = random.Random(42)
    for _ in range(50):
        x = rng.randrange(2, 10**12)
        mid = interval_ln(x, 400).midpoint()
        assert interval_ln(x, 200).contains(mid)


def test_interval_ln_rejects_small_arguments():
    with pytest.raises(ValueError):
        interval_ln(1, 30)
    with pytest.raises(ValueError):
        interval_ln(0, 30)


# ---------------------------------------------------------------------------
# interval arithmetic plumbing
# ---------------------------------------------------------------------------


def test_interval_operations_stay_sound():
    a = interval_ln(3, 64)
    b = interval_ln(2, 64)
    quotient = a.div(b)  # log_2(3) = 1.58496...
    assert quotient.contains(Fraction(158496, 100000)) or (
        quotient.lo_fraction() > Fraction(15849, 10000)
    )
    assert quotient.lo_fraction() > Fraction(15849, 10000)
    assert quotient.hi_fraction() < Fraction(15850, 10000)
    scaled = quotient.scale(Fraction(-2))
    assert scaled.hi_fraction() < Fraction(-31698, 10000)
    shifted = quotient.rsub(Fraction(2))  # 2 - log_2(3) = 0.41503...
    assert shifted.lo_fraction() > Fraction(41503, 100000)
    assert shifted.hi_fraction() < Fraction(41505, 100000)


def test_interval_division_requires_positive_divisor():
    a = interval_ln(3, 32)
    negative = a.scale(Fraction(-1))
    with pytest.raises(ValueError):
        a.div(negative)


def test_interval_endpoint_order_enforced():
    with pytest.raises(ValueError):
        RealInterval(Dyadic(2, 0), Dyadic(1, 0), 16)


def test_interval_certified_ordering_helpers():
    ln2 = interval_ln(2, 64)
    ln3 = interval_ln(3, 64)
    assert ln2.strictly_below(ln3)
    assert ln2.separated(ln3) is Ordering.LT
    assert ln3.separated(ln2) is Ordering.GT
    assert ln2.separated(ln2) is None  # overlap can never certify an order
