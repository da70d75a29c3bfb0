"""Certified comparisons of maximal prime powers and the bound functions.

Orderings of p^a vs q^b are decided either by exact big-integer powers or
by separating interval enclosures of a*ln(p) vs b*ln(q) under a doubling
precision escalation. Equality is only ever decided structurally: distinct
primes with positive exponents can never produce equal powers, and an
interval can never certify equality anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    Ordering,
    RealInterval,
    digit_sum,
    interval_ln,
    ln_mantissa_bounds,
)
from .valuation import PrimeContext, legendre_digit_form

METHOD_INTERVAL = "interval-certified"
METHOD_EXACT = "exact-power"

DEFAULT_START_BITS = 64
DEFAULT_CAP_BITS = 4096
DEFAULT_EXACT_CUTOFF_BITS = 512


@dataclass(frozen=True)
class PowerComparison:
    """Outcome of ordering p^a against q^b, with the deciding method."""

    p: int
    a: int
    q: int
    b: int
    outcome: Ordering
    method: str
    precision_bits: int | None = None


def compare_prime_powers(
    p: int,
    a: int,
    q: int,
    b: int,
    *,
    start_bits: int = DEFAULT_START_BITS,
    cap_bits: int = DEFAULT_CAP_BITS,
    exact_cutoff_bits: int = DEFAULT_EXACT_CUTOFF_BITS,
) -> PowerComparison:
    """Exact ordering of p^a vs q^b for primes p, q (caller-certified)."""
    if p < 2 or q < 2:
        raise ValueError("p and q must be primes >= 2")
    if a < 0 or b < 0:
        raise ValueError("exponents must be non-negative")

    def done(outcome: Ordering, method: str, bits: int | None = None) -> PowerComparison:
        return PowerComparison(p, a, q, b, outcome, method, bits)

    # structural decisions first: intervals cannot certify equality
    if p == q:
        if a == b:
            return done(Ordering.EQ, METHOD_EXACT)
        return done(Ordering.GT if a > b else Ordering.LT, METHOD_EXACT)
    if a == 0 or b == 0:
        if a == 0 and b == 0:
            return done(Ordering.EQ, METHOD_EXACT)
        if a == 0:
            return done(Ordering.LT, METHOD_EXACT)  # 1 < q^b
        return done(Ordering.GT, METHOD_EXACT)

    if max(a * p.bit_length(), b * q.bit_length()) <= exact_cutoff_bits:
        return done(_exact_power_cmp(p, a, q, b), METHOD_EXACT)

    bits = start_bits
    while bits <= cap_bits:
        exp = -(bits + 3)
        p_lo, p_hi = ln_mantissa_bounds(p, bits)
        q_lo, q_hi = ln_mantissa_bounds(q, bits)
        if a * p_hi < b * q_lo:
            return done(Ordering.LT, METHOD_INTERVAL, bits)
        if a * p_lo > b * q_hi:
            return done(Ordering.GT, METHOD_INTERVAL, bits)
        bits *= 2
    # distinct primes with positive exponents never tie, so exact powers decide
    return done(_exact_power_cmp(p, a, q, b), METHOD_EXACT)


def _exact_power_cmp(p: int, a: int, q: int, b: int) -> Ordering:
    lhs, rhs = p**a, q**b
    if lhs < rhs:
        return Ordering.LT
    if lhs > rhs:
        return Ordering.GT
    return Ordering.EQ


def dominates(p: int, q: int, n: int, ctx: PrimeContext | None = None) -> bool:
    """True iff p^{nu_p(n!)} strictly exceeds q^{nu_q(n!)}.

    Ties (both valuations zero) count as non-dominance. When a context is
    supplied it certifies the primality of p and q.
    """
    if p == q:
        raise ValueError("dominance is defined for distinct primes")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if ctx is not None:
        ctx.require_prime(p)
        ctx.require_prime(q)
    vp = legendre_digit_form(n, p)
    vq = legendre_digit_form(n, q)
    return compare_prime_powers(p, vp, q, vq).outcome is Ordering.GT


@dataclass(frozen=True)
class RatioPoint:
    """Exact value of the digit-sum ratio (n - s_p(n)) / (n - s_{p+2}(n))."""

    n: int
    p: int
    value: Fraction


def ratio_r(n: int, p: int) -> RatioPoint:
    """The twin ratio at n for a twin-lower prime p (caller-certified twin).

    Requires n >= p + 2, which makes the denominator strictly positive.
    """
    if n < p + 2:
        raise ValueError(f"ratio requires n >= p + 2, got n={n}, p={p}")
    numerator = n - digit_sum(n, p)
    denominator = n - digit_sum(n, p + 2)
    if denominator <= 0:
        raise ValueError(f"non-positive denominator at n={n}, p={p}")
    return RatioPoint(n=n, p=p, value=Fraction(numerator, denominator))


def h_p(p: int, x: int, precision_bits: int = DEFAULT_START_BITS) -> RealInterval:
    """Enclosure of 1/(p-1) - log_p(x)/(x-1) for an integer x > p.

    The function vanishes at x = p and is increasing beyond it; the open
    left endpoint is excluded here because every call site uses x >= the
    prime successor of p.
    """
    if x <= p:
        raise ValueError(f"h_p requires x > p, got x={x}, p={p}")
    if p < 2:
        raise ValueError(f"p must be a prime >= 2, got {p}")
    work = precision_bits + 16
    log_ratio = interval_ln(x, work).div(interval_ln(p, work))
    return log_ratio.div_int(x - 1).rsub(Fraction(1, p - 1)).round_to(precision_bits)


def twin_threshold(p: int, precision_bits: int = DEFAULT_START_BITS) -> RealInterval:
    """Enclosure of (ln(p+2)/ln p) * ((p-1)/(p+1)) for a twin-lower prime p."""
    if p < 3:
        raise ValueError(f"twin-lower prime must be >= 3, got {p}")
    work = precision_bits + 16
    log_ratio = interval_ln(p + 2, work).div(interval_ln(p, work))
    return log_ratio.scale(Fraction(p - 1, p + 1)).round_to(precision_bits)


def tail_lower_bound_r(
    p: int, n_tilde: int, precision_bits: int = DEFAULT_START_BITS
) -> RealInterval:
    """Enclosure of 1 - (p-1) * (ln(n_tilde)/ln(p) + 1) / n_tilde.

    Every ratio value at n >= n_tilde strictly exceeds the true bound, and
    in particular exceeds the enclosure's lo.
    """
    if n_tilde < p + 2:
        raise ValueError(f"tail bound requires n_tilde >= p + 2, got {n_tilde}")
    work = precision_bits + 16
    log_ratio = interval_ln(n_tilde, work).div(interval_ln(p, work))
    scaled = log_ratio.shift(Fraction(1)).scale(Fraction(p - 1, n_tilde))
    return scaled.rsub(Fraction(1)).round_to(precision_bits)
