"""Certified threshold searches: n_0(p), n_min(p), ratio minima, gap surveys.

Every universal claim ("for all n >= N ...") is reduced to a finite scan
plus an analytic tail certificate: a block argument over powers of p for
the dominance thresholds, and a monotone lower bound on the twin ratio for
the global-minimum reports. Scans are partitionable over disjoint ranges
and merge deterministically, so results never depend on how work is split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import Ordering, RealInterval, ln_mantissa_bounds
from .dominance import (
    DEFAULT_CAP_BITS,
    DEFAULT_START_BITS,
    compare_prime_powers,
    h_p,
    ratio_r,
    tail_lower_bound_r,
    twin_threshold,
)
from .valuation import (
    InternalCheckError,
    PrimeContext,
    legendre_digit_form,
    legendre_floor_sum,
    next_prime,
)

MODE_EXACT_H = "exact-h"
MODE_PAPER_RELAXATION = "paper-relaxation"

QUANTITY_N_MIN = "n-min"
QUANTITY_N0 = "n0"
QUANTITY_GLOBAL_MIN_R = "global-min-r"


class CertificateGap(Exception):
    """A tail certificate failed to dominate the scanned minimum."""


@dataclass(frozen=True)
class TailCertificate:
    """Threshold beyond which the floor-log inequality holds for every n.

    The slope of the certifying linear bound is the enclosure's lo (mode
    exact-h) or the fixed 1/5 relaxation for p = 2; block_checked is the
    power-of-p block at which the step argument closes.
    """

    p: int
    threshold: int
    mode: str
    h_enclosure: RealInterval
    block_checked: int


@dataclass(frozen=True)
class RatioTailCertificate:
    """Certified lower bound on the twin ratio for every n >= n_tilde."""

    p: int
    n_tilde: int
    bound: RealInterval


@dataclass(frozen=True)
class SearchReport:
    """A certified search outcome: value, exhaustive range, certificate."""

    p: int
    quantity: str
    value: int | tuple[int, Fraction]
    scan_range: tuple[int, int]
    certificate: TailCertificate | RatioTailCertificate
    violations: tuple[int, ...] = ()


@dataclass(frozen=True)
class GapRecord:
    """n_min samples for one prime-gap class, with an optional exact fit."""

    gap: int
    samples: tuple[tuple[int, int], ...]
    fitted_poly: tuple[Fraction, Fraction, Fraction] | None
    validated_through: int


@dataclass(frozen=True)
class TwinTheoremReport:
    """Itemized verification of the twin-prime minimal threshold."""

    p: int
    k: int
    exponent_p: int
    exponent_q: int
    expected_exponent: int
    boundary_exponents_ok: bool
    dominance_fails_at_k: bool
    n_min_value: int
    formula_value: int
    n_min_matches_formula: bool
    global_min_argmin: int
    global_min_value: Fraction
    threshold_enclosure: RealInterval
    threshold_below_min: bool
    verdict: bool


@dataclass(frozen=True)
class ChainReport:
    """All comparisons behind the descending chain of maximal powers at n."""

    n: int
    m: int
    links: tuple
    holds: bool


# ---------------------------------------------------------------------------
# tail certificate for the dominance threshold
# ---------------------------------------------------------------------------


def tail_bound_n0(
    p: int,
    mode: str,
    ctx: PrimeContext,
    *,
    precision_bits: int = DEFAULT_START_BITS,
    cap_bits: int = DEFAULT_CAP_BITS,
) -> TailCertificate:
    """Minimal N such that floor_log(n,p) < (n-1)*a - (p-2)/(p-1) for n >= N.

    The slope a is the certified lower endpoint of h_p(p_succ) (exact-h) or
    the relaxed 1/5 for p = 2 (paper-relaxation, where the comparison is
    the non-strict one and the offset term vanishes). Iterates power-of-p
    blocks: the left side is constant on a block while the right side is
    linear and increasing, so each block reduces to one exact rational
    inequality, and the iteration closes once a block is failure-free and
    the right side gains at least 1 across it.
    """
    ctx.require_prime(p)
    p_succ = next_prime(p, ctx)
    if mode not in (MODE_EXACT_H, MODE_PAPER_RELAXATION):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == MODE_PAPER_RELAXATION and p != 2:
        raise ValueError("paper-relaxation slope 1/5 is only available for p = 2")

    bits = precision_bits
    while True:
        enclosure = h_p(p, p_succ, bits)
        if enclosure.lo_fraction() > 0:
            break
        bits *= 2
        if bits > cap_bits:
            raise InternalCheckError(
                f"h_{p}({p_succ}) enclosure not positive at {cap_bits} bits"
            )

    if mode == MODE_EXACT_H:
        slope = enclosure.lo_fraction()
        strict = True
        offset = Fraction(p - 2, p - 1)
    else:
        slope = Fraction(1, 5)
        strict = False
        offset = Fraction(0)
        if not enclosure.lo_fraction() > slope:
            raise InternalCheckError("relaxed slope 1/5 not below certified h_2(3)")

    last_fail = 0
    k = 0
    while True:
        block_lo = p**k
        block_hi = p ** (k + 1) - 1
        if strict:
            # smallest n with k < (n-1)*slope - offset
            sol = math.floor((k + offset) / slope) + 2
        else:
            # smallest n with k <= (n-1)*slope
            sol = math.ceil(Fraction(k) / slope + 1)
        if sol > block_hi:
            last_fail = block_hi
        elif sol > block_lo:
            last_fail = sol - 1
        elif slope * (block_hi + 1 - block_lo) >= 1:
            # holds on the whole block and the per-block gain exceeds the
            # unit step of the left side: holds for every later n too
            return TailCertificate(
                p=p,
                threshold=max(last_fail + 1, 2),
                mode=mode,
                h_enclosure=enclosure,
                block_checked=k,
            )
        k += 1


# ---------------------------------------------------------------------------
# dominance scans
# ---------------------------------------------------------------------------


def scan_dominance_violations(
    p: int, q: int, lo: int, hi: int, *, precision_bits: int = 96
) -> list[int]:
    """All n in [lo, hi] where p^{nu_p(n!)} does not strictly exceed q^{nu_q(n!)}.

    Partition-safe: results over disjoint adjacent ranges concatenate to
    the full-range result. Valuations are carried incrementally; each n
    costs two integer products against cached log bounds, with a full
    certified comparison only for the rare unresolved cases.
    """
    if lo < 2 or hi < lo:
        raise ValueError(f"invalid scan range [{lo}, {hi}]")
    p_lo, p_hi = ln_mantissa_bounds(p, precision_bits)
    q_lo, q_hi = ln_mantissa_bounds(q, precision_bits)
    vp = legendre_floor_sum(lo - 1, p) if lo > 2 else 0
    vq = legendre_floor_sum(lo - 1, q) if lo > 2 else 0
    violations = []
    for n in range(lo, hi + 1):
        if n % p == 0:
            m = n
            while m % p == 0:
                m //= p
                vp += 1
        if n % q == 0:
            m = n
            while m % q == 0:
                m //= q
                vq += 1
        if vp * p_lo > vq * q_hi:  # certified p-side win
            continue
        if vp * p_hi < vq * q_lo or vp == vq == 0:
            violations.append(n)
            continue
        if compare_prime_powers(p, vp, q, vq).outcome is not Ordering.GT:
            violations.append(n)
    return violations


def n_min(
    p: int,
    ctx: PrimeContext,
    *,
    precision_bits: int = DEFAULT_START_BITS,
    cap_bits: int = DEFAULT_CAP_BITS,
) -> SearchReport:
    """Least N with strict dominance of p over p_succ at every n >= N.

    Certified by an exhaustive scan up to the exact-h tail threshold; the
    reported value is one past the last scanned violation.
    """
    cert = tail_bound_n0(
        p, MODE_EXACT_H, ctx, precision_bits=precision_bits, cap_bits=cap_bits
    )
    q = next_prime(p, ctx)
    violations = scan_dominance_violations(p, q, 2, cert.threshold)
    value = violations[-1] + 1 if violations else 2
    return SearchReport(
        p=p,
        quantity=QUANTITY_N_MIN,
        value=value,
        scan_range=(2, cert.threshold),
        certificate=cert,
        violations=tuple(violations),
    )


def scan_two_domination(n_max: int, ctx: PrimeContext) -> tuple[tuple[int, int], ...]:
    """All (q, n) with 2 <= n <= n_max, odd prime q <= n, where 2 fails to dominate.

    Valuations of every prime are maintained incrementally along n; the
    certified fast path settles almost every pair, and anything unresolved
    goes through the full escalating comparison.
    """
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    if ctx.sieve_limit < n_max:
        raise ValueError(f"sieve limit {ctx.sieve_limit} < n_max {n_max}")
    bits = 96
    primes = [pr for pr in ctx.primes if pr <= n_max]
    index = {pr: i for i, pr in enumerate(primes)}
    lows = [0] * len(primes)
    highs = [0] * len(primes)
    for i, pr in enumerate(primes):
        lows[i], highs[i] = ln_mantissa_bounds(pr, bits)
    # smallest prime factor table drives the incremental valuation updates
    spf = list(range(n_max + 1))
    for pr in primes:
        if pr * pr > n_max:
            break
        for j in range(pr * pr, n_max + 1, pr):
            if spf[j] == j:
                spf[j] = pr
    counts = [0] * len(primes)
    lo2 = lows[0]
    exceptions = []
    n_primes_seen = 0
    for n in range(2, n_max + 1):
        m = n
        while m > 1:
            pr = spf[m]
            while m % pr == 0:
                m //= pr
                counts[index[pr]] += 1
        while n_primes_seen < len(primes) and primes[n_primes_seen] <= n:
            n_primes_seen += 1
        a = counts[0]
        a_low = a * lo2
        for i in range(1, n_primes_seen):
            b = counts[i]
            if a_low > b * highs[i]:
                continue
            if compare_prime_powers(2, a, primes[i], b).outcome is not Ordering.GT:
                exceptions.append((primes[i], n))
    return tuple(exceptions)


# ---------------------------------------------------------------------------
# global minimum of the twin ratio
# ---------------------------------------------------------------------------

_RATIO_SCAN_END = {3: 81, 5: 125}  # p >= 11 uses 4*p^2


def default_ratio_scan_end(p: int) -> int:
    return _RATIO_SCAN_END.get(p, 4 * p * p)


def global_min_r(
    p: int,
    ctx: PrimeContext,
    *,
    n_tilde: int | None = None,
    auto_grow: bool = False,
    precision_bits: int = DEFAULT_START_BITS,
    cap_bits: int = DEFAULT_CAP_BITS,
) -> SearchReport:
    """Smallest argmin and exact value of the twin ratio over n >= (p^2+p)/2.

    Scans the ratio exactly over [(p^2+p)/2, n_tilde] and certifies that
    the tail lower bound at n_tilde clears the scanned minimum, so nothing
    beyond the scan can go lower. With auto_grow the scan end doubles until
    the certificate closes; otherwise a failed certificate raises
    CertificateGap.
    """
    ctx.require_prime(p)
    ctx.require_prime(p + 2)
    start = (p * p + p) // 2
    end = default_ratio_scan_end(p) if n_tilde is None else n_tilde
    if end < max(start, p + 2):
        raise ValueError(f"scan end {end} below scan start for p={p}")

    best: Fraction | None = None
    argmin = 0
    scanned_to = start - 1

    def extend(to: int) -> None:
        nonlocal best, argmin, scanned_to
        for n in range(scanned_to + 1, to + 1):
            value = ratio_r(n, p).value
            if best is None or value < best:
                best, argmin = value, n
        scanned_to = to

    extend(end)
    while True:
        bits = precision_bits
        while bits <= cap_bits:
            bound = tail_lower_bound_r(p, scanned_to, bits)
            if bound.lo_fraction() >= best:
                cert = RatioTailCertificate(p=p, n_tilde=scanned_to, bound=bound)
                return SearchReport(
                    p=p,
                    quantity=QUANTITY_GLOBAL_MIN_R,
                    value=(argmin, best),
                    scan_range=(start, scanned_to),
                    certificate=cert,
                    violations=(),
                )
            if bound.hi_fraction() < best:
                break  # the true bound is genuinely below the minimum
            bits *= 2
        if not auto_grow:
            raise CertificateGap(
                f"tail bound at n_tilde={scanned_to} does not clear the "
                f"scanned minimum {best} for p={p}"
            )
        extend(2 * scanned_to)


# ---------------------------------------------------------------------------
# twin theorem verification
# ---------------------------------------------------------------------------


def verify_twin_theorem(p: int, ctx: PrimeContext) -> TwinTheoremReport:
    """Check every ingredient of the twin-prime minimal threshold at p."""
    if p == 2:
        raise ValueError("p = 2 has no twin partner (4 is not prime)")
    ctx.require_prime(p)
    ctx.require_prime(p + 2)
    q = p + 2
    k = (p * p + p) // 2 - 1
    exponent_p = legendre_digit_form(k, p)
    exponent_q = legendre_digit_form(k, q)
    expected = (p - 1) // 2
    boundary_ok = exponent_p == expected and exponent_q == expected

    q_side = compare_prime_powers(q, exponent_q, p, exponent_p)
    dominance_fails = q_side.outcome is Ordering.GT

    nmin_report = n_min(p, ctx)
    formula = (p * p + p) // 2
    assert isinstance(nmin_report.value, int)
    nmin_ok = nmin_report.value == formula

    rmin_report = global_min_r(p, ctx)
    argmin, minimum = rmin_report.value

    bits = DEFAULT_START_BITS
    threshold = twin_threshold(p, bits)
    while not threshold.hi_fraction() < minimum:
        if threshold.lo_fraction() >= minimum or bits > DEFAULT_CAP_BITS:
            break  # genuinely not below, or precision exhausted: report false
        bits *= 2
        threshold = twin_threshold(p, bits)
    threshold_ok = threshold.hi_fraction() < minimum

    return TwinTheoremReport(
        p=p,
        k=k,
        exponent_p=exponent_p,
        exponent_q=exponent_q,
        expected_exponent=expected,
        boundary_exponents_ok=boundary_ok,
        dominance_fails_at_k=dominance_fails,
        n_min_value=nmin_report.value,
        formula_value=formula,
        n_min_matches_formula=nmin_ok,
        global_min_argmin=argmin,
        global_min_value=minimum,
        threshold_enclosure=threshold,
        threshold_below_min=threshold_ok,
        verdict=boundary_ok and dominance_fails and nmin_ok and threshold_ok,
    )


# ---------------------------------------------------------------------------
# gap exploration
# ---------------------------------------------------------------------------


def _lagrange_quadratic(
    points: list[tuple[int, int]]
) -> tuple[Fraction, Fraction, Fraction]:
    """Exact quadratic through three points, as (c0, c1, c2) coefficients."""
    (x0, y0), (x1, y1), (x2, y2) = points
    w0 = Fraction(y0, (x0 - x1) * (x0 - x2))
    w1 = Fraction(y1, (x1 - x0) * (x1 - x2))
    w2 = Fraction(y2, (x2 - x0) * (x2 - x1))
    c2 = w0 + w1 + w2
    c1 = -(w0 * (x1 + x2) + w1 * (x0 + x2) + w2 * (x0 + x1))
    c0 = w0 * x1 * x2 + w1 * x0 * x2 + w2 * x0 * x1
    return (c0, c1, c2)


def poly_eval(coeffs: tuple[Fraction, ...], x: int) -> Fraction:
    total = Fraction(0)
    for c in reversed(coeffs):
        total = total * x + c
    return total


def explore_gaps(
    p_max: int,
    ctx: PrimeContext,
    *,
    precision_bits: int = DEFAULT_START_BITS,
    cap_bits: int = DEFAULT_CAP_BITS,
) -> tuple[GapRecord, ...]:
    """n_min for every prime p <= p_max, grouped by the gap to p_succ.

    Gap classes with at least four samples get an exact quadratic fit
    through the first three, validated against all the rest; a misfit is
    recorded as the absence of a polynomial, never approximated away.
    """
    if p_max < 3:
        raise ValueError(f"p_max must be >= 3, got {p_max}")
    by_gap: dict[int, list[tuple[int, int]]] = {}
    for p in ctx.primes:
        if p > p_max:
            break
        q = next_prime(p, ctx)
        report = n_min(p, ctx, precision_bits=precision_bits, cap_bits=cap_bits)
        assert isinstance(report.value, int)
        by_gap.setdefault(q - p, []).append((p, report.value))
    records = []
    for gap in sorted(by_gap):
        samples = by_gap[gap]
        fitted = None
        if len(samples) >= 4:
            coeffs = _lagrange_quadratic(samples[:3])
            if all(poly_eval(coeffs, x) == y for x, y in samples):
                fitted = coeffs
        records.append(
            GapRecord(
                gap=gap,
                samples=tuple(samples),
                fitted_poly=fitted,
                validated_through=samples[-1][0],
            )
        )
    return tuple(records)


# ---------------------------------------------------------------------------
# dominance chain at a fixed n
# ---------------------------------------------------------------------------


def dominance_chain(n: int, m: int, ctx: PrimeContext) -> ChainReport:
    """Evaluate the strict descending chain among maximal prime powers in n!.

    Links cover the consecutive pairs of the first m primes and then the
    last of those against every further prime q <= n.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if ctx.sieve_limit < n:
        raise ValueError(f"sieve limit {ctx.sieve_limit} < n={n}")
    leading = ctx.primes[:m]
    if len(leading) < m or leading[-1] > n:
        raise ValueError(f"the first {m} primes must all be <= n={n}")
    valuation = {pr: legendre_digit_form(n, pr) for pr in ctx.primes if pr <= n}
    links = []
    for left, right in zip(leading, leading[1:]):
        links.append(compare_prime_powers(left, valuation[left], right, valuation[right]))
    anchor = leading[-1]
    for q in ctx.primes[m:]:
        if q > n:
            break
        links.append(compare_prime_powers(anchor, valuation[anchor], q, valuation[q]))
    holds = all(link.outcome is Ordering.GT for link in links)
    return ChainReport(n=n, m=m, links=tuple(links), holds=holds)
