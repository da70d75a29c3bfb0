"""Exact arithmetic for the maximal prime-power divisors of factorials.

The library certifies orderings among the powers p^{nu_p(n!)}, computes
the minimal dominance thresholds n_min(p) and the tail thresholds n_0(p),
and verifies the twin-prime closed form n_min(p) = (p^2+p)/2, all with
arbitrary-precision integers, exact rationals, and outward-rounded dyadic
interval enclosures. No floating point participates in any decision.
"""

from .arith import (
    DigitExpansion,
    Dyadic,
    EnclosureError,
    Ordering,
    RealInterval,
    digit_sum,
    digits,
    floor_log,
    interval_ln,
    rational_cmp,
)
from .dominance import (
    PowerComparison,
    RatioPoint,
    compare_prime_powers,
    dominates,
    h_p,
    ratio_r,
    tail_lower_bound_r,
    twin_threshold,
)
from .search import (
    MODE_EXACT_H,
    MODE_PAPER_RELAXATION,
    CertificateGap,
    ChainReport,
    GapRecord,
    RatioTailCertificate,
    SearchReport,
    TailCertificate,
    TwinTheoremReport,
    dominance_chain,
    explore_gaps,
    global_min_r,
    n_min,
    scan_dominance_violations,
    scan_two_domination,
    tail_bound_n0,
    verify_twin_theorem,
)
from .valuation import (
    FactorialFactorization,
    InternalCheckError,
    PrimeContext,
    PrimeContextExhausted,
    factorize_factorial,
    legendre_digit_form,
    legendre_floor_sum,
    next_prime,
    primes_upto,
)

__version__ = "0.1.0"

__all__ = [
    "CertificateGap",
    "ChainReport",
    "DigitExpansion",
    "Dyadic",
    "EnclosureError",
    "FactorialFactorization",
    "GapRecord",
    "InternalCheckError",
    "MODE_EXACT_H",
    "MODE_PAPER_RELAXATION",
    "Ordering",
    "PowerComparison",
    "PrimeContext",
    "PrimeContextExhausted",
    "RatioPoint",
    "RatioTailCertificate",
    "RealInterval",
    "SearchReport",
    "TailCertificate",
    "TwinTheoremReport",
    "compare_prime_powers",
    "digit_sum",
    "digits",
    "dominance_chain",
    "dominates",
    "explore_gaps",
    "factorize_factorial",
    "floor_log",
    "global_min_r",
    "h_p",
    "interval_ln",
    "legendre_digit_form",
    "legendre_floor_sum",
    "n_min",
    "next_prime",
    "primes_upto",
    "ratio_r",
    "rational_cmp",
    "scan_dominance_violations",
    "scan_two_domination",
    "tail_bound_n0",
    "tail_lower_bound_r",
    "twin_threshold",
    "verify_twin_theorem",
    "__version__",
]
