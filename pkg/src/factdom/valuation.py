"""Prime generation and exact prime-adic valuations of factorials.

A PrimeContext built by one audited sieve is the single source of primality
for the whole package; no operation here ever tests primality on its own.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .arith import digit_sum


class PrimeContextExhausted(Exception):
    """The sieve does not reach far enough for the requested query."""


class InternalCheckError(RuntimeError):
    """An exact-arithmetic identity that can never fail on valid input did."""


@dataclass(frozen=True)
class PrimeContext:
    """All primes up to sieve_limit, ascending."""

    sieve_limit: int
    primes: tuple[int, ...]
    _members: frozenset[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_members", frozenset(self.primes))

    def is_prime(self, n: int) -> bool:
        if n > self.sieve_limit:
            raise PrimeContextExhausted(
                f"{n} exceeds sieve limit {self.sieve_limit}; re-sieve larger"
            )
        return n in self._members

    def require_prime(self, n: int) -> None:
        if not self.is_prime(n):
            raise ValueError(f"{n} is not prime")


def primes_upto(limit: int) -> PrimeContext:
    """Sieve of Eratosthenes over [2, limit]."""
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    sieve = bytearray(b"\x01") * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    p = 2
    while p * p <= limit:
        if sieve[p]:
            start = p * p
            sieve[start :: p] = b"\x00" * ((limit - start) // p + 1)
        p += 1
    return PrimeContext(limit, tuple(i for i, flag in enumerate(sieve) if flag))


def next_prime(p: int, ctx: PrimeContext) -> int:
    """Smallest prime strictly greater than p."""
    ctx.require_prime(p)
    i = bisect.bisect_right(ctx.primes, p)
    if i >= len(ctx.primes):
        raise PrimeContextExhausted(
            f"no prime beyond {p} within sieve limit {ctx.sieve_limit}"
        )
    return ctx.primes[i]


def legendre_floor_sum(n: int, p: int) -> int:
    """Exponent of the prime p in n!, as the floor sum over powers of p.

    Powers of p are produced by exact multiplication, so exact powers of p
    never hit a rounding boundary. p must be prime (caller-certified).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    total = 0
    power = p
    while power <= n:
        total += n // power
        power *= p
    return total


def legendre_digit_form(n: int, p: int) -> int:
    """Exponent of the prime p in n!, as (n - s_p(n)) / (p - 1).

    The division is exact for every valid input; an inexact division here
    indicates a bug, never bad data.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")
    diff = n - digit_sum(n, p)
    quotient, remainder = divmod(diff, p - 1)
    if remainder:
        raise InternalCheckError(
            f"(p-1) does not divide n - s_p(n) for n={n}, p={p}"
        )
    return quotient


@dataclass(frozen=True)
class FactorialFactorization:
    """n! as an ordered product of maximal prime powers."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def reconstruct(self) -> int:
        out = 1
        for prime, exponent in self.factors:
            out *= prime**exponent
        return out


def factorize_factorial(n: int, ctx: PrimeContext) -> FactorialFactorization:
    """Complete factorization of n! with one valuation per prime <= n."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if ctx.sieve_limit < n:
        raise PrimeContextExhausted(
            f"sieve limit {ctx.sieve_limit} < n={n}; re-sieve larger"
        )
    factors = []
    for p in ctx.primes:
        if p > n:
            break
        factors.append((p, legendre_digit_form(n, p)))
    return FactorialFactorization(n=n, factors=tuple(factors))
