"""
Integer number theory used throughout selmergen: deterministic primality
testing and factorization by trial division followed by Pollard rho.

All results are reproducible; no function draws ambient randomness.
"""

import hashlib
import logging
import math
from collections import Counter
from functools import lru_cache
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from selmergen.helpers.errors import WorkBoundExceeded
from selmergen.helpers.helper_functions import HexInt
from selmergen.main import FACTOR_WORK_BOUND

logger = logging.getLogger(__name__)

TRIAL_DIVISION_LIMIT = 10**6

# deterministic Miller-Rabin witnesses for every n < 3.3 * 10^24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_DERIVED_ROUNDS = 64


class Factorization(BaseModel):
    """
    Prime factorization of a positive integer.

    Attributes
    ----------
    factors : tuple of (int, int)
        Pairs ``(prime, exponent)`` sorted by ascending prime.
    remaining : int
        Unfactored composite cofactor; 1 when the factorization is complete.
    cofactor_complete : bool
        True iff ``remaining == 1``.

    """
    factors: tuple[tuple[HexInt, HexInt], ...] = ()
    remaining: HexInt = 1
    cofactor_complete: bool = True

    model_config = ConfigDict(extra="forbid", frozen=True)

    @property
    def value(self) -> int:
        """The integer this factorization multiplies back to."""
        product = self.remaining
        for prime, exponent in self.factors:
            product *= prime**exponent
        return product

    @property
    def primes(self) -> list[int]:
        return [prime for prime, _ in self.factors]

    def largest_prime(self) -> Optional[int]:
        """Largest listed prime, or None for the empty factorization."""
        return self.factors[-1][0] if self.factors else None

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)


@lru_cache(maxsize=None)
def _trial_primes(limit: int = TRIAL_DIVISION_LIMIT) -> tuple[int, ...]:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return tuple(int(q) for q in np.flatnonzero(sieve))


def _derived_bases(n: int) -> list[int]:
    width = (n.bit_length() + 7) // 8
    seed = b"selmergen-mr" + n.to_bytes(width, "big")
    bases = []
    for i in range(_DERIVED_ROUNDS):
        digest = hashlib.sha256(seed + i.to_bytes(4, "big")).digest()
        bases.append(2 + int.from_bytes(digest, "big") % (n - 3))
    return bases


def _strong_probable_prime(n: int, d: int, s: int, base: int) -> bool:
    x = pow(base, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """
    Decide primality with the Miller-Rabin test.

    Below 2^64 the fixed witness set of the first twelve primes makes the
    answer exact. Above, 64 witnesses are derived from ``n`` by SHA-256 so
    that repeated calls, on any platform, return the same answer.

    Parameters
    ----------
    n : int
        A non-negative integer.

    Returns
    -------
    bool
        True if ``n`` is (probably, above 2^64) prime.

    """
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n < _MR_BASES[-1] ** 2:
        return True

    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    bases = _MR_BASES if n < 2**64 else _derived_bases(n)
    return all(_strong_probable_prime(n, d, s, a) for a in bases)


def _rho(n: int, c: int, budget: int) -> tuple[Optional[int], int]:
    """Floyd cycle search on x -> x^2 + c; returns (divisor, steps)."""
    x = y = 2
    steps = 0
    d = 1
    while d == 1:
        if steps >= budget:
            return None, steps
        x = (x * x + c) % n
        y = (y * y + c) % n
        y = (y * y + c) % n
        d = math.gcd(abs(x - y), n)
        steps += 1
    return (None if d == n else d), steps


def _split(n: int, work_bound: int) -> Optional[int]:
    """Find a nontrivial divisor of the composite n within the work bound."""
    spent = 0
    c = 1
    while spent < work_bound:
        divisor, steps = _rho(n, c, work_bound - spent)
        spent += steps
        if divisor is not None:
            return divisor
        c += 1
    return None


def factorize(n: int, work_bound: int = FACTOR_WORK_BOUND) -> Factorization:
    """
    Factor a positive integer.

    Trial division by all primes up to 10^6 is followed by Pollard rho on
    the remaining composites, restarting with the polynomials x^2 + 1,
    x^2 + 2, ... until a split is found.

    Parameters
    ----------
    n : int
        Integer to factor, ``n >= 1``.
    work_bound : int, optional
        Maximum number of rho iterations spent on a single composite.
        The default is 2^20.

    Raises
    ------
    ValueError
        If ``n < 1``.
    WorkBoundExceeded
        If some composite could not be split within the bound. The
        exception carries the partial factorization.

    Returns
    -------
    Factorization
        The complete factorization, primes in ascending order.

    """
    if n < 1:
        raise ValueError(f"cannot factor {n}; n must be positive")

    found: Counter[int] = Counter()
    rest = n
    for q in _trial_primes():
        if q * q > rest:
            break
        while rest % q == 0:
            found[q] += 1
            rest //= q

    remaining = 1
    pending = [rest] if rest > 1 else []
    while pending:
        m = pending.pop()
        if is_prime(m):
            found[m] += 1
            continue
        divisor = _split(m, work_bound)
        if divisor is None:
            logger.warning("rho gave up on a %d-bit composite",
                           m.bit_length())
            remaining *= m
            continue
        pending.extend((divisor, m // divisor))

    factorization = Factorization(
        factors=tuple(sorted(found.items())),
        remaining=remaining,
        cofactor_complete=remaining == 1,
    )
    if remaining != 1:
        raise WorkBoundExceeded(factorization)
    return factorization
