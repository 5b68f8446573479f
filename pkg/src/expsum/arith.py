"""Integer primitives: sieve-backed factorization, phi, mu, valuations and the
exact-divisibility CRT construction."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from ._backend import kernels
from .errors import DomainError, InvalidConfigError, OutOfRangeError, ResourceLimitError

PrimePowerList = List[Tuple[int, int]]

SIEVE_CAPACITY = 2**32 - 1


@dataclass(frozen=True, eq=False)
class FactorTable:
    """Smallest-prime-factor table for ``0 <= n <= limit``.

    ``spf[n]`` is the least prime dividing ``n`` for ``n >= 2``; entries 0 and 1
    are zero.  The array is read-only so the table can be shared freely.
    """

    limit: int
    spf: np.ndarray

    @classmethod
    def build(cls, limit: int) -> "FactorTable":
        if limit < 1:
            raise DomainError("sieve limit must be positive")
        if limit > SIEVE_CAPACITY:
            raise ResourceLimitError(f"sieve limit {limit} exceeds 2**32 - 1")
        spf = kernels.linear_sieve(limit)
        spf.setflags(write=False)
        return cls(limit, spf)

    def is_prime(self, n: int) -> bool:
        if not 0 <= n <= self.limit:
            raise OutOfRangeError(f"{n} outside table range [0, {self.limit}]")
        return n >= 2 and int(self.spf[n]) == n

    def primes(self, lo: int = 2, hi: int | None = None) -> np.ndarray:
        """Primes ``p`` with ``lo <= p <= hi`` in increasing order."""
        hi = self.limit if hi is None else hi
        if hi > self.limit:
            raise OutOfRangeError(f"{hi} exceeds table limit {self.limit}")
        lo = max(lo, 2)
        if hi < lo:
            return np.zeros(0, dtype=np.int64)
        idx = np.arange(lo, hi + 1, dtype=np.int64)
        return idx[self.spf[lo:hi + 1] == idx]


_shared_table: FactorTable | None = None


def factor_table(limit: int) -> FactorTable:
    """A shared table covering at least ``limit``; grows geometrically on demand."""
    global _shared_table
    if _shared_table is None or _shared_table.limit < limit:
        size = max(limit, 1024)
        if _shared_table is not None:
            size = max(size, min(2 * _shared_table.limit, SIEVE_CAPACITY))
        _shared_table = FactorTable.build(size)
    return _shared_table


def factorize(n: int, table: FactorTable) -> PrimePowerList:
    """Factor ``n`` as ``[(p, e), ...]`` with increasing primes using ``table``."""
    if n < 1 or n > table.limit:
        raise OutOfRangeError(f"cannot factor {n} with a table of limit {table.limit}")
    spf = table.spf
    out: PrimePowerList = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def _trial_factor(n: int) -> PrimePowerList:
    out: PrimePowerList = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def prime_factors(n: int) -> PrimePowerList:
    """Factorization of an arbitrary positive integer (table when cached, else trial division)."""
    if n < 1:
        raise DomainError("factorization needs n >= 1")
    if _shared_table is not None and n <= _shared_table.limit:
        return factorize(n, _shared_table)
    return _trial_factor(n)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Least prime strictly greater than ``n``."""
    c = max(n + 1, 2)
    while not is_prime(c):
        c += 1
    return c


def totient(n: int) -> int:
    if n < 1:
        raise DomainError("totient is defined for n >= 1")
    out = n
    for p, _ in prime_factors(n):
        out -= out // p
    return out


def moebius(n: int) -> int:
    if n < 1:
        raise DomainError("moebius is defined for n >= 1")
    sign = 1
    for _, e in prime_factors(n):
        if e > 1:
            return 0
        sign = -sign
    return sign


def valuation(n: int, p: int) -> int:
    """Largest ``e`` with ``p**e | n``."""
    if n == 0:
        raise DomainError("valuation of 0 is undefined")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def divisors(n: int) -> List[int]:
    out = [1]
    for p, e in prime_factors(n):
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def crt_exact_divisibility(
    H: int, assignments: Mapping[int, Sequence[Tuple[int, int]]], W: int
) -> Tuple[int, int]:
    """Residue ``n0`` modulo ``M`` such that ``k_j`` exactly divides ``W*n + j``.

    ``assignments[j]`` lists ``(p, a)`` pairs and ``k_j`` is the product of
    ``p**a``.  For each pair we impose ``W*n + j = k_j (mod p**(a+1))``, which
    pins the ``p``-adic valuation of ``W*n + j`` to exactly ``a``.  Returns
    ``(n0, M)`` with ``M`` the product of all ``p**(a+1)`` and ``0 <= n0 < M``.
    """
    if H < 1 or W < 1:
        raise InvalidConfigError("H and W must be positive")
    seen: Dict[int, int] = {}
    congruences: List[Tuple[int, int]] = []
    for j, pairs in assignments.items():
        if not 1 <= j <= H:
            raise InvalidConfigError(f"index j={j} outside 1..{H}")
        k_j = 1
        for p, a in pairs:
            k_j *= p**a
        for p, a in pairs:
            if not is_prime(p):
                raise InvalidConfigError(f"{p} is not prime")
            if a < 1:
                raise InvalidConfigError(f"exponent {a} for p={p} must be >= 1")
            if p <= H:
                raise InvalidConfigError(f"prime {p} must exceed H={H}")
            if W % p == 0:
                raise InvalidConfigError(f"prime {p} divides W={W}")
            if p in seen:
                raise InvalidConfigError(f"prime {p} assigned to both j={seen[p]} and j={j}")
            seen[p] = j
            mod = p ** (a + 1)
            # W*n = k_j - j (mod p^(a+1)); W is invertible since p does not divide W
            congruences.append(((k_j - j) * pow(W, -1, mod) % mod, mod))
    n0, M = 0, 1
    for r, mod in congruences:
        # merge n = n0 (mod M) with n = r (mod mod); moduli are coprime
        t = (r - n0) * pow(M, -1, mod) % mod
        n0 += M * t
        M *= mod
    return n0 % M, M


def exactly_divides(k: int, n: int) -> bool:
    """True when ``k | n`` and ``p*k`` does not divide ``n`` for every prime ``p | k``."""
    if n % k:
        return False
    return all((n // k) % p for p, _ in prime_factors(k))
