"""Slow, obvious reference implementations for tests.

Nothing here imports the sieve, the kernels or the compensated accumulator.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction


def _trial_division(n):
    out = []
    for d in (2, 3):
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
    # candidates 5, 7, 11, 13, ... (6k - 1 and 6k + 1)
    d, step = 5, 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def naive_eval_factored(spec, factors):
    """Fold spec values over a factorization, largest prime power first."""
    v = complex(1.0, 0.0)
    for p, k in reversed(factors):
        v = spec.prime_power_value(p, k) * v
    return v


def naive_eval(spec, n):
    """f(n) by trial division, no sieve and no caching."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return naive_eval_factored(spec, _trial_division(n))


def trial_factorizations(N):
    """Trial-division factorizations of 1..N, index 0 unused."""
    return [[]] + [_trial_division(n) for n in range(1, N + 1)]


_SHIFT = 1074  # every finite double is an integer multiple of 2^-1074


def _scaled(x):
    num, den = x.as_integer_ratio()
    return num << (_SHIFT - den.bit_length() + 1)


def _unscaled(total):
    return float(Fraction(total, 1 << _SHIFT))


def _phase(j, alpha):
    if alpha.mode == "rational":
        turn = Fraction(j * alpha.a % alpha.q, alpha.q)
    else:
        turn = Fraction(j * alpha.frac % (1 << 128), 1 << 128)
    return cmath.exp(2j * math.pi * float(turn))


def direct_char_prefix_sums(chi, alpha, t, n):
    """[S(0), S(1), ..., S(n)] for S(x) = sum_{j <= x} chi(j) e(j alpha) j^{it}.

    Terms are rounded doubles; their running total is kept as an exact
    integer and rounded once per prefix.
    """
    m = chi.modulus
    out = [0j]
    re = im = 0
    for j in range(1, n + 1):
        v = complex(chi.values[j % m])
        if v != 0:
            term = v * _phase(j, alpha)
            if t:
                term *= cmath.exp(1j * t * math.log(j))
            re += _scaled(term.real)
            im += _scaled(term.imag)
        out.append(complex(_unscaled(re), _unscaled(im)))
    return out


def direct_char_sum(chi, alpha, t, n):
    """sum_{j <= n} chi(j) e(j alpha) j^{it}, term by term with exact accumulation."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return direct_char_prefix_sums(chi, alpha, t, n)[-1]


def naive_P(chi, z):
    """sum_{0 <= n < m} chi(n) z^n with each power taken directly."""
    z = complex(z)
    total = 0j
    for n in range(chi.modulus):
        total += complex(chi.values[n]) * z**n
    return total
