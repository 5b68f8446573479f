"""Pure-Python kernels.  Same signatures and arithmetic as ``_core.pyx``.

Used when the compiled extension is unavailable or when
``EXPSUM_PURE_PYTHON=1`` is set.  Roughly two orders of magnitude slower.
"""
import math

import numpy as np

TWO_PI = 6.283185307179586
HALF_PI = 1.5707963267948966
TABLE_MAX = 1 << 22
_INV64 = 2.0**-64
_INV128 = 2.0**-128
_MASK64 = (1 << 64) - 1

RATIONAL = 0
FIXED = 1


def linear_sieve(limit):
    spf = np.zeros(limit + 1, dtype=np.uint32)
    s = [0] * (limit + 1)
    primes = []
    for i in range(2, limit + 1):
        if s[i] == 0:
            s[i] = i
            primes.append(i)
        si = s[i]
        for p in primes:
            if p > si or p * i > limit:
                break
            s[p * i] = p
    spf[:] = s
    return spf


def multiplicative_fill(spf, ppval):
    n_max = len(spf) - 1
    s = spf.tolist()
    pp = ppval.tolist()
    pk = [0] * (n_max + 1)
    f = [0j] * (n_max + 1)
    if n_max >= 1:
        f[1] = complex(1.0, 0.0)
    for n in range(2, n_max + 1):
        p = s[n]
        m = n // p
        if m > 1 and s[m] == p:
            pk[n] = pk[m] * p
        else:
            pk[n] = p
        a = pp[pk[n]]
        b = f[n // pk[n]]
        f[n] = complex(a.real * b.real - a.imag * b.imag, a.real * b.imag + a.imag * b.real)
    return np.array(f, dtype=np.complex128)


def _quadrant(j, c, s):
    j &= 3
    if j == 0:
        return c, s
    if j == 1:
        return -s, c
    if j == 2:
        return -c, -s
    return s, -c


def root_of_unity(r, q):
    """e(r/q) for 0 <= r < q.

    The angle is split into a whole number of quarter turns plus a centred
    remainder, so quarter-turn values come out exact.
    """
    r4 = 4 * r
    j = r4 // q
    rem = r4 - j * q
    if 2 * rem > q:
        j += 1
        rem -= q
    x = HALF_PI * (rem / q)
    return _quadrant(j, math.cos(x), math.sin(x))


def fixed_turn(hi, lo):
    """The angle in turns, centred in [-1/2, 1/2), of a 128-bit fraction."""
    h = hi - (1 << 64) if hi >= (1 << 63) else hi
    return float(h) * _INV64 + float(lo) * _INV128


def fixed_unit(hi, lo):
    """e(x) for the 128-bit fraction x = hi/2^64 + lo/2^128, with quadrant reduction."""
    j = ((hi + (1 << 61)) & _MASK64) >> 62
    h = (hi - (j << 62)) & _MASK64
    x = TWO_PI * fixed_turn(h, lo)
    return _quadrant(j, math.cos(x), math.sin(x))


def _phase_iter(n_max, mode, a, q, hi, lo):
    if mode == RATIONAL:
        r = 0
        if q <= TABLE_MAX:
            table = [root_of_unity(j, q) for j in range(q)]
            for _ in range(n_max):
                r += a
                if r >= q:
                    r -= q
                yield table[r]
        else:
            for _ in range(n_max):
                r += a
                if r >= q:
                    r -= q
                yield root_of_unity(r, q)
    else:
        ph, pl = 0, 0
        for _ in range(n_max):
            pl += lo
            carry = pl >> 64
            pl &= _MASK64
            ph = (ph + hi + carry) & _MASK64
            yield fixed_unit(ph, pl)


def phase_table(n_max, mode, a, q, hi, lo):
    out = np.empty(n_max + 1, dtype=np.complex128)
    out[0] = 1.0
    for n, (c, s) in enumerate(_phase_iter(n_max, mode, a, q, hi, lo), start=1):
        out[n] = complex(c, s)
    return out


def trajectory(coeffs, period, mode, a, q, hi, lo, t, harmonic, checkpoints):
    cps = [int(c) for c in checkpoints]
    ncp = len(cps)
    values = np.zeros(ncp, dtype=np.complex128)
    sups = np.zeros(ncp, dtype=np.float64)
    if ncp == 0:
        return values, sups
    n_max = cps[-1]
    cre = coeffs.real.tolist()
    cim = coeffs.imag.tolist()
    sr = si = cr = ci = 0.0
    sup = 0.0
    k = 0
    while k < ncp and cps[k] <= 0:
        k += 1
    idx = 0
    n = 0
    for pc, ps in _phase_iter(n_max, mode, a, q, hi, lo):
        n += 1
        if period > 0:
            idx += 1
            if idx == period:
                idx = 0
        else:
            idx = n
        xr = cre[idx] * pc - cim[idx] * ps
        xi = cre[idx] * ps + cim[idx] * pc
        if t != 0.0:
            th = t * math.log(n)
            tc = math.cos(th)
            ts = math.sin(th)
            xr, xi = xr * tc - xi * ts, xr * ts + xi * tc
        if harmonic:
            xr /= n
            xi /= n
        # Neumaier two-sum, per component
        s = sr + xr
        if abs(sr) >= abs(xr):
            cr += (sr - s) + xr
        else:
            cr += (xr - s) + sr
        sr = s
        s = si + xi
        if abs(si) >= abs(xi):
            ci += (si - s) + xi
        else:
            ci += (xi - s) + si
        si = s
        vr = sr + cr
        vi = si + ci
        # abs(complex) is libm hypot, matching the compiled kernel
        mag = abs(complex(vr, vi))
        if mag > sup:
            sup = mag
        while k < ncp and cps[k] == n:
            values[k] = complex(vr, vi)
            sups[k] = sup
            k += 1
    return values, sups
