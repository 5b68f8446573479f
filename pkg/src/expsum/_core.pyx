# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: linear sieve, multiplicative fill and phase-sum trajectories.

Arithmetic mirrors ``_pycore`` operation for operation.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, log, hypot, fabs
from libc.stdint cimport uint32_t, uint64_t, int64_t

cnp.import_array()

cdef double TWO_PI = 6.283185307179586
cdef double HALF_PI = 1.5707963267948966
cdef Py_ssize_t TABLE_MAX = 1 << 22
cdef double INV64 = 5.421010862427522e-20   # 2**-64
cdef double INV128 = 2.938735877055719e-39  # 2**-128

RATIONAL = 0
FIXED = 1


def linear_sieve(Py_ssize_t limit):
    spf_arr = np.zeros(limit + 1, dtype=np.uint32)
    cdef uint32_t[::1] spf = spf_arr
    cdef Py_ssize_t cap = limit // 2 + 16
    primes_arr = np.zeros(cap, dtype=np.uint32)
    cdef uint32_t[::1] primes = primes_arr
    cdef Py_ssize_t np_ = 0, i, j
    cdef uint64_t p, si, prod
    with nogil:
        for i in range(2, limit + 1):
            if spf[i] == 0:
                spf[i] = <uint32_t>i
                primes[np_] = <uint32_t>i
                np_ += 1
            si = spf[i]
            for j in range(np_):
                p = primes[j]
                prod = p * <uint64_t>i
                if p > si or prod > <uint64_t>limit:
                    break
                spf[prod] = <uint32_t>p
    return spf_arr


def multiplicative_fill(const uint32_t[::1] spf, const double complex[::1] ppval):
    cdef Py_ssize_t n_max = spf.shape[0] - 1, n, m, rest
    f_arr = np.zeros(n_max + 1, dtype=np.complex128)
    pk_arr = np.zeros(n_max + 1, dtype=np.uint32)
    cdef double[:, ::1] f = f_arr.view(np.float64).reshape(n_max + 1, 2)
    cdef uint32_t[::1] pk = pk_arr
    cdef uint32_t p
    cdef double ar, ai, br, bi
    if n_max >= 1:
        f[1, 0] = 1.0
        f[1, 1] = 0.0
    with nogil:
        for n in range(2, n_max + 1):
            p = spf[n]
            m = n // p
            if m > 1 and spf[m] == p:
                pk[n] = pk[m] * p
            else:
                pk[n] = p
            ar = ppval[pk[n]].real
            ai = ppval[pk[n]].imag
            rest = n // pk[n]
            br = f[rest, 0]
            bi = f[rest, 1]
            f[n, 0] = ar * br - ai * bi
            f[n, 1] = ar * bi + ai * br
    return f_arr


cdef inline void _quadrant(int64_t j, double c, double s, double* oc, double* os) noexcept nogil:
    j &= 3
    if j == 0:
        oc[0] = c
        os[0] = s
    elif j == 1:
        oc[0] = -s
        os[0] = c
    elif j == 2:
        oc[0] = -c
        os[0] = -s
    else:
        oc[0] = s
        os[0] = -c


cdef inline void _root(int64_t r, int64_t q, double* c, double* s) noexcept nogil:
    cdef int64_t r4 = 4 * r
    cdef int64_t j = r4 // q
    cdef int64_t rem = r4 - j * q
    if 2 * rem > q:
        j += 1
        rem -= q
    cdef double x = HALF_PI * (<double>rem / <double>q)
    _quadrant(j, cos(x), sin(x), c, s)


cdef inline double _fixed_turn(uint64_t hi, uint64_t lo) noexcept nogil:
    return <double>(<int64_t>hi) * INV64 + <double>lo * INV128


cdef inline void _fixed_unit(uint64_t hi, uint64_t lo, double* c, double* s) noexcept nogil:
    cdef uint64_t j = (hi + (<uint64_t>1 << 61)) >> 62
    cdef double x = TWO_PI * _fixed_turn(hi - (j << 62), lo)
    _quadrant(<int64_t>j, cos(x), sin(x), c, s)


cdef class _Phase:
    """Incremental generator of e(n*alpha), n = 1, 2, ..."""
    cdef int mode
    cdef int64_t a, q, r
    cdef uint64_t hi, lo, ph, pl
    cdef double[::1] tc
    cdef double[::1] ts
    cdef bint use_table

    def __init__(self, int mode, a, q, hi, lo):
        self.mode = mode
        self.a = a
        self.q = q
        self.hi = hi
        self.lo = lo
        self.r = 0
        self.ph = 0
        self.pl = 0
        self.use_table = mode == 0 and q <= TABLE_MAX
        cdef Py_ssize_t j
        cdef double c, s
        if self.use_table:
            self.tc = np.empty(q, dtype=np.float64)
            self.ts = np.empty(q, dtype=np.float64)
            for j in range(q):
                _root(j, q, &c, &s)
                self.tc[j] = c
                self.ts[j] = s

    cdef inline void next(self, double* c, double* s) noexcept nogil:
        cdef uint64_t old
        cdef double x
        if self.mode == 0:
            self.r += self.a
            if self.r >= self.q:
                self.r -= self.q
            if self.use_table:
                c[0] = self.tc[self.r]
                s[0] = self.ts[self.r]
            else:
                _root(self.r, self.q, c, s)
        else:
            old = self.pl
            self.pl = self.pl + self.lo
            self.ph = self.ph + self.hi + (1 if self.pl < old else 0)
            _fixed_unit(self.ph, self.pl, c, s)


def phase_table(Py_ssize_t n_max, int mode, a, q, hi, lo):
    out_arr = np.empty(n_max + 1, dtype=np.complex128)
    cdef double[:, ::1] out = out_arr.view(np.float64).reshape(n_max + 1, 2)
    cdef _Phase ph = _Phase(mode, a, q, hi, lo)
    cdef Py_ssize_t n
    cdef double c, s
    out[0, 0] = 1.0
    out[0, 1] = 0.0
    with nogil:
        for n in range(1, n_max + 1):
            ph.next(&c, &s)
            out[n, 0] = c
            out[n, 1] = s
    return out_arr


def trajectory(const double complex[::1] coeffs, Py_ssize_t period, int mode, a, q, hi, lo,
               double t, bint harmonic, const int64_t[::1] checkpoints):
    cdef Py_ssize_t ncp = checkpoints.shape[0]
    values_arr = np.zeros(ncp, dtype=np.complex128)
    sups_arr = np.zeros(ncp, dtype=np.float64)
    if ncp == 0:
        return values_arr, sups_arr
    cdef double[:, ::1] values = values_arr.view(np.float64).reshape(ncp, 2)
    cdef double[::1] sups = sups_arr
    cdef int64_t n_max = checkpoints[ncp - 1]
    if period <= 0 and coeffs.shape[0] <= n_max:
        raise ValueError("coefficient array shorter than the last checkpoint")
    cdef _Phase ph = _Phase(mode, a, q, hi, lo)
    cdef double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0, sup = 0.0
    cdef double pc, ps, xr, xi, yr, th, tc, ts, s, vr, vi, mag, wr, wi
    cdef Py_ssize_t k = 0, idx = 0
    cdef int64_t n
    while k < ncp and checkpoints[k] <= 0:
        k += 1
    with nogil:
        for n in range(1, n_max + 1):
            ph.next(&pc, &ps)
            if period > 0:
                idx += 1
                if idx == period:
                    idx = 0
            else:
                idx = n
            wr = coeffs[idx].real
            wi = coeffs[idx].imag
            xr = wr * pc - wi * ps
            xi = wr * ps + wi * pc
            if t != 0.0:
                th = t * log(<double>n)
                tc = cos(th)
                ts = sin(th)
                yr = xr * tc - xi * ts
                xi = xr * ts + xi * tc
                xr = yr
            if harmonic:
                xr = xr / <double>n
                xi = xi / <double>n
            s = sr + xr
            if fabs(sr) >= fabs(xr):
                cr += (sr - s) + xr
            else:
                cr += (xr - s) + sr
            sr = s
            s = si + xi
            if fabs(si) >= fabs(xi):
                ci += (si - s) + xi
            else:
                ci += (xi - s) + si
            si = s
            vr = sr + cr
            vi = si + ci
            # hypot, as abs(complex) uses, so sup >= abs(S(n)) holds exactly
            mag = hypot(vr, vi)
            if mag > sup:
                sup = mag
            while k < ncp and checkpoints[k] == n:
                values[k, 0] = vr
                values[k, 1] = vi
                sups[k] = sup
                k += 1
    return values_arr, sups_arr
