"""Pretentious distance, the prime sum F(Q) and the logarithmic correlation estimator."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from ._backend import kernels
from .arith import factor_table
from .characters import DirichletCharacter
from .complexsum import PhaseAngle, is_unimodular, unit_phase
from .errors import DomainError, ExpsumError
from .multfun import MultiplicativeFunctionSpec, eval_range, from_character


def _primes(y: int, x: int) -> List[int]:
    if y < 1 or x < y:
        raise DomainError(f"need 1 <= y <= x, got y={y}, x={x}")
    return factor_table(x).primes(y + 1, x).tolist()


def _alignment(fp: complex, gp: complex) -> complex:
    """f(p) * conj(g(p)), exactly 1 when the two unimodular values coincide."""
    if fp == gp and is_unimodular(fp):
        return complex(1.0, 0.0)
    return fp * gp.conjugate()


def distance_squared(f: MultiplicativeFunctionSpec, g: MultiplicativeFunctionSpec, y: int, x: int) -> float:
    """sum over primes y < p <= x of (1 - Re f(p) conj g(p)) / p."""
    terms = []
    for p in _primes(y, x):
        a = _alignment(f.prime_power_value(p, 1), g.prime_power_value(p, 1))
        terms.append((1.0 - a.real) / p)
    return math.fsum(terms)


def distance(f: MultiplicativeFunctionSpec, g: MultiplicativeFunctionSpec, y: int = 1, x: int = 10**4) -> float:
    return math.sqrt(max(distance_squared(f, g, y, x), 0.0))


def distance_to_twisted_character(
    f: MultiplicativeFunctionSpec, chi: DirichletCharacter, t: float, x: int, y: int = 1
) -> float:
    """Distance from f to n -> chi(n) n^{it}, over primes y < p <= x."""
    return distance(f, from_character(chi, t), y, x)


def mean_value_F(f: MultiplicativeFunctionSpec, chi: DirichletCharacter, t: float, Q: int, x: int) -> complex:
    """F(Q) = sum over p <= x with p not dividing Q of (f(p) conj(chi(p)) p^{-it} - 1) / p."""
    if Q < 1:
        raise DomainError("Q must be positive")
    g = from_character(chi, t)
    re, im = [], []
    for p in _primes(1, x):
        if Q % p == 0:
            continue
        a = _alignment(f.prime_power_value(p, 1), g.prime_power_value(p, 1))
        re.append((a.real - 1.0) / p)
        im.append(a.imag / p)
    return complex(math.fsum(re), math.fsum(im))


@dataclass(frozen=True)
class CorrelationEstimate:
    value: complex  # (1/log x) sum f(n)e(n a) conj(f(n+h)e((n+h)a)) / n
    plain: complex  # (1/log x) sum f(n) conj(f(n+h)) / n
    phase_form: complex  # e(-h a) * plain
    deviation: float


CROSS_CHECK_TOL = 1e-10


def _fsum_complex(z: np.ndarray) -> complex:
    return complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist()))


def log_correlation(f: MultiplicativeFunctionSpec, alpha: PhaseAngle, h: int, x: int) -> CorrelationEstimate:
    """The twisted logarithmic correlation, computed directly and through e(-h alpha)."""
    if h < 1:
        raise DomainError("h must be >= 1")
    if x < 2:
        raise DomainError("x must be >= 2")
    fv = eval_range(f, x + h)
    mode, a, q, hi, lo = alpha.kernel_args()
    ph = kernels.phase_table(x + h, mode, a, q, hi, lo)
    n = np.arange(1, x + 1, dtype=np.float64)
    tw = fv * ph
    log_x = math.log(x)
    value = _fsum_complex(tw[1 : x + 1] * np.conj(tw[1 + h : x + h + 1]) / n) / log_x
    plain = _fsum_complex(fv[1 : x + 1] * np.conj(fv[1 + h : x + h + 1]) / n) / log_x
    phase_form = unit_phase(h, alpha).conjugate() * plain
    dev = abs(value - phase_form)
    if dev > CROSS_CHECK_TOL * max(1.0, abs(plain)):
        raise ExpsumError(f"correlation forms disagree by {dev:.3e}")
    return CorrelationEstimate(value, plain, phase_form, dev)
