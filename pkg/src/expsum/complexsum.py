"""Phase factors e(n*alpha), n^{it}, and compensated complex accumulation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from ._pycore import fixed_turn, fixed_unit, root_of_unity
from .errors import DomainError, NonFiniteTermError, PhaseTableTooLarge

FRAC_BITS = 128
ONE_TURN = 1 << FRAC_BITS
_MASK = ONE_TURN - 1
MAX_TABLE_Q = 1 << 30
# fixed-point angles closer than this to an integer count as integers
INTEGER_TOLERANCE = 1 << (FRAC_BITS - 64)

RATIONAL = "rational"
FIXED = "fixedpoint"


@dataclass(frozen=True)
class PhaseAngle:
    """An angle alpha mod 1, either an exact reduced fraction a/q or a 128-bit turn.

    Use :meth:`rational`, :meth:`fixed`, :meth:`from_float` or :meth:`parse`
    rather than the raw constructor.
    """

    mode: str
    a: int = 0
    q: int = 1
    frac: int = 0

    @classmethod
    def rational(cls, a: int, q: int = 1) -> "PhaseAngle":
        if q <= 0:
            raise DomainError("denominator must be positive")
        a %= q
        g = math.gcd(a, q)
        return cls(RATIONAL, a // g, q // g)

    @classmethod
    def fixed(cls, frac: int) -> "PhaseAngle":
        return cls(FIXED, frac=frac & _MASK)

    @classmethod
    def from_fraction(cls, x: Fraction) -> "PhaseAngle":
        """The nearest 128-bit turn to an exact rational ``x``."""
        return cls.fixed(round(Fraction(x) * ONE_TURN))

    @classmethod
    def from_float(cls, x: float) -> "PhaseAngle":
        return cls.from_fraction(Fraction(x))

    @classmethod
    def parse(cls, text: str) -> "PhaseAngle":
        """``a/q`` gives an exact rational, a decimal literal or named constant a fixed turn."""
        text = text.strip()
        if text in NAMED_ANGLES:
            return NAMED_ANGLES[text]
        if "/" in text:
            num, den = text.split("/", 1)
            return cls.rational(int(num), int(den))
        try:
            return cls.from_fraction(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse angle {text!r}") from exc

    @property
    def is_rational(self) -> bool:
        return self.mode == RATIONAL

    @property
    def hi(self) -> int:
        return self.frac >> 64

    @property
    def lo(self) -> int:
        return self.frac & ((1 << 64) - 1)

    def __float__(self) -> float:
        if self.is_rational:
            return self.a / self.q
        return float(Fraction(self.frac, ONE_TURN))

    def as_fraction(self) -> Fraction:
        if self.is_rational:
            return Fraction(self.a, self.q)
        return Fraction(self.frac, ONE_TURN)

    def to_fixed(self) -> "PhaseAngle":
        if not self.is_rational:
            return self
        return PhaseAngle.from_fraction(Fraction(self.a, self.q))

    def dilate(self, k: int) -> "PhaseAngle":
        """``k * alpha mod 1``, exact in both modes."""
        if self.is_rational:
            return PhaseAngle.rational(self.a * k, self.q)
        return PhaseAngle.fixed(self.frac * k)

    def is_integer(self) -> bool:
        """Whether alpha is an integer; fixed turns within 2^-64 of 0 count as integers."""
        if self.is_rational:
            return self.a == 0
        return self.frac < INTEGER_TOLERANCE or ONE_TURN - self.frac < INTEGER_TOLERANCE

    def multiple_is_integer(self, m: int) -> bool:
        return self.dilate(m).is_integer()

    def kernel_args(self):
        """``(mode, a, q, hi, lo)`` as consumed by the kernels."""
        if self.is_rational:
            if self.q > MAX_TABLE_Q:
                raise PhaseTableTooLarge(
                    f"denominator {self.q} exceeds 2^30; convert to a fixed-point turn"
                )
            return 0, self.a, self.q, 0, 0
        return 1, 0, 1, self.hi, self.lo

    def label(self) -> str:
        if self.is_rational:
            return f"{self.a}/{self.q}"
        for name, value in NAMED_ANGLES.items():
            if value == self:
                return name
        return f"0x{self.frac:032x}"

    def __str__(self) -> str:
        return self.label()


def _sqrt_turn(n: int) -> int:
    """floor(sqrt(n) * 2^128)."""
    return math.isqrt(n << (2 * FRAC_BITS))


NAMED_ANGLES = {
    "sqrt2m1": PhaseAngle.fixed(_sqrt_turn(2) - ONE_TURN),
    "phi-1": PhaseAngle.fixed((_sqrt_turn(5) - ONE_TURN) >> 1),
    "sqrt5m2": PhaseAngle.fixed(_sqrt_turn(5) - 2 * ONE_TURN),
}


@lru_cache(maxsize=64)
def _root_table(q: int) -> np.ndarray:
    out = np.empty(q, dtype=np.complex128)
    for r in range(q):
        c, s = root_of_unity(r, q)
        out[r] = complex(c, s)
    out.setflags(write=False)
    return out


def turn_to_unit(frac: int) -> complex:
    """e(frac / 2^128) for a 128-bit fraction."""
    c, s = fixed_unit(frac >> 64, frac & ((1 << 64) - 1))
    return complex(c, s)


def unit_phase(n: int, alpha: PhaseAngle) -> complex:
    """e(n * alpha) with the reduction of n*alpha mod 1 done exactly."""
    if n < 0:
        raise DomainError("unit_phase expects n >= 0")
    if alpha.is_rational:
        if alpha.q > MAX_TABLE_Q:
            raise PhaseTableTooLarge(f"denominator {alpha.q} exceeds 2^30")
        r = n * alpha.a % alpha.q
        if alpha.q <= 1 << 16:
            return complex(_root_table(alpha.q)[r])
        c, s = root_of_unity(r, alpha.q)
        return complex(c, s)
    return turn_to_unit(n * alpha.frac & _MASK)


def e(x: PhaseAngle) -> complex:
    """e(alpha) = exp(2 pi i alpha)."""
    return unit_phase(1, x)


def archimedean_twist(n: int, t: float) -> complex:
    """n^{it} = exp(i t log n); exactly 1 when t == 0 or n == 1."""
    if n < 1:
        raise DomainError("n^{it} needs n >= 1")
    if t == 0.0 or n == 1:
        return complex(1.0, 0.0)
    th = t * math.log(n)
    return complex(math.cos(th), math.sin(th))


def one_minus_e_abs(alpha: PhaseAngle) -> float:
    """|1 - e(alpha)| = 2|sin(pi alpha)|, evaluated on the centred reduced angle."""
    if alpha.is_rational:
        r, q = alpha.a, alpha.q
        x = (r - q if 2 * r > q else r) / q
    else:
        x = fixed_turn(alpha.hi, alpha.lo)
    return abs(2.0 * math.sin(math.pi * x))


class CompensatedAccumulator:
    """Streaming Neumaier summation of complex terms.

    Each component keeps a running sum plus a running compensation.  Two
    accumulators over disjoint ranges can be merged.
    """

    __slots__ = ("_sr", "_si", "_cr", "_ci", "count")

    def __init__(self):
        self._sr = self._si = self._cr = self._ci = 0.0
        self.count = 0

    def add(self, z) -> None:
        z = complex(z)
        xr, xi = z.real, z.imag
        if not (math.isfinite(xr) and math.isfinite(xi)):
            raise NonFiniteTermError(self.count, z)
        s = self._sr + xr
        if abs(self._sr) >= abs(xr):
            self._cr += (self._sr - s) + xr
        else:
            self._cr += (xr - s) + self._sr
        self._sr = s
        s = self._si + xi
        if abs(self._si) >= abs(xi):
            self._ci += (self._si - s) + xi
        else:
            self._ci += (xi - s) + self._si
        self._si = s
        self.count += 1

    def extend(self, terms: Iterable) -> "CompensatedAccumulator":
        for z in terms:
            self.add(z)
        return self

    def merge(self, other: "CompensatedAccumulator") -> "CompensatedAccumulator":
        """Fold another accumulator in: its sum enters as one term, compensations add."""
        count = self.count
        self.add(complex(other._sr, other._si))
        self._cr += other._cr
        self._ci += other._ci
        self.count = count + other.count
        return self

    @property
    def sum(self) -> complex:
        return complex(self._sr, self._si)

    @property
    def compensation(self) -> complex:
        return complex(self._cr, self._ci)

    @property
    def value(self) -> complex:
        return complex(self._sr + self._cr, self._si + self._ci)


def stream_sum(terms: Iterable) -> complex:
    """Compensated sum of complex terms; the empty sum is 0."""
    return CompensatedAccumulator().extend(terms).value


def is_unimodular(z: complex, tol: float = 1e-12) -> bool:
    return abs(abs(z) - 1.0) <= tol

