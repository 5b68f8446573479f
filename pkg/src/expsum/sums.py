"""Exponential-sum engines over multiplicative coefficients.

Everything funnels into the ``trajectory`` kernel: a single forward pass that
accumulates f(n) e(n alpha) n^{it} with Neumaier compensation and tracks the
running supremum of |S(n)| at every n.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ._backend import kernels
from .arith import SIEVE_CAPACITY
from .characters import DirichletCharacter, gauss_polynomial_P
from .complexsum import CompensatedAccumulator, PhaseAngle, is_unimodular, one_minus_e_abs, unit_phase
from .errors import DomainError, PreconditionError, ResourceLimitError
from .multfun import ModifiedCharacterSpec, MultiplicativeFunctionSpec, _ipow, eval_range, modified_character

Coefficients = Union[MultiplicativeFunctionSpec, DirichletCharacter]

SCHEDULE_RATIO = 10 ** 0.25
DIRECT_SUM_LIMIT = 10**8


def geometric_schedule(X: int, ratio: float = SCHEDULE_RATIO) -> List[int]:
    """Checkpoints round(ratio^j) for j = 0, 1, ... up to X, plus X itself."""
    if X < 1:
        return []
    out = set()
    j = 0
    while True:
        x = round(ratio**j)
        if x > X:
            break
        out.add(x)
        j += 1
    out.add(X)
    return sorted(out)


@dataclass(frozen=True)
class Checkpoint:
    x: int
    value: complex
    running_sup: float


def _fmt(v: float) -> str:
    return format(v, ".17g")


@dataclass
class SumTrajectory:
    """Partial sums S(x) at checkpoints, with the running sup of |S(n)| over all n <= x."""

    alpha: PhaseAngle
    t: float
    spec_id: str
    X: int
    checkpoints: List[Checkpoint]
    schedule: str = "geometric"
    spec_doc: Optional[dict] = None

    def at(self, x: int) -> Checkpoint:
        for cp in self.checkpoints:
            if cp.x == x:
                return cp
        raise KeyError(f"no checkpoint at x={x}")

    def sup_at(self, x: int) -> float:
        return self.at(x).running_sup

    @property
    def final(self) -> Checkpoint:
        return self.checkpoints[-1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "re", "im", "abs", "runsup"])
        for cp in self.checkpoints:
            w.writerow([cp.x, _fmt(cp.value.real), _fmt(cp.value.imag), _fmt(abs(cp.value)), _fmt(cp.running_sup)])
        return buf.getvalue()

    def metadata(self) -> dict:
        return {
            "spec": self.spec_doc if self.spec_doc is not None else self.spec_id,
            "alpha": self.alpha.label(),
            "t": self.t,
            "X": self.X,
            "schedule": self.schedule,
        }

    def write(self, csv_path: str) -> str:
        """Write the CSV and a ``.json`` sidecar next to it; returns the sidecar path."""
        with open(csv_path, "w", newline="") as fh:
            fh.write(self.to_csv())
        stem = csv_path[:-4] if csv_path.endswith(".csv") else csv_path
        meta_path = stem + ".json"
        with open(meta_path, "w") as fh:
            json.dump(self.metadata(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return meta_path


def _coefficients(f: Coefficients, X: int) -> Tuple[np.ndarray, int]:
    """Coefficient array and its period (0 = indexed by n directly)."""
    if isinstance(f, DirichletCharacter):
        return np.ascontiguousarray(f.values), f.modulus
    if f.base == "character" and not f.overrides:
        return np.ascontiguousarray(f.chi.values), f.chi.modulus
    if f.base == "one" and not f.overrides:
        return np.ones(1, dtype=np.complex128), 1
    if X > SIEVE_CAPACITY:
        raise ResourceLimitError(f"X={X} exceeds sieve capacity")
    return eval_range(f, max(X, 1)), 0


def run_kernel(coeffs, period, alpha: PhaseAngle, t: float, checkpoints: Sequence[int], harmonic=False):
    mode, a, q, hi, lo = alpha.kernel_args()
    cps = np.asarray(checkpoints, dtype=np.int64)
    return kernels.trajectory(coeffs, period, mode, a, q, hi, lo, float(t), bool(harmonic), cps)


def sum_trajectory(
    f: Coefficients,
    alpha: PhaseAngle,
    t: float = 0.0,
    X: int = 10**6,
    schedule: Optional[Iterable[int]] = None,
    coefficients: Optional[np.ndarray] = None,
) -> SumTrajectory:
    """Checkpointed sums of f(n) e(n alpha) n^{it} for n <= x.

    ``coefficients`` may pass a precomputed ``eval_range`` array (length > X)
    to avoid re-sieving when one f is run against many angles.
    """
    if X < 1:
        raise DomainError("X must be >= 1")
    if schedule is None:
        cps = geometric_schedule(X)
        sched_name = "geometric-10^(1/4)"
    else:
        cps = sorted({int(x) for x in schedule if 1 <= int(x) <= X} | {X})
        sched_name = "explicit"
    if coefficients is not None:
        coeffs, period = np.ascontiguousarray(coefficients), 0
        if len(coeffs) <= X:
            raise DomainError("precomputed coefficients shorter than X + 1")
    else:
        coeffs, period = _coefficients(f, X)
    values, sups = run_kernel(coeffs, period, alpha, t, cps)
    checkpoints = [Checkpoint(int(x), complex(v), float(s)) for x, v, s in zip(cps, values, sups)]
    if isinstance(f, DirichletCharacter):
        spec_id, doc = f.label, {"character": f.label}
    else:
        spec_id, doc = f.describe(), f.to_json()
    return SumTrajectory(alpha, float(t), spec_id, X, checkpoints, sched_name, doc)


def partial_sum(f: Coefficients, alpha: PhaseAngle, x, t: float = 0.0) -> complex:
    """S(x) = sum_{n <= x} f(n) e(n alpha) n^{it} for real x (0 when x < 1)."""
    n = math.floor(x)
    if n < 1:
        return 0j
    coeffs, period = _coefficients(f, n)
    values, _ = run_kernel(coeffs, period, alpha, t, [n])
    return complex(values[0])


def char_partial_sum(chi: DirichletCharacter, alpha: PhaseAngle, x, t: float = 0.0) -> complex:
    """f(x, alpha) = sum_{n <= x} chi(n) e(n alpha), summed directly."""
    n = math.floor(x)
    if n < 1:
        return 0j
    if n > DIRECT_SUM_LIMIT:
        raise ResourceLimitError(f"direct sum of {n} terms exceeds {DIRECT_SUM_LIMIT}")
    values, _ = run_kernel(np.ascontiguousarray(chi.values), chi.modulus, alpha, t, [n])
    return complex(values[0])


def char_closed_form(chi: DirichletCharacter, alpha: PhaseAngle, n: int) -> complex:
    """P(e(alpha)) (e(n alpha) - 1) / (e(m alpha) - 1) for m | n and m alpha not an integer."""
    m = chi.modulus
    if n < 0:
        raise DomainError("n must be >= 0")
    if n % m:
        raise PreconditionError(f"modulus {m} does not divide n={n}")
    if alpha.multiple_is_integer(m):
        raise PreconditionError(f"m*alpha is an integer (m={m}, alpha={alpha})")
    if n == 0:
        return 0j
    P = gauss_polynomial_P(chi, unit_phase(1, alpha))
    return P * (unit_phase(n, alpha) - 1) / (unit_phase(m, alpha) - 1)


def char_sum_at_multiple(chi: DirichletCharacter, alpha: PhaseAngle, n: int) -> complex:
    """f(n, alpha) for m | n through the closed form, including the m*alpha in Z case."""
    m = chi.modulus
    if n % m:
        raise PreconditionError(f"modulus {m} does not divide n={n}")
    if n == 0:
        return 0j
    malpha = alpha.dilate(m)
    if malpha.as_fraction() == 0:
        # every block of m terms contributes P(e(alpha))
        return (n // m) * gauss_polynomial_P(chi, unit_phase(1, alpha))
    if malpha.is_integer():
        # within 2^-64 of an integer: the closed form is ill-conditioned
        return char_partial_sum(chi, alpha, n)
    return char_closed_form(chi, alpha, n)


@dataclass(frozen=True)
class Bounds:
    geometric: Optional[float]
    character: Optional[float]


def explicit_bounds(m: int, alpha: PhaseAngle) -> Bounds:
    """2/|1 - e(alpha)| and 2m/|e(m alpha) - 1| + m - 1; ``None`` where degenerate."""
    if m < 1:
        raise DomainError("modulus must be positive")
    geo = None if alpha.is_integer() else 2.0 / one_minus_e_abs(alpha)
    ma = alpha.dilate(m)
    char = None if ma.is_integer() else 2.0 * m / one_minus_e_abs(ma) + (m - 1)
    return Bounds(geo, char)


class _ValueCache:
    """Coefficient arrays of modified characters, grown on demand."""

    def __init__(self):
        self._store = {}

    def get(self, spec: ModifiedCharacterSpec, N: int) -> np.ndarray:
        hit = self._store.get(id(spec))
        if hit is not None and hit[0] is spec and len(hit[1]) > N:
            return hit[1]
        size = max(N, 16)
        if hit is not None and hit[0] is spec:
            size = max(size, 2 * (len(hit[1]) - 1))
        arr = eval_range(modified_character(spec), size)
        if len(self._store) > 32:
            self._store.clear()
        self._store[id(spec)] = (spec, arr)
        return arr


_values = _ValueCache()


def modified_sum(spec: ModifiedCharacterSpec, x, alpha: PhaseAngle) -> complex:
    """S(x, alpha) = sum_{n <= x} chi~(n) e(n alpha), summed directly."""
    n = math.floor(x)
    if n < 1:
        return 0j
    coeffs = _values.get(spec, n)
    values, _ = run_kernel(coeffs, 0, alpha, 0.0, [n])
    return complex(values[0])


def _check_ells(spec: ModifiedCharacterSpec, ells) -> Tuple[int, ...]:
    ells = tuple(int(v) for v in ells)
    if len(ells) > spec.k:
        raise DomainError(f"{len(ells)} exponents given for {spec.k} modified primes")
    if any(v < 1 for v in ells):
        raise DomainError("exponents must be positive integers")
    return ells


def A_recursive(spec: ModifiedCharacterSpec, ells, x, alpha: PhaseAngle) -> complex:
    """A_(l1..ls)(x, alpha) by the defining recursion, peeling off the last index."""
    ells = _check_ells(spec, ells)
    x = Fraction(x)
    if x < 1:
        return 0j
    if not ells:
        return modified_sum(spec, x, alpha)
    p, eta = spec.modifications[len(ells) - 1]
    q = p ** ells[-1]
    head = ells[:-1]
    return A_recursive(spec, head, x, alpha) - _ipow(eta, ells[-1]) * A_recursive(spec, head, x / q, alpha.dilate(q))


def A_expansion(spec: ModifiedCharacterSpec, ells, x, alpha: PhaseAngle) -> complex:
    """A_(l1..ls)(x, alpha) as the multi-sum over beta, truncated where p^beta > x.

    The first s exponents range over [0, l_i); the rest are unbounded but the
    inner character sum is empty once the product of prime powers exceeds x.
    """
    ells = _check_ells(spec, ells)
    x = Fraction(x)
    acc = CompensatedAccumulator()
    if x < 1:
        return 0j
    chi = spec.chi
    mods = spec.modifications

    def walk(i: int, P: int, coeff: complex) -> None:
        if i == len(mods):
            acc.add(coeff * char_partial_sum(chi, alpha.dilate(P), x / P))
            return
        p, eta = mods[i]
        cap = ells[i] if i < len(ells) else None
        beta = 0
        while (cap is None or beta < cap) and P <= x:
            walk(i + 1, P, coeff)
            beta += 1
            P *= p
            coeff = coeff * eta

    walk(0, 1, complex(1.0, 0.0))
    return acc.value


def decomposition_sum(spec: ModifiedCharacterSpec, x, alpha: PhaseAngle) -> complex:
    """sum over all beta >= 0 of eta^beta f(x / p^beta, alpha p^beta); equals S(x, alpha)."""
    return A_expansion(spec, (), x, alpha)


def _B_check(spec: ModifiedCharacterSpec, ells) -> Tuple[int, ...]:
    if spec.k < 1:
        raise DomainError("B_r needs at least one modified prime")
    ells = tuple(int(v) for v in ells)
    if len(ells) != spec.k - 1:
        raise DomainError(f"B_r takes {spec.k - 1} exponents, got {len(ells)}")
    if any(v < 1 for v in ells):
        raise DomainError("exponents must be positive integers")
    return ells


def B_r(spec: ModifiedCharacterSpec, ells, r: int, alpha: PhaseAngle) -> complex:
    """The truncated sum B_r: last exponent runs over [0, r), the others over [0, l_i).

    Every inner argument is a multiple of m, so each f(., .) is evaluated in
    closed form.
    """
    ells = _B_check(spec, ells)
    if r < 1:
        raise DomainError("r must be >= 1")
    chi, m = spec.chi, spec.chi.modulus
    ranges = list(ells) + [r]
    mods = spec.modifications
    acc = CompensatedAccumulator()

    def walk(i: int, dil: int, size: int, coeff: complex) -> None:
        if i == len(mods):
            acc.add(coeff * char_sum_at_multiple(chi, alpha.dilate(dil), m * size))
            return
        p, eta = mods[i]
        top = ranges[i]
        for beta in range(top):
            walk(i + 1, dil * p**beta, size * p ** (top - beta - 1), coeff * _ipow(eta, beta) if beta else coeff)

    walk(0, 1, 1, complex(1.0, 0.0))
    return acc.value


def B_r_anchor(spec: ModifiedCharacterSpec, ells, r: int) -> int:
    """x_r = m * prod_{i<k} p_i^(l_i - 1) * p_k^(r - 1): B_r is A_ells(x_r) cut at beta_k < r."""
    ells = _B_check(spec, ells)
    out = spec.chi.modulus
    for (p, _), l in zip(spec.modifications, ells):
        out *= p ** (l - 1)
    return out * spec.primes[-1] ** (r - 1)


def B_r_tail_bound(spec: ModifiedCharacterSpec, ells) -> float:
    """sum over beta_i < l_i of m prod p_i^(l_i - beta_i - 1) / (p_k - 1), bounding |A_ells(x_r) - B_r|."""
    ells = _B_check(spec, ells)
    m = spec.chi.modulus
    factor = 1
    for (p, _), l in zip(spec.modifications, ells):
        factor *= sum(p**j for j in range(l))
    return m * factor / (spec.primes[-1] - 1)


@dataclass
class TwistedPowerSums:
    """Partial sums a_N = sum z^n n^{it}/n and b_N = sum z^n n^{it}, with running sups."""

    harmonic: complex
    plain: complex
    harmonic_sup: float
    plain_sup: float
    divergent: bool
    checkpoints: List[Tuple[int, complex, float, complex, float]] = field(default_factory=list)

    def plain_sup_at(self, x: int) -> float:
        return next(c[2] for c in self.checkpoints if c[0] == x)

    def harmonic_sup_at(self, x: int) -> float:
        return next(c[4] for c in self.checkpoints if c[0] == x)


def twisted_power_sums(z, t: float, N: int, schedule: Optional[Iterable[int]] = None) -> TwistedPowerSums:
    """Run both power sums; ``z`` is a unimodular complex or a :class:`PhaseAngle`."""
    if N < 1:
        raise DomainError("N must be >= 1")
    if isinstance(z, PhaseAngle):
        alpha = z
    else:
        z = complex(z)
        if not is_unimodular(z):
            raise DomainError(f"|z| = {abs(z)} is not 1")
        alpha = PhaseAngle.from_fraction(Fraction(math.atan2(z.imag, z.real)) / Fraction(2 * math.pi))
    divergent = alpha.is_integer()
    cps = geometric_schedule(N) if schedule is None else sorted({int(x) for x in schedule if 1 <= x <= N} | {N})
    ones = np.ones(1, dtype=np.complex128)
    bv, bs = run_kernel(ones, 1, alpha, t, cps)
    av, as_ = run_kernel(ones, 1, alpha, t, cps, harmonic=True)
    rows = [(int(x), complex(b), float(s), complex(a), float(sa)) for x, b, s, a, sa in zip(cps, bv, bs, av, as_)]
    return TwistedPowerSums(complex(av[-1]), complex(bv[-1]), float(as_[-1]), float(bs[-1]), divergent, rows)
