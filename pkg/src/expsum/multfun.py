"""Multiplicative functions given by a base rule plus prime-power overrides.

Also builds the modified characters and the two counterexample families
(bounded sums with infinitely many deviating primes).
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ._backend import kernels
from .arith import FactorTable, factor_table, factorize, is_prime, next_prime
from .characters import DirichletCharacter, parse_character
from .complexsum import PhaseAngle, archimedean_twist, is_unimodular, one_minus_e_abs
from .errors import (
    DomainError,
    InvalidConfigError,
    InvalidModificationError,
    OutOfRangeError,
    PreconditionError,
    ResourceLimitError,
)

BASES = ("one", "character", "twisted_character")
WHOLE = None  # override key for "every power" / "the prime itself", written "*" in JSON
VALUE_TOL = 1e-12
# explicit k >= 2 overrides are listed for every p^k below this
POWER_CEILING = 1 << 64


def _ipow(v: complex, k: int) -> complex:
    out = v
    for _ in range(k - 1):
        out = out * v
    return out


@dataclass(frozen=True, eq=False)
class MultiplicativeFunctionSpec:
    """f(n) = prod f(p^k) over the prime powers exactly dividing n.

    ``overrides`` maps ``(p, k)`` to f(p^k), or ``(p, None)`` to a whole-prime
    value.  In a completely multiplicative spec only whole-prime overrides are
    allowed and f(p^k) = f(p)^k.  Otherwise a whole-prime override sets f(p)
    only and higher powers follow the base unless listed.
    """

    base: str = "one"
    chi: Optional[DirichletCharacter] = None
    t: float = 0.0
    overrides: Dict[Tuple[int, Optional[int]], complex] = field(default_factory=dict)
    completely_multiplicative: bool = False
    name: str = ""

    def __post_init__(self):
        if self.base not in BASES:
            raise InvalidConfigError(f"unknown base {self.base!r}")
        if self.base != "one" and self.chi is None:
            raise InvalidConfigError(f"base {self.base!r} needs a character")
        clean = {}
        for (p, k), v in self.overrides.items():
            v = complex(v)
            if not is_prime(p):
                raise InvalidConfigError(f"override at non-prime {p}")
            if k is not None and k < 1:
                raise InvalidConfigError(f"override exponent {k} must be >= 1")
            if abs(v) > 1.0 + VALUE_TOL:
                raise InvalidConfigError(f"|f({p}^{k or '*'})| = {abs(v)} exceeds 1")
            if self.completely_multiplicative and k is not None:
                raise InvalidConfigError("completely multiplicative specs take whole-prime overrides only")
            clean[(int(p), k)] = v
        object.__setattr__(self, "overrides", clean)

    def base_value(self, p: int, k: int) -> complex:
        if self.base == "one":
            return complex(1.0, 0.0)
        q = p**k
        v = self.chi.value(q)
        if self.base == "twisted_character" and v != 0:
            v = v * archimedean_twist(q, self.t)
        return v

    def prime_power_value(self, p: int, k: int) -> complex:
        """f(p^k) for prime p and k >= 1."""
        if self.completely_multiplicative:
            v = self.overrides.get((p, WHOLE))
            return self.base_value(p, k) if v is None else _ipow(v, k)
        v = self.overrides.get((p, k))
        if v is not None:
            return v
        if k == 1:
            v = self.overrides.get((p, WHOLE))
            if v is not None:
                return v
        return self.base_value(p, k)

    def zero_primes(self, bound: int) -> List[int]:
        """Primes p <= bound with f(p^k) = 0 for some k (the set T)."""
        out = set()
        if self.chi is not None:
            for p, _ in factorize(self.chi.modulus, factor_table(self.chi.modulus)) if self.chi.modulus > 1 else []:
                whole = self.overrides.get((p, WHOLE))
                if not (self.completely_multiplicative and whole is not None and whole != 0):
                    out.add(p)
        for (p, _), v in self.overrides.items():
            if v == 0:
                out.add(p)
        return sorted(p for p in out if p <= bound)

    def zero_support_sum(self, bound: int) -> float:
        return math.fsum(1.0 / p for p in self.zero_primes(bound))

    def describe(self) -> str:
        if self.name:
            return self.name
        head = self.base if self.chi is None else f"{self.base}({self.chi.label})"
        return f"{head}+{len(self.overrides)}ovr"

    def to_json(self) -> dict:
        rows = []
        for (p, k), v in sorted(self.overrides.items(), key=lambda kv: (kv[0][0], kv[0][1] or 0)):
            rows.append({"p": p, "k": "*" if k is None else k, "re": v.real, "im": v.imag})
        return {
            "base": self.base,
            "character": None if self.chi is None else self.chi.label,
            "t": self.t,
            "completely_multiplicative": self.completely_multiplicative,
            "overrides": rows,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MultiplicativeFunctionSpec":
        try:
            chi = parse_character(doc["character"]) if doc.get("character") else None
            overrides = {}
            for row in doc.get("overrides", []):
                k = None if row["k"] == "*" else int(row["k"])
                overrides[(int(row["p"]), k)] = complex(float(row["re"]), float(row.get("im", 0.0)))
            return cls(
                base=doc.get("base", "one"),
                chi=chi,
                t=float(doc.get("t", 0.0)),
                overrides=overrides,
                completely_multiplicative=bool(doc.get("completely_multiplicative", False)),
                name=doc.get("name", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidConfigError):
                raise
            raise InvalidConfigError(f"malformed spec document: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def load(cls, path) -> "MultiplicativeFunctionSpec":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps() + "\n")


def one() -> MultiplicativeFunctionSpec:
    return MultiplicativeFunctionSpec("one", completely_multiplicative=True, name="one")


def from_character(chi: DirichletCharacter, t: float = 0.0) -> MultiplicativeFunctionSpec:
    if t == 0.0:
        return MultiplicativeFunctionSpec("character", chi, completely_multiplicative=True, name=chi.label)
    return MultiplicativeFunctionSpec(
        "twisted_character", chi, t=t, completely_multiplicative=True, name=f"{chi.label}*n^{t}i"
    )


def eval_at(spec: MultiplicativeFunctionSpec, n: int, table: FactorTable) -> complex:
    """f(n) folded from the largest prime power down, matching :func:`eval_range`."""
    if n < 1 or n > table.limit:
        raise OutOfRangeError(f"{n} outside table range [1, {table.limit}]")
    v = complex(1.0, 0.0)
    for p, k in reversed(factorize(n, table)):
        v = spec.prime_power_value(p, k) * v
    return v


def eval_range(spec: MultiplicativeFunctionSpec, N: int) -> np.ndarray:
    """Array ``f`` with ``f[n]`` = f(n) for 1 <= n <= N (``f[0] = 0``)."""
    if N < 1:
        raise DomainError("eval_range needs N >= 1")
    table = factor_table(N)
    spf = np.ascontiguousarray(table.spf[: N + 1])
    ppval = np.zeros(N + 1, dtype=np.complex128)
    for p in table.primes(2, N).tolist():
        q, k = p, 1
        while q <= N:
            ppval[q] = spec.prime_power_value(p, k)
            q *= p
            k += 1
    return kernels.multiplicative_fill(spf, ppval)


@dataclass(frozen=True, eq=False)
class ModifiedCharacterSpec:
    """chi with its values at finitely many primes p_i | m replaced by eta_i."""

    chi: DirichletCharacter
    modifications: Tuple[Tuple[int, complex], ...] = ()

    def __post_init__(self):
        mods = tuple((int(p), complex(eta)) for p, eta in self.modifications)
        object.__setattr__(self, "modifications", mods)
        m = self.chi.modulus
        psi = self.chi.primitive
        seen = set()
        for i, (p, eta) in enumerate(mods):
            if not is_prime(p) or m % p:
                raise InvalidModificationError(f"p={p} must be a prime dividing m={m}")
            if p in seen:
                raise InvalidModificationError(f"prime {p} modified twice")
            seen.add(p)
            if abs(eta) > 1.0 + VALUE_TOL:
                raise InvalidModificationError(f"|eta({p})| = {abs(eta)} exceeds 1")
            if abs(eta - psi.value(p)) <= VALUE_TOL:
                raise InvalidModificationError(f"eta({p}) equals psi({p}) = {psi.value(p)}")
            if i == len(mods) - 1:
                if not is_unimodular(eta):
                    raise InvalidModificationError(f"the last eta ({p}) must be unimodular")
            elif not is_unimodular(eta):
                warnings.warn(f"eta({p}) = {eta} is not unimodular", stacklevel=3)

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.modifications)

    @property
    def etas(self) -> Tuple[complex, ...]:
        return tuple(e for _, e in self.modifications)

    @property
    def k(self) -> int:
        return len(self.modifications)


def modified_character(spec: ModifiedCharacterSpec) -> MultiplicativeFunctionSpec:
    """The completely multiplicative function equal to eta_i at p_i and chi elsewhere."""
    return MultiplicativeFunctionSpec(
        "character",
        spec.chi,
        overrides={(p, WHOLE): eta for p, eta in spec.modifications},
        completely_multiplicative=True,
        name=f"{spec.chi.label}~" + ",".join(f"{p}" for p in spec.primes),
    )


def _square_power_overrides(primes: Sequence[int], zs: Sequence[complex]):
    """f(p_i^k) = z_i for every k >= 2 with p_i^k < 2^64."""
    out = {}
    for p, z in zip(primes, zs):
        k, q = 2, p * p
        while q < POWER_CEILING:
            out[(p, k)] = z
            q *= p
            k += 1
    return out


def subset_bound(alpha: PhaseAngle, primes: Sequence[int], zs: Sequence[complex]) -> float:
    """sum over S of |2 E(S) / (e(alpha N(S)) - 1)|, E(S) = prod(z_i - 1), N(S) = prod p_i^2."""
    terms = []
    idx = range(len(primes))
    for size in range(len(primes) + 1):
        for S in combinations(idx, size):
            N = math.prod(primes[i] ** 2 for i in S)
            E = math.prod(abs(zs[i] - 1) for i in S)
            denom = one_minus_e_abs(alpha.dilate(N))
            if denom == 0.0:
                raise PreconditionError(f"alpha * {N} is an integer")
            terms.append(2.0 * E / denom)
    return math.fsum(terms)


@dataclass
class Example1:
    spec: MultiplicativeFunctionSpec
    primes: List[int]
    zs: List[complex]
    bound: float  # M_1(z_1) + 1, or the geometric bound when K = 0
    m_values: List[float]  # M_1, ..., M_K

    @property
    def final_bound(self) -> float:
        return self.m_values[-1] if self.m_values else self.bound


MAX_EXAMPLE_K = 20


def construct_example1(alpha: PhaseAngle, K: int) -> Example1:
    """f(p) = 1 everywhere, f(p_i^k) = z_i (k >= 2), with z_i tuned so M_k stays below M_1 + 1."""
    if alpha.is_integer():
        raise PreconditionError("alpha must not be an integer")
    if K > MAX_EXAMPLE_K:
        raise ResourceLimitError(f"K={K} exceeds {MAX_EXAMPLE_K} (2^K subsets)")
    if K < 0:
        raise DomainError("K must be >= 0")
    primes: List[int] = []
    p = 1
    while len(primes) < K:
        p = next_prime(p)
        if alpha.is_rational and alpha.q % p == 0:
            continue
        primes.append(p)
    if K == 0:
        return Example1(_example_spec([], [], "example1"), [], [], 2.0 / one_minus_e_abs(alpha), [])
    zs = [complex(-1.0, 0.0)]
    m_values = [subset_bound(alpha, primes[:1], zs)]
    for i in range(1, K):
        # halve the arc from 1 until the step in M drops below 2^-i
        theta = 0.5
        while True:
            z = complex(math.cos(2 * math.pi * theta), math.sin(2 * math.pi * theta))
            m_next = subset_bound(alpha, primes[: i + 1], zs + [z])
            if abs(m_next - m_values[-1]) < 2.0**-i:
                break
            theta /= 2
        zs.append(z)
        m_values.append(m_next)
    spec = _example_spec(primes, zs, "example1")
    return Example1(spec, primes, zs, m_values[0] + 1.0, m_values)


def _example_spec(primes, zs, name) -> MultiplicativeFunctionSpec:
    return MultiplicativeFunctionSpec("one", overrides=_square_power_overrides(primes, zs), name=name)


def default_prime_rule(i: int) -> int:
    """Least prime above 2^(i+2); the reciprocals sum to at most sum 2^-(i+2) < 1."""
    return next_prime(2 ** (i + 2))


@dataclass
class Example2:
    spec: MultiplicativeFunctionSpec
    primes: List[int]
    zs: List[complex]


def construct_example2(K: int, prime_rule: Callable[[int], int] = default_prime_rule) -> Example2:
    """f(p) = 1, f(p_i^k) = z_i (k >= 2) with |1 - z_i| = 1/p_i^2, z_i in the upper half-plane."""
    if K < 0:
        raise DomainError("K must be >= 0")
    primes = [prime_rule(i) for i in range(1, K + 1)]
    for a, b in zip(primes, primes[1:]):
        if b <= a:
            raise InvalidConfigError("prime rule must be strictly increasing")
    for p in primes:
        if not is_prime(p):
            raise InvalidConfigError(f"prime rule produced non-prime {p}")
    zs = []
    for p in primes:
        # |1 - e(theta)| = 2 sin(pi theta)
        theta = math.asin(1.0 / (2.0 * p * p)) / math.pi
        zs.append(complex(math.cos(2 * math.pi * theta), math.sin(2 * math.pi * theta)))
    return Example2(_example_spec(primes, zs, "example2"), primes, zs)
