"""Dirichlet characters as exact exponent tables, plus the Gauss-sum machinery.

A character mod m is stored as exponents ``(k_1, ..., k_r)`` on a fixed set of
generators of (Z/mZ)*; chi(g_j) = e(k_j / ord_j).  Every value is an exact
L-th root of unity, L the group exponent, so products and comparisons of
values are exact at the level of integer exponents.
"""
from __future__ import annotations

import math
from functools import cached_property, lru_cache
from typing import List, Tuple

import numpy as np

from ._pycore import root_of_unity
from .arith import divisors, moebius, prime_factors, totient
from .complexsum import CompensatedAccumulator
from .errors import DomainError, PreconditionError, ResourceLimitError

MAX_MODULUS = 10**6


def _primitive_root(p: int) -> int:
    phi = p - 1
    qs = [q for q, _ in prime_factors(phi)] if phi > 1 else []
    for g in range(2, p + 1):
        if all(pow(g, phi // q, p) != 1 for q in qs):
            return g
    return 1  # p == 2


def _power_log(g: int, order: int, q: int) -> np.ndarray:
    """Discrete-log table of the cyclic subgroup <g> mod q; -1 off the subgroup."""
    log = np.full(q, -1, dtype=np.int64)
    x = 1
    for k in range(order):
        log[x] = k
        x = x * g % q
    return log


class CharacterGroup:
    """Generators, orders and per-residue discrete logs for (Z/mZ)*."""

    def __init__(self, m: int):
        self.modulus = m
        gens: List[int] = []
        orders: List[int] = []
        logs: List[np.ndarray] = []
        residues = np.arange(m, dtype=np.int64)
        for p, e in prime_factors(m) if m > 1 else []:
            q = p**e
            rest = m // q
            local: List[Tuple[int, int, np.ndarray]] = []
            if p == 2:
                if e == 2:
                    local.append((3, 2, _power_log(3, 2, q)))
                elif e >= 3:
                    sign = np.full(q, -1, dtype=np.int64)
                    sign[1::4] = 0
                    sign[3::4] = 1
                    five = _power_log(5, q // 4, q)
                    r = np.arange(q, dtype=np.int64)
                    folded = np.where(r % 4 == 1, r, (q - r) % q)
                    log5 = np.where(r % 2 == 1, five[folded], -1)
                    local.append((q - 1, 2, sign))
                    local.append((5, q // 4, log5))
            else:
                g = _primitive_root(p)
                if e > 1 and pow(g, p - 1, p * p) == 1:
                    g += p
                order = (p - 1) * p ** (e - 1)
                local.append((g, order, _power_log(g, order, q)))
            for g, order, table in local:
                # lift g to mod m: g (mod q), 1 (mod m/q)
                lifted = g if rest == 1 else (g + q * ((1 - g) * pow(q, -1, rest) % rest)) % m
                gens.append(lifted)
                orders.append(order)
                logs.append(table[residues % q])
        self.generators = tuple(gens)
        self.orders = tuple(orders)
        self.exponent = math.lcm(*orders) if orders else 1
        self.logs = np.array(logs, dtype=np.int64).reshape(len(gens), m)
        self.units = np.array([math.gcd(int(n), m) == 1 for n in range(m)], dtype=bool)
        self.size = math.prod(orders)
        roots = np.empty(self.exponent, dtype=np.complex128)
        for r in range(self.exponent):
            c, s = root_of_unity(r, self.exponent)
            roots[r] = complex(c, s)
        self.roots = roots

    def exponents_of(self, index: int) -> Tuple[int, ...]:
        if not 0 <= index < self.size:
            raise DomainError(f"character index {index} outside 0..{self.size - 1} mod {self.modulus}")
        out = []
        for order in reversed(self.orders):
            index, k = divmod(index, order)
            out.append(k)
        return tuple(reversed(out))

    def index_of(self, exponents) -> int:
        index = 0
        for k, order in zip(exponents, self.orders):
            index = index * order + k % order
        return index


@lru_cache(maxsize=256)
def character_group(m: int) -> CharacterGroup:
    if m < 1:
        raise DomainError("modulus must be positive")
    if m > MAX_MODULUS:
        raise ResourceLimitError(f"modulus {m} exceeds {MAX_MODULUS}")
    return CharacterGroup(m)


class DirichletCharacter:
    """A Dirichlet character mod m, addressed as ``"m.index"``.

    Index 0 is the principal character.  Values are computed lazily as an
    exact exponent table (``exponent_table``, -1 on non-units) and a complex
    table (``values``).
    """

    def __init__(self, group: CharacterGroup, exponents: Tuple[int, ...]):
        self.group = group
        self.exponents = tuple(k % o for k, o in zip(exponents, group.orders))

    @property
    def modulus(self) -> int:
        return self.group.modulus

    @property
    def index(self) -> int:
        return self.group.index_of(self.exponents)

    @property
    def label(self) -> str:
        return f"{self.modulus}.{self.index}"

    def __repr__(self) -> str:
        return f"DirichletCharacter({self.label})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.exponents == other.exponents
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.exponents))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.modulus != self.modulus:
            raise DomainError("characters must share a modulus")
        return DirichletCharacter(self.group, tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.group, tuple(-k for k in self.exponents))

    @cached_property
    def exponent_table(self) -> np.ndarray:
        """chi(n) = e(E[n] / L) on units, E[n] = -1 on non-units."""
        g = self.group
        L = g.exponent
        acc = np.zeros(self.modulus, dtype=np.int64)
        for k, order, log in zip(self.exponents, g.orders, g.logs):
            if k:
                acc = (acc + (k * (L // order)) * log) % L
        out = np.where(g.units, acc, -1)
        out.setflags(write=False)
        return out

    @cached_property
    def values(self) -> np.ndarray:
        E = self.exponent_table
        out = np.where(E >= 0, self.group.roots[np.maximum(E, 0)], 0.0 + 0.0j)
        out.setflags(write=False)
        return out

    def value(self, n: int) -> complex:
        return complex(self.values[n % self.modulus])

    __call__ = value

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @property
    def order(self) -> int:
        return math.lcm(*[o // math.gcd(k, o) for k, o in zip(self.exponents, self.group.orders)]) if self.exponents else 1

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    @cached_property
    def conductor(self) -> int:
        E = self.exponent_table
        m = self.modulus
        for d in divisors(m):
            ks = np.arange(1, m, d, dtype=np.int64) if d < m else np.array([1 % m])
            ks = ks[E[ks] >= 0]
            if np.all(E[ks] == 0):
                return d
        return m

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @cached_property
    def primitive(self) -> "DirichletCharacter":
        """The primitive character psi mod the conductor inducing this one."""
        d = self.conductor
        if d == self.modulus:
            return self
        target = character_group(d)
        m, L = self.modulus, self.group.exponent
        E = self.exponent_table
        exps = []
        for g, order in zip(target.generators, target.orders):
            u = g
            while math.gcd(u, m) != 1:
                u += d
            exps.append(int(E[u % m]) * order // L)
        return DirichletCharacter(target, tuple(exps))


def enumerate_characters(m: int) -> List[DirichletCharacter]:
    """All phi(m) characters mod m in canonical (lexicographic exponent) order."""
    g = character_group(m)
    return [DirichletCharacter(g, g.exponents_of(i)) for i in range(g.size)]


def character(m: int, index: int) -> DirichletCharacter:
    g = character_group(m)
    return DirichletCharacter(g, g.exponents_of(index))


def principal_character(m: int) -> DirichletCharacter:
    return character(m, 0)


def parse_character(label: str) -> DirichletCharacter:
    """Parse the CLI address ``"m.i"``."""
    try:
        m, i = label.strip().split(".")
        return character(int(m), int(i))
    except ValueError as exc:
        raise DomainError(f"bad character label {label!r}; expected m.i") from exc


def conductor_and_primitive_part(chi: DirichletCharacter) -> Tuple[int, DirichletCharacter]:
    return chi.conductor, chi.primitive


def induce(psi: DirichletCharacter, m: int) -> DirichletCharacter:
    """The character mod m equal to psi on integers coprime to m."""
    base = psi.primitive
    m0 = base.modulus
    if m < 1 or m % m0:
        raise DomainError(f"conductor {m0} does not divide {m}")
    g = character_group(m)
    E0, L0 = base.exponent_table, base.group.exponent
    exps = tuple(int(E0[gen % m0]) * order // L0 for gen, order in zip(g.generators, g.orders))
    return DirichletCharacter(g, exps)


def gauss_polynomial_P(chi: DirichletCharacter, z: complex) -> complex:
    """P(z) = sum_{0 <= n < m} chi(n) z^n by iterated multiplication."""
    z = complex(z)
    acc = CompensatedAccumulator()
    power = complex(1.0, 0.0)
    for v in chi.values:
        if v != 0:
            acc.add(v * power)
        power *= z
    return acc.value


def gauss_tau(psi: DirichletCharacter) -> complex:
    """tau = sum_{n mod m0} psi(n) e(n/m0) for a primitive psi."""
    if not psi.is_primitive:
        raise DomainError(f"{psi.label} is not primitive (conductor {psi.conductor})")
    m0 = psi.modulus
    acc = CompensatedAccumulator()
    for n in range(m0):
        v = psi.values[n]
        if v != 0:
            c, s = root_of_unity(n, m0)
            acc.add(v * complex(c, s))
    return acc.value


def satisfies_gauss_hypothesis(chi: DirichletCharacter) -> bool:
    """m/m0 squarefree and coprime to m0."""
    m0 = chi.conductor
    k = chi.modulus // m0
    return moebius(k) != 0 and math.gcd(k, m0) == 1


def gauss_P_formula(chi: DirichletCharacter, a: int) -> complex:
    """Closed form of P(e(a/m)) through the Gauss sum of the primitive part."""
    if not satisfies_gauss_hypothesis(chi):
        raise PreconditionError(
            f"{chi.label}: m/m0 = {chi.modulus // chi.conductor} must be squarefree and coprime to m0"
        )
    m = chi.modulus
    psi = chi.primitive
    m0 = psi.modulus
    g = math.gcd(m, a)
    r = m // g
    if r % m0:
        return 0j
    k = r // m0
    mu = moebius(k)
    if mu == 0:
        return 0j
    scale = totient(m) / totient(r) * mu
    return scale * psi.value(a // g).conjugate() * psi.value(k) * gauss_tau(psi)
