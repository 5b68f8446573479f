"""The thirteen acceptance checks, shared by ``expsum selftest`` and the test suite.

Each check returns a :class:`CriterionResult`.  ``quick=True`` shrinks the
grids for a fast smoke run; the thresholds never change.
"""
from __future__ import annotations

import cmath
import math
import random
import time
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from .arith import crt_exact_divisibility, factor_table
from .characters import character, enumerate_characters, gauss_P_formula, satisfies_gauss_hypothesis
from .complexsum import PhaseAngle, unit_phase
from .multfun import (
    ModifiedCharacterSpec,
    MultiplicativeFunctionSpec,
    construct_example1,
    construct_example2,
    eval_range,
    modified_character,
)
from .oracles import direct_char_prefix_sums, naive_eval_factored, naive_P, trial_factorizations
from .pretentious import distance
from .sums import (
    A_expansion,
    A_recursive,
    char_closed_form,
    decomposition_sum,
    explicit_bounds,
    modified_sum,
    sum_trajectory,
    twisted_power_sums,
)

SEED = 20240611


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} {self.title}: {self.detail} ({self.seconds:.2f}s)"


def _random_turn(rng: random.Random) -> PhaseAngle:
    return PhaseAngle.fixed(rng.getrandbits(128))


def _unimodular(rng: random.Random) -> complex:
    return cmath.exp(2j * math.pi * rng.random())


def character_bound(quick: bool = False) -> CriterionResult:
    X = 10**5 if quick else 10**6
    worst = -math.inf
    runs = 0
    for m in (3, 4, 5, 7, 12):
        for alpha in (PhaseAngle.rational(1, 2), PhaseAngle.rational(1, 2 * m), PhaseAngle.parse("sqrt2m1")):
            bound = explicit_bounds(m, alpha).character
            if bound is None:
                continue
            for chi in enumerate_characters(m):
                sup = sum_trajectory(chi, alpha, 0.0, X, schedule=[X]).final.running_sup
                worst = max(worst, sup - bound)
                runs += 1
    return CriterionResult(1, "character-sum bound", worst <= 1e-6,
                           f"{runs} trajectories to {X}, max(sup - bound) = {worst:.4g}")


def gauss_formula(quick: bool = False) -> CriterionResult:
    top = 24 if quick else 60
    worst = 0.0
    cases = 0
    for m in range(1, top + 1):
        for chi in enumerate_characters(m):
            if not satisfies_gauss_hypothesis(chi):
                continue
            for a in range(1, m + 1):
                ref = naive_P(chi, cmath.exp(2j * math.pi * a / m))
                worst = max(worst, abs(gauss_P_formula(chi, a) - ref))
                cases += 1
    return CriterionResult(2, "Gauss formula", worst <= 1e-9, f"{cases} cases for m <= {top}, max dev {worst:.3g}")


def random_spec(rng: random.Random) -> MultiplicativeFunctionSpec:
    """A seeded random spec mixing bases, overrides and zero values."""
    cm = rng.random() < 0.3
    base = rng.choice(["one", "character", "twisted_character"])
    chi = None
    if base != "one":
        m = rng.randint(1, 30)
        chi = enumerate_characters(m)[rng.randrange(len(enumerate_characters(m)))]
    t = rng.uniform(-5, 5) if base == "twisted_character" else 0.0
    primes = factor_table(60).primes(2, 60).tolist()
    overrides = {}
    for p in rng.sample(primes, rng.randint(0, 8)):
        roll = rng.random()
        v = 0j if roll < 0.15 else _unimodular(rng) if roll < 0.8 else rng.random() * _unimodular(rng)
        k = None if cm or rng.random() < 0.5 else rng.randint(1, 4)
        overrides[(p, k)] = v
    return MultiplicativeFunctionSpec(base, chi, t, overrides, cm, name=f"random-{base}")


def oracle_equivalence(quick: bool = False) -> CriterionResult:
    N = 10**4 if quick else 10**5
    rng = random.Random(SEED + 3)
    factors = trial_factorizations(N)
    mismatches = 0
    for _ in range(20):
        spec = random_spec(rng)
        fast = eval_range(spec, N)
        ref = np.array([0j] + [naive_eval_factored(spec, factors[n]) for n in range(1, N + 1)])
        # == on doubles: bit equality up to the sign of zero
        mismatches += int(np.count_nonzero((fast.real[1:] != ref.real[1:]) | (fast.imag[1:] != ref.imag[1:])))
    return CriterionResult(3, "oracle equivalence", mismatches == 0, f"20 specs, n <= {N}, {mismatches} mismatches")


def _mod12_specs(rng: random.Random) -> List[ModifiedCharacterSpec]:
    specs = []
    for chi in enumerate_characters(12):
        mods = []
        for p in (2, 3):
            eta = _unimodular(rng)
            while abs(eta - chi.primitive.value(p)) < 1e-6:
                eta = _unimodular(rng)
            mods.append((p, eta))
        specs.append(ModifiedCharacterSpec(chi, tuple(mods)))
    return specs


def a_recursion(quick: bool = False) -> CriterionResult:
    rng = random.Random(SEED + 4)
    specs = _mod12_specs(rng)
    alphas = [_random_turn(rng) for _ in range(3 if quick else 10)]
    xs = (10**2, 10**3) if quick else (10**2, 10**3, 10**4)
    worst = 0.0
    for spec in specs:
        for ells in ((1,), (2,), (1, 1), (2, 2)):
            for x in xs:
                for alpha in alphas:
                    worst = max(worst, abs(A_recursive(spec, ells, x, alpha) - A_expansion(spec, ells, x, alpha)))
    return CriterionResult(4, "A recursion vs expansion", worst <= 1e-8, f"max dev {worst:.3g}")


def decomposition(quick: bool = False) -> CriterionResult:
    rng = random.Random(SEED + 5)
    specs = _mod12_specs(rng)
    alphas = [_random_turn(rng) for _ in range(3 if quick else 10)]
    xs = (10**2, 777.5, 10**3) if quick else (10**2, 777.5, 10**3, 5432.25, 10**4)
    worst = 0.0
    for spec in specs:
        for x in xs:
            for alpha in alphas:
                worst = max(worst, abs(modified_sum(spec, x, alpha) - decomposition_sum(spec, x, alpha)))
    return CriterionResult(5, "decomposition identity", worst <= 1e-8, f"max dev {worst:.3g}")


def modified_growth(quick: bool = False) -> CriterionResult:
    chi = [c for c in enumerate_characters(4) if not c.is_principal][0]
    spec = modified_character(ModifiedCharacterSpec(chi, ((2, 1 + 0j),)))
    grid = [10**3, 10**4, 10**5, 10**6]
    traj = sum_trajectory(spec, PhaseAngle.parse("sqrt2m1"), 0.0, grid[-1], schedule=grid)
    sups = [traj.sup_at(x) for x in grid]
    increasing = all(b > a for a, b in zip(sups, sups[1:]))
    doubled = sups[-1] >= 2 * sups[0]
    text = ", ".join(f"{x:.0e}:{s:.6g}" for x, s in zip(grid, sups))
    return CriterionResult(6, "modified-character growth", increasing and doubled,
                           f"sups {text}; strictly increasing={increasing}, doubled={doubled}")


def example2_stabilization(quick: bool = False) -> CriterionResult:
    # Thresholds (0.5 absolute slack, 45 of 50) are the acceptance grid's own
    # engineering choices: boundedness holds only for almost every alpha.
    X = 10**6
    ex = construct_example2(4)
    coeffs = eval_range(ex.spec, X)
    rng = random.Random(SEED + 7)
    count = 10 if quick else 50
    good = 0
    for _ in range(count):
        traj = sum_trajectory(ex.spec, _random_turn(rng), 0.0, X, schedule=[10**4, X], coefficients=coeffs)
        good += traj.sup_at(X) - traj.sup_at(10**4) <= 0.5
    need = math.ceil(0.9 * count)
    return CriterionResult(7, "example 2 stabilization", good >= need,
                           f"{good}/{count} angles stable (need {need}), primes {ex.primes}")


def example1_bound(quick: bool = False) -> CriterionResult:
    X = 10**5
    parts = []
    ok = True
    for alpha in (PhaseAngle.rational(1, 3), PhaseAngle.parse("sqrt2m1")):
        ex = construct_example1(alpha, 5)
        sup = sum_trajectory(ex.spec, alpha, 0.0, X, schedule=[X]).final.running_sup
        ok &= ex.bound >= sup
        parts.append(f"{alpha}: bound {ex.bound:.6g} vs sup {sup:.6g}")
    return CriterionResult(8, "example 1 certified bound", ok, "; ".join(parts))


def closed_form(quick: bool = False) -> CriterionResult:
    rng = random.Random(SEED + 9)
    top = 2000 if quick else 10**4
    worst = 0.0
    checked = 0
    for m in (3, 5, 8):
        alphas = []
        while len(alphas) < 5:
            q = rng.randint(2, 400)
            alpha = PhaseAngle.rational(rng.randrange(1, q), q)
            if not alpha.multiple_is_integer(m):
                alphas.append(alpha)
        for chi in enumerate_characters(m):
            for alpha in alphas:
                ref = direct_char_prefix_sums(chi, alpha, 0.0, top)
                for n in range(m, top + 1, m):
                    worst = max(worst, abs(char_closed_form(chi, alpha, n) - ref[n]))
                    checked += 1
    return CriterionResult(9, "closed form", worst <= 1e-8, f"{checked} multiples, max dev {worst:.3g}")


def _unimodular_spec(rng: random.Random, primes: List[int]) -> MultiplicativeFunctionSpec:
    if rng.random() < 0.5:
        base = MultiplicativeFunctionSpec("twisted_character", character(1, 0), rng.uniform(-3, 3))
    else:
        base = MultiplicativeFunctionSpec()
    chosen = primes if rng.random() < 0.3 else rng.sample(primes, rng.randint(0, 200))
    overrides = {(p, None): _unimodular(rng) for p in chosen}
    return MultiplicativeFunctionSpec(base.base, base.chi, base.t, overrides, rng.random() < 0.5)


def triangle(quick: bool = False) -> CriterionResult:
    rng = random.Random(SEED + 10)
    x = 10**4
    primes = factor_table(x).primes(2, x).tolist()
    worst = -math.inf
    count = 40 if quick else 200
    for _ in range(count):
        f, g, h = (_unimodular_spec(rng, primes) for _ in range(3))
        gap = distance(f, h, 1, x) - distance(f, g, 1, x) - distance(g, h, 1, x)
        worst = max(worst, gap)
    return CriterionResult(10, "triangle inequality", worst <= 1e-9, f"{count} triples, max violation {worst:.3g}")


def twisted_stabilization(quick: bool = False) -> CriterionResult:
    X = 10**6
    parts = []
    ok = True
    alpha = PhaseAngle.rational(1, 3)
    for chi in enumerate_characters(5)[1:]:
        for t in (1.0, 2.5):
            traj = sum_trajectory(chi, alpha, t, X, schedule=[10**4, X])
            ok &= traj.sup_at(X) <= traj.sup_at(10**4) + 1.0
    pw = twisted_power_sums(1j, 1.0, X, schedule=[10**4, X])
    for name, at in (("plain", pw.plain_sup_at), ("harmonic", pw.harmonic_sup_at)):
        ok &= at(X) <= at(10**4) + 1.0
        parts.append(f"{name} {at(10**4):.6g} -> {at(X):.6g}")
    return CriterionResult(11, "twisted stabilization", ok, "chi mod 5 x t in {1, 2.5}; z=i: " + ", ".join(parts))


def _random_crt_config(rng: random.Random):
    primes = factor_table(50).primes(2, 50).tolist()
    H = rng.randint(1, 5)
    pool = [p for p in primes if p > H]
    W = rng.randint(1, 10**6)
    pool = [p for p in pool if W % p]
    rng.shuffle(pool)
    assignments = {}
    for j in range(1, H + 1):
        take = min(rng.randint(0, 2), len(pool))
        assignments[j] = [(pool.pop(), rng.randint(1, 3)) for _ in range(take)]
    return H, assignments, W


def _exact(k: int, pairs, value: int) -> bool:
    if value % k:
        return False
    return all(value % (p ** (a + 1)) for p, a in pairs)


def crt(quick: bool = False) -> CriterionResult:
    rng = random.Random(SEED + 12)
    failures = 0
    for _ in range(100):
        H, assignments, W = _random_crt_config(rng)
        n0, M = crt_exact_divisibility(H, assignments, W)
        expect_M = math.prod(p ** (a + 1) for pairs in assignments.values() for p, a in pairs)
        if M != expect_M or not 0 <= n0 < M:
            failures += 1
            continue
        for n in (n0, n0 + M):
            for j, pairs in assignments.items():
                k = math.prod(p**a for p, a in pairs)
                if not _exact(k, pairs, W * n + j):
                    failures += 1
    return CriterionResult(12, "CRT exact divisibility", failures == 0, f"100 configurations, {failures} failures")


def phase_precision(quick: bool = False) -> CriterionResult:
    rng = random.Random(SEED + 13)
    worst = 0.0
    for _ in range(100):
        q = rng.randint(2, 10**6)
        a = rng.randrange(1, q)
        while math.gcd(a, q) != 1:
            a = rng.randrange(1, q)
        n = rng.randint(0, 10**9)
        r = PhaseAngle.rational(a, q)
        worst = max(worst, abs(unit_phase(n, r) - unit_phase(n, r.to_fixed())))
    return CriterionResult(13, "phase precision", worst <= 1e-12, f"100 samples, max dev {worst:.3g}")


CRITERIA: Dict[int, Callable[..., CriterionResult]] = {
    1: character_bound,
    2: gauss_formula,
    3: oracle_equivalence,
    4: a_recursion,
    5: decomposition,
    6: modified_growth,
    7: example2_stabilization,
    8: example1_bound,
    9: closed_form,
    10: triangle,
    11: twisted_stabilization,
    12: crt,
    13: phase_precision,
}


def run_criterion(number: int, quick: bool = False) -> CriterionResult:
    start = time.perf_counter()
    result = CRITERIA[number](quick=quick)
    result.seconds = time.perf_counter() - start
    return result


def run_all(quick: bool = False, numbers=None) -> List[CriterionResult]:
    return [run_criterion(k, quick) for k in (numbers or sorted(CRITERIA))]
