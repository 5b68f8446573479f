import cmath
import itertools
import math

import numpy as np
import pytest

from expsum.arith import totient
from expsum.characters import (
    character,
    conductor_and_primitive_part,
    enumerate_characters,
    gauss_P_formula,
    gauss_polynomial_P,
    gauss_tau,
    induce,
    parse_character,
    principal_character,
    satisfies_gauss_hypothesis,
)
from expsum.errors import DomainError, PreconditionError, ResourceLimitError
from expsum.oracles import naive_P


def e(x):
    return cmath.exp(2j * math.pi * x)


def test_counts():
    assert len(enumerate_characters(1)) == 1
    assert len(enumerate_characters(5)) == 4
    for m in range(1, 80):
        assert len(enumerate_characters(m)) == totient(m)


def test_trivial_modulus():
    (chi,) = enumerate_characters(1)
    assert chi.is_principal
    assert all(chi.value(n) == 1 for n in range(10))


def test_mod12_all_real():
    chars = enumerate_characters(12)
    assert len(chars) == 4
    assert all(c.is_real for c in chars)
    assert all(np.all(c.values.imag == 0) for c in chars)


def test_errors():
    with pytest.raises(DomainError):
        enumerate_characters(0)
    with pytest.raises(ResourceLimitError):
        enumerate_characters(10**6 + 1)
    with pytest.raises(DomainError):
        parse_character("5-2")


@pytest.mark.parametrize("m", [1, 2, 3, 4, 8, 9, 12, 15, 16, 24, 25, 27, 32, 45, 49, 60, 64, 77])
def test_type_invariants(m):
    chars = enumerate_characters(m)
    assert chars[0].is_principal
    labels = {c.label for c in chars}
    assert len(labels) == len(chars)
    phi = totient(m)
    for chi in chars:
        v = chi.values
        for n in range(m):
            assert (v[n] == 0) == (math.gcd(n, m) > 1)
            if v[n] != 0:
                assert abs(v[n] ** phi - 1) < 1e-12
        for j, k in itertools.product(range(m), repeat=2):
            assert abs(v[j * k % m] - v[j] * v[k]) < 1e-12
        assert m % chi.conductor == 0


@pytest.mark.parametrize("m", [12, 20, 36, 63])
def test_group_closure(m):
    chars = enumerate_characters(m)
    tables = [c.values for c in chars]
    for a, b in itertools.product(chars, repeat=2):
        prod = a.values * b.values
        assert any(np.max(np.abs(prod - t)) < 1e-12 for t in tables)
        assert (a * b).values.tolist() == pytest.approx(prod.tolist(), abs=1e-12)


def _conductor_by_exhaustion(chi):
    m = chi.modulus
    units = [n for n in range(1, m) if math.gcd(n, m) == 1] or [0]
    for d in range(1, m + 1):
        if m % d:
            continue
        if all(abs(chi.value(n) - 1) < 1e-12 for n in units if n % d == 1 % d):
            return d
    return m


def test_conductor_examples():
    m0, psi = conductor_and_primitive_part(principal_character(6))
    assert m0 == 1 and psi.modulus == 1
    chi4 = character(4, 1)
    assert conductor_and_primitive_part(chi4) == (4, chi4)
    # 12.1 is induced from the quadratic character mod 3
    m0, psi = conductor_and_primitive_part(character(12, 1))
    assert (m0, psi.label) == (3, "3.1")
    assert psi.values.tolist() == [0, 1, -1]


@pytest.mark.parametrize("m", range(1, 50))
def test_conductor_matches_exhaustion(m):
    for chi in enumerate_characters(m):
        assert chi.conductor == _conductor_by_exhaustion(chi)
        psi = chi.primitive
        assert psi.is_primitive
        assert psi.primitive == psi
        for n in range(m):
            expect = psi.value(n) if math.gcd(n, m) == 1 else 0
            assert abs(chi.value(n) - expect) < 1e-12


def test_induce():
    assert induce(principal_character(1), 10) == principal_character(10)
    psi = character(5, 1)
    assert induce(psi, 5) == psi
    quad3 = character(3, 1)
    chi = induce(quad3, 12)
    direct = [0 if math.gcd(n, 12) > 1 else (1 if n % 3 == 1 else -1) for n in range(12)]
    assert chi.values.tolist() == direct
    with pytest.raises(DomainError):
        induce(quad3, 10)


def test_P_examples():
    for chi in enumerate_characters(7)[1:]:
        assert abs(gauss_polynomial_P(chi, 1)) < 1e-12
    assert gauss_polynomial_P(character(5, 2), 0) == 0
    assert abs(gauss_polynomial_P(character(3, 1), 1j) - (1 + 1j)) < 1e-12


def test_tau():
    assert gauss_tau(principal_character(1)) == 1
    quad5 = [c for c in enumerate_characters(5) if c.order == 2][0]
    assert abs(abs(gauss_tau(quad5)) - math.sqrt(5)) < 1e-9
    # quadratic mod 5 is even, so tau = +sqrt(5)
    assert abs(gauss_tau(quad5) - math.sqrt(5)) < 1e-12
    assert abs(gauss_tau(character(3, 1)) - 1j * math.sqrt(3)) < 1e-9
    with pytest.raises(DomainError):
        gauss_tau(character(12, 1))


def test_tau_modulus_for_all_primitive():
    for m in range(1, 60):
        for chi in enumerate_characters(m):
            if chi.is_primitive:
                assert abs(abs(gauss_tau(chi)) - math.sqrt(m)) < 1e-9


def test_gauss_formula_examples():
    chi5 = character(5, 1)
    assert abs(abs(gauss_P_formula(chi5, 2)) - math.sqrt(5)) < 1e-9
    assert abs(gauss_P_formula(chi5, 2) - naive_P(chi5, e(2 / 5))) < 1e-9
    assert gauss_P_formula(character(4, 1), 2) == 0
    for chi in enumerate_characters(9)[1:]:
        if satisfies_gauss_hypothesis(chi):
            assert gauss_P_formula(chi, 9) == 0


def test_gauss_hypothesis():
    # principal mod 4: m/m0 = 4 is not squarefree
    assert not satisfies_gauss_hypothesis(principal_character(4))
    with pytest.raises(PreconditionError):
        gauss_P_formula(principal_character(4), 1)
    # 12.1 from mod 3: m/m0 = 4, not squarefree
    assert not satisfies_gauss_hypothesis(character(12, 1))
    # 12.2 from mod 4: m/m0 = 3, squarefree and coprime to 4
    assert satisfies_gauss_hypothesis(character(12, 2))


def test_gauss_formula_grid_small():
    for m in range(1, 31):
        for chi in enumerate_characters(m):
            if not satisfies_gauss_hypothesis(chi):
                continue
            for a in range(1, m + 1):
                assert abs(gauss_P_formula(chi, a) - naive_P(chi, e(a / m))) < 1e-9
