import json
import math
import random
import warnings

import numpy as np
import pytest

from expsum.arith import factor_table
from expsum.characters import character, enumerate_characters
from expsum.complexsum import PhaseAngle
from expsum.errors import InvalidConfigError, InvalidModificationError, PreconditionError, ResourceLimitError
from expsum.multfun import (
    ModifiedCharacterSpec,
    MultiplicativeFunctionSpec,
    construct_example1,
    construct_example2,
    eval_at,
    eval_range,
    from_character,
    modified_character,
    one,
    subset_bound,
)
from expsum.oracles import naive_eval


@pytest.fixture(scope="module")
def table():
    return factor_table(10**5)


def test_eval_at_examples(table):
    chi4 = character(4, 1)
    f = modified_character(ModifiedCharacterSpec(chi4, ((2, 1),)))
    assert eval_at(f, 1, table) == 1
    assert eval_at(f, 6, table) == -1
    g = MultiplicativeFunctionSpec(overrides={(2, None): 1j}, completely_multiplicative=True)
    assert eval_at(g, 8, table) == -1j
    assert naive_eval(g, 2**10) == -1


def test_eval_range_examples():
    chi5 = character(5, 2)
    v = eval_range(from_character(chi5), 10)
    assert v[1:].tolist() == [chi5.value(n) for n in range(1, 11)]
    assert eval_range(one(), 7)[1:].tolist() == [1] * 7


def test_modified_character_examples():
    chi4 = character(4, 1)
    f = modified_character(ModifiedCharacterSpec(chi4, ((2, 1),)))
    assert [f.prime_power_value(2, 1), f.prime_power_value(3, 1), f.prime_power_value(2, 2)] == [1, -1, 1]
    plain = modified_character(ModifiedCharacterSpec(chi4, ()))
    assert eval_range(plain, 20).tolist() == eval_range(from_character(chi4), 20).tolist()


def test_modified_mod12_hand_table():
    chi = character(12, 3)  # primitive, chi(5) = -1, chi(7) = -1, chi(11) = 1
    assert chi.values.tolist() == [0, 1, 0, 0, 0, -1, 0, -1, 0, 0, 0, 1]
    f = modified_character(ModifiedCharacterSpec(chi, ((2, 1), (3, -1))))
    # completely multiplicative with f(2) = 1, f(3) = -1, f(p) = chi(p) otherwise
    hand = {1: 1, 2: 1, 3: -1, 4: 1, 5: -1, 6: -1, 7: -1, 8: 1, 9: 1, 10: -1, 11: 1, 12: -1,
            13: 1, 14: -1, 15: 1, 16: 1, 17: -1, 18: 1, 19: -1, 20: -1, 21: 1, 22: 1, 23: 1, 24: -1}
    v = eval_range(f, 24)
    for n, expect in hand.items():
        assert v[n] == expect
        assert naive_eval(f, n) == expect


def test_modification_validation():
    chi4 = character(4, 1)
    with pytest.raises(InvalidModificationError):
        ModifiedCharacterSpec(chi4, ((3, 1),))
    with pytest.raises(InvalidModificationError):
        ModifiedCharacterSpec(character(12, 1), ((2, -1),))  # psi = 3.1 has psi(2) = -1
    with pytest.raises(InvalidModificationError):
        ModifiedCharacterSpec(character(12, 3), ((2, 1), (2, 1j)))
    with pytest.raises(InvalidModificationError):
        ModifiedCharacterSpec(character(12, 3), ((2, 1), (3, 0.5)))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        ModifiedCharacterSpec(character(12, 3), ((2, 0.5), (3, 1)))
    assert caught


def test_spec_validation():
    with pytest.raises(InvalidConfigError):
        MultiplicativeFunctionSpec(overrides={(4, 1): 1})
    with pytest.raises(InvalidConfigError):
        MultiplicativeFunctionSpec(overrides={(2, 1): 1.5})
    with pytest.raises(InvalidConfigError):
        MultiplicativeFunctionSpec(overrides={(2, 3): 1}, completely_multiplicative=True)
    with pytest.raises(InvalidConfigError):
        MultiplicativeFunctionSpec(base="character")


def test_override_precedence():
    f = MultiplicativeFunctionSpec(overrides={(2, None): -1, (2, 3): 1j})
    assert f.prime_power_value(2, 1) == -1
    assert f.prime_power_value(2, 2) == 1  # base rule
    assert f.prime_power_value(2, 3) == 1j


def _random_spec(rng):
    from expsum.acceptance import random_spec
    return random_spec(rng)


def test_multiplicativity_on_coprime_pairs(table):
    rng = random.Random(17)
    for _ in range(5):
        spec = _random_spec(rng)
        done = 0
        while done < 10**4:
            m, n = rng.randint(1, 300), rng.randint(1, 300)
            if math.gcd(m, n) != 1:
                continue
            assert abs(eval_at(spec, m * n, table) - eval_at(spec, m, table) * eval_at(spec, n, table)) < 1e-12
            done += 1


def test_eval_range_matches_naive_small():
    rng = random.Random(99)
    for _ in range(10):
        spec = _random_spec(rng)
        v = eval_range(spec, 3000)
        for n in range(1, 3001):
            ref = naive_eval(spec, n)
            assert v[n].real == ref.real and v[n].imag == ref.imag


def test_eval_range_capacity():
    with pytest.raises(ResourceLimitError):
        eval_range(one(), 2**32)


def test_json_round_trip(tmp_path):
    spec = MultiplicativeFunctionSpec("twisted_character", character(7, 2), 1.25,
                                      {(2, None): 1j, (3, 2): -0.5, (5, 1): 0}, name="x")
    doc = spec.to_json()
    again = MultiplicativeFunctionSpec.from_json(json.loads(json.dumps(doc)))
    assert eval_range(again, 500).tolist() == eval_range(spec, 500).tolist()
    assert {"p": 2, "k": "*", "re": 0.0, "im": 1.0} in doc["overrides"]
    path = tmp_path / "s.json"
    spec.save(path)
    assert MultiplicativeFunctionSpec.load(path).to_json() == doc


def test_zero_support():
    f = MultiplicativeFunctionSpec("character", character(15, 1), overrides={(7, 2): 0})
    assert f.zero_primes(100) == [3, 5, 7]
    sums = [f.zero_support_sum(b) for b in (2, 5, 10, 10**6)]
    assert sums == sorted(sums)
    for ex in (construct_example1(PhaseAngle.parse("sqrt2m1"), 3).spec, construct_example2(3).spec):
        assert ex.zero_primes(10**6) == []
        assert ex.zero_support_sum(10**6) < 1.0


def test_example1_k0_and_k1():
    ex0 = construct_example1(PhaseAngle.rational(1, 3), 0)
    assert eval_range(ex0.spec, 50).tolist() == [0] + [1] * 50
    assert abs(ex0.bound - 2 / math.sqrt(3)) < 1e-15
    ex1 = construct_example1(PhaseAngle.rational(1, 3), 1)
    assert ex1.primes == [2]
    assert ex1.zs == [-1]
    # M_1 = 2/|e(1/3) - 1| + |2(z_1 - 1)/(e(4/3) - 1)| = 2/sqrt3 + 4/sqrt3
    assert abs(ex1.m_values[0] - 2 * math.sqrt(3)) < 1e-12
    assert abs(ex1.bound - (2 * math.sqrt(3) + 1)) < 1e-12


def test_example1_excludes_denominator_primes():
    ex = construct_example1(PhaseAngle.rational(1, 30), 4)
    assert ex.primes == [7, 11, 13, 17]


def test_example1_continuity_steps():
    ex = construct_example1(PhaseAngle.parse("sqrt2m1"), 6)
    assert ex.zs[0] == -1
    for i in range(1, 6):
        assert abs(abs(ex.zs[i]) - 1) < 1e-15 and ex.zs[i] != 1
        assert abs(ex.m_values[i] - ex.m_values[i - 1]) < 2.0**-i
    assert all(m <= ex.bound for m in ex.m_values)
    assert ex.m_values[-1] == pytest.approx(subset_bound(PhaseAngle.parse("sqrt2m1"), ex.primes, ex.zs))
    v = eval_range(ex.spec, 100)
    assert v[4] == -1 and v[8] == -1 and v[12] == -1 and v[25] == ex.zs[1] and v[2] == 1


def test_example1_errors():
    with pytest.raises(PreconditionError):
        construct_example1(PhaseAngle.rational(0, 1), 2)
    with pytest.raises(ResourceLimitError):
        construct_example1(PhaseAngle.rational(1, 3), 21)


def test_example2():
    ex1 = construct_example2(1)
    assert ex1.primes == [11]
    assert abs(abs(1 - ex1.zs[0]) - 1 / 121) < 1e-15
    assert ex1.zs[0].imag > 0
    assert eval_range(construct_example2(0).spec, 30).tolist() == [0] + [1] * 30
    ex3 = construct_example2(3)
    for p, z in zip(ex3.primes, ex3.zs):
        assert abs(abs(z) - 1) < 1e-12
        assert abs(abs(1 - z) - 1 / p**2) < 1e-12
    v = eval_range(ex3.spec, 20000)
    assert v[121] == ex3.zs[0] and v[11 * 17] == 1 and v[121 * 17] == ex3.zs[0]
    assert v[1331] == ex3.zs[0] and v[11] == 1


def test_example2_prime_rule_validation():
    with pytest.raises(InvalidConfigError):
        construct_example2(3, lambda i: 7)
    with pytest.raises(InvalidConfigError):
        construct_example2(2, lambda i: 10 * i)
