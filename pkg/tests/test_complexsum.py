import cmath
import math
import random
from fractions import Fraction

import mpmath
import pytest

from expsum.complexsum import (
    CompensatedAccumulator,
    PhaseAngle,
    archimedean_twist,
    e,
    one_minus_e_abs,
    stream_sum,
    unit_phase,
)
from expsum.errors import DomainError, NonFiniteTermError, PhaseTableTooLarge


def _mp_phase(n, frac):
    """e(n * frac / 2^128) with the reduction done in integers and the trig in 50 digits."""
    mpmath.mp.dps = 50
    r = n * frac % (1 << 128)
    z = mpmath.expjpi(2 * mpmath.mpf(r) / mpmath.mpf(2) ** 128)
    return complex(z)


def test_parse_modes():
    assert PhaseAngle.parse("3/6") == PhaseAngle.rational(1, 2)
    assert PhaseAngle.parse("-1/3") == PhaseAngle.rational(2, 3)
    assert PhaseAngle.parse("0.25").frac == 1 << 126
    assert PhaseAngle.parse("1.75").frac == 3 << 126
    assert not PhaseAngle.parse("sqrt2m1").is_rational
    with pytest.raises(DomainError):
        PhaseAngle.parse("pi")


def test_named_constants_are_correct_to_2_minus_128():
    mpmath.mp.dps = 60
    for name, exact in (
        ("sqrt2m1", mpmath.sqrt(2) - 1),
        ("phi-1", (mpmath.sqrt(5) - 1) / 2),
        ("sqrt5m2", mpmath.sqrt(5) - 2),
    ):
        frac = PhaseAngle.parse(name).frac
        err = abs(mpmath.mpf(frac) / mpmath.mpf(2) ** 128 - exact)
        assert err < mpmath.mpf(2) ** -128


def test_dilate_exact():
    a = PhaseAngle.rational(3, 7)
    assert a.dilate(5) == PhaseAngle.rational(1, 7)
    f = PhaseAngle.parse("sqrt2m1")
    assert f.dilate(2**20).frac == (f.frac << 20) % (1 << 128)
    assert PhaseAngle.rational(1, 4).dilate(4).is_integer()


def test_integer_detection():
    assert PhaseAngle.rational(0, 1).is_integer()
    assert not PhaseAngle.rational(1, 10**9).is_integer()
    assert PhaseAngle.fixed(1).is_integer()
    assert PhaseAngle.fixed(-1).is_integer()
    assert not PhaseAngle.fixed(1 << 66).is_integer()
    assert PhaseAngle.rational(1, 3).multiple_is_integer(3)


def test_unit_phase_examples():
    assert unit_phase(12345, PhaseAngle.rational(0, 1)) == 1
    assert unit_phase(1, PhaseAngle.rational(1, 2)) == -1
    assert unit_phase(3, PhaseAngle.rational(1, 4)) == -1j
    assert unit_phase(1, PhaseAngle.parse("0.5")) == -1
    with pytest.raises(DomainError):
        unit_phase(-1, PhaseAngle.rational(1, 3))


def test_unit_phase_large_n_against_high_precision():
    alpha = PhaseAngle.parse("sqrt2m1")
    for n in (10**9, 10**12, 2**63 - 1):
        assert abs(unit_phase(n, alpha) - _mp_phase(n, alpha.frac)) < 1e-12


def test_rational_table_limit():
    big = PhaseAngle.rational(1, (1 << 30) + 3)
    with pytest.raises(PhaseTableTooLarge):
        unit_phase(5, big)
    # the fixed-point route still works
    assert abs(unit_phase(5, big.to_fixed()) - cmath.exp(2j * math.pi * 5 / ((1 << 30) + 3))) < 1e-14


def test_unit_modulus():
    rng = random.Random(3)
    for _ in range(1000):
        z = unit_phase(rng.randint(0, 10**12), PhaseAngle.fixed(rng.getrandbits(128)))
        assert abs(abs(z) - 1) < 1e-14


def test_phase_additivity():
    rng = random.Random(11)
    for _ in range(10**4):
        alpha = PhaseAngle.fixed(rng.getrandbits(128)) if rng.random() < 0.5 else PhaseAngle.rational(
            rng.randint(0, 10**4), rng.randint(1, 10**4)
        )
        m, n = rng.randint(0, 10**9), rng.randint(0, 10**9)
        assert abs(unit_phase(m + n, alpha) - unit_phase(m, alpha) * unit_phase(n, alpha)) < 1e-12


def test_e_and_one_minus_e():
    assert e(PhaseAngle.rational(1, 4)) == 1j
    assert one_minus_e_abs(PhaseAngle.rational(1, 2)) == 2.0
    assert abs(one_minus_e_abs(PhaseAngle.rational(1, 3)) - math.sqrt(3)) < 1e-15
    tiny = PhaseAngle.fixed(1 << 70)
    # relative accuracy survives near 0: 2 sin(pi x) ~ 2 pi x
    assert abs(one_minus_e_abs(tiny) / (2 * math.pi * 2.0**-58) - 1) < 1e-15


def test_archimedean_twist():
    assert archimedean_twist(17, 0.0) == 1
    assert archimedean_twist(1, 3.7) == 1
    t = 2 * math.pi / math.log(10)
    assert abs(archimedean_twist(10, t) - 1) < 1e-12
    with pytest.raises(DomainError):
        archimedean_twist(0, 1.0)


def test_archimedean_twist_completely_multiplicative():
    rng = random.Random(5)
    for _ in range(2000):
        m, n, t = rng.randint(1, 10**6), rng.randint(1, 10**6), rng.uniform(-20, 20)
        assert abs(archimedean_twist(m * n, t) - archimedean_twist(m, t) * archimedean_twist(n, t)) < 1e-12


def test_stream_sum_examples():
    assert stream_sum([]) == 0
    assert stream_sum([1, -1]) == 0
    assert stream_sum([1e16, 1.0, -1e16]) == 1.0


def test_stream_sum_nonfinite():
    with pytest.raises(NonFiniteTermError) as info:
        stream_sum([1, 2, complex(float("nan"), 0), 3])
    assert info.value.index == 2


def test_stream_sum_long_series_against_extended_precision():
    alpha = PhaseAngle.parse("sqrt5m2")
    N = 10**6
    terms = [unit_phase(n, alpha) for n in range(1, N + 1)]
    got = stream_sum(terms)
    # exact sum of the very same doubles
    ref = complex(math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms))
    assert abs(got - ref) < 1e-10
    # and the true geometric sum from high-precision phases
    mpmath.mp.dps = 40
    a = mpmath.mpf(alpha.frac) / mpmath.mpf(2) ** 128
    w = mpmath.expjpi(2 * a)
    true = complex(w * (w**N - 1) / (w - 1))
    assert abs(got - true) < 1e-8


def test_accumulator_merge_matches_single_pass():
    rng = random.Random(2)
    terms = [cmath.exp(2j * math.pi * rng.random()) for _ in range(5000)]
    whole = CompensatedAccumulator().extend(terms)
    left = CompensatedAccumulator().extend(terms[:2000])
    right = CompensatedAccumulator().extend(terms[2000:])
    merged = left.merge(right)
    assert merged.count == 5000
    assert abs(merged.value - whole.value) < 1e-12
    ref = complex(math.fsum(z.real for z in terms), math.fsum(z.imag for z in terms))
    assert abs(whole.value - ref) <= 4 * 5000 * 2.0**-53


def test_rational_and_fixed_agree():
    rng = random.Random(13)
    for _ in range(100):
        q = rng.randint(2, 10**6)
        a = rng.randrange(1, q)
        n = rng.randint(0, 10**9)
        r = PhaseAngle.rational(a, q)
        assert abs(unit_phase(n, r) - unit_phase(n, r.to_fixed())) < 1e-12


def test_fraction_round_trip():
    x = Fraction(355, 113)
    assert abs(PhaseAngle.from_fraction(x).as_fraction() - (x - 3)) < Fraction(1, 2**127)
