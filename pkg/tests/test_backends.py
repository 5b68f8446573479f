"""The compiled kernels and the pure-Python fallback must agree bit for bit."""
import random

import numpy as np
import pytest

from expsum import _backend, _pycore
from expsum.characters import character
from expsum.complexsum import PhaseAngle
from expsum.multfun import MultiplicativeFunctionSpec, eval_range

core = pytest.importorskip("expsum._core")


def same(a, b):
    return a.dtype == b.dtype and a.shape == b.shape and np.array_equal(a.view(np.uint8), b.view(np.uint8))


def test_backend_selection():
    assert _backend.pure_kernels is _pycore
    assert _backend.COMPILED == (_backend.kernels is not _pycore)


def test_sieve():
    for n in (0, 1, 2, 97, 10**4 + 7):
        assert same(core.linear_sieve(n), _pycore.linear_sieve(n))


def test_multiplicative_fill():
    spf = core.linear_sieve(5000)
    rng = np.random.default_rng(1)
    pp = np.exp(2j * np.pi * rng.random(5001)) * rng.random(5001)
    assert same(core.multiplicative_fill(spf, pp), _pycore.multiplicative_fill(spf, pp))


ANGLES = [
    PhaseAngle.rational(0, 1),
    PhaseAngle.rational(1, 2),
    PhaseAngle.rational(3, 7),
    PhaseAngle.rational(12345, (1 << 22) + 15),  # above the table size: computed on the fly
    PhaseAngle.parse("sqrt2m1"),
    PhaseAngle.parse("0.25"),
    PhaseAngle.fixed(random.Random(5).getrandbits(128)),
]


@pytest.mark.parametrize("alpha", ANGLES, ids=str)
def test_phase_table(alpha):
    args = alpha.kernel_args()
    assert same(core.phase_table(4000, *args), _pycore.phase_table(4000, *args))


@pytest.mark.parametrize("alpha", ANGLES, ids=str)
@pytest.mark.parametrize("t, harmonic", [(0.0, False), (1.7, False), (0.0, True), (-2.5, True)])
def test_trajectory(alpha, t, harmonic):
    args = alpha.kernel_args()
    cps = np.array([1, 5, 17, 100, 999, 3000], dtype=np.int64)
    periodic = np.ascontiguousarray(character(7, 2).values)
    spec = MultiplicativeFunctionSpec("twisted_character", character(5, 1), 0.3, {(2, None): 1j, (3, 2): -0.5})
    dense = eval_range(spec, 3000)
    for coeffs, period in ((periodic, 7), (dense, 0), (np.ones(1, dtype=np.complex128), 1)):
        a = core.trajectory(coeffs, period, *args, t, harmonic, cps)
        b = _pycore.trajectory(coeffs, period, *args, t, harmonic, cps)
        assert same(a[0], b[0]) and same(a[1], b[1])


def test_empty_checkpoints():
    v, s = core.trajectory(np.ones(1, dtype=np.complex128), 1, 0, 1, 3, 0, 0, 0.0, False, np.array([], dtype=np.int64))
    assert v.size == 0 and s.size == 0
