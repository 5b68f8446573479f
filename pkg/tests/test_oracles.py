import ast
import pathlib

from expsum import oracles
from expsum.characters import character, principal_character
from expsum.complexsum import PhaseAngle
from expsum.multfun import MultiplicativeFunctionSpec, one


def test_naive_eval_examples():
    f = MultiplicativeFunctionSpec(overrides={(2, None): 1j}, completely_multiplicative=True)
    assert oracles.naive_eval(f, 1) == 1
    assert oracles.naive_eval(one(), 1) == 1
    assert oracles.naive_eval(f, 2**10) == -1


def test_trial_division():
    assert oracles._trial_division(1) == []
    assert oracles._trial_division(360) == [(2, 3), (3, 2), (5, 1)]
    assert oracles._trial_division(9973 * 9967) == [(9967, 1), (9973, 1)]


def test_direct_char_sum_examples():
    chi = character(3, 1)
    assert oracles.direct_char_sum(chi, PhaseAngle.rational(1, 4), 0.0, 0) == 0
    assert oracles.direct_char_sum(principal_character(1), PhaseAngle.rational(0, 1), 0.0, 100) == 100
    assert abs(oracles.direct_char_sum(chi, PhaseAngle.rational(1, 4), 0.0, 3) - (1 + 1j)) < 1e-15


def test_exact_accumulation():
    big, small = 2.0**60, 1.0
    assert oracles._unscaled(oracles._scaled(big) + oracles._scaled(small) - oracles._scaled(big)) == 1.0
    assert oracles._unscaled(oracles._scaled(5e-324)) == 5e-324


def test_naive_P_examples():
    assert abs(oracles.naive_P(character(7, 3), 1)) < 1e-12
    assert abs(oracles.naive_P(character(3, 1), 1j) - (1 + 1j)) < 1e-15
    assert oracles.naive_P(principal_character(2), 2) == 2


def test_oracles_share_no_code_with_fast_paths():
    tree = ast.parse(pathlib.Path(oracles.__file__).read_text())
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module or "")
            assert node.level == 0, "oracles must not import package modules"
        elif isinstance(node, ast.Import):
            imported.update(a.name for a in node.names)
    assert imported <= {"__future__", "cmath", "math", "fractions"}
