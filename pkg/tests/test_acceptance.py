"""Full-size acceptance run: one PASS/FAIL line per criterion.

Thresholds and grids are the production ones (``quick=False``).  Criterion 6
is known to fail on honest arithmetic; it is kept at its stated thresholds and
marked as a strict expected failure so a surprise pass is reported too.
"""
import pytest

from expsum.acceptance import CRITERIA, run_criterion

GROWTH_NOTE = (
    "running sup of the modified-character sum peaks at n=23283 and is flat "
    "from 1e5 to 1e6 (42.7258 both), so the required growth between the last "
    "two checkpoints cannot be observed"
)


def _cases():
    for number in sorted(CRITERIA):
        marks = [pytest.mark.xfail(strict=True, reason=GROWTH_NOTE)] if number == 6 else []
        yield pytest.param(number, marks=marks, id=f"criterion-{number:02d}")


@pytest.mark.parametrize("number", list(_cases()))
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
