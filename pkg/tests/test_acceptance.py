"""Acceptance battery: thirteen criteria, one test each.

Every check is exact rational arithmetic; the tolerance on every equality
is zero.  The battery is deterministic: each criterion draws from its own
seeded stream, so a failure reproduces with the same seed.  Run with -v to
get one pass/fail line per criterion; run `foamcalc selftest --report` for
the same battery from the command line.
"""

import pytest

from foamcalc.acceptance import CRITERIA, DEFAULT_SEED, run_criterion

_IDS = [f"{num:02d}-{name}" for num, name, _ in CRITERIA]


@pytest.mark.parametrize("number", [num for num, _, _ in CRITERIA], ids=_IDS)
def test_criterion(number):
    result = run_criterion(number, seed=DEFAULT_SEED)
    print(result.line())
    assert result.ok, result.line()
