"""Acceptance gate: every criterion at its stated tolerance.

The criteria share one context (criterion 9's solves feed 10 and 12), so the
module keeps a single session dict and prints one PASS/FAIL line per
criterion as it completes.
"""

import pytest

from debranges.acceptance import CRITERIA, run_criterion

_CTX = {"seed": 0}


@pytest.mark.parametrize("cid,name", [(c, n) for c, n, _ in CRITERIA])
def test_criterion(cid, name, capsys):
    result = run_criterion(cid, _CTX)
    with capsys.disabled():
        print(flush=True)
        print(result.line(), flush=True)
    assert result.passed, f"criterion {cid} ({name}): {result.details}"
