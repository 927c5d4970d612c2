"""Acceptance battery: one test per criterion, one printed line each.

Criterion 2 is expected to fail: the adjoint of the double-layer operator
maps the constant density to one half only on circles, so the pointwise
check cannot hold on an ellipse (the weighted column-sum identity, which
does hold to machine precision, is covered in the layer-potential tests).
The analysis lives in the project notes outside the package.  The test is
marked strict-xfail so an unexpected pass would itself fail the suite.
"""

import pytest

from inclab.acceptance import CRITERIA, run_criterion

_IDS = sorted(CRITERIA)


@pytest.mark.parametrize(
    "cid",
    [
        pytest.param(
            cid,
            marks=pytest.mark.xfail(
                strict=True,
                reason=(
                    "pointwise half-constant identity holds only on circles; "
                    "see the notes ledger"
                ),
            ),
        )
        if cid == 2
        else cid
        for cid in _IDS
    ],
)
def test_criterion(cid, capsys):
    record = run_criterion(cid, seed=0)
    status = "PASS" if record["passed"] else "FAIL"
    with capsys.disabled():
        print(f"criterion {cid:02d} {status} {record['name']}: {record['detail']}")
    assert record["passed"], f"criterion {cid:02d}: {record['detail']}"
