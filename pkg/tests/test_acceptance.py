"""Runs every acceptance criterion at its stated tolerance and runtime bound.

``pytest -v tests/test_acceptance.py`` shows one line per criterion; the same
registry backs ``hatlab verify``.
"""

import pytest

from hatlab.acceptance import CRITERIA, run_criteria


@pytest.mark.parametrize("cid", [cid for cid, _, _ in CRITERIA])
def test_criterion(cid):
    result = run_criteria(only=cid)[0]
    print(f"{'PASS' if result.passed else 'FAIL'} {cid} ({result.seconds:.2f}s): {result.detail}")
    assert result.passed, f"{cid}: {result.detail}"


def test_registry_is_complete_and_unique():
    ids = [cid for cid, _, _ in CRITERIA]
    assert len(ids) == 10
    assert len(set(ids)) == 10
    assert run_criteria(only="no-such-criterion") == []
