"""Acceptance criteria; each result line is repeated in the terminal summary."""

import pytest

from fracsato.acceptance import CHECKS

RESULTS = []


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{c.number:02d}" for c in CHECKS])
def test_criterion(check):
    result = check()
    RESULTS.append(result)
    print("\n" + result.line())
    assert result.ok, result.detail
