"""Acceptance criteria 1-11; each prints one [PASS]/[FAIL] line."""
import json

import pytest

from entropylab.acceptance import CRITERIA

RESULTS = []


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = CRITERIA[number]()
    RESULTS.append(res)
    print(res.line())
    assert res.passed, json.dumps(res.detail, indent=2, default=str)[:4000]
