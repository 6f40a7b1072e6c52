"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Every tolerance and grid is pinned inside the criterion functions; nothing
here loosens on failure.  A criterion that fails shows up red, with its
details line in the assertion message.
"""

import pytest

from multlab import acceptance


@pytest.fixture(scope="module")
def ctx():
    return acceptance.Context(seed=acceptance.DEFAULT_SEED, threads=1)


@pytest.mark.parametrize(
    "cid,name,fn",
    [(cid, name, fn) for cid, name, _tags, fn in acceptance.CRITERIA],
    ids=[c[0] for c in acceptance.CRITERIA],
)
def test_criterion(ctx, cid, name, fn):
    passed, details = fn(ctx)
    line = f"{cid} {'PASS' if passed else 'FAIL'} {name}: {details}"
    print(line)
    assert passed, line
