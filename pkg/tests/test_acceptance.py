"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal summary)
or ``python tests/test_acceptance.py`` for the bare lines.
"""

import sys
import time

import pytest

from ofm import suite

RESULTS: dict[str, str] = {}

# (label, suite function, runtime limit in seconds)
CRITERIA = [
    ("1 monad laws", suite.criterion_monad_laws, 30),
    ("2 lattice to algebra", suite.criterion_direction_one, 300),
    ("3 algebra to lattice and roundtrip", suite.criterion_direction_two, 300),
    ("4 structure-search correspondence", suite.criterion_correspondence, 300),
    ("5 way-below and Scott-open oracle", suite.criterion_way_below, 300),
    ("6 mutation sensitivity", suite.criterion_mutation, 300),
    ("7 directed-family composites", suite.criterion_composites, 300),
]


def _record(label: str, ok: bool, detail: str) -> str:
    line = f"{'PASS' if ok else 'FAIL'}  {label}  ({detail})"
    RESULTS[label] = line
    return line


def _run_criterion(label, fn, limit):
    start = time.perf_counter()
    check = fn()
    elapsed = time.perf_counter() - start
    ok = check.ok and check.status == "pass" and elapsed < limit
    stats = ", ".join(f"{k}={v}" for k, v in sorted(check.stats.items()) if not isinstance(v, (list, dict)))
    line = _record(label, ok, f"{elapsed:.2f}s of {limit}s; {stats}")
    return ok, check, line


def _determinism():
    first = suite.run_suite(jobs=1).to_json()
    second = suite.run_suite(jobs=1).to_json()
    parallel = suite.run_suite(jobs=2).to_json()
    ok = first == second == parallel
    return ok, _record("8 determinism", ok, f"{len(first)} bytes, jobs=1 twice and jobs=2")


@pytest.mark.parametrize("label,fn,limit", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(label, fn, limit):
    ok, check, line = _run_criterion(label, fn, limit)
    assert ok, f"{line}\n{check.to_dict()}"


def test_determinism():
    ok, line = _determinism()
    assert ok, line


if __name__ == "__main__":
    results = [_run_criterion(*c)[0] for c in CRITERIA] + [_determinism()[0]]
    for line in RESULTS.values():
        print(line)
    sys.exit(0 if all(results) else 1)
