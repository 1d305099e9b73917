import os
import time

import pytest
from hypothesis import HealthCheck, settings

LONG = os.environ.get("TROPFACT_LONG") == "1"

settings.register_profile("tropfact", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("tropfact")


def pytest_collection_modifyitems(config, items):
    if LONG:
        return
    skip = pytest.mark.skip(reason="long run; set TROPFACT_LONG=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


ACCEPTANCE = []


class Criterion:
    """Times one acceptance criterion and records a PASS/FAIL line."""

    def __init__(self, number, text, budget):
        self.number, self.text, self.budget = number, text, budget

    def __enter__(self):
        self.t0 = time.perf_counter()
        self.ok = False
        self.detail = ""
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        within = elapsed <= self.budget
        passed = self.ok and exc_type is None and within
        why = ""
        if exc_type is not None:
            why = f" error: {exc_type.__name__}: {exc}"
        elif not within:
            why = " over time budget"
        line = (f"{'PASS' if passed else 'FAIL'} criterion {self.number}: {self.text}"
                f" [{elapsed:.1f}s / {self.budget:g}s]{why}"
                + (f" ({self.detail})" if self.detail else ""))
        ACCEPTANCE.append((self.number, line))
        print(line)
        if exc_type is None:
            assert self.ok, line
            assert within, line
        return False


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        def key(t):
            label = str(t[0])
            digits = "".join(ch for ch in label if ch.isdigit())
            return int(digits), label
        for _, line in sorted(ACCEPTANCE, key=key):
            terminalreporter.write_line(line)
