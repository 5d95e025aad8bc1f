import random

import pytest
from hypothesis import settings

from fracsato import Q, XSeries

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(1234)


def rand_q(rng, span=5):
    return Q(rng.randint(-span, span)) / rng.randint(1, 4)


def rand_xseries(rng, n=6, prec=None):
    return XSeries([rand_q(rng) for _ in range(n)], n if prec is None else prec)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for r in sorted(RESULTS, key=lambda r: r.number):
            terminalreporter.write_line(r.line())
