import os
import sys

import numpy as np
import pytest

HERE = os.path.dirname(__file__)
sys.path.insert(0, HERE)

DATA = os.path.join(HERE, "..", "src", "weightflow", "data")
FIXTURES = os.path.join(HERE, "fixtures")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def karate_paths():
    return os.path.join(DATA, "karate.edges"), os.path.join(DATA, "karate.labels")


def random_connected_edges(rng, n, extra=None, wmin=0.5, wmax=3.0):
    """Random spanning tree plus extra chords, weights uniform in [wmin, wmax]."""
    order = rng.permutation(n)
    pairs = set()
    for k in range(1, n):
        u, v = int(order[k]), int(order[rng.integers(k)])
        pairs.add((min(u, v), max(u, v)))
    extra = n if extra is None else extra
    for _ in range(extra):
        u, v = (int(x) for x in rng.choice(n, 2, replace=False))
        pairs.add((min(u, v), max(u, v)))
    return [(u, v, float(rng.uniform(wmin, wmax))) for u, v in sorted(pairs)]


# acceptance summary lines, filled by test_acceptance.report
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
