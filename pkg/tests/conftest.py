import sys

import numpy as np
import pytest

from histarith import ReliableHistogram
from histarith.arithmetic import Rect


def random_histogram(rng, lo=0.1, hi=10.0, max_bins=6, max_count=20, min_width=1e-3):
    """Random piecewise-uniform histogram: 1..max_bins bins, random edges and masses."""
    k = int(rng.integers(1, max_bins + 1))
    while True:
        edges = np.sort(rng.uniform(lo, hi, k + 1))
        if np.all(np.diff(edges) > min_width):
            break
    counts = rng.integers(1, max_count + 1, k)
    gammas = rng.uniform(0.9, 0.9999, k)
    return ReliableHistogram.from_edges(edges, counts, gammas)


def random_rect(rng, i, lo=0.1, hi=10.0):
    """Random rectangle inside (lo, hi)^2.

    Every third rectangle is near-degenerate (width ratio about 1e3) and the
    aspect is flipped at random so both orderings of the sides occur.
    """
    if i % 3 == 0:
        w = rng.uniform(0.5, 5.0)
        h = w * 1e-3 * rng.uniform(1.0, 1.5)
    else:
        w = rng.uniform(0.01, 5.0)
        h = rng.uniform(0.01, 5.0)
    a = rng.uniform(lo, hi - w)
    b = rng.uniform(lo, hi - h)
    if rng.random() < 0.5:
        return Rect(a, a + w, b, b + h)
    return Rect(b, b + h, a, a + w)


def interior_points(lo, hi, m=32):
    return lo + (hi - lo) * (np.arange(m) + 0.5) / m


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "REPORT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
