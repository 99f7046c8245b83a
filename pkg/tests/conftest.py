import importlib
import itertools
from collections import Counter
from fractions import Fraction

import pytest

from slotmc import _purepy

ACCEPTANCE_LINES = []

try:
    _compiled = importlib.import_module("slotmc._kernels")
except ImportError:
    _compiled = None

BACKENDS = [pytest.param(_purepy, id="python")]
BACKENDS.append(pytest.param(_compiled, id="compiled", marks=pytest.mark.skipif(
    _compiled is None, reason="compiled kernels not built")))


@pytest.fixture(params=BACKENDS)
def kernel_module(request):
    return request.param


@pytest.fixture(scope="session")
def compiled_kernels():
    if _compiled is None:
        pytest.skip("compiled kernels not built")
    return _compiled


def brute_force_row(b, n, d, det_slots=None):
    """Success-count distribution by listing every random placement with itertools."""
    det = list(range(d)) if det_slots is None else list(det_slots)
    tally = Counter()
    for rand in itertools.product(range(b), repeat=n - d):
        slots = det + list(rand)
        occ = Counter(slots)
        tally[sum(1 for s in slots if occ[s] == 1)] += 1
    total = b ** (n - d)
    return [Fraction(tally[k], total) for k in range(n + 1)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
