from fractions import Fraction

import numpy as np
import pytest
import sympy

from diffpinv.operators import ALL_KINDS, build_operator


def exact_pinv(dense):
    """Exact rational pseudo-inverse of an integer rank-(n-1) matrix with L 1 = 0.

    Uses L+ = (L + J)^-1 - J / n^2 in rational arithmetic.
    """
    n = dense.shape[0]
    m = sympy.Matrix(n, n, lambda i, j: int(round(dense[i, j])))
    ones = sympy.ones(n, n)
    p = (m + ones).inv() - ones / (n * n)
    return [[Fraction(int(p[i, j].p), int(p[i, j].q)) for j in range(n)] for i in range(n)]


def as_float(rows):
    return np.array([[float(v) for v in row] for row in rows])


@pytest.fixture(params=ALL_KINDS, ids=str)
def kind(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def operator(kind, n, **kw):
    return build_operator(kind, n, **kw)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
