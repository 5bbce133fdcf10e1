import json
from pathlib import Path

import numpy as np
import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def tiles_delta_fixture():
    return json.loads((FIXTURES / "tiles_delta.json").read_text())


def random_hermitian(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (z + z.conj().T) / 2


def random_matrix(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def gaussian_integer_matrix(rng, rows, cols=None):
    """Entries a + bi with small integer a, b: every product and sum is exact in floating point."""
    cols = rows if cols is None else cols
    return rng.integers(-9, 10, size=(rows, cols)) + 1j * rng.integers(-9, 10, size=(rows, cols))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
