import numpy as np
import pytest

from wavemark import BitMatrix


def make_mark(rows: int = 15, cols: int = 64) -> BitMatrix:
    """Deterministic non-trivial bit pattern (about one third ones)."""
    return BitMatrix(np.arange(rows * cols).reshape(rows, cols) * 7919 % 3 % 2)


@pytest.fixture
def mark():
    return make_mark()
